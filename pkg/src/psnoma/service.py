"""HTTP facade over the sweep and analysis machinery.

Requests carry a full experiment configuration; responses return both the
structured curve points and the rendered CSV so remote callers get the exact
bytes a local run would produce. Validation failures map to HTTP 400 with
the offending field named in the detail.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import experiments as exp
from .constellation import build_joint_constellation, build_pam, build_power_matrix
from .geometry import joint_dmin, pair_table_csv


class ExperimentConfigModel(BaseModel):
    scheme: str = "ps-noma"
    m_a: int = 2
    m_b: int = 2
    n_levels: int = 2
    p_values: list[float] = Field(default=[0.2, 0.2])
    beta_a: float = 10.0
    beta_b: float = 1.0
    snr_grid_db: list[float] = Field(default=list(exp.ExperimentConfig().snr_grid_db))
    trials_per_point: int = exp.DEFAULT_TRIALS
    seed: int = 0
    mode: str = "sim-ber"
    workers: int = 1
    ua_literal_pep: bool = False
    rate_channel_samples: int = 200
    rate_noise_samples: int = 500

    def to_config(self) -> exp.ExperimentConfig:
        data = self.model_dump()
        data["p_values"] = tuple(data["p_values"])
        data["snr_grid_db"] = tuple(data["snr_grid_db"])
        return exp.ExperimentConfig(**data)

    @classmethod
    def from_config(cls, cfg: exp.ExperimentConfig) -> "ExperimentConfigModel":
        data = asdict(cfg)
        data["p_values"] = list(data["p_values"])
        data["snr_grid_db"] = list(data["snr_grid_db"])
        return cls(**data)


class CurvePointModel(BaseModel):
    snr_db: float
    user: str
    metric: str
    value: float
    std_error: float | None = None
    trials: int | None = None


class SweepRequest(BaseModel):
    config: ExperimentConfigModel


class SweepResponse(BaseModel):
    points: list[CurvePointModel]
    csv: str


class MinDistanceResponse(BaseModel):
    d_min: float
    arg_pair: tuple[int, int]
    degenerate: bool
    csv: str


class PresetListResponse(BaseModel):
    presets: list[str]


app = FastAPI(
    title="psnoma",
    description="Sweep service for the two-user power-selection NOMA link simulator",
)


def _guard(callable_, *args):
    try:
        return callable_(*args)
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err)) from err


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/presets", response_model=PresetListResponse)
def list_presets() -> PresetListResponse:
    return PresetListResponse(presets=list(exp.preset_names()))


@app.get("/presets/{name}", response_model=ExperimentConfigModel)
def get_preset(name: str) -> ExperimentConfigModel:
    cfg = _guard(exp.preset, name)
    return ExperimentConfigModel.from_config(cfg)


def _run_sweep(request: SweepRequest, runner, allowed_modes: tuple[str, ...]) -> SweepResponse:
    cfg = request.config.to_config()
    if cfg.mode not in allowed_modes:
        raise HTTPException(
            status_code=400,
            detail=f"mode: this endpoint accepts {allowed_modes}, got {cfg.mode!r}",
        )
    points = _guard(runner, cfg)
    return SweepResponse(
        points=[CurvePointModel(**asdict(p)) for p in points],
        csv=exp.format_csv(points),
    )


@app.post("/sweeps/ber", response_model=SweepResponse)
def sweep_ber(request: SweepRequest) -> SweepResponse:
    return _run_sweep(request, exp.run_ber_sweep, ("sim-ber", "analytic-ber"))


@app.post("/sweeps/rate", response_model=SweepResponse)
def sweep_rate(request: SweepRequest) -> SweepResponse:
    return _run_sweep(request, exp.run_rate_sweep, ("rate",))


@app.post("/analysis/min-distance", response_model=MinDistanceResponse)
def min_distance(request: SweepRequest) -> MinDistanceResponse:
    cfg = request.config.to_config()
    _guard(exp.validate_config, cfg)

    def compute():
        g = build_power_matrix(cfg.p_values, cfg.n_levels)
        return joint_dmin(build_joint_constellation(g, build_pam(cfg.m_b)))

    report = _guard(compute)
    return MinDistanceResponse(
        d_min=report.d_min,
        arg_pair=report.arg_pair,
        degenerate=report.degenerate,
        csv=pair_table_csv(report),
    )
