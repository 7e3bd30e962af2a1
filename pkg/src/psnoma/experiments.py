"""Experiment orchestration: configs, presets, BER and rate sweeps, CSV output.

The SNR axis is the reciprocal noise density in dB with unit total transmit
power; the per-user channel variances are separate multipliers. Sweeps are
deterministic by construction: work is cut into fixed-size chunks, each chunk
draws from a child generator keyed by (seed, point, chunk), and partial
results are reduced in chunk order, so the CSV bytes never depend on the
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from . import ber as ber_mod
from . import rate as rate_mod
from .channel import LinkParams, derived_rng, draw_channel, draw_noise
from .constellation import (
    build_joint_constellation,
    build_pam,
    build_power_matrix,
    is_power_of_two,
)
from .detector import detect_joint_indices, sic_detect_sa_indices
from .errors import ConfigError
from .geometry import joint_dmin, pair_table_csv

MODES = ("sim-ber", "analytic-ber", "rate", "min-dist")
SCHEMES = ("ps-noma", "noma")

# Fixed simulation chunk so trial partitioning is independent of scheduling.
CHUNK_SYMBOLS = 500_000

DEFAULT_TRIALS = 2_000_000


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: scheme, constellation sizes, power rows, channel, SNR grid."""

    scheme: str = "ps-noma"
    m_a: int = 2
    m_b: int = 2
    n_levels: int = 2
    p_values: tuple[float, ...] = (0.2, 0.2)
    beta_a: float = 10.0
    beta_b: float = 1.0
    snr_grid_db: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials_per_point: int = DEFAULT_TRIALS
    seed: int = 0
    mode: str = "sim-ber"
    workers: int = 1
    ua_literal_pep: bool = False
    rate_channel_samples: int = rate_mod.DEFAULT_CHANNEL_SAMPLES
    rate_noise_samples: int = rate_mod.DEFAULT_NOISE_SAMPLES


@dataclass(frozen=True)
class CurvePoint:
    """One (SNR, user, metric) cell of a sweep."""

    snr_db: float
    user: str  # "A" | "B" | "sum"
    metric: str
    value: float
    std_error: float | None = None
    trials: int | None = None


def validate_config(cfg: ExperimentConfig) -> None:
    """Raise :class:`ConfigError` naming the offending field on any violation."""
    if cfg.scheme not in SCHEMES:
        raise ConfigError("scheme", f"must be one of {SCHEMES}, got {cfg.scheme!r}")
    if cfg.mode not in MODES:
        raise ConfigError("mode", f"must be one of {MODES}, got {cfg.mode!r}")
    for name, value in (("m_a", cfg.m_a), ("m_b", cfg.m_b)):
        if value < 2 or not is_power_of_two(value):
            raise ConfigError(name, f"must be a power of two >= 2, got {value}")
    if cfg.n_levels < 1 or not is_power_of_two(cfg.n_levels):
        raise ConfigError("n_levels", f"must be a power of two >= 1, got {cfg.n_levels}")
    if cfg.scheme == "noma" and cfg.n_levels != 1:
        raise ConfigError("n_levels", "the noma scheme has a single fixed power level")
    if len(cfg.p_values) != cfg.n_levels:
        raise ConfigError(
            "p_values", f"expected {cfg.n_levels} values, got {len(cfg.p_values)}"
        )
    for i, p in enumerate(cfg.p_values):
        if not (0.0 < p < 0.5):
            raise ConfigError(f"p_values[{i}]", f"must lie in (0, 0.5), got {p}")
    if not (cfg.beta_a >= cfg.beta_b > 0.0):
        raise ConfigError(
            "beta_a", f"need beta_a >= beta_b > 0, got {cfg.beta_a} and {cfg.beta_b}"
        )
    if len(cfg.snr_grid_db) == 0:
        raise ConfigError("snr_grid_db", "SNR grid must not be empty")
    if any(b <= a for a, b in zip(cfg.snr_grid_db, cfg.snr_grid_db[1:])):
        raise ConfigError("snr_grid_db", "SNR grid must be strictly increasing")
    if cfg.trials_per_point < 1:
        raise ConfigError("trials_per_point", f"must be >= 1, got {cfg.trials_per_point}")
    if cfg.seed < 0:
        raise ConfigError("seed", f"must be a nonnegative integer, got {cfg.seed}")
    if cfg.workers < 1:
        raise ConfigError("workers", f"must be >= 1, got {cfg.workers}")
    if cfg.rate_channel_samples < 1:
        raise ConfigError("rate_channel_samples", "must be >= 1")
    if cfg.rate_noise_samples < 1:
        raise ConfigError("rate_noise_samples", "must be >= 1")


# Scenario presets. BER figures share the 0..30 dB grid; rate figures span
# -20..40 dB. Cases differ only in the near-user power rows.
_BER_GRID = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
_RATE_GRID = (-20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 40.0)

_PRESETS: dict[str, ExperimentConfig] = {
    "fig6": ExperimentConfig(p_values=(0.2, 0.2), snr_grid_db=_BER_GRID, mode="sim-ber"),
    "fig7": ExperimentConfig(p_values=(0.1, 0.2), snr_grid_db=_BER_GRID, mode="sim-ber"),
    "fig8": ExperimentConfig(p_values=(0.3, 0.4), snr_grid_db=_BER_GRID, mode="sim-ber"),
    "fig9a": ExperimentConfig(p_values=(0.2, 0.2), snr_grid_db=_BER_GRID, mode="sim-ber"),
    "fig9b": ExperimentConfig(p_values=(0.1, 0.1), snr_grid_db=_BER_GRID, mode="sim-ber"),
    "fig10": ExperimentConfig(p_values=(0.2, 0.2), snr_grid_db=_RATE_GRID, mode="rate"),
    "fig11": ExperimentConfig(p_values=(0.2, 0.2), snr_grid_db=_RATE_GRID, mode="rate"),
}

# Power rows of the fixed reference matrix the interval cases are judged against.
BENCHMARK_P_VALUES = (0.1, 0.4)


def preset(name: str) -> ExperimentConfig:
    """Named scenario configuration."""
    try:
        return _PRESETS[name]
    except KeyError:
        valid = "|".join(sorted(_PRESETS))
        raise ConfigError("preset", f"unknown preset {name!r}; valid names: {valid}") from None


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def noma_counterpart(cfg: ExperimentConfig) -> ExperimentConfig:
    """Conventional-NOMA baseline at the same spectral efficiency.

    The level bits move into the far-user alphabet (m_b multiplied by the
    level count) and the first power row is kept, so the total constellation
    order and the per-user bit counts match the power-selection scheme.
    """
    return replace(
        cfg,
        scheme="noma",
        n_levels=1,
        m_b=cfg.m_b * cfg.n_levels,
        p_values=(cfg.p_values[0],),
    )


def ps_benchmark(cfg: ExperimentConfig) -> ExperimentConfig:
    """Fixed-interval reference power matrix for the interval-case figures."""
    if cfg.n_levels != len(BENCHMARK_P_VALUES):
        raise ConfigError("n_levels", "benchmark comparison is defined for two levels")
    return replace(cfg, p_values=BENCHMARK_P_VALUES)


_BOOL_WORDS = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def _parse_value(name: str, text: str, kind):
    try:
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is bool:
            return _BOOL_WORDS[text.strip().lower()]
        if kind is str:
            return text.strip()
        if kind == tuple[float, ...]:
            return tuple(float(tok) for tok in text.split(","))
    except (ValueError, KeyError):
        pass
    raise ConfigError(name, f"could not parse value {text!r}")


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse the flat ``key = value`` config format over an optional base.

    Lines starting with ``#`` (or inline ``#`` tails) are comments; sequences
    are comma separated. Unknown keys are rejected with the key named.
    """
    field_types = {f.name: f.type for f in fields(ExperimentConfig)}
    # dataclass stores annotations as strings under future-import semantics
    kind_for = {
        "scheme": str, "mode": str,
        "m_a": int, "m_b": int, "n_levels": int,
        "trials_per_point": int, "seed": int, "workers": int,
        "rate_channel_samples": int, "rate_noise_samples": int,
        "beta_a": float, "beta_b": float,
        "p_values": tuple[float, ...], "snr_grid_db": tuple[float, ...],
        "ua_literal_pep": bool,
    }
    assert set(kind_for) == set(field_types)
    updates = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}", f"expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in kind_for:
            raise ConfigError(key, "unknown configuration key")
        updates[key] = _parse_value(key, value, kind_for[key])
    cfg = base if base is not None else ExperimentConfig()
    return replace(cfg, **updates)


def load_config_file(path: str | Path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text(), base=base)


def _simulate_chunk(args) -> tuple[int, int]:
    """Run one chunk of the transmit/detect chain; returns per-user bit errors.

    Module-level so process pools can pickle it. Rebuilds the (cheap)
    constellation objects locally; the child generator is keyed by
    (seed, sweep point, chunk index) only.
    """
    cfg, point_index, chunk_index, n_symbols, n0 = args
    sa = build_pam(cfg.m_a)
    sb = build_pam(cfg.m_b)
    g = build_power_matrix(cfg.p_values, cfg.n_levels)
    joint = build_joint_constellation(g, sb)
    rng = derived_rng(cfg.seed, point_index, chunk_index)

    levels = rng.integers(0, g.n_levels, size=n_symbols)
    kb = rng.integers(0, sb.order, size=n_symbols)
    ka = rng.integers(0, sa.order, size=n_symbols)
    s_c = g.alpha_a[levels] * sa.points[ka] + g.alpha_b[levels] * sb.points[kb]

    h_a = draw_channel(cfg.beta_a, rng, size=n_symbols)
    h_b = draw_channel(cfg.beta_b, rng, size=n_symbols)
    y_a = h_a * s_c + draw_noise(n0, rng, size=n_symbols)
    y_b = h_b * s_c + draw_noise(n0, rng, size=n_symbols)

    idx_a = detect_joint_indices(y_a, h_a, joint)
    ka_hat = sic_detect_sa_indices(y_a, h_a, idx_a, joint, g, sa)
    idx_b = detect_joint_indices(y_b, h_b, joint)

    true_joint = levels * sb.order + kb
    errs_b = int(np.bitwise_count(joint.bit_codes[true_joint] ^ joint.bit_codes[idx_b]).sum())
    errs_a = int(np.bitwise_count(sa.gray_labels[ka] ^ sa.gray_labels[ka_hat]).sum())
    return errs_a, errs_b


def _chunk_sizes(total: int) -> list[int]:
    full, rest = divmod(total, CHUNK_SYMBOLS)
    return [CHUNK_SYMBOLS] * full + ([rest] if rest else [])


def _map_ordered(func, work: list, workers: int) -> list:
    if workers <= 1 or len(work) <= 1:
        return [func(item) for item in work]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))


def _simulate_point(cfg: ExperimentConfig, point_index: int, n0: float) -> tuple[int, int]:
    work = [
        (cfg, point_index, chunk_index, size, n0)
        for chunk_index, size in enumerate(_chunk_sizes(cfg.trials_per_point))
    ]
    totals = _map_ordered(_simulate_chunk, work, cfg.workers)
    errs_a = sum(t[0] for t in totals)
    errs_b = sum(t[1] for t in totals)
    return errs_a, errs_b


def _binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def run_ber_sweep(cfg: ExperimentConfig) -> list[CurvePoint]:
    """Simulated and/or closed-form BER versus SNR for both users.

    ``sim-ber`` mode runs the full transmit/fade/detect chain and appends the
    closed-form columns; ``analytic-ber`` emits the closed forms only. The
    far user's BER covers its level plus symbol bits, the near user's covers
    its own symbol bits.
    """
    validate_config(cfg)
    if cfg.mode not in ("sim-ber", "analytic-ber"):
        raise ConfigError("mode", f"BER sweep needs mode sim-ber or analytic-ber, got {cfg.mode!r}")
    sa = build_pam(cfg.m_a)
    sb = build_pam(cfg.m_b)
    g = build_power_matrix(cfg.p_values, cfg.n_levels)
    joint = build_joint_constellation(g, sb)
    bits_a = sa.bits_per_symbol
    bits_b = joint.bits_per_point

    points: list[CurvePoint] = []
    for point_index, snr_db in enumerate(cfg.snr_grid_db):
        n0 = 10.0 ** (-snr_db / 10.0)
        if cfg.mode == "sim-ber":
            errs_a, errs_b = _simulate_point(cfg, point_index, n0)
            total_a = cfg.trials_per_point * bits_a
            total_b = cfg.trials_per_point * bits_b
            ber_a = errs_a / total_a
            ber_b = errs_b / total_b
            points.append(CurvePoint(snr_db, "A", "ber_sim", ber_a,
                                     _binomial_stderr(ber_a, total_a), cfg.trials_per_point))
            points.append(CurvePoint(snr_db, "B", "ber_sim", ber_b,
                                     _binomial_stderr(ber_b, total_b), cfg.trials_per_point))
        analytic_a = ber_mod.ber_ua(
            joint, g, cfg.m_a, cfg.beta_a, n0,
            use_equivalent_noise=not cfg.ua_literal_pep,
        )
        analytic_b = ber_mod.ber_ub(joint, sa, g, cfg.beta_b, n0)
        points.append(CurvePoint(snr_db, "A", "ber_analytic", analytic_a))
        points.append(CurvePoint(snr_db, "B", "ber_analytic", analytic_b.value))
        points.append(CurvePoint(snr_db, "B", "ber_analytic_raw", analytic_b.raw))
    return points


def _rate_point(args) -> list[CurvePoint]:
    cfg, point_index, snr_db = args
    n0 = 10.0 ** (-snr_db / 10.0)
    params = LinkParams(beta_a=cfg.beta_a, beta_b=cfg.beta_b, n0=n0)
    sa = build_pam(cfg.m_a)
    sb = build_pam(cfg.m_b)
    g = build_power_matrix(cfg.p_values, cfg.n_levels)
    nc, nn = cfg.rate_channel_samples, cfg.rate_noise_samples

    rate_a = rate_mod.mi_sa_given_pl(g, sa, params, nc, nn, rng=derived_rng(cfg.seed, point_index, 0))
    rate_b = rate_mod.mi_sb_pl("B", g, sa, sb, params, nc, nn, rng=derived_rng(cfg.seed, point_index, 1))
    pl_a = rate_mod.mi_pl("A", g, sa, sb, params, nc, nn, rng=derived_rng(cfg.seed, point_index, 2))
    pl_b = rate_mod.mi_pl("B", g, sa, sb, params, nc, nn, rng=derived_rng(cfg.seed, point_index, 3))

    samples = nc * nn
    return [
        CurvePoint(snr_db, "A", "rate", rate_a.value, rate_a.std_error, samples),
        CurvePoint(snr_db, "B", "rate", rate_b.value, rate_b.std_error, samples),
        CurvePoint(snr_db, "A", "mi_pl", pl_a.value, pl_a.std_error, samples),
        CurvePoint(snr_db, "B", "mi_pl", pl_b.value, pl_b.std_error, samples),
        CurvePoint(snr_db, "sum", "rate", rate_a.value + rate_b.value,
                   math.hypot(rate_a.std_error, rate_b.std_error), samples),
    ]


def run_rate_sweep(cfg: ExperimentConfig) -> list[CurvePoint]:
    """Per-user achievable rate, level information, and sum rate versus SNR."""
    validate_config(cfg)
    if cfg.mode != "rate":
        raise ConfigError("mode", f"rate sweep needs mode rate, got {cfg.mode!r}")
    work = [(cfg, i, snr) for i, snr in enumerate(cfg.snr_grid_db)]
    rows = _map_ordered(_rate_point, work, cfg.workers)
    return [pt for batch in rows for pt in batch]


def run_min_dist(cfg: ExperimentConfig) -> str:
    """Pairwise distance table of the configured joint constellation, as CSV."""
    validate_config(cfg)
    g = build_power_matrix(cfg.p_values, cfg.n_levels)
    joint = build_joint_constellation(g, build_pam(cfg.m_b))
    return pair_table_csv(joint_dmin(joint))


def format_csv(points: Iterable[CurvePoint]) -> str:
    """Render sweep points in the stable plotting-tool-agnostic schema."""
    lines = ["snr_db,user,metric,value,stderr,trials"]
    for p in points:
        stderr = "" if p.std_error is None else f"{p.std_error:.6g}"
        trials = "" if p.trials is None else str(p.trials)
        lines.append(f"{p.snr_db:g},{p.user},{p.metric},{p.value:.12g},{stderr},{trials}")
    return "\n".join(lines) + "\n"


def run_experiment(cfg: ExperimentConfig) -> str:
    """Dispatch on the configured mode and return the CSV text."""
    validate_config(cfg)
    if cfg.mode in ("sim-ber", "analytic-ber"):
        return format_csv(run_ber_sweep(cfg))
    if cfg.mode == "rate":
        return format_csv(run_rate_sweep(cfg))
    return run_min_dist(cfg)
