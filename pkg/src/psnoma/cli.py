"""Command-line front end.

Thin client over the sweep layer: by default the request is served
in-process through the same code path the HTTP service uses, so local runs
need no server; ``--server URL`` forwards the identical configuration to a
running service instance instead. ``psnoma serve`` starts that service.

Exit codes: 0 on success, 2 on configuration or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from dataclasses import replace

from .errors import ConfigError
from .experiments import (
    ExperimentConfig,
    load_config_file,
    preset,
    preset_names,
    run_experiment,
    validate_config,
)

_SWEEP_MODES = ("sim-ber", "analytic-ber", "rate", "min-dist")

_MODE_ENDPOINT = {
    "sim-ber": "/sweeps/ber",
    "analytic-ber": "/sweeps/ber",
    "rate": "/sweeps/rate",
    "min-dist": "/analysis/min-distance",
}

_MODE_HELP = {
    "sim-ber": "Monte Carlo BER sweep plus closed-form columns",
    "analytic-ber": "closed-form BER sweep only",
    "rate": "achievable rate and level-information sweep",
    "min-dist": "pairwise distance table of the joint constellation",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psnoma",
        description="Two-user power-selection NOMA link simulator and analysis tool",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in _SWEEP_MODES:
        sp = sub.add_parser(mode, help=_MODE_HELP[mode])
        sp.add_argument("--config", help="path to a key = value configuration file")
        sp.add_argument("--preset", help=f"scenario preset ({'|'.join(preset_names())})")
        sp.add_argument("--out", help="write CSV here instead of standard output")
        sp.add_argument("--seed", type=int, help="override the configured RNG seed")
        sp.add_argument("--workers", type=int, help="override the configured worker count")
        sp.add_argument("--server", help="forward the run to a service instance at this URL")
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _resolve_config(args) -> ExperimentConfig:
    if not args.preset and not args.config:
        raise ConfigError("config", "provide --config and/or --preset")
    cfg = preset(args.preset) if args.preset else None
    if args.config:
        cfg = load_config_file(args.config, base=cfg)
    overrides = {"mode": args.mode}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    cfg = replace(cfg, **overrides)
    validate_config(cfg)
    return cfg


def _remote_run(server: str, cfg: ExperimentConfig) -> str:
    from dataclasses import asdict

    payload = {"config": asdict(cfg)}
    payload["config"]["p_values"] = list(cfg.p_values)
    payload["config"]["snr_grid_db"] = list(cfg.snr_grid_db)
    url = server.rstrip("/") + _MODE_ENDPOINT[cfg.mode]
    request = urllib.request.Request(
        url,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
    )
    try:
        with urllib.request.urlopen(request) as response:
            body = json.loads(response.read().decode())
    except urllib.error.HTTPError as err:
        detail = err.read().decode(errors="replace")
        raise ConfigError("server", f"{err.code} response: {detail}") from err
    return body["csv"]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.mode == "serve":
        import uvicorn

        uvicorn.run("psnoma.service:app", host=args.host, port=args.port)
        return 0
    try:
        cfg = _resolve_config(args)
        csv = _remote_run(args.server, cfg) if args.server else run_experiment(cfg)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(csv)
    else:
        sys.stdout.write(csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
