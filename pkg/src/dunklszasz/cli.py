"""Command line entry point: ``dunklszasz <experiment> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .bounds import GridSpec
from .harness import EXPERIMENTS, ConfigError, ExperimentConfig, run
from .moments import GRID_VERSION

# keys accepted in a JSON config file; command line flags take precedence
_KEYS = ("n", "mu", "alpha", "beta", "x_lo", "x_hi", "x_points", "functions", "tol",
         "quad_order", "out", "seed", "workers", "spot_checks")


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON file with option defaults")
    p.add_argument("--n", type=int, nargs="+", help="n ladder (strictly increasing)")
    p.add_argument("--mu", type=float, nargs="+", help="Dunkl orders")
    p.add_argument("--alpha", type=float, nargs="+", help="Stancu alphas, paired with --beta")
    p.add_argument("--beta", type=float, nargs="+", help="Stancu betas, paired with --alpha")
    p.add_argument("--x-lo", dest="x_lo", type=float)
    p.add_argument("--x-hi", dest="x_hi", type=float)
    p.add_argument("--x-points", dest="x_points", type=int)
    p.add_argument("--functions", nargs="+", help="registry function names")
    p.add_argument("--tol", type=float, help="series tolerance")
    p.add_argument("--quad-order", dest="quad_order", type=int, help="Gauss-Legendre order")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--spot-checks", dest="spot_checks", type=int,
                   help="random extra points for the moments experiment")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="dunklszasz",
        description="Verification experiments for Dunkl-type Szasz-Kantorovich-Stancu operators.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} (grid version {GRID_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=f"run the {name} experiment")
    generic = sub.add_parser("run", parents=[common], help="run the experiment named by --experiment")
    generic.add_argument("--experiment", choices=EXPERIMENTS, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    merged = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        unknown = set(data) - set(_KEYS) - {"experiment"}
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(data)
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value

    experiment = args.experiment if args.command == "run" else args.command
    base = ExperimentConfig(experiment)
    grid = GridSpec(float(merged.get("x_lo", base.grid.lo)),
                    float(merged.get("x_hi", base.grid.hi)),
                    int(merged.get("x_points", base.grid.points)))
    pairs = base.alpha_beta_list
    if "alpha" in merged or "beta" in merged:
        alphas = merged.get("alpha", [0.0] * len(merged.get("beta", [])))
        betas = merged.get("beta", [0.0] * len(alphas))
        if len(alphas) != len(betas):
            raise ConfigError("--alpha and --beta need the same number of values")
        pairs = tuple((float(a), float(b)) for a, b in zip(alphas, betas))
    functions = merged.get("functions")
    return ExperimentConfig(
        experiment=experiment,
        grid=grid,
        n_ladder=tuple(int(n) for n in merged.get("n", base.n_ladder)),
        mu_list=tuple(float(m) for m in merged.get("mu", base.mu_list)),
        alpha_beta_list=pairs,
        function_names=tuple(functions) if functions is not None else None,
        series_tol=float(merged.get("tol", base.series_tol)),
        quadrature_order=int(merged.get("quad_order", base.quadrature_order)),
        output_path=merged.get("out"),
        seed=int(merged.get("seed", base.seed)),
        workers=int(merged.get("workers", base.workers)),
        spot_checks=int(merged.get("spot_checks", base.spot_checks)),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args).validate()
    except (ConfigError, ValueError, OSError) as exc:
        print(f"dunklszasz: error: {exc}", file=sys.stderr)
        return 2
    result = run(cfg)
    result.write(cfg.output_path)
    for line in result.summary:
        print(line, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
