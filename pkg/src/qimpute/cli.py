"""Command-line front end.

One subcommand per experiment.  Values resolve in three layers: built-in
subcommand defaults, then a JSON config file (--config), then explicit
flags, with later layers winning.  Exit codes: 0 on success, 1 when the
validation suite fails, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    ConfigError,
    ExperimentConfig,
    run_experiment,
    run_validate,
)

__all__ = ["main"]

_DEFAULTS: dict[str, dict] = {
    "fit": {"ansatz": ["linear"], "n_min": 3, "n_max": 3, "target": "gaussian"},
    "sweep": {"ansatz": ["linear", "quadratic"], "n_min": 2, "n_max": 8, "target": "majority"},
    "generalize": {
        "ansatz": ["linear"], "n_min": 6, "n_max": 10, "target": "gaussian",
        "fractions": [0.1, 0.3, 0.5, 0.7],
    },
    # Masked rule fits are underdetermined (more parameters than visible
    # inputs), so the zeros start is the default here: descent from the
    # origin stays in the row space of the visible angle system and lands
    # on its minimum-norm solution, which is deterministic and extrapolates
    # the rule far better than an arbitrary random-start solution.
    "majority_ratios": {
        "ansatz": ["quadratic"], "n_min": 4, "n_max": 4, "target": "majority", "fraction": 0.7,
        "optimizer": {"init_scheme": "zeros", "restarts": 1},
    },
    "bp_stats": {"ansatz": ["linear"], "n_min": 4, "n_max": 10, "target": "gaussian"},
    "entropy": {"ansatz": ["linear"], "n_min": 3, "n_max": 9},
    "validate": {},
}

# Long-running reproduction scale for the random-target sweep.
_FULL_SCALE = {"n_min": 2, "n_max": 16, "seeds": list(range(1, 101)), "target": "random"}


def _comma_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qimpute",
        description="Simulate, optimize and analyze parity-phase imputation circuits.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in _DEFAULTS:
        cmd = sub.add_parser(name.replace("_", "-"), help=f"run the {name} experiment")
        cmd.set_defaults(experiment=name)
        cmd.add_argument("--config", help="JSON config file; flags override its values")
        cmd.add_argument("--seed", type=int, help="single experiment seed")
        cmd.add_argument("--seeds", type=_comma_list, help="comma-separated seed list")
        cmd.add_argument("--out", help="output directory (default $QIMPUTE_OUT_DIR or ./results)")
        cmd.add_argument("--ansatz", type=_comma_list, help="comma-separated ansatz kinds")
        cmd.add_argument("--n", type=int, help="single input width")
        cmd.add_argument("--n-min", type=int, dest="n_min")
        cmd.add_argument("--n-max", type=int, dest="n_max")
        cmd.add_argument("--target", choices=["gaussian", "majority", "random", "csv"])
        cmd.add_argument("--csv", dest="target_csv", help="target CSV path (with --target csv)")
        cmd.add_argument("--fraction", type=float, help="masked fraction of inputs")
        cmd.add_argument("--fractions", type=_comma_list, help="comma-separated mask fractions")
        cmd.add_argument("--center", type=float, help="gaussian target center override")
        cmd.add_argument("--sigma", type=float, help="gaussian target width override")
        cmd.add_argument("--samples", type=int, help="Monte Carlo sample count")
        cmd.add_argument("--outcomes", type=int, help="sampled outcome count")
        cmd.add_argument("--m-sweep-n", type=int, dest="m_sweep_n",
                         help="also sweep gate count at this fixed width (bp-stats)")
        cmd.add_argument("--restarts", type=int, help="optimizer restarts")
        cmd.add_argument("--full-scale", action="store_true",
                         help="long-running full reproduction scale (sweep)")
    return parser


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    data = dict(_DEFAULTS[args.experiment])
    data["experiment"] = args.experiment
    if args.config:
        try:
            with open(args.config) as handle:
                file_data = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_data, dict):
            raise ConfigError(f"config {args.config} must hold a JSON object")
        data.update(file_data)

    if args.full_scale:
        data.update(_FULL_SCALE)
    if args.seed is not None:
        data["seeds"] = [args.seed]
    if args.seeds is not None:
        try:
            data["seeds"] = [int(s) for s in args.seeds]
        except ValueError as exc:
            raise ConfigError(f"seeds must be integers: {exc}") from exc
    if args.out is not None:
        data["out_dir"] = args.out
    if args.ansatz is not None:
        data["ansatz"] = args.ansatz
    if args.n is not None:
        data["n_min"] = data["n_max"] = args.n
    if args.n_min is not None:
        data["n_min"] = args.n_min
    if args.n_max is not None:
        data["n_max"] = args.n_max
    if args.target is not None:
        data["target"] = args.target
    if args.target_csv is not None:
        data["target_csv"] = args.target_csv
        if args.target is None:
            data["target"] = "csv"
    if args.fraction is not None:
        data["fraction"] = args.fraction
    if args.fractions is not None:
        try:
            data["fractions"] = [float(f) for f in args.fractions]
        except ValueError as exc:
            raise ConfigError(f"fractions must be numbers: {exc}") from exc
    if args.center is not None:
        data["center"] = args.center
    if args.sigma is not None:
        data["sigma"] = args.sigma
    if args.samples is not None:
        data["samples"] = args.samples
    if args.outcomes is not None:
        data["outcomes"] = args.outcomes
    if args.m_sweep_n is not None:
        data["m_sweep_n"] = args.m_sweep_n
    if args.restarts is not None:
        optimizer = dict(data.get("optimizer") or {})
        optimizer["restarts"] = args.restarts
        data["optimizer"] = optimizer
    return ExperimentConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if config.experiment == "validate":
        report, path = run_validate(config)
        for name, suite in report["suites"].items():
            status = "PASS" if suite["passed"] else "FAIL"
            details = {k: v for k, v in suite.items() if k != "passed"}
            print(f"{status} {name} {json.dumps(details)}")
        if path is not None:
            print(f"report written to {path}")
        return 0 if report["passed"] else 1

    try:
        output = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(f"{output.experiment_id}: {len(output.rows)} rows -> {output.csv_path}")
    if output.aggregates:
        print(json.dumps(output.aggregates, indent=2, sort_keys=True))
    for violation in output.bound_violations:
        print(f"warning: optimized distance exceeds capacity bound: {violation}", file=sys.stderr)
    return 0
