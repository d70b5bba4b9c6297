"""Command-line front end.

Exit codes are frozen so CI can gate on them: 0 success, 1 runtime
failure, 2 configuration refusal (bad config, unknown metric or
experiment, failed model conditions), 3 verify thresholds failed (the
report is still written).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import cadlag
from .coefficients import Deterministic, c_plus_minus, sample_coefficients
from .config import load_config
from .errors import ConfigurationError, MonotonicityError
from .harness import EXPERIMENTS, evaluate_thresholds, replicate_seeds
from .linear_process import innovation_max_process, partial_maxima, simulate_path
from .rng import derive
from .skorohod import d_m1_monotone, d_m2, d_uniform

_METRICS = {
    "uniform": lambda f, g, tol: d_uniform(f, g),
    "m2": d_m2,
    "m1_monotone": d_m1_monotone,
}

_COEFF_STREAM = 0x48434F45  # matches the harness's per-replicate stream


def _load_with_overrides(args) -> "ExperimentConfig":
    config = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    if getattr(args, "out", None) is not None:
        config = dataclasses.replace(config, output_dir=args.out)
    return config


def _cmd_simulate(args) -> int:
    config = _load_with_overrides(args)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    from .coefficients import order_for_sup_tail

    deterministic = isinstance(config.model, Deterministic)
    order = (
        max(len(config.model.values) - 1, 0)
        if deterministic
        else order_for_sup_tail(config.model, 1e-9)
    )
    shared = sample_coefficients(config.model, order, 0) if deterministic else None
    seeds = replicate_seeds(config.master_seed, config.replicates)
    written = 0
    for n in config.n_grid:
        for rep in range(config.replicates):
            rep_seed = int(seeds[rep])
            real = shared if deterministic else sample_coefficients(
                config.model, order, derive(rep_seed, _COEFF_STREAM)
            )
            path = simulate_path(config.law, real, n, rep_seed)
            stem = f"n{n}_r{rep:04d}"
            with open(out_dir / f"path_{stem}.csv", "w") as fh:
                fh.write("i,x_i\n")
                for i, x in enumerate(path.x, start=1):
                    fh.write(f"{i},{x!r}\n")
            maxima = partial_maxima(path, config.initial_convention)
            (out_dir / f"maxima_{stem}.json").write_text(cadlag.dumps(maxima))
            cp, cm = c_plus_minus(real)
            envelope = innovation_max_process(path.observed_innovations, path.a_n, cp, cm)
            (out_dir / f"envelope_{stem}.json").write_text(cadlag.dumps(envelope))
            written += 3
    print(
        f"simulate: wrote {written} files ({len(config.n_grid)} path lengths x "
        f"{config.replicates} replicates) to {out_dir}"
    )
    return 0


def _cmd_metric(args) -> int:
    if args.metric not in _METRICS:
        print(f"unknown metric {args.metric!r}; choose from {sorted(_METRICS)}", file=sys.stderr)
        return 2
    try:
        f = cadlag.loads(Path(args.first).read_text())
        g = cadlag.loads(Path(args.second).read_text())
    except (OSError, ValueError, KeyError) as exc:
        print(f"could not read step functions: {exc}", file=sys.stderr)
        return 2
    value = _METRICS[args.metric](f, g, args.tol)
    print(json.dumps({"metric": args.metric, "value": value, "tol": args.tol, "certified": True}))
    return 0


def _cmd_verify(args) -> int:
    if args.experiment not in EXPERIMENTS:
        print(
            f"unknown experiment {args.experiment!r}; choose from {sorted(EXPERIMENTS)}",
            file=sys.stderr,
        )
        return 2
    config = _load_with_overrides(args)
    report = EXPERIMENTS[args.experiment](config, workers=args.workers)
    json_path, csv_path = report.write(config.output_dir, basename=f"report_{args.experiment}")
    passed, failures = evaluate_thresholds(report, config)
    for msg in failures:
        print(f"FAIL {msg}", file=sys.stderr)
    print(f"verify[{args.experiment}]: {'pass' if passed else 'fail'}; report at {json_path} / {csv_path}")
    return 0 if passed else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linmax",
        description="Simulate heavy-tailed linear-process maxima and verify their limit behaviour.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write path CSVs and step-function JSONs")
    sim.add_argument("--config", required=True, help="TOML configuration file")
    sim.add_argument("--seed", type=int, default=None, help="override the master seed")
    sim.add_argument("--out", default=None, help="override the output directory")
    sim.add_argument("--workers", type=int, default=os.cpu_count())
    sim.set_defaults(func=_cmd_simulate)

    met = sub.add_parser("metric", help="distance between two serialized step functions")
    met.add_argument("first", help="step-function JSON file")
    met.add_argument("second", help="step-function JSON file")
    met.add_argument("--metric", default="m2", help="uniform | m2 | m1_monotone")
    met.add_argument("--tol", type=float, default=1e-9)
    met.set_defaults(func=_cmd_metric)

    ver = sub.add_parser("verify", help="run a convergence experiment and gate on thresholds")
    ver.add_argument("--config", required=True)
    ver.add_argument("--experiment", required=True, help="marginal | envelope | shrinkage | truncation")
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--out", default=None)
    ver.add_argument("--workers", type=int, default=os.cpu_count())
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except MonotonicityError as exc:
        print(f"monotonicity error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure contract: exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
