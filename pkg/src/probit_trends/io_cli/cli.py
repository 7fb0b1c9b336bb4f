"""Command-line entry point: ``simulate``, ``analyze`` and ``interpolate``.

Exit codes: 0 success, 2 input error (bad config, schema, arguments),
3 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import replace
from pathlib import Path

from ..numerics import TransformKind
from ..scenarios import ScenarioResult, run_scenario
from ..stats import DegenerateFitError, EvalRecord, MetricEstimate, fit_trend, interpolate_with_random
from .config import ConfigError, load_config
from .results import FitSummary, SchemaError, read_records, write_fits, write_records
from .svg import emit_svg

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 2, 3


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def result_fit_summaries(result: ScenarioResult) -> dict:
    theory = result.theoretical_line
    return {
        name: FitSummary.from_fit(
            fit,
            theoretical_slope=theory.slope if theory is not None else None,
            theorem_bound=result.bound,
            scenario=result.scenario,
            seed=result.seed,
        )
        for name, fit in result.fits.items()
    }


def write_result(result: ScenarioResult, out_dir: Path, plot: bool) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / "records.csv", out_dir / "fit.json"]
    write_records(result.records, paths[0])
    write_fits(
        result_fit_summaries(result),
        paths[1],
        scenario=result.scenario,
        seed=result.seed,
        diagnostics=result.diagnostics,
    )
    if plot:
        paths.append(out_dir / "scatter.svg")
        emit_svg(
            result.records,
            result.fits,
            result.theoretical_line,
            result.config.transform,
            paths[2],
            title=f"{result.scenario} (seed {result.seed})",
        )
    return paths


def cmd_simulate(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as err:
        _err(str(err))
        return EXIT_INPUT
    if args.workers is not None:
        if args.workers < 1:
            _err("--workers must be >= 1")
            return EXIT_INPUT
        config = replace(config, workers=args.workers)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = run_scenario(config)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        paths = write_result(result, Path(args.out), args.plot)
    except Exception as err:  # noqa: BLE001 - any failure of the run maps to exit 3
        _err(f"{config.kind} failed: {type(err).__name__}: {err}")
        return EXIT_RUNTIME
    for name, fit in result.fits.items():
        print(f"{name}: {_fit_line(fit)}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def _fit_line(fit) -> str:
    return (
        f"{fit.transform.value} slope={fit.slope:.6g} intercept={fit.intercept:.6g} "
        f"r2={fit.r_squared:.6g} n={fit.n_points}"
    )


def cmd_analyze(args) -> int:
    try:
        records = read_records(args.records, args.confidence)
    except SchemaError as err:
        _err(f"{args.records}: {err}")
        return EXIT_INPUT
    except OSError as err:
        _err(f"cannot read {args.records}: {err.strerror}")
        return EXIT_INPUT
    kinds = args.transform or [TransformKind.PROBIT.value]
    summaries = {}
    try:
        for k in kinds:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                fit = fit_trend(records, k)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            summaries[fit.transform.value] = FitSummary.from_fit(fit)
            print(_fit_line(fit))
    except DegenerateFitError as err:
        _err(str(err))
        return EXIT_RUNTIME
    try:
        write_fits(summaries, args.out, source=str(args.records))
    except OSError as err:
        _err(f"cannot write {args.out}: {err.strerror}")
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_interpolate(args) -> int:
    if args.steps < 2:
        _err("--steps must be >= 2")
        return EXIT_INPUT
    if args.classes < 2:
        _err("--classes must be >= 2")
        return EXIT_INPUT
    for name, v in (("--acc-id", args.acc_id), ("--acc-ood", args.acc_ood)):
        if not 0.0 <= v <= 1.0:
            _err(f"{name} must lie in [0, 1], got {v}")
            return EXIT_INPUT
    ps = [i / (args.steps - 1) for i in range(args.steps)]
    trace = interpolate_with_random(args.acc_id, args.acc_ood, args.classes, ps)
    width = len(str(args.steps - 1))
    records = [
        EvalRecord(
            f"interp_{i:0{width}d}",
            "interpolation",
            {"p": p},
            MetricEstimate.exact(float(f"{a:.9g}")),
            MetricEstimate.exact(float(f"{b:.9g}")),
        )
        for i, (p, (a, b)) in enumerate(zip(ps, trace))
    ]
    try:
        write_records(records, args.out)
    except OSError as err:
        _err(f"cannot write {args.out}: {err.strerror}")
        return EXIT_RUNTIME
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probit-trends", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--plot", action="store_true", help="also write scatter.svg")
    p.add_argument("--workers", type=int, default=None, help="override the config's worker threads")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="fit a trend to a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument(
        "--transform",
        action="append",
        choices=[k.value for k in TransformKind],
        help="axis transform; repeat to compare several",
    )
    p.add_argument("--out", required=True, help="output JSON path")
    p.add_argument("--confidence", type=float, default=0.95)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("interpolate", help="trace a model mixed with random guessing")
    p.add_argument("--acc-id", type=float, required=True)
    p.add_argument("--acc-ood", type=float, required=True)
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_interpolate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
