"""``fselect`` command line: rank, cv and bench subcommands.

Exit codes: 0 success, 2 I/O or parse failure, 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import report as fmt
from .bench import run_bench
from .cv import cv_curve
from .dataset import DatasetError, DiscretizerSpec, discretize, load_csv
from .engine import DEFAULT_PAR_THRESHOLD, EngineConfig, ParallelEngine
from .selector import Objective, select
from .synthetic import benchmark_dataset

EXIT_OK, EXIT_IO, EXIT_CONFIG = 0, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    input_path: str | None
    label_col: str = "-1"
    delimiter: str = ","
    method: Objective = field(default_factory=Objective)
    k: int | str = "auto"
    discretizer: DiscretizerSpec = field(default_factory=DiscretizerSpec)
    engine: EngineConfig = field(default_factory=EngineConfig)
    cv_folds: int = 5
    seed: int = 42
    cv_reselect: bool = False
    output_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        if self.k == "auto" and self.cv_folds < 2:
            raise ConfigError("k=auto requires --folds >= 2")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _k_value(text: str):
    if text == "auto":
        return text
    try:
        k = int(text)
    except ValueError:
        raise ConfigError("k must be >= 1 or auto") from None
    if k < 1:
        raise ConfigError("k must be >= 1 or auto")
    return k


def _workers_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--workers-list must be comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise ConfigError("--workers-list needs at least one positive integer")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fselect", description="Cramer's V max-association / min-redundancy feature ranking")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _Parser(add_help=False)
    common.add_argument("--input", help="CSV file with a header row")
    common.add_argument("--label-col", default="-1", help="label column name or index (default: last)")
    common.add_argument("--delimiter", default=",")
    common.add_argument("--method", choices=["mmaiq", "mmais"], default="mmaiq")
    common.add_argument("--lambda", dest="lam", type=float, default=1.0)
    common.add_argument("--k", default=None, help="number of features to rank, or 'auto'")
    common.add_argument("--bins", type=int, default=16)
    common.add_argument("--discretizer", choices=["equal-frequency", "equal-width"], default="equal-frequency")
    common.add_argument("--folds", type=int, default=5)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--threads", type=int, default=None, help="worker count (overrides FSELECT_WORKERS)")
    common.add_argument("--par-threshold", type=int, default=DEFAULT_PAR_THRESHOLD)
    common.add_argument("--cv-reselect", action="store_true", help="re-rank inside every CV fold")
    common.add_argument("--output", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=list(fmt.FORMATS), default="json")

    sub.add_parser("rank", parents=[common], help="rank features")
    sub.add_parser("cv", parents=[common], help="cross-validate ranking prefixes")
    bench = sub.add_parser("bench", parents=[common], help="time selection across worker counts")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--workers-list", default="1,2,4")
    bench.add_argument("--synthetic-features", type=int, default=200)
    bench.add_argument("--synthetic-rows", type=int, default=20_000)
    bench.add_argument("--synthetic-classes", type=int, default=8)
    bench.add_argument("--synthetic-informative", type=int, default=20)
    return parser


def config_from_args(args) -> RunConfig:
    default_k = "auto" if args.command in ("rank", "cv") else None
    k = default_k if args.k is None else _k_value(args.k)
    if args.folds < 2 and (args.command == "cv" or k == "auto"):
        raise ConfigError("--folds must be >= 2")
    if args.threads is not None and args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if args.par_threshold < 0:
        raise ConfigError("--par-threshold must be >= 0")
    if args.command != "bench" and not args.input:
        raise ConfigError("--input is required")
    try:
        objective = Objective(args.method, args.lam)
        disc = DiscretizerSpec(args.discretizer, args.bins)
        engine = EngineConfig.from_env(args.threads, args.par_threshold)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        input_path=args.input,
        label_col=args.label_col,
        delimiter=args.delimiter,
        method=objective,
        k=k,
        discretizer=disc,
        engine=engine,
        cv_folds=args.folds,
        seed=args.seed,
        cv_reselect=args.cv_reselect,
        output_path=args.output,
        output_format=args.format,
    )


def _load(config: RunConfig):
    raw = load_csv(config.input_path, config.label_col, config.delimiter)
    return discretize(raw, config.discretizer)


def _source(config: RunConfig):
    return os.path.basename(config.input_path) if config.input_path else None


def _resolve_k(config: RunConfig, data) -> int:
    if config.k == "auto" or config.k is None:
        return data.m
    if config.k > data.m:
        raise ConfigError(f"k={config.k} exceeds the {data.m} available features")
    return config.k


def cmd_rank(config: RunConfig) -> dict:
    data = _load(config)
    k = _resolve_k(config, data)
    with ParallelEngine(config.engine) as engine:
        rep = select(data, config.method, k, engine)
        warnings = list(rep.warnings)
        body = {}
        if config.k == "auto":
            curve = cv_curve(data, rep, config.cv_folds, config.seed, engine,
                             reselect=config.cv_reselect)
            warnings += curve.warnings
            rep = rep.truncated(curve.best_k)
            body = fmt.selection_dict(rep)
            body["cv"] = fmt.cv_dict(curve)
        else:
            body = fmt.selection_dict(rep)
    return fmt.envelope("rank", fmt.dataset_info(data, _source(config)), body, warnings)


def cmd_cv(config: RunConfig) -> dict:
    data = _load(config)
    k = _resolve_k(config, data)
    with ParallelEngine(config.engine) as engine:
        rep = select(data, config.method, k, engine)
        curve = cv_curve(data, rep, config.cv_folds, config.seed, engine,
                         reselect=config.cv_reselect)
    body = fmt.selection_dict(rep)
    body["cv"] = fmt.cv_dict(curve)
    return fmt.envelope("cv", fmt.dataset_info(data, _source(config)), body,
                        rep.warnings + curve.warnings)


def cmd_bench(config: RunConfig, worker_counts: list[int], repeats: int, synthetic: dict | None = None) -> dict:
    if repeats < 1:
        raise ConfigError("--repeats must be >= 1")
    if config.input_path:
        data = _load(config)
    else:
        data = benchmark_dataset(**(synthetic or {}), seed=config.seed, bins=config.discretizer.bins)
    k = _resolve_k(config, data)
    timing = run_bench(data, worker_counts, repeats, config.method, k, config.engine.par_threshold)
    body = {"objective": {"kind": config.method.kind, "lambda": config.method.lam}}
    body.update(fmt.timing_dict(timing))
    return fmt.envelope("bench", fmt.dataset_info(data, _source(config)), body, list(data.warnings))


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = config_from_args(args)
        if args.command == "rank":
            doc = cmd_rank(config)
        elif args.command == "cv":
            doc = cmd_cv(config)
        else:
            synthetic = {
                "m": args.synthetic_features,
                "r": args.synthetic_rows,
                "C": args.synthetic_classes,
                "informative": args.synthetic_informative,
            }
            doc = cmd_bench(config, _workers_list(args.workers_list), args.repeats, synthetic)
        text = fmt.render(doc, config.output_format)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"fselect: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, DatasetError) as exc:
        print(f"fselect: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"fselect: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
