"""Command-line frontend.

Commands: ingest, featurize, train-eval, simulate. Exit codes: 0 ok,
2 input/validation error, 3 runtime/training error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline
from .config import apply_overrides, parse_config
from .errors import (
    MisalignedSeries,
    NonFiniteActivation,
    StockcastError,
    TrainingDiverged,
)
from .features import FEATURE_SETS, write_matrix_csv

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3


def _add_common(parser, with_run_flags=True):
    parser.add_argument("--config", required=True, help="experiment config file")
    parser.add_argument("--feature-set", default=None,
                        help="restrict to one feature set")
    parser.add_argument("--out-dir", default=None, help="output directory")
    if with_run_flags:
        parser.add_argument("--seed", type=int, default=None,
                            help="override base seed")
        parser.add_argument("--replicates", type=int, default=None,
                            help="override replicate count")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stockcast",
        description="Deterministic multimodal stock forecasting pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("ingest", help="validate inputs, print counts"),
                with_run_flags=False)
    _add_common(sub.add_parser("featurize", help="export feature matrix CSVs"),
                with_run_flags=False)
    _add_common(sub.add_parser("train-eval", help="train replicates, write metrics"))
    _add_common(sub.add_parser("simulate", help="run the trading simulation"))
    return parser


def _load_config(args):
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["base_seed"] = args.seed
    if getattr(args, "replicates", None) is not None:
        overrides["replicates"] = args.replicates
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if args.feature_set is not None:
        if args.feature_set not in FEATURE_SETS:
            raise StockcastError(
                f"unknown feature set {args.feature_set!r}; "
                f"valid names: {', '.join(FEATURE_SETS)}"
            )
        overrides["feature_sets"] = (args.feature_set,)
    config = parse_config(args.config)
    return apply_overrides(config, overrides)


def cmd_ingest(args):
    config = _load_config(args)
    dataset = pipeline.load_dataset(config)
    bars = dataset.bars
    print(f"stock: {config.stock}")
    print(f"bars: {len(bars)} ({bars[0].date} .. {bars[-1].date})")
    print(f"tweets: {len(dataset.tweets)}")
    print(f"news: {len(dataset.news)}")
    print(f"provider: {config.provider}")
    print(f"config_hash: {config.config_hash}")
    return EXIT_OK


def cmd_featurize(args):
    config = _load_config(args)
    dataset = pipeline.load_dataset(config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for feature_set in config.feature_sets:
        matrix = pipeline.build_matrix(config, dataset, feature_set)
        path = out_dir / f"features_{pipeline.safe_name(feature_set)}.csv"
        write_matrix_csv(path, matrix,
                         header_comment=f"config_hash={config.config_hash}")
        print(f"wrote {path} ({len(matrix.dates)} rows x {len(matrix.columns)} features)")
    return EXIT_OK


def cmd_train_eval(args):
    config = _load_config(args)
    _, results = pipeline.run_train_eval(config, config.out_dir)
    for result in results:
        for report in result.reports:
            if report.scale != "normalized":
                continue
            print(f"{result.feature_set}: r2={report.r2_mean:.4f} "
                  f"mae={report.mae_mean:.4f} ({report.replicates} replicates)")
    print(f"reports written to {config.out_dir}")
    return EXIT_OK


def cmd_simulate(args):
    config = _load_config(args)
    sim_results = pipeline.run_simulate(config, config.out_dir)
    for feature_set, sim in sim_results:
        print(f"{feature_set}: gain={sim.percent_gain:.4f}%")
    print(f"ledgers written to {config.out_dir}")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "featurize": cmd_featurize,
    "train-eval": cmd_train_eval,
    "simulate": cmd_simulate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (TrainingDiverged, NonFiniteActivation, MisalignedSeries) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except StockcastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename or exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
