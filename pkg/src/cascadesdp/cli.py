"""Command-line interface: run benchmark scenarios, print corpus
statistics, or validate dataset files.

Flags mirror the optional key=value config file (``--config``); explicit
flags win over file values.  On failure the process exits nonzero with a
single-line ``error: <Type>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .datasets import DatasetFormatError
from .experiment import (
    DEFAULT_SEED,
    ExperimentConfig,
    corpus_stats,
    load_datasets,
    run_experiment,
)
from .reference import NASA_DATASET_NAMES

_CONFIG_KEYS = {
    "datasets": str,
    "dataset_names": str,
    "scenario": str,
    "folds": int,
    "seed": int,
    "meta_trees": int,
    "ensemble_members": int,
    "out": str,
    "format": str,
}


def _load_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _CONFIG_KEYS[key](value.strip().strip("'\""))
    return values


def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--datasets", help="directory holding the dataset files")
    parser.add_argument(
        "--dataset-names",
        dest="dataset_names",
        default=",".join(NASA_DATASET_NAMES),
        help="comma-separated dataset names (default: the nine NASA sets)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascadesdp",
        description="Cascade-generalization defect-prediction benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run benchmark scenario(s) and emit reports")
    _add_dataset_args(run)
    run.add_argument("--config", help="key=value file mirroring the flags")
    run.add_argument("--scenario", choices=("1", "2", "all"), default="all")
    run.add_argument("--folds", type=int, default=10)
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--meta-trees", dest="meta_trees", type=int, default=100)
    run.add_argument("--ensemble-members", dest="ensemble_members", type=int, default=10)
    run.add_argument("--out", default="reports")
    run.add_argument("--format", default="csv,md,json", help="comma list of csv, md, json")
    run.add_argument("--quiet", action="store_true", help="suppress progress lines")

    stats = sub.add_parser("stats", help="print per-dataset summary counts")
    _add_dataset_args(stats)

    validate = sub.add_parser("validate", help="check that every dataset file loads")
    _add_dataset_args(validate)

    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv[1:] if argv and argv[0] == "run" else [])
    if known.config:
        file_values = _load_config_file(known.config)
        for action in parser._subparsers._group_actions[0].choices["run"]._actions:
            if action.dest in file_values:
                action.default = file_values[action.dest]
    return parser.parse_args(argv)


def _make_config(args: argparse.Namespace) -> ExperimentConfig:
    if not args.datasets:
        raise ValueError("--datasets is required (flag or config file)")
    return ExperimentConfig(
        datasets_dir=Path(args.datasets),
        dataset_names=tuple(n.strip() for n in args.dataset_names.split(",") if n.strip()),
        scenario=getattr(args, "scenario", "all"),
        k=getattr(args, "folds", 10),
        seed=getattr(args, "seed", DEFAULT_SEED),
        meta_trees=getattr(args, "meta_trees", 100),
        ensemble_members=getattr(args, "ensemble_members", 10),
        out_dir=Path(getattr(args, "out", "reports")),
        formats=tuple(f.strip() for f in getattr(args, "format", "csv,md,json").split(",")),
    )


def _cmd_run(args: argparse.Namespace) -> int:
    config = _make_config(args)
    written = run_experiment(config, verbose=not args.quiet)
    for path in written:
        print(path)
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    config = _stats_config(args)
    rows = [meta.as_row() for meta in corpus_stats(config)]
    header = ("Dataset", "Instances", "Attributes", "Defective", "Non-Defective")
    widths = [
        max(len(str(header[i])), *(len(str(r[i])) for r in rows)) for i in range(len(header))
    ]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return 0


def _stats_config(args: argparse.Namespace) -> ExperimentConfig:
    if not args.datasets:
        raise ValueError("--datasets is required")
    return ExperimentConfig(
        datasets_dir=Path(args.datasets),
        dataset_names=tuple(n.strip() for n in args.dataset_names.split(",") if n.strip()),
    )


def _cmd_validate(args: argparse.Namespace) -> int:
    config = _stats_config(args)
    datasets = load_datasets(config)
    for name, data in datasets.items():
        print(f"OK {name}: {data.n_instances} instances, {data.n_features} predictors")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config_file(parser, argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "stats":
            return _cmd_stats(args)
        if args.command == "validate":
            return _cmd_validate(args)
        raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, OSError, DatasetFormatError, RuntimeError) as exc:
        message = f"{type(exc).__name__}: {exc}".replace("\n", "; ")
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
