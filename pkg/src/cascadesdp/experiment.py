"""Scenario runner and report emitter.

Scenario 1 compares each cascade model against its plain base classifier;
scenario 2 compares the cascades against bagging and boosting variants of
the same bases.  Every dataset-model cell is one stratified CV run whose
seed derives from (run seed, dataset name, canonical model key), so cells
are independent of execution order and identical across scenarios that
share a model.

Emitted tables are quantized first (accuracy as percent to 2 decimals,
other metrics to 3), and the Average row is recomputed from the quantized
dataset cells, which makes every report self-consistent in isolation.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .cascade import CGConfig
from .datasets import Dataset, dataset_stats, load_arff, load_csv
from .evaluation import EvaluationReport, cross_validate
from .learners import ClassifierSpec, bagging_spec, boosting_spec, dt_spec, knn_spec, nb_spec
from .reference import NASA_DATASET_NAMES, REFERENCE_TABLES
from .seeding import derive_seed

__all__ = [
    "DEFAULT_SEED",
    "METRICS",
    "ExperimentConfig",
    "ResultTable",
    "ImprovementTable",
    "FiveNumberSummary",
    "BoxPlotSummary",
    "ScenarioResult",
    "load_datasets",
    "run_scenario1",
    "run_scenario2",
    "run_experiment",
    "compute_boxplot_summary",
    "emit_reports",
    "metric_decimals",
    "quantize",
]

DEFAULT_SEED = 42
METRICS = ("accuracy", "auc", "f_measure", "mcc")
QUARTILE_METHOD = "median-of-halves (Tukey hinges, median excluded for odd counts)"


@dataclass(frozen=True)
class ExperimentConfig:
    datasets_dir: Path
    dataset_names: tuple[str, ...] = NASA_DATASET_NAMES
    scenario: str = "all"  # "1" | "2" | "all"
    k: int = 10
    seed: int = DEFAULT_SEED
    meta_trees: int = 100
    ensemble_members: int = 10
    out_dir: Path = Path("reports")
    formats: tuple[str, ...] = ("csv", "md", "json")

    def __post_init__(self) -> None:
        object.__setattr__(self, "datasets_dir", Path(self.datasets_dir))
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        object.__setattr__(self, "dataset_names", tuple(self.dataset_names))
        object.__setattr__(self, "formats", tuple(self.formats))
        if not self.dataset_names:
            raise ValueError("dataset list must not be empty")
        if self.scenario not in ("1", "2", "all"):
            raise ValueError("scenario must be '1', '2' or 'all'")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if not self.formats:
            raise ValueError("at least one output format required")
        unknown = set(self.formats) - {"csv", "md", "json"}
        if unknown:
            raise ValueError(f"unsupported formats: {sorted(unknown)}")
        if self.meta_trees < 1 or self.ensemble_members < 1:
            raise ValueError("meta_trees and ensemble_members must be positive")


@dataclass(frozen=True)
class ResultTable:
    """Datasets x models matrix of raw metric values (accuracy as a
    fraction); the Average row is the per-column arithmetic mean."""

    metric: str
    model_names: tuple[str, ...]
    dataset_names: tuple[str, ...]
    cells: np.ndarray  # (datasets, models)

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.float64)
        object.__setattr__(self, "cells", cells)
        if cells.shape != (len(self.dataset_names), len(self.model_names)):
            raise ValueError("cell matrix shape must match row/column names")

    @property
    def average(self) -> np.ndarray:
        return self.cells.mean(axis=0)

    def column(self, model: str) -> np.ndarray:
        return self.cells[:, self.model_names.index(model)]


@dataclass(frozen=True)
class ImprovementTable:
    """Pairwise percentage improvements 100*(new-old)/old.  The Average
    row is computed from the column averages of the source table (not by
    averaging the per-dataset improvements)."""

    metric: str
    pair_labels: tuple[str, ...]
    dataset_names: tuple[str, ...]
    cells: np.ndarray
    average_row: np.ndarray


@dataclass(frozen=True)
class FiveNumberSummary:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float

    def __post_init__(self) -> None:
        ordered = (self.minimum, self.q1, self.median, self.q3, self.maximum)
        if any(a > b for a, b in zip(ordered, ordered[1:])):
            raise ValueError("five-number summary must be non-decreasing")


@dataclass(frozen=True)
class BoxPlotSummary:
    metric: str
    per_model: dict[str, FiveNumberSummary]


@dataclass
class ScenarioResult:
    scenario: str  # "scenario1" | "scenario2"
    tables: dict[str, ResultTable]
    improvements: dict[str, ImprovementTable] = field(default_factory=dict)
    reports: dict[tuple[str, str], EvaluationReport] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# dataset loading


def _resolve_dataset_path(directory: Path, name: str) -> Path | None:
    for candidate in (f"{name}.arff", f"{name}.csv", f"{name.lower()}.arff", f"{name.lower()}.csv"):
        path = directory / candidate
        if path.is_file():
            return path
    return None


def load_datasets(config: ExperimentConfig) -> dict[str, Dataset]:
    """Load every configured dataset, aborting with one error naming all
    missing files before any evaluation starts."""
    missing = []
    paths: dict[str, Path] = {}
    for name in config.dataset_names:
        path = _resolve_dataset_path(config.datasets_dir, name)
        if path is None:
            missing.append(f"{name} (no {name}.arff or {name}.csv in {config.datasets_dir})")
        else:
            paths[name] = path
    if missing:
        raise FileNotFoundError("missing dataset files: " + "; ".join(missing))
    loaded = {}
    for name, path in paths.items():
        data = load_arff(path) if path.suffix.lower() == ".arff" else load_csv(path)
        loaded[name] = Dataset(
            name=name,
            features=data.features,
            labels=data.labels,
            feature_names=data.feature_names,
            class_names=data.class_names,
        )
    return loaded


def corpus_stats(config: ExperimentConfig):
    return [dataset_stats(d) for d in load_datasets(config).values()]


# ---------------------------------------------------------------------------
# model columns


@dataclass(frozen=True)
class _Column:
    label: str
    key: str  # canonical key: shared across scenarios, drives the cell seed
    spec: object  # ClassifierSpec | CGConfig


def _cg(base: ClassifierSpec, config: ExperimentConfig) -> CGConfig:
    return CGConfig(base_specs=(base,), meta_trees=config.meta_trees)


def scenario1_columns(config: ExperimentConfig) -> tuple[_Column, ...]:
    return (
        _Column("NB", "nb", nb_spec()),
        _Column("CG-NB", "cg-nb", _cg(nb_spec(), config)),
        _Column("DT", "dt", dt_spec()),
        _Column("CG-DT", "cg-dt", _cg(dt_spec(), config)),
        _Column("KNN", "knn", knn_spec()),
        _Column("CG-KNN", "cg-knn", _cg(knn_spec(), config)),
    )


def scenario2_columns(config: ExperimentConfig) -> tuple[_Column, ...]:
    m = config.ensemble_members
    return (
        _Column("Bg-NB", "bag-nb", bagging_spec(nb_spec(), members=m)),
        _Column("Bo-NB", "boost-nb", boosting_spec(nb_spec(), members=m)),
        _Column("CG-NB", "cg-nb", _cg(nb_spec(), config)),
        _Column("Bg-DT", "bag-dt", bagging_spec(dt_spec(), members=m)),
        _Column("Bo-DT", "boost-dt", boosting_spec(dt_spec(), members=m)),
        _Column("CG-DT", "cg-dt", _cg(dt_spec(), config)),
        _Column("Bg-kNN", "bag-knn", bagging_spec(knn_spec(), members=m)),
        _Column("Bo-kNN", "boost-knn", boosting_spec(knn_spec(), members=m)),
        _Column("CG-kNN", "cg-knn", _cg(knn_spec(), config)),
    )


IMPROVEMENT_PAIRS = (("NB", "CG-NB"), ("DT", "CG-DT"), ("KNN", "CG-KNN"))


class _CellRunner:
    """Evaluates dataset-model cells with memoisation keyed by the
    canonical model key, so shared columns agree across scenarios."""

    def __init__(self, config: ExperimentConfig, datasets: dict[str, Dataset], verbose=False):
        self.config = config
        self.datasets = datasets
        self.verbose = verbose
        self._cache: dict[tuple[str, str], EvaluationReport] = {}

    def cell(self, dataset_name: str, column: _Column) -> EvaluationReport:
        key = (dataset_name, column.key)
        if key not in self._cache:
            seed = derive_seed(self.config.seed, dataset_name, column.key)
            report = cross_validate(
                column.spec, self.datasets[dataset_name], self.config.k, seed
            )
            self._cache[key] = report
            if self.verbose:
                m = report.metrics
                print(
                    f"  {dataset_name} / {column.label}: "
                    f"acc={100 * m.accuracy:.2f} auc={m.auc:.3f}",
                    file=sys.stderr,
                )
        return self._cache[key]


def _metric_value(report: EvaluationReport, metric: str) -> float:
    return getattr(report.metrics, metric)


def _run_scenario(
    config: ExperimentConfig, columns: tuple[_Column, ...], scenario: str, runner: _CellRunner
) -> ScenarioResult:
    names = config.dataset_names
    cells = {metric: np.empty((len(names), len(columns))) for metric in METRICS}
    reports: dict[tuple[str, str], EvaluationReport] = {}
    for i, dataset_name in enumerate(names):
        for j, column in enumerate(columns):
            report = runner.cell(dataset_name, column)
            reports[(dataset_name, column.label)] = report
            for metric in METRICS:
                cells[metric][i, j] = _metric_value(report, metric)
    tables = {
        metric: ResultTable(
            metric=metric,
            model_names=tuple(c.label for c in columns),
            dataset_names=names,
            cells=cells[metric],
        )
        for metric in METRICS
    }
    result = ScenarioResult(scenario=scenario, tables=tables, reports=reports)
    if scenario == "scenario1":
        result.improvements = {
            metric: _improvements(tables[metric]) for metric in METRICS
        }
    return result


def _improvements(table: ResultTable) -> ImprovementTable:
    pairs = [(b, c) for b, c in IMPROVEMENT_PAIRS if b in table.model_names]
    labels = tuple(f"{b}->{c}" for b, c in pairs)
    cells = np.empty((len(table.dataset_names), len(pairs)))
    average_row = np.empty(len(pairs))
    averages = table.average
    for j, (base, cascade) in enumerate(pairs):
        b = table.column(base)
        c = table.column(cascade)
        cells[:, j] = 100.0 * (c - b) / b
        b_avg = averages[table.model_names.index(base)]
        c_avg = averages[table.model_names.index(cascade)]
        average_row[j] = 100.0 * (c_avg - b_avg) / b_avg
    return ImprovementTable(
        metric=table.metric,
        pair_labels=labels,
        dataset_names=table.dataset_names,
        cells=cells,
        average_row=average_row,
    )


def run_scenario1(config: ExperimentConfig, runner: _CellRunner | None = None) -> ScenarioResult:
    runner = runner or _CellRunner(config, load_datasets(config))
    return _run_scenario(config, scenario1_columns(config), "scenario1", runner)


def run_scenario2(config: ExperimentConfig, runner: _CellRunner | None = None) -> ScenarioResult:
    runner = runner or _CellRunner(config, load_datasets(config))
    return _run_scenario(config, scenario2_columns(config), "scenario2", runner)


def run_experiment(config: ExperimentConfig, verbose: bool = False) -> list[Path]:
    """Load datasets, run the configured scenario(s), emit all reports."""
    datasets = load_datasets(config)
    runner = _CellRunner(config, datasets, verbose=verbose)
    results = []
    if config.scenario in ("1", "all"):
        if verbose:
            print("scenario 1: cascades vs. base classifiers", file=sys.stderr)
        results.append(run_scenario1(config, runner))
    if config.scenario in ("2", "all"):
        if verbose:
            print("scenario 2: cascades vs. bagging/boosting", file=sys.stderr)
        results.append(run_scenario2(config, runner))
    return emit_reports(results, config)


# ---------------------------------------------------------------------------
# box plots


def _median(sorted_values: list[float]) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2 == 1:
        return sorted_values[mid]
    return 0.5 * (sorted_values[mid - 1] + sorted_values[mid])


def five_number_summary(values) -> FiveNumberSummary:
    """Median-of-halves quartiles; the median is excluded from both halves
    when the count is odd."""
    ordered = sorted(float(v) for v in values)
    if not ordered:
        raise ValueError("need at least one value")
    n = len(ordered)
    if n == 1:
        v = ordered[0]
        return FiveNumberSummary(v, v, v, v, v)
    lower = ordered[: n // 2]
    upper = ordered[(n + 1) // 2 :]
    return FiveNumberSummary(
        minimum=ordered[0],
        q1=_median(lower),
        median=_median(ordered),
        q3=_median(upper),
        maximum=ordered[-1],
    )


def compute_boxplot_summary(table: ResultTable) -> BoxPlotSummary:
    """Per-model five-number summary over the per-dataset metric values
    (the Average row is not part of the distribution)."""
    return BoxPlotSummary(
        metric=table.metric,
        per_model={
            model: five_number_summary(table.column(model)) for model in table.model_names
        },
    )


# ---------------------------------------------------------------------------
# emission


def metric_decimals(metric: str) -> int:
    return 2 if metric == "accuracy" else 3


def quantize(metric: str, value: float) -> float:
    """Emission units: accuracy as percent to 2 decimals, others to 3."""
    if metric == "accuracy":
        return round(100.0 * value, 2)
    return round(value, metric_decimals(metric))


def _fmt(metric: str, value: float) -> str:
    return f"{value:.{metric_decimals(metric)}f}"


def _quantized_table(table: ResultTable) -> tuple[np.ndarray, np.ndarray]:
    """(quantized cells, average row recomputed from the quantized cells)."""
    q = np.vectorize(lambda v: quantize(table.metric, v))(table.cells)
    nd = metric_decimals(table.metric)
    avg = np.round(q.mean(axis=0), nd)
    return q, avg


def _csv_lines(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _md_lines(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    def fmt_row(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
    lines = [fmt_row(header), "| " + " | ".join("-" * w for w in widths) + " |"]
    lines.extend(fmt_row(r) for r in rows)
    return "\n".join(lines) + "\n"


def _table_payloads(result: ScenarioResult, table: ResultTable, config: ExperimentConfig):
    q, avg = _quantized_table(table)
    metric = table.metric
    header = ["dataset"] + list(table.model_names)
    rows = [
        [name] + [_fmt(metric, v) for v in q[i]]
        for i, name in enumerate(table.dataset_names)
    ]
    rows.append(["Average"] + [_fmt(metric, v) for v in avg])
    payloads = {
        "csv": _csv_lines(header, rows),
        "md": _md_lines(header, rows),
        "json": json.dumps(
            {
                "scenario": result.scenario,
                "metric": metric,
                "seed": config.seed,
                "k": config.k,
                "rows": [
                    {
                        "dataset": name,
                        "cells": [
                            {"model": m, "value": q[i, j], "source": "computed"}
                            for j, m in enumerate(table.model_names)
                        ],
                    }
                    for i, name in enumerate(table.dataset_names)
                ],
                "average": {
                    "cells": [
                        {"model": m, "value": avg[j], "source": "computed"}
                        for j, m in enumerate(table.model_names)
                    ]
                },
            },
            indent=2,
        )
        + "\n",
    }
    return payloads


def _boxplot_payloads(result: ScenarioResult, table: ResultTable):
    summary = compute_boxplot_summary(
        ResultTable(
            metric=table.metric,
            model_names=table.model_names,
            dataset_names=table.dataset_names,
            cells=np.vectorize(lambda v: quantize(table.metric, v))(table.cells),
        )
    )
    metric = table.metric
    header = ["model", "min", "q1", "median", "q3", "max"]
    rows = [
        [m] + [_fmt(metric, getattr(s, a)) for a in ("minimum", "q1", "median", "q3", "maximum")]
        for m, s in summary.per_model.items()
    ]
    return {
        "csv": _csv_lines(header, rows),
        "md": _md_lines(header, rows),
        "json": json.dumps(
            {
                "scenario": result.scenario,
                "metric": metric,
                "quartile_method": QUARTILE_METHOD,
                "models": [
                    {
                        "model": m,
                        "min": s.minimum,
                        "q1": s.q1,
                        "median": s.median,
                        "q3": s.q3,
                        "max": s.maximum,
                    }
                    for m, s in summary.per_model.items()
                ],
            },
            indent=2,
        )
        + "\n",
    }


def _improvement_payloads(result: ScenarioResult, imp: ImprovementTable, config):
    header = ["dataset"] + list(imp.pair_labels)
    rows = [
        [name] + [f"{imp.cells[i, j]:+.2f}" for j in range(len(imp.pair_labels))]
        for i, name in enumerate(imp.dataset_names)
    ]
    rows.append(["Average"] + [f"{v:+.2f}" for v in imp.average_row])
    return {
        "csv": _csv_lines(header, rows),
        "md": _md_lines(header, rows),
        "json": json.dumps(
            {
                "scenario": result.scenario,
                "metric": imp.metric,
                "kind": "improvement_pct",
                "note": "Average row derives from column averages, not per-dataset rows",
                "pairs": list(imp.pair_labels),
                "rows": [
                    {
                        "dataset": name,
                        "cells": [
                            {"pair": p, "value": round(imp.cells[i, j], 2)}
                            for j, p in enumerate(imp.pair_labels)
                        ],
                    }
                    for i, name in enumerate(imp.dataset_names)
                ],
                "average": {
                    "cells": [
                        {"pair": p, "value": round(float(v), 2)}
                        for p, v in zip(imp.pair_labels, imp.average_row)
                    ]
                },
            },
            indent=2,
        )
        + "\n",
    }


_COMPARISON_LABELS = {"CG-NB": "CG-NB", "CG-DT": "CG-DT", "CG-KNN": "CG-kNN", "CG-kNN": "CG-kNN"}


def _comparison_payloads(results: list[ScenarioResult], metric: str, config: ExperimentConfig):
    """Side-by-side rows: our cascade results (computed) above published
    external results (paper-reference) on overlapping datasets."""
    table = None
    for result in results:
        candidate = result.tables.get(metric)
        if candidate and any(m in _COMPARISON_LABELS for m in candidate.model_names):
            table = candidate
            break
    if table is None:
        return None
    overlap = [n for n in config.dataset_names if n in NASA_DATASET_NAMES]
    if not overlap:
        return None
    datasets = list(table.dataset_names)
    rows_data = []
    for model in table.model_names:
        if model not in _COMPARISON_LABELS:
            continue
        values = [quantize(metric, v) for v in table.column(model)]
        rows_data.append((_COMPARISON_LABELS[model], "computed", values))
    for model, cells in REFERENCE_TABLES[metric].items():
        values = [cells.get(name) for name in datasets]
        if all(v is None for v in values):
            continue
        rows_data.append((model, "paper-reference", values))

    header = ["model", "source"] + datasets
    csv_rows = [
        [model, source] + ["" if v is None else _fmt(metric, v) for v in values]
        for model, source, values in rows_data
    ]
    md_rows = [
        [model, source] + ["-" if v is None else _fmt(metric, v) for v in values]
        for model, source, values in rows_data
    ]
    json_payload = {
        "metric": metric,
        "datasets": datasets,
        "rows": [
            {
                "model": model,
                "source": source,
                "cells": [
                    {"dataset": d, "value": v, "source": source}
                    for d, v in zip(datasets, values)
                ],
            }
            for model, source, values in rows_data
        ],
    }
    return {
        "csv": _csv_lines(header, csv_rows),
        "md": _md_lines(header, md_rows),
        "json": json.dumps(json_payload, indent=2) + "\n",
    }


def emit_reports(
    results: list[ScenarioResult], config: ExperimentConfig
) -> list[Path]:
    """Write per-metric tables, box-plot summaries, improvement tables,
    the reference comparison and a checksum manifest; returns the paths.
    Output is a pure function of (config, dataset bytes)."""
    if not results:
        raise ValueError("no scenario results to emit")
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    contents: dict[str, str] = {}

    for result in results:
        for metric in METRICS:
            table = result.tables[metric]
            for fmt, payload in _table_payloads(result, table, config).items():
                if fmt in config.formats:
                    contents[f"{result.scenario}_{metric}.{fmt}"] = payload
            for fmt, payload in _boxplot_payloads(result, table).items():
                if fmt in config.formats:
                    contents[f"{result.scenario}_{metric}_boxplot.{fmt}"] = payload
        for metric, imp in result.improvements.items():
            for fmt, payload in _improvement_payloads(result, imp, config).items():
                if fmt in config.formats:
                    contents[f"{result.scenario}_improvement_{metric}.{fmt}"] = payload

    for metric in ("accuracy", "auc"):
        payloads = _comparison_payloads(results, metric, config)
        if payloads:
            for fmt, payload in payloads.items():
                if fmt in config.formats:
                    contents[f"reference_comparison_{metric}.{fmt}"] = payload

    written = []
    for name in sorted(contents):
        path = out / name
        path.write_text(contents[name], encoding="utf-8")
        written.append(path)

    manifest = {
        "version": __version__,
        "config": {
            "datasets_dir": str(config.datasets_dir),
            "dataset_names": list(config.dataset_names),
            "scenario": config.scenario,
            "k": config.k,
            "seed": config.seed,
            "meta_trees": config.meta_trees,
            "ensemble_members": config.ensemble_members,
            "out_dir": str(config.out_dir),
            "formats": list(config.formats),
        },
        "quartile_method": QUARTILE_METHOD,
        "rng": "PCG64 for folds/bootstraps; per-tree MT19937 for feature subsets",
        "checksums": {
            name: hashlib.sha256(contents[name].encode("utf-8")).hexdigest()
            for name in sorted(contents)
        },
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    written.append(manifest_path)
    return written
