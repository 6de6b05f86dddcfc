"""Defect-dataset loading, validation, statistics and stratified CV folds.

Datasets are binary-labelled numeric tables.  Class index 1 is always the
defective (positive) class; raw labels are mapped through a fixed synonym
list.  Loaders reject missing values instead of imputing them.

Fold shuffling uses numpy's PCG64 generator (a documented, portable 64-bit
PRNG), so a fold plan is reproducible across platforms from its seed alone.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Dataset",
    "DatasetMeta",
    "FoldPlan",
    "DatasetFormatError",
    "load_arff",
    "load_csv",
    "write_arff",
    "write_csv",
    "dataset_stats",
    "stratified_folds",
    "subset",
]

# Raw labels (case-insensitive) treated as the defective/positive class.
DEFECTIVE_SYNONYMS = frozenset({"y", "yes", "true", "1", "defective"})


class DatasetFormatError(ValueError):
    """A dataset file violates the supported ARFF/CSV subset."""


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix plus binary labels (1 = defective)."""

    name: str
    features: np.ndarray  # (N, P) float64
    labels: np.ndarray  # (N,) int64 in {0, 1}
    feature_names: tuple[str, ...]
    class_names: tuple[str, str] = ("non-defective", "defective")

    def __post_init__(self) -> None:
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        n, p = feats.shape
        if n < 2:
            raise ValueError("dataset needs at least 2 instances")
        if labels.shape != (n,):
            raise ValueError("labels length must match feature rows")
        if not np.isfinite(feats).all():
            raise ValueError("features contain non-finite values")
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        if not (labels == 0).any() or not (labels == 1).any():
            raise ValueError("both classes must occur at least once")
        if len(self.feature_names) != p:
            raise ValueError("feature_names length must match feature columns")
        if len(set(self.feature_names)) != p:
            raise ValueError("feature_names must be unique")
        if len(self.class_names) != 2:
            raise ValueError("exactly two class names required")
        feats.setflags(write=False)
        labels.setflags(write=False)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def equal_contents(self, other: "Dataset") -> bool:
        """True when matrices, labels and feature names coincide exactly."""
        return (
            self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
            and self.feature_names == other.feature_names
        )


@dataclass(frozen=True)
class DatasetMeta:
    """Summary row: attribute count includes the class attribute."""

    name: str
    instances: int
    attributes: int
    defective: int
    non_defective: int

    def __post_init__(self) -> None:
        if self.defective + self.non_defective != self.instances:
            raise ValueError("defective + non_defective must equal instances")

    def as_row(self) -> tuple[str, int, int, int, int]:
        return (self.name, self.instances, self.attributes, self.defective, self.non_defective)


@dataclass(frozen=True)
class FoldPlan:
    """Disjoint stratified index sets covering 0..N-1."""

    k: int
    folds: tuple[np.ndarray, ...]
    seed: int
    n_instances: int = field(default=0)

    def __post_init__(self) -> None:
        folds = tuple(np.asarray(f, dtype=np.int64) for f in self.folds)
        object.__setattr__(self, "folds", folds)
        if self.k != len(folds):
            raise ValueError("k must equal the number of folds")
        pooled = np.concatenate(folds) if folds else np.empty(0, dtype=np.int64)
        n = self.n_instances or pooled.size
        object.__setattr__(self, "n_instances", int(n))
        if not np.array_equal(np.sort(pooled), np.arange(n)):
            raise ValueError("folds must partition 0..N-1 exactly")
        sizes = [f.size for f in folds]
        if max(sizes) - min(sizes) > 1:
            raise ValueError("fold sizes must differ by at most 1")
        for f in folds:
            f.setflags(write=False)

    def complement(self, fold_index: int) -> np.ndarray:
        """Training indices for one held-out fold, in ascending order."""
        mask = np.ones(self.n_instances, dtype=bool)
        mask[self.folds[fold_index]] = False
        return np.flatnonzero(mask)


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_number(token: str, where: str) -> float:
    token = token.strip()
    if token == "?":
        raise DatasetFormatError(f"{where}: missing value '?' is not supported")
    try:
        value = float(token)
    except ValueError as exc:
        raise DatasetFormatError(f"{where}: non-numeric value {token!r}") from exc
    if not np.isfinite(value):
        raise DatasetFormatError(f"{where}: non-finite value {token!r}")
    return value


def _map_class_values(values: tuple[str, str], where: str) -> tuple[str, str]:
    """Order two raw class labels as (negative, positive)."""
    flags = [v.strip().lower() in DEFECTIVE_SYNONYMS for v in values]
    if flags == [True, True] or flags == [False, False]:
        raise DatasetFormatError(
            f"{where}: cannot identify the defective label among {values!r}; "
            f"exactly one must be in {sorted(DEFECTIVE_SYNONYMS)}"
        )
    return (values[0], values[1]) if flags[1] else (values[1], values[0])


_ARFF_ATTR = re.compile(r"^@attribute\s+(\S+|'[^']*')\s+(.+)$", re.IGNORECASE)


def _strip_quotes(name: str) -> str:
    name = name.strip()
    if len(name) >= 2 and name[0] == name[-1] and name[0] in "'\"":
        return name[1:-1]
    return name


def load_arff(path: str | Path) -> Dataset:
    """Load the supported ARFF subset: numeric attributes plus one trailing
    two-valued nominal class attribute."""
    path = Path(path)
    attr_names: list[str] = []
    attr_kinds: list[str] = []  # "numeric" or the raw nominal spec
    nominal_values: tuple[str, str] | None = None
    rows: list[list[float]] = []
    raw_labels: list[str] = []
    in_data = False

    with path.open("r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            where = f"{path.name}:{lineno}"
            lowered = line.lower()
            if not in_data:
                if lowered.startswith("@relation"):
                    continue
                if lowered.startswith("@attribute"):
                    match = _ARFF_ATTR.match(line)
                    if match is None:
                        raise DatasetFormatError(f"{where}: malformed @attribute line")
                    name = _strip_quotes(match.group(1))
                    spec = match.group(2).strip()
                    if spec.lower() in ("numeric", "real", "integer"):
                        attr_kinds.append("numeric")
                    elif spec.startswith("{") and spec.endswith("}"):
                        values = tuple(v.strip() for v in spec[1:-1].split(","))
                        if len(values) != 2:
                            raise DatasetFormatError(
                                f"{where}: class cardinality must be 2, got {len(values)}"
                            )
                        attr_kinds.append("nominal")
                        nominal_values = values  # validated as last attribute below
                    else:
                        raise DatasetFormatError(f"{where}: unsupported attribute type {spec!r}")
                    attr_names.append(name)
                    continue
                if lowered.startswith("@data"):
                    if not attr_names:
                        raise DatasetFormatError(f"{where}: @data before any @attribute")
                    if attr_kinds[-1] != "nominal":
                        raise DatasetFormatError(
                            f"{path.name}: last attribute must be the nominal class"
                        )
                    if attr_kinds[:-1].count("nominal") > 0:
                        raise DatasetFormatError(
                            f"{path.name}: non-numeric predictor attribute declared"
                        )
                    in_data = True
                    continue
                raise DatasetFormatError(f"{where}: unexpected header line {line!r}")
            tokens = [t.strip() for t in line.split(",")]
            if len(tokens) != len(attr_names):
                raise DatasetFormatError(
                    f"{where}: expected {len(attr_names)} values, got {len(tokens)}"
                )
            rows.append([_parse_number(t, where) for t in tokens[:-1]])
            raw_labels.append(_strip_quotes(tokens[-1]))

    if not in_data:
        raise DatasetFormatError(f"{path.name}: no @data section")
    if not rows:
        raise DatasetFormatError(f"{path.name}: no instances")
    assert nominal_values is not None
    negative, positive = _map_class_values(nominal_values, path.name)
    lookup = {negative.lower(): 0, positive.lower(): 1}
    labels = []
    for i, raw_label in enumerate(raw_labels):
        key = raw_label.strip().lower()
        if key == "?":
            raise DatasetFormatError(f"{path.name}: missing class value in row {i + 1}")
        if key not in lookup:
            raise DatasetFormatError(
                f"{path.name}: class value {raw_label!r} not among declared {nominal_values!r}"
            )
        labels.append(lookup[key])
    return Dataset(
        name=path.stem,
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        feature_names=tuple(attr_names[:-1]),
        class_names=(negative, positive),
    )


def load_csv(path: str | Path, label_column: str | None = None) -> Dataset:
    """Load a headered CSV; ``label_column`` selects the class column by
    name (defaults to the last column)."""
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError(f"{path.name}: empty file") from None
        header = [h.strip() for h in header]
        if label_column is None:
            label_idx = len(header) - 1
        else:
            try:
                label_idx = header.index(label_column)
            except ValueError:
                raise DatasetFormatError(
                    f"{path.name}: unknown label column {label_column!r}"
                ) from None
        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for lineno, record in enumerate(reader, start=2):
            if not record or (len(record) == 1 and not record[0].strip()):
                continue
            where = f"{path.name}:{lineno}"
            if len(record) != len(header):
                raise DatasetFormatError(
                    f"{where}: ragged row ({len(record)} cells, header has {len(header)})"
                )
            raw_labels.append(record[label_idx].strip())
            rows.append(
                [_parse_number(cell, where) for i, cell in enumerate(record) if i != label_idx]
            )

    if not rows:
        raise DatasetFormatError(f"{path.name}: no instances")
    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise DatasetFormatError(
            f"{path.name}: class cardinality must be 2, got {len(distinct)} ({distinct[:5]})"
        )
    negative, positive = _map_class_values((distinct[0], distinct[1]), path.name)
    lookup = {negative.lower(): 0, positive.lower(): 1}
    labels = [lookup[v.lower()] for v in raw_labels]
    feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
    return Dataset(
        name=path.stem,
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        feature_names=feature_names,
        class_names=(negative, positive),
    )


def _format_value(value: float) -> str:
    # shortest round-trip repr keeps load(write(d)) == d exactly
    value = float(value)
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def write_csv(dataset: Dataset, path: str | Path, label_column: str = "Defective") -> None:
    """Write a Dataset as CSV; values round-trip exactly through load_csv."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(list(dataset.feature_names) + [label_column])
        for row, label in zip(dataset.features, dataset.labels):
            writer.writerow([_format_value(v) for v in row] + [dataset.class_names[label]])


def write_arff(dataset: Dataset, path: str | Path, class_attribute: str = "Defective") -> None:
    """Write a Dataset in the supported ARFF subset."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(f"@relation {dataset.name}\n")
        for name in dataset.feature_names:
            handle.write(f"@attribute {name} numeric\n")
        handle.write(
            f"@attribute {class_attribute} {{{dataset.class_names[0]},{dataset.class_names[1]}}}\n"
        )
        handle.write("@data\n")
        for row, label in zip(dataset.features, dataset.labels):
            cells = ",".join(_format_value(v) for v in row)
            handle.write(f"{cells},{dataset.class_names[label]}\n")


def dataset_stats(dataset: Dataset) -> DatasetMeta:
    """Tally counts; the attribute count includes the class attribute."""
    defective = int((dataset.labels == 1).sum())
    return DatasetMeta(
        name=dataset.name,
        instances=dataset.n_instances,
        attributes=dataset.n_features + 1,
        defective=defective,
        non_defective=dataset.n_instances - defective,
    )


def stratified_folds(dataset: Dataset, k: int, seed: int) -> FoldPlan:
    """Deterministic stratified folds: per-class PCG64 shuffle, then a
    round-robin deal whose cursor continues across classes so overall fold
    sizes also stay within one of each other.
    """
    n = dataset.n_instances
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"k={k} exceeds instance count {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    buckets: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for cls in (0, 1):
        indices = np.flatnonzero(dataset.labels == cls)
        rng.shuffle(indices)
        for idx in indices:
            buckets[cursor % k].append(int(idx))
            cursor += 1
    folds = tuple(np.sort(np.array(b, dtype=np.int64)) for b in buckets)
    return FoldPlan(k=k, folds=folds, seed=seed, n_instances=n)


def subset(dataset: Dataset, indices: np.ndarray, name: str | None = None) -> Dataset:
    """Row-subset view used to build per-fold training/testing sets."""
    indices = np.asarray(indices, dtype=np.int64)
    return Dataset(
        name=name or dataset.name,
        features=dataset.features[indices],
        labels=dataset.labels[indices],
        feature_names=dataset.feature_names,
        class_names=dataset.class_names,
    )
