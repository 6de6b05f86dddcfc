"""Synthetic defect-style datasets for tests, demos and shape benchmarks.

Generated tables imitate static-code metrics: non-negative, right-skewed
columns, a mix of integer-valued and rounded continuous features, half of
them carrying class signal.  ``NASA_CORPUS_SHAPES`` records the public
row/column/label counts of the cleaned NASA corpus so shape-faithful
stand-ins can be generated when the real files are not on disk.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .datasets import Dataset, write_arff
from .seeding import derive_seed

__all__ = ["make_synthetic_dataset", "write_corpus", "NASA_CORPUS_SHAPES", "DEMO_SHAPES"]

# name -> (instances, attributes incl. class, defective)
NASA_CORPUS_SHAPES: dict[str, tuple[int, int, int]] = {
    "CM1": (327, 38, 42),
    "KC1": (1126, 22, 294),
    "KC3": (194, 40, 36),
    "MC2": (124, 40, 44),
    "MW1": (250, 38, 25),
    "PC1": (679, 38, 55),
    "PC3": (1053, 38, 130),
    "PC4": (1270, 38, 176),
    "PC5": (1694, 39, 458),
}

# small trio for fast end-to-end runs
DEMO_SHAPES: dict[str, tuple[int, int, int]] = {
    "D1": (96, 9, 30),
    "D2": (120, 11, 36),
    "D3": (84, 7, 28),
}


def make_synthetic_dataset(
    name: str, n_instances: int, n_attributes: int, n_defective: int, seed: int = 0
) -> Dataset:
    """Deterministic metrics-like dataset; ``n_attributes`` counts the
    class attribute, matching corpus summary conventions."""
    if n_attributes < 2:
        raise ValueError("need at least one predictor plus the class attribute")
    if not 0 < n_defective < n_instances:
        raise ValueError("defective count must be strictly between 0 and n_instances")
    p = n_attributes - 1
    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, name)))
    labels = np.zeros(n_instances, dtype=np.int64)
    labels[:n_defective] = 1
    rng.shuffle(labels)

    features = np.empty((n_instances, p))
    for j in range(p):
        base = rng.lognormal(mean=1.0 + 0.03 * j, sigma=0.7, size=n_instances)
        if j % 2 == 0:
            strength = 0.35 + 0.4 * rng.random()
            base = base * (1.0 + strength * labels) + 0.2 * strength * labels
        if j % 3 == 0:
            features[:, j] = np.floor(base)  # count-style metric
        else:
            features[:, j] = np.round(base, 2)
    return Dataset(
        name=name,
        features=features,
        labels=labels,
        feature_names=tuple(f"m{j + 1:02d}" for j in range(p)),
        class_names=("N", "Y"),
    )


def write_corpus(
    directory: str | Path, shapes: dict[str, tuple[int, int, int]], seed: int = 0
) -> list[Path]:
    """Write one ARFF file per shape entry; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, (n, attrs, defective) in shapes.items():
        dataset = make_synthetic_dataset(name, n, attrs, defective, seed=seed)
        path = directory / f"{name}.arff"
        write_arff(dataset, path)
        paths.append(path)
    return paths
