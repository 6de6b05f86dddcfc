"""Base classifiers behind one train / predict-probability contract.

All fitted models expose ``predict_proba(X) -> (n, 2)`` with rows that are
valid two-class distributions, and are immutable after fitting.  ``fit``
dispatches on a :class:`ClassifierSpec`, including the ensemble and cascade
kinds defined in sibling modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

from .datasets import Dataset
from .tree import DecisionTree

__all__ = [
    "Kind",
    "ClassifierSpec",
    "nb_spec",
    "dt_spec",
    "knn_spec",
    "bagging_spec",
    "boosting_spec",
    "random_forest_spec",
    "model_label",
    "fit",
    "predict_proba",
    "predict",
    "KernelNaiveBayes",
    "KNearestNeighbors",
]


class Kind(str, Enum):
    NB = "nb"
    DT = "dt"
    KNN = "knn"
    BAGGING = "bagging"
    BOOSTING = "boosting"
    RANDOM_FOREST = "random_forest"


_DEFAULTS: dict[Kind, dict[str, Any]] = {
    Kind.NB: {},
    Kind.DT: {"confidence": 0.25, "min_obj": 2, "prune": True},
    Kind.KNN: {"k": 1},
    Kind.BAGGING: {"base": None, "members": 10},
    Kind.BOOSTING: {"base": None, "members": 10},
    Kind.RANDOM_FOREST: {"trees": 100, "feature_subset": None},
}


@dataclass(frozen=True)
class ClassifierSpec:
    """Classifier kind plus kind-specific parameters; ``seed`` only matters
    for the stochastic kinds (bagging, boosting, random forest)."""

    kind: Kind
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        merged = dict(_DEFAULTS[self.kind])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ValueError(f"unknown parameters for {self.kind.value}: {sorted(unknown)}")
        merged.update(self.params)
        _validate_params(self.kind, merged)
        object.__setattr__(self, "params", MappingProxyType(merged))

    def reseeded(self, seed: int) -> "ClassifierSpec":
        return replace(self, params=dict(self.params), seed=seed)


def _validate_params(kind: Kind, params: dict[str, Any]) -> None:
    if kind is Kind.DT:
        if not 0.0 < params["confidence"] <= 0.5:
            raise ValueError("DT confidence must lie in (0, 0.5]")
        if params["min_obj"] < 1:
            raise ValueError("DT min_obj must be at least 1")
    elif kind is Kind.KNN:
        if params["k"] < 1:
            raise ValueError("KNN k must be at least 1")
    elif kind in (Kind.BAGGING, Kind.BOOSTING):
        if not isinstance(params["base"], ClassifierSpec):
            raise ValueError(f"{kind.value} requires a base ClassifierSpec")
        if params["base"].kind in (Kind.BAGGING, Kind.BOOSTING):
            raise ValueError("nested resampling ensembles are not supported")
        if params["members"] < 1:
            raise ValueError("ensembles need at least one member")
    elif kind is Kind.RANDOM_FOREST:
        if params["trees"] < 1:
            raise ValueError("random forest needs at least one tree")
        subset = params["feature_subset"]
        if subset is not None and subset < 1:
            raise ValueError("feature_subset must be at least 1")


def nb_spec() -> ClassifierSpec:
    return ClassifierSpec(Kind.NB)


def dt_spec(confidence: float = 0.25, min_obj: int = 2, prune: bool = True) -> ClassifierSpec:
    return ClassifierSpec(Kind.DT, {"confidence": confidence, "min_obj": min_obj, "prune": prune})


def knn_spec(k: int = 1) -> ClassifierSpec:
    return ClassifierSpec(Kind.KNN, {"k": k})


def bagging_spec(base: ClassifierSpec, members: int = 10, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec(Kind.BAGGING, {"base": base, "members": members}, seed=seed)


def boosting_spec(base: ClassifierSpec, members: int = 10, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec(Kind.BOOSTING, {"base": base, "members": members}, seed=seed)


def random_forest_spec(
    trees: int = 100, feature_subset: int | None = None, seed: int = 0
) -> ClassifierSpec:
    return ClassifierSpec(
        Kind.RANDOM_FOREST, {"trees": trees, "feature_subset": feature_subset}, seed=seed
    )


_BASE_LABELS = {Kind.NB: "NB", Kind.DT: "DT", Kind.KNN: "KNN", Kind.RANDOM_FOREST: "RF"}


def model_label(spec: ClassifierSpec) -> str:
    if spec.kind is Kind.BAGGING:
        return f"Bg-{model_label(spec.params['base'])}"
    if spec.kind is Kind.BOOSTING:
        return f"Bo-{model_label(spec.params['base'])}"
    return _BASE_LABELS[spec.kind]


# ---------------------------------------------------------------------------
# kernel-density naive Bayes

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_BANDWIDTH_FLOOR = 1e-6
_CHUNK = 512


class KernelNaiveBayes:
    """Naive Bayes with per-class, per-feature Gaussian kernel densities.

    The class-conditional density at v is the mean of Gaussian(v; u, h)
    over the class's training values u, with the Silverman bandwidth
    h = max(1.06 * sigma * n^(-1/5), 1e-6) (sigma = population std of the
    class's values, so constant features degenerate to a 1e-6-wide spike).
    Priors are Laplace-smoothed; accumulation is in log space with a
    stable log-sum-exp, so far-away queries never produce NaN.
    """

    def __init__(self) -> None:
        self.n_features_: int | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "KernelNaiveBayes":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = X.shape[0]
        self.n_features_ = X.shape[1]
        self._log_prior = np.empty(2)
        # _values[c][j] / _counts[c][j]: distinct training values and their
        # multiplicities; _log_norm[c][j] = log(n_c * h * sqrt(2*pi))
        self._values: list[list[np.ndarray]] = [[], []]
        self._counts: list[list[np.ndarray]] = [[], []]
        self._bandwidth = np.empty((2, self.n_features_))
        self._log_norm = np.empty((2, self.n_features_))
        for c in (0, 1):
            rows = X[y == c]
            n_c = rows.shape[0]
            self._log_prior[c] = math.log((n_c + 1) / (n + 2))
            for j in range(self.n_features_):
                col = rows[:, j]
                sigma = float(col.std())
                h = max(1.06 * sigma * n_c ** (-0.2), _BANDWIDTH_FLOOR)
                values, counts = np.unique(col, return_counts=True)
                self._values[c].append(values)
                self._counts[c].append(counts.astype(np.float64))
                self._bandwidth[c, j] = h
                self._log_norm[c, j] = math.log(n_c) + math.log(h) + _LOG_SQRT_2PI
        return self

    def _log_density(self, c: int, j: int, queries: np.ndarray) -> np.ndarray:
        z = (queries[:, None] - self._values[c][j][None, :]) / self._bandwidth[c, j]
        # clip so that extreme queries floor out instead of overflowing to -inf
        exponents = np.maximum(-0.5 * z * z, -1e300)
        peak = exponents.max(axis=1)
        summed = (self._counts[c][j][None, :] * np.exp(exponents - peak[:, None])).sum(axis=1)
        return peak + np.log(summed) - self._log_norm[c, j]

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        out = np.empty((X.shape[0], 2))
        for start in range(0, X.shape[0], _CHUNK):
            block = X[start : start + _CHUNK]
            log_joint = np.tile(self._log_prior, (block.shape[0], 1))
            for c in (0, 1):
                for j in range(self.n_features_):
                    log_joint[:, c] += self._log_density(c, j, block[:, j])
            top = log_joint.max(axis=1, keepdims=True)
            probs = np.exp(log_joint - top)
            probs /= probs.sum(axis=1, keepdims=True)
            out[start : start + _CHUNK] = probs
        return out


# ---------------------------------------------------------------------------
# k-nearest neighbours

class KNearestNeighbors:
    """Unweighted k-NN over min-max range-normalised Euclidean distance.

    Ranges come from the training data; zero-range features are scaled by
    0 and therefore contribute nothing.  Probabilities are vote shares
    among the k nearest; distance ties resolve to the lower training index.
    """

    def __init__(self, k: int = 1) -> None:
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k = k
        self.n_features_: int | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "KNearestNeighbors":
        X = np.asarray(X, dtype=np.float64)
        self.n_features_ = X.shape[1]
        mins = X.min(axis=0)
        ranges = X.max(axis=0) - mins
        scale = np.zeros_like(ranges)
        np.divide(1.0, ranges, out=scale, where=ranges > 0)
        self._mins = mins
        self._scale = scale
        self._train = (X - mins) * scale
        self._labels = np.asarray(y, dtype=np.int64)
        self._k_eff = min(self.k, X.shape[0])
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        queries = (X - self._mins) * self._scale
        out = np.empty((X.shape[0], 2))
        k = self._k_eff
        for start in range(0, queries.shape[0], _CHUNK):
            block = queries[start : start + _CHUNK]
            diff = block[:, None, :] - self._train[None, :, :]
            dist2 = np.einsum("qtp,qtp->qt", diff, diff)
            if k == 1:
                nearest = dist2.argmin(axis=1)  # first minimum = lowest index
                votes = (self._labels[nearest] == 1).astype(np.float64)
            else:
                neighbors = np.argsort(dist2, axis=1, kind="stable")[:, :k]
                votes = (self._labels[neighbors] == 1).mean(axis=1)
            out[start : start + _CHUNK, 0] = 1.0 - votes
            out[start : start + _CHUNK, 1] = votes
        return out


# ---------------------------------------------------------------------------
# dispatch

def fit(spec: ClassifierSpec, train: Dataset):
    """Train a model of the given kind; deterministic for
    (spec, train, spec.seed)."""
    if spec.kind is Kind.NB:
        model = KernelNaiveBayes().fit(train.features, train.labels)
    elif spec.kind is Kind.DT:
        model = DecisionTree(
            confidence=spec.params["confidence"],
            min_obj=spec.params["min_obj"],
            prune=spec.params["prune"],
        ).fit(train.features, train.labels)
    elif spec.kind is Kind.KNN:
        model = KNearestNeighbors(k=spec.params["k"]).fit(train.features, train.labels)
    elif spec.kind is Kind.BAGGING:
        from .ensembles import bagging_fit

        model = bagging_fit(spec.params["base"], train, spec.params["members"], spec.seed)
    elif spec.kind is Kind.BOOSTING:
        from .ensembles import adaboost_m1_fit

        model = adaboost_m1_fit(spec.params["base"], train, spec.params["members"], spec.seed)
    elif spec.kind is Kind.RANDOM_FOREST:
        from .ensembles import random_forest_fit

        model = random_forest_fit(
            train, spec.params["trees"], spec.seed, feature_subset=spec.params["feature_subset"]
        )
    else:  # pragma: no cover
        raise ValueError(f"unsupported kind {spec.kind}")
    model.spec = spec
    model.n_classes = 2
    return model


def predict_proba(model, instance: np.ndarray) -> np.ndarray:
    """Probability distribution over (non-defective, defective) for one
    instance."""
    instance = np.asarray(instance, dtype=np.float64)
    if instance.ndim != 1:
        raise ValueError("instance must be a 1-D feature vector")
    if not np.isfinite(instance).all():
        raise ValueError("instance contains non-finite values")
    return model.predict_proba(instance[None, :])[0]


def predict(model, instance: np.ndarray) -> int:
    """Argmax class of predict_proba; ties break to the lower class index."""
    probs = predict_proba(model, instance)
    return int(probs[1] > probs[0])


def predict_labels(model, X: np.ndarray) -> np.ndarray:
    """Vectorised predict with the same lower-index tie-break."""
    probs = model.predict_proba(X)
    return (probs[:, 1] > probs[:, 0]).astype(np.int64)
