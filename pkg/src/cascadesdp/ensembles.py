"""Bootstrap ensembles: bagging, AdaBoost.M1 and random forest.

Every bootstrap draw comes from a PCG64 stream derived from
(seed, member index), so sequential and parallel member training would
produce identical models.  AdaBoost.M1 uses weighted-bootstrap resampling
because the base learners here do not consume instance weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset
from .learners import ClassifierSpec, fit, random_forest_spec
from .seeding import rng_from
from .tree import DecisionTree

__all__ = [
    "EnsembleModel",
    "bootstrap_indices",
    "weighted_error",
    "bagging_fit",
    "adaboost_m1_fit",
    "random_forest_fit",
]

_MAX_BOOTSTRAP_REDRAWS = 100
_MAX_BOOSTING_RESETS = 10
_CAPPED_WEIGHT = math.log(1e10)


@dataclass
class EnsembleModel:
    """Weighted collection of fitted members.

    ``combine`` selects prediction semantics: "average" takes the
    unweighted mean of member probability vectors (bagging, forest);
    "vote" normalises the weighted class-vote mass (boosting).
    """

    members: tuple
    weights: tuple[float, ...]
    base_spec: ClassifierSpec
    combine: str = "average"
    failed_fallback: bool = False
    weight_history: tuple = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        if len(self.weights) != len(self.members):
            raise ValueError("one weight per member required")
        if any(not math.isfinite(w) or w < 0 for w in self.weights):
            raise ValueError("weights must be finite and non-negative")
        if not any(w > 0 for w in self.weights):
            raise ValueError("weights must not all be zero")
        if self.combine not in ("average", "vote"):
            raise ValueError("combine must be 'average' or 'vote'")

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        stacked = np.stack([m.predict_proba(X) for m in self.members])
        if self.combine == "average":
            return stacked.mean(axis=0)
        mass = np.zeros((X.shape[0], 2))
        for probs, w in zip(stacked, self.weights):
            labels = (probs[:, 1] > probs[:, 0]).astype(np.int64)
            mass[np.arange(X.shape[0]), labels] += w
        return mass / mass.sum(axis=1, keepdims=True)


def bootstrap_indices(rng: np.random.Generator, n: int) -> np.ndarray:
    """One bootstrap sample: n uniform draws with replacement."""
    return rng.integers(0, n, size=n)


def _bootstrap_both_classes(rng: np.random.Generator, labels: np.ndarray) -> np.ndarray:
    n = labels.shape[0]
    for _ in range(_MAX_BOOTSTRAP_REDRAWS):
        idx = bootstrap_indices(rng, n)
        picked = labels[idx]
        if (picked == 0).any() and (picked == 1).any():
            return idx
    raise RuntimeError(
        f"bootstrap failed to hit both classes in {_MAX_BOOTSTRAP_REDRAWS} attempts"
    )


def bagging_fit(
    base: ClassifierSpec, train: Dataset, n_members: int, seed: int
) -> EnsembleModel:
    """Train each member on its own bootstrap sample; prediction is the
    unweighted mean of member distributions."""
    if n_members < 1:
        raise ValueError("n_members must be at least 1")
    members = []
    for i in range(n_members):
        rng = rng_from(seed, i)
        idx = _bootstrap_both_classes(rng, train.labels)
        sample = Dataset(
            name=train.name,
            features=train.features[idx],
            labels=train.labels[idx],
            feature_names=train.feature_names,
            class_names=train.class_names,
        )
        members.append(fit(base.reseeded(int(rng.integers(1 << 62))), sample))
    return EnsembleModel(
        members=tuple(members), weights=(1.0,) * n_members, base_spec=base, combine="average"
    )


def weighted_error(y_true: np.ndarray, y_pred: np.ndarray, weights: np.ndarray) -> float:
    """Sum of weights on misclassified instances (weights already
    normalised)."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    weights = np.asarray(weights, dtype=np.float64)
    if not (y_true.shape == y_pred.shape == weights.shape):
        raise ValueError("shapes of labels, predictions and weights must match")
    return float(weights[y_true != y_pred].sum())


def adaboost_m1_fit(
    base: ClassifierSpec, train: Dataset, n_members: int, seed: int
) -> EnsembleModel:
    """AdaBoost.M1 with weighted-bootstrap resampling.

    Per round: train on a weighted bootstrap, measure the weighted error
    on the full training set; error 0 keeps the member with a capped
    ln(1e10) weight and stops; error >= 0.5 discards the round and resets
    the weights to uniform (at most 10 resets, then stop with the members
    collected so far); otherwise the member weight is ln((1-e)/e) and
    correctly classified instances are down-weighted by e/(1-e).

    If every round was discarded, returns a single member trained on the
    full data with ``failed_fallback`` set.
    """
    if n_members < 1:
        raise ValueError("n_members must be at least 1")
    n = train.n_instances
    rng = rng_from(seed, "adaboost")
    w = np.full(n, 1.0 / n)
    members: list = []
    alphas: list[float] = []
    history: list[np.ndarray] = []
    resets = 0

    while len(members) < n_members:
        idx = None
        for _ in range(_MAX_BOOTSTRAP_REDRAWS):
            candidate = rng.choice(n, size=n, replace=True, p=w)
            picked = train.labels[candidate]
            if (picked == 0).any() and (picked == 1).any():
                idx = candidate
                break
        if idx is None:
            break  # weights concentrated on one class; stop with members so far
        sample = Dataset(
            name=train.name,
            features=train.features[idx],
            labels=train.labels[idx],
            feature_names=train.feature_names,
            class_names=train.class_names,
        )
        member = fit(base.reseeded(int(rng.integers(1 << 62))), sample)
        probs = member.predict_proba(train.features)
        predicted = (probs[:, 1] > probs[:, 0]).astype(np.int64)
        error = weighted_error(train.labels, predicted, w)

        if error == 0.0:
            members.append(member)
            alphas.append(_CAPPED_WEIGHT)
            history.append(w.copy())
            break
        if error >= 0.5:
            resets += 1
            if resets > _MAX_BOOSTING_RESETS:
                break
            w = np.full(n, 1.0 / n)
            continue
        members.append(member)
        alphas.append(math.log((1.0 - error) / error))
        correct = predicted == train.labels
        w = w.copy()
        w[correct] *= error / (1.0 - error)
        w /= w.sum()
        history.append(w.copy())

    if not members:
        fallback = fit(base.reseeded(int(rng.integers(1 << 62))), train)
        return EnsembleModel(
            members=(fallback,),
            weights=(1.0,),
            base_spec=base,
            combine="vote",
            failed_fallback=True,
        )
    return EnsembleModel(
        members=tuple(members),
        weights=tuple(alphas),
        base_spec=base,
        combine="vote",
        weight_history=tuple(history),
    )


def default_feature_subset(n_features: int) -> int:
    return int(math.floor(math.log2(n_features))) + 1


def random_forest_fit(
    train: Dataset, n_trees: int, seed: int, feature_subset: int | None = None
) -> EnsembleModel:
    """Bootstrap forest of unpruned min-leaf-1 trees; each node scores a
    random feature subset of size floor(log2(P)) + 1 unless overridden."""
    if n_trees < 1:
        raise ValueError("n_trees must be at least 1")
    subset = feature_subset if feature_subset is not None else default_feature_subset(
        train.n_features
    )
    members = []
    for i in range(n_trees):
        rng = rng_from(seed, i)
        idx = _bootstrap_both_classes(rng, train.labels)
        tree = DecisionTree(
            min_obj=1,
            prune=False,
            feature_subset=subset,
            seed=int(rng.integers(1 << 32)),
        )
        tree.fit(train.features[idx], train.labels[idx])
        members.append(tree)
    return EnsembleModel(
        members=tuple(members),
        weights=(1.0,) * n_trees,
        base_spec=random_forest_spec(trees=n_trees, feature_subset=feature_subset, seed=seed),
        combine="average",
    )
