"""Cascade generalization: extend a dataset with base-model class
probabilities, then train a meta learner on the extended data.

Extension is in-sample: each base model predicts the same data it was
trained on, and prediction replays the identical chain on new instances.
This mirrors the original cascade formulation, which has no internal
cross-validation; the optimistic bias of in-sample base probabilities is
inherited by design.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset
from .learners import ClassifierSpec, Kind, fit, model_label, random_forest_spec
from .seeding import derive_seed

__all__ = [
    "ExtendedDataset",
    "CGConfig",
    "CGModel",
    "extend_dataset",
    "cg_fit",
    "cg_predict_proba",
    "cg_label",
    "fit_any",
]


@dataclass(frozen=True)
class ExtendedDataset(Dataset):
    """Dataset whose trailing columns are appended probability pairs.

    ``n_original`` counts the original predictor columns still present
    (0 once they have been dropped); ``provenance`` names the base models
    that contributed probability pairs, in order.
    """

    n_original: int = 0
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        super().__post_init__()
        expected = self.n_original + 2 * len(self.provenance)
        if expected != self.n_features:
            raise ValueError(
                f"width {self.n_features} does not match {self.n_original} original "
                f"+ 2 x {len(self.provenance)} probability columns"
            )


def extend_dataset(
    model,
    data: Dataset,
    keep_original: bool = True,
    *,
    replace_probability_columns: bool = False,
    tag: str | None = None,
) -> ExtendedDataset:
    """Append the model's class-probability pair to every row.

    ``keep_original=False`` drops the original predictor columns (but
    never previously appended probability pairs).  With
    ``replace_probability_columns`` earlier pairs are dropped too, so only
    the newest pair is carried forward.
    """
    probs = model.predict_proba(data.features)
    if isinstance(data, ExtendedDataset):
        n_original = data.n_original
        provenance = data.provenance
    else:
        n_original = data.n_features
        provenance = ()

    level = len(provenance) + 1
    if tag is None:
        spec = getattr(model, "spec", None)
        tag = f"level{level}_{model_label(spec).lower() if spec else 'base'}"

    keep_cols: list[int] = []
    kept_names: list[str] = []
    kept_provenance: list[str] = []
    if keep_original:
        keep_cols.extend(range(n_original))
        kept_names.extend(data.feature_names[:n_original])
        new_n_original = n_original
    else:
        new_n_original = 0
    if not replace_probability_columns:
        keep_cols.extend(range(n_original, data.n_features))
        kept_names.extend(data.feature_names[n_original:])
        kept_provenance.extend(provenance)

    features = np.hstack([data.features[:, keep_cols], probs])
    names = tuple(kept_names) + (f"p0_{tag}", f"p1_{tag}")
    return ExtendedDataset(
        name=data.name,
        features=features,
        labels=data.labels,
        feature_names=names,
        class_names=data.class_names,
        n_original=new_n_original,
        provenance=tuple(kept_provenance) + (tag,),
    )


@dataclass(frozen=True)
class CGConfig:
    """Ordered base classifiers plus the meta learner configuration."""

    base_specs: tuple[ClassifierSpec, ...]
    meta_trees: int = 100
    meta_spec: ClassifierSpec | None = None  # overrides the default forest
    keep_original: bool = True
    concatenate_predictions: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.base_specs, ClassifierSpec):
            object.__setattr__(self, "base_specs", (self.base_specs,))
        else:
            object.__setattr__(self, "base_specs", tuple(self.base_specs))
        if not self.base_specs:
            raise ValueError("at least one base classifier is required")
        if self.meta_trees < 1:
            raise ValueError("meta_trees must be at least 1")

    def resolved_meta(self) -> ClassifierSpec:
        if self.meta_spec is not None:
            return self.meta_spec
        return random_forest_spec(trees=self.meta_trees)

    def reseeded(self, seed: int) -> "CGConfig":
        return CGConfig(
            base_specs=self.base_specs,
            meta_trees=self.meta_trees,
            meta_spec=self.meta_spec,
            keep_original=self.keep_original,
            concatenate_predictions=self.concatenate_predictions,
            seed=seed,
        )


@dataclass
class CGModel:
    """Fitted cascade: base models in training order plus the meta model."""

    base_models: tuple
    meta_model: object
    config: CGConfig
    meta_width: int

    def __post_init__(self) -> None:
        if len(self.base_models) != len(self.config.base_specs):
            raise ValueError("one fitted base model per configured base spec")

    def _extend_matrix(self, X: np.ndarray) -> np.ndarray:
        """Replay the training-time extension chain on raw feature rows."""
        n_original = X.shape[1]
        current = X
        for base in self.base_models:
            probs = base.predict_proba(current)
            keep_cols: list[int] = []
            if self.config.keep_original:
                keep_cols.extend(range(n_original))
            if self.config.concatenate_predictions:
                keep_cols.extend(range(n_original, current.shape[1]))
            current = np.hstack([current[:, keep_cols], probs])
            if not self.config.keep_original:
                n_original = 0
        return current

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        extended = self._extend_matrix(X)
        return self.meta_model.predict_proba(extended)


def cg_fit(config: CGConfig, train: Dataset) -> CGModel:
    """Sequentially fit each base on the current (possibly extended) data,
    extend with its in-sample probabilities, then fit the meta learner on
    the fully extended dataset."""
    current: Dataset = train
    base_models = []
    for i, base_spec in enumerate(config.base_specs):
        model = fit(base_spec.reseeded(derive_seed(config.seed, "base", i)), current)
        base_models.append(model)
        current = extend_dataset(
            model,
            current,
            keep_original=config.keep_original,
            replace_probability_columns=not config.concatenate_predictions,
        )
    meta_spec = config.resolved_meta()
    meta = fit(meta_spec.reseeded(derive_seed(config.seed, "meta")), current)
    return CGModel(
        base_models=tuple(base_models),
        meta_model=meta,
        config=config,
        meta_width=current.n_features,
    )


def cg_predict_proba(model: CGModel, instance: np.ndarray) -> np.ndarray:
    """Distribution for a single raw-width instance."""
    instance = np.asarray(instance, dtype=np.float64)
    if instance.ndim != 1:
        raise ValueError("instance must be a 1-D feature vector")
    return model.predict_proba(instance[None, :])[0]


def cg_label(config: CGConfig) -> str:
    bases = "+".join(model_label(spec) for spec in config.base_specs)
    return f"CG-{bases}"


def fit_any(spec, train: Dataset, seed: int):
    """Fit a ClassifierSpec or CGConfig with the given seed."""
    if isinstance(spec, CGConfig):
        return cg_fit(spec.reseeded(seed), train)
    if isinstance(spec, ClassifierSpec):
        return fit(spec.reseeded(seed), train)
    raise TypeError(f"cannot fit {type(spec).__name__}")
