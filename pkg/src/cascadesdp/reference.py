"""Published results of external defect-prediction models on the cleaned
NASA corpus, kept as immutable constants for side-by-side report rows.

These numbers were reported by other studies (homogeneous and
heterogeneous ensembles, instance learners, dagging meta-learners, tree
variants); they are never mixed into computed tables and every emitted
cell derived from them carries the ``paper-reference`` source tag.
``None`` marks dataset cells the original study did not report.
"""

from __future__ import annotations

NASA_DATASET_NAMES = ("CM1", "KC1", "KC3", "MC2", "MW1", "PC1", "PC3", "PC4", "PC5")

# accuracy (percent)
REFERENCE_ACCURACY: dict[str, dict[str, float | None]] = {
    "BaggedLR": dict(
        zip(NASA_DATASET_NAMES, (74.00, None, 76.00, 65.00, None, 81.00, 75.00, 83.00, 68.00))
    ),
    "AdaboostSVM": dict(
        zip(NASA_DATASET_NAMES, (75.00, None, 77.00, 65.00, None, 79.00, 74.00, 81.00, 68.00))
    ),
    "kStar": dict(
        zip(NASA_DATASET_NAMES, (77.55, 72.20, 75.86, 59.46, 82.67, 86.27, 82.59, 81.89, 69.88))
    ),
    "CS-Forest": dict(
        zip(NASA_DATASET_NAMES, (82.53, None, 81.44, None, 88.33, 91.16, 84.77, 88.88, None))
    ),
    "Rotation Tree": dict(
        zip(NASA_DATASET_NAMES, (83.33, None, 70.61, None, 86.60, 91.07, 85.54, 86.69, None))
    ),
    "Dagging_NB": dict(
        zip(NASA_DATASET_NAMES, (70.80, 66.90, 70.20, 68.40, 75.30, 78.60, 78.50, 81.60, 69.90))
    ),
    "Dagging_DT": dict(
        zip(NASA_DATASET_NAMES, (59.60, 68.10, 64.50, 70.80, 77.10, 76.70, 78.20, 89.70, 76.50))
    ),
    "Dagging_kNN": dict(
        zip(NASA_DATASET_NAMES, (61.10, 67.90, 62.30, 70.60, 72.20, 78.50, 75.30, 84.40, 76.40))
    ),
}

REFERENCE_AUC: dict[str, dict[str, float | None]] = {
    "BaggedLR": dict(
        zip(NASA_DATASET_NAMES, (0.650, None, 0.660, 0.610, None, 0.770, 0.740, 0.870, 0.680))
    ),
    "AdaboostSVM": dict(
        zip(NASA_DATASET_NAMES, (0.680, None, 0.660, 0.590, None, 0.760, 0.730, 0.820, 0.680))
    ),
    "Stacking (NB, MLP, J48)": dict(
        zip(NASA_DATASET_NAMES, (None, None, None, None, None, 0.749, None, None, None))
    ),
    "Stacking (NB, MLP, J48)+SMOTE": dict(
        zip(NASA_DATASET_NAMES, (None, None, None, None, None, 0.871, None, None, None))
    ),
    "J48": dict(
        zip(NASA_DATASET_NAMES, (0.594, 0.689, None, None, None, 0.668, None, None, None))
    ),
    "kStar": dict(
        zip(NASA_DATASET_NAMES, (0.538, 0.651, 0.528, 0.510, 0.543, 0.673, 0.749, 0.734, 0.629))
    ),
    "Dagging_NB": dict(
        zip(NASA_DATASET_NAMES, (0.708, 0.669, 0.702, 0.684, 0.753, 0.786, 0.785, 0.816, 0.699))
    ),
    "Dagging_DT": dict(
        zip(NASA_DATASET_NAMES, (0.596, 0.681, 0.645, 0.708, 0.771, 0.767, 0.782, 0.897, 0.765))
    ),
    "Dagging_kNN": dict(
        zip(NASA_DATASET_NAMES, (0.611, 0.679, 0.623, 0.706, 0.722, 0.785, 0.753, 0.844, 0.764))
    ),
}

REFERENCE_TABLES = {"accuracy": REFERENCE_ACCURACY, "auc": REFERENCE_AUC}


def reference_value(metric: str, model: str, dataset: str) -> float | None:
    """Look up one published cell; None when the study did not report it."""
    return REFERENCE_TABLES[metric][model].get(dataset)
