"""From-scratch cascade-generalization classifiers and a reproducible
benchmark harness for software defect prediction."""

__version__ = "0.1.0"

from .cascade import CGConfig, CGModel, cg_fit, cg_predict_proba, extend_dataset, fit_any
from .datasets import (
    Dataset,
    DatasetFormatError,
    DatasetMeta,
    FoldPlan,
    dataset_stats,
    load_arff,
    load_csv,
    stratified_folds,
    write_arff,
    write_csv,
)
from .ensembles import EnsembleModel, adaboost_m1_fit, bagging_fit, random_forest_fit
from .evaluation import (
    ConfusionMatrix,
    EvaluationReport,
    MetricSet,
    accuracy,
    auc,
    confusion_matrix,
    cross_validate,
    f_measure,
    mcc,
)
from .experiment import (
    ExperimentConfig,
    ResultTable,
    compute_boxplot_summary,
    emit_reports,
    run_experiment,
    run_scenario1,
    run_scenario2,
)
from .learners import (
    ClassifierSpec,
    Kind,
    bagging_spec,
    boosting_spec,
    dt_spec,
    fit,
    knn_spec,
    nb_spec,
    predict,
    predict_proba,
    random_forest_spec,
)

__all__ = [
    "__version__",
    "CGConfig",
    "CGModel",
    "ClassifierSpec",
    "ConfusionMatrix",
    "Dataset",
    "DatasetFormatError",
    "DatasetMeta",
    "EnsembleModel",
    "EvaluationReport",
    "ExperimentConfig",
    "FoldPlan",
    "Kind",
    "MetricSet",
    "ResultTable",
    "accuracy",
    "adaboost_m1_fit",
    "auc",
    "bagging_fit",
    "bagging_spec",
    "boosting_spec",
    "cg_fit",
    "cg_predict_proba",
    "compute_boxplot_summary",
    "confusion_matrix",
    "cross_validate",
    "dataset_stats",
    "dt_spec",
    "emit_reports",
    "extend_dataset",
    "f_measure",
    "fit",
    "fit_any",
    "knn_spec",
    "load_arff",
    "load_csv",
    "mcc",
    "nb_spec",
    "predict",
    "predict_proba",
    "random_forest_fit",
    "random_forest_spec",
    "run_experiment",
    "run_scenario1",
    "run_scenario2",
    "stratified_folds",
    "write_arff",
    "write_csv",
]
