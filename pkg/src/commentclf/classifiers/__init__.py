from .base import (
    LINEAR_SVM,
    LOGREG,
    RANDOM_FOREST,
    TrainedModel,
    decision_scores,
    model_from_dict,
    predict_labels,
)
from .forest import ForestHyper, ForestModel, train_random_forest
from .linear import (
    LinearModel,
    LogRegHyper,
    SvmHyper,
    logistic_gradient,
    logistic_objective,
    svm_primal_objective,
    train_linear_svm,
    train_logreg,
)

__all__ = [
    "LINEAR_SVM",
    "LOGREG",
    "RANDOM_FOREST",
    "TrainedModel",
    "LinearModel",
    "ForestModel",
    "LogRegHyper",
    "SvmHyper",
    "ForestHyper",
    "train_logreg",
    "train_linear_svm",
    "train_random_forest",
    "predict_labels",
    "decision_scores",
    "model_from_dict",
    "logistic_objective",
    "logistic_gradient",
    "svm_primal_objective",
]
