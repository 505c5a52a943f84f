"""Shared model interface: prediction, decision scores, serialization."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .._sparse import as_csr
from ..corpus import Label
from ..errors import DimensionMismatch

LOGREG = "logreg"
LINEAR_SVM = "svm"
RANDOM_FOREST = "rf"


class TrainedModel:
    """Immutable trained classifier.

    Subclasses set ``kind`` and ``feature_count`` and implement
    ``_decision_scores`` over a validated csr matrix. The positive class is
    always ``Label.USEFUL``.
    """

    kind: str
    feature_count: int
    positive_class = Label.USEFUL

    def _check(self, X) -> sp.csr_array:
        m = as_csr(X)
        if m.shape[1] != self.feature_count:
            raise DimensionMismatch(
                f"matrix has {m.shape[1]} columns, model expects {self.feature_count}"
            )
        return m

    def _decision_scores(self, X: sp.csr_array) -> np.ndarray:
        raise NotImplementedError

    def _threshold(self) -> float:
        raise NotImplementedError

    def decision_scores(self, X) -> np.ndarray:
        return self._decision_scores(self._check(X))

    def predict(self, X) -> list[Label]:
        scores = self.decision_scores(X)
        thr = self._threshold()
        return [Label.USEFUL if s > thr else Label.NOT_USEFUL for s in scores]

    def to_dict(self) -> dict:
        raise NotImplementedError


def predict_labels(model: TrainedModel, X) -> list[Label]:
    """One label per row; scores strictly above the model threshold are Useful."""
    return model.predict(X)


def decision_scores(model: TrainedModel, X) -> np.ndarray:
    """Linear models return ``w.x + b``; forests the Useful-vote fraction."""
    return model.decision_scores(X)


def model_from_dict(payload: dict) -> TrainedModel:
    from .forest import ForestModel
    from .linear import LinearModel

    kind = payload.get("kind")
    if kind in (LOGREG, LINEAR_SVM):
        return LinearModel.from_dict(payload)
    if kind == RANDOM_FOREST:
        return ForestModel.from_dict(payload)
    raise ValueError(f"unknown model kind {kind!r}")
