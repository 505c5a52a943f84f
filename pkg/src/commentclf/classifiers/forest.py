"""Random forest with entropy-based information-gain splits.

Every tree is grown on a seeded bootstrap sample; at each node a random
subset of ceil(sqrt(d)) features is examined and the (feature, threshold)
pair with the largest entropy reduction wins, thresholds being midpoints
between consecutive distinct sorted values. Trees use rng(seed + tree
index), so parallel and serial training would produce identical forests.

Vote ties go to NotUseful: a comment is not flagged useful on a coin flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .._sparse import as_csr
from ..corpus import Label
from ..errors import DimensionMismatch, SingleClassCorpus
from .base import RANDOM_FOREST, TrainedModel

SPLIT_MEASURE = "information_gain"
MAX_FEATURES = "sqrt"
BOOTSTRAP = True


@dataclass(frozen=True)
class ForestHyper:
    n_trees: int = 50
    min_samples_split: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")


def _entropy_bits(ones: np.ndarray, total: np.ndarray) -> np.ndarray:
    """Binary entropy of label distributions, elementwise, 0*log(0) = 0."""
    p1 = ones / total
    p0 = 1.0 - p1
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(
            np.where(p1 > 0.0, p1 * np.log2(p1), 0.0)
            + np.where(p0 > 0.0, p0 * np.log2(p0), 0.0)
        )
    return h


def _leaf(labels01: np.ndarray) -> dict:
    ones = int(labels01.sum())
    zeros = labels01.size - ones
    value = Label.USEFUL.value if ones > zeros else Label.NOT_USEFUL.value
    return {"leaf": value}


def _best_split(X: np.ndarray, labels01: np.ndarray, idx: np.ndarray, features: np.ndarray):
    """Best (gain, feature, threshold) over the candidate features, or None."""
    sub_labels = labels01[idx]
    n = idx.size
    ones = float(sub_labels.sum())
    parent_h = float(_entropy_bits(np.array([ones]), np.array([float(n)]))[0])
    best = None
    for feat in features:
        values = X[idx, feat]
        order = np.argsort(values, kind="stable")
        v_sorted = values[order]
        y_sorted = sub_labels[order]
        cut = np.flatnonzero(v_sorted[1:] > v_sorted[:-1])
        if cut.size == 0:
            continue
        n_left = (cut + 1).astype(np.float64)
        ones_left = np.cumsum(y_sorted)[cut].astype(np.float64)
        n_right = n - n_left
        ones_right = ones - ones_left
        h_left = _entropy_bits(ones_left, n_left)
        h_right = _entropy_bits(ones_right, n_right)
        gain = parent_h - (n_left * h_left + n_right * h_right) / n
        pos = int(np.argmax(gain))
        if best is None or gain[pos] > best[0]:
            threshold = 0.5 * (v_sorted[cut[pos]] + v_sorted[cut[pos] + 1])
            best = (float(gain[pos]), int(feat), float(threshold))
    return best


def _grow(X, labels01, idx, rng, m_features, min_samples_split) -> dict:
    sub = labels01[idx]
    ones = int(sub.sum())
    if ones == 0 or ones == idx.size or idx.size < min_samples_split:
        return _leaf(sub)
    features = rng.choice(X.shape[1], size=m_features, replace=False)
    best = _best_split(X, labels01, idx, features)
    if best is None or best[0] <= 0.0:
        return _leaf(sub)
    _, feat, threshold = best
    go_left = X[idx, feat] <= threshold
    return {
        "feature": feat,
        "threshold": threshold,
        "left": _grow(X, labels01, idx[go_left], rng, m_features, min_samples_split),
        "right": _grow(X, labels01, idx[~go_left], rng, m_features, min_samples_split),
    }


def _tree_predict(node: dict, X: np.ndarray, rows: np.ndarray, out: np.ndarray) -> None:
    if rows.size == 0:
        return
    if "leaf" in node:
        out[rows] = 1 if node["leaf"] == Label.USEFUL.value else 0
        return
    go_left = X[rows, node["feature"]] <= node["threshold"]
    _tree_predict(node["left"], X, rows[go_left], out)
    _tree_predict(node["right"], X, rows[~go_left], out)


class ForestModel(TrainedModel):
    def __init__(self, trees: list[dict], feature_count: int, hyper: dict, meta: dict):
        self.kind = RANDOM_FOREST
        self.trees = list(trees)
        self.feature_count = int(feature_count)
        self.hyper = dict(hyper)
        self.meta = dict(meta)

    def _decision_scores(self, X: sp.csr_array) -> np.ndarray:
        dense = X.toarray()
        votes = np.zeros(dense.shape[0], dtype=np.int64)
        rows = np.arange(dense.shape[0])
        scratch = np.zeros(dense.shape[0], dtype=np.int64)
        for tree in self.trees:
            scratch[:] = 0
            _tree_predict(tree, dense, rows, scratch)
            votes += scratch
        return votes / float(len(self.trees))

    def _threshold(self) -> float:
        return 0.5

    def to_dict(self) -> dict:
        return {
            "format": "commentclf-model",
            "version": 1,
            "kind": self.kind,
            "feature_count": self.feature_count,
            "positive_class": self.positive_class.value,
            "trees": self.trees,
            "hyper": self.hyper,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ForestModel":
        return cls(
            trees=payload["trees"],
            feature_count=payload["feature_count"],
            hyper=payload.get("hyper", {}),
            meta=payload.get("meta", {}),
        )


def train_random_forest(X, y, hyper: ForestHyper | None = None) -> ForestModel:
    """Grow a seeded bootstrap ensemble of information-gain trees."""
    h = hyper if hyper is not None else ForestHyper()
    Xc = as_csr(X)
    n, d = Xc.shape
    if len(y) != n:
        raise DimensionMismatch(f"label count {len(y)} does not match matrix rows {n}")
    if d < 1:
        raise DimensionMismatch("feature count must be >= 1")
    labels01 = np.fromiter((1 if lab is Label.USEFUL else 0 for lab in y), dtype=np.int64)
    if labels01.all() or not labels01.any():
        raise SingleClassCorpus("training requires both classes")

    dense = Xc.toarray()
    m_features = min(d, math.ceil(math.sqrt(d)))
    trees: list[dict] = []
    for t in range(h.n_trees):
        rng = np.random.default_rng(h.seed + t)
        bootstrap_idx = rng.integers(0, n, size=n)
        trees.append(_grow(dense, labels01, bootstrap_idx, rng, m_features, h.min_samples_split))

    hyper_dict = {
        "n_trees": h.n_trees,
        "split_measure": SPLIT_MEASURE,
        "max_features": MAX_FEATURES,
        "min_samples_split": h.min_samples_split,
        "bootstrap": BOOTSTRAP,
        "seed": h.seed,
    }
    meta = {"n_features_per_split": m_features}
    return ForestModel(trees=trees, feature_count=d, hyper=hyper_dict, meta=meta)
