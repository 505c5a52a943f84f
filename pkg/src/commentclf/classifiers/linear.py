"""Linear classifiers: L2-regularized logistic regression and a linear SVM.

Class encoding is Useful -> +1, NotUseful -> -1. The bias term is never
regularized.

Logistic regression minimizes

    0.5 * l2_strength * ||w||^2 + sum_j log(1 + exp(-y_j * (w.x_j + b)))

by full-batch gradient descent with Armijo backtracking, stopping on the
gradient norm. The SVM minimizes the primal hinge objective

    0.5 * ||w||^2 + C * sum_j max(0, 1 - y_j * (w.x_j + b))

through its dual with a deterministic maximal-violating-pair SMO sweep,
which reaches much tighter optima than subgradient steps can; the primal
objective at the solution is recorded in the training metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .._sparse import as_csr
from ..corpus import Label
from ..errors import DimensionMismatch, SingleClassCorpus
from .base import LINEAR_SVM, LOGREG, TrainedModel


@dataclass(frozen=True)
class LogRegHyper:
    l2_strength: float = 1.0
    max_iters: int = 1000
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.l2_strength <= 0:
            raise ValueError("l2_strength must be > 0")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")


@dataclass(frozen=True)
class SvmHyper:
    cost_c: float = 1.0
    kernel: str = "linear"
    max_iters: int = 200_000
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.cost_c <= 0:
            raise ValueError("cost_c must be > 0")
        if self.kernel != "linear":
            raise ValueError("only the linear kernel is supported")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")


class LinearModel(TrainedModel):
    def __init__(self, kind: str, weights: np.ndarray, bias: float, hyper: dict, meta: dict):
        self.kind = kind
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.feature_count = int(self.weights.shape[0])
        self.hyper = dict(hyper)
        self.meta = dict(meta)

    def _decision_scores(self, X: sp.csr_array) -> np.ndarray:
        return X @ self.weights + self.bias

    def _threshold(self) -> float:
        return 0.0

    def to_dict(self) -> dict:
        return {
            "format": "commentclf-model",
            "version": 1,
            "kind": self.kind,
            "feature_count": self.feature_count,
            "positive_class": self.positive_class.value,
            "weights": [float(v) for v in self.weights],
            "bias": self.bias,
            "hyper": self.hyper,
            "meta": {k: v for k, v in self.meta.items() if k != "loss_history"},
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LinearModel":
        return cls(
            kind=payload["kind"],
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=float(payload["bias"]),
            hyper=payload.get("hyper", {}),
            meta=payload.get("meta", {}),
        )


def _encode(labels, n_rows: int) -> np.ndarray:
    if len(labels) != n_rows:
        raise DimensionMismatch(
            f"label count {len(labels)} does not match matrix rows {n_rows}"
        )
    y = np.fromiter((1.0 if lab is Label.USEFUL else -1.0 for lab in labels), dtype=np.float64)
    if np.all(y > 0) or np.all(y < 0):
        raise SingleClassCorpus("training requires both classes")
    return y


def logistic_objective(w: np.ndarray, b: float, X, y: np.ndarray, l2_strength: float) -> float:
    """Regularized logistic loss; exposed for gradient and convergence checks."""
    margins = y * (as_csr(X) @ w + b)
    return 0.5 * l2_strength * float(w @ w) + float(np.logaddexp(0.0, -margins).sum())


def logistic_gradient(w: np.ndarray, b: float, X, y: np.ndarray, l2_strength: float):
    """Analytic gradient of :func:`logistic_objective` in (w, b)."""
    Xc = as_csr(X)
    margins = y * (Xc @ w + b)
    s = expit(-margins)
    gw = l2_strength * w - Xc.T @ (y * s)
    gb = -float((y * s).sum())
    return gw, gb


def train_logreg(X, y, hyper: LogRegHyper | None = None) -> LinearModel:
    """Fit logistic regression by deterministic gradient descent.

    Armijo backtracking guarantees a non-increasing loss sequence; training
    stops when the full gradient norm falls below ``tol`` or ``max_iters``
    is reached.
    """
    h = hyper if hyper is not None else LogRegHyper()
    Xc = as_csr(X)
    yv = _encode(y, Xc.shape[0])
    if Xc.shape[1] < 1:
        raise DimensionMismatch("feature count must be >= 1")

    w = np.zeros(Xc.shape[1])
    b = 0.0
    loss = logistic_objective(w, b, Xc, yv, h.l2_strength)
    history = [loss]
    step = 1.0
    converged = False
    iterations = 0
    for iterations in range(1, h.max_iters + 1):
        gw, gb = logistic_gradient(w, b, Xc, yv, h.l2_strength)
        gnorm_sq = float(gw @ gw) + gb * gb
        if np.sqrt(gnorm_sq) <= h.tol:
            converged = True
            iterations -= 1
            break
        step = min(step * 2.0, 1e6)
        for _ in range(80):
            cand_w = w - step * gw
            cand_b = b - step * gb
            cand_loss = logistic_objective(cand_w, cand_b, Xc, yv, h.l2_strength)
            if cand_loss <= loss - 1e-4 * step * gnorm_sq:
                break
            step *= 0.5
        else:
            converged = True  # step underflow: numerically at the optimum
            iterations -= 1
            break
        w, b, loss = cand_w, cand_b, cand_loss
        history.append(loss)

    meta = {
        "iterations": iterations,
        "converged": converged,
        "final_loss": loss,
        "loss_history": history,
    }
    hyper_dict = {
        "l2_strength": h.l2_strength,
        "max_iters": h.max_iters,
        "tol": h.tol,
        "seed": h.seed,
    }
    return LinearModel(kind=LOGREG, weights=w, bias=b, hyper=hyper_dict, meta=meta)


def svm_primal_objective(w: np.ndarray, b: float, X, y: np.ndarray, cost_c: float) -> float:
    """Primal hinge objective; exposed for optimality checks."""
    margins = y * (as_csr(X) @ w + b)
    return 0.5 * float(w @ w) + cost_c * float(np.maximum(0.0, 1.0 - margins).sum())


def train_linear_svm(X, y, hyper: SvmHyper | None = None) -> LinearModel:
    """Fit a linear soft-margin SVM with deterministic SMO on the dual.

    Pair selection is maximal-violating-pair (first index on ties), so runs
    are reproducible without randomness; the seed is recorded but unused.
    Stops when the KKT violation gap falls below ``tol``.
    """
    h = hyper if hyper is not None else SvmHyper()
    Xc = as_csr(X)
    yv = _encode(y, Xc.shape[0])
    if Xc.shape[1] < 1:
        raise DimensionMismatch("feature count must be >= 1")
    n = Xc.shape[0]
    C = h.cost_c
    bound_eps = 1e-12

    alpha = np.zeros(n)
    w = np.zeros(Xc.shape[1])
    f = np.zeros(n)  # f_t = w . x_t, maintained incrementally

    # Dense mirrors make the per-iteration row reads cheap on small problems;
    # large matrices stay sparse end to end.
    dense = Xc.toarray() if n * Xc.shape[1] <= 4_000_000 else None

    def kernel_col(i: int) -> np.ndarray:
        if dense is not None:
            return dense @ dense[i]
        xi = Xc[[i], :].toarray().ravel()
        return Xc @ xi

    def add_row(i: int, scale: float) -> None:
        if dense is not None:
            np.add(w, scale * dense[i], out=w)
            return
        row = Xc[[i], :]
        np.add.at(w, row.indices, scale * row.data)

    converged = False
    gap = np.inf
    iterations = 0
    for iterations in range(1, h.max_iters + 1):
        if iterations % 512 == 0:
            f = Xc @ w  # shed incremental float drift
        neg_e = yv - f
        up = ((yv > 0) & (alpha < C - bound_eps)) | ((yv < 0) & (alpha > bound_eps))
        low = ((yv < 0) & (alpha < C - bound_eps)) | ((yv > 0) & (alpha > bound_eps))
        i = int(np.argmax(np.where(up, neg_e, -np.inf)))
        j = int(np.argmin(np.where(low, neg_e, np.inf)))
        gap = float(neg_e[i] - neg_e[j])
        if gap <= h.tol:
            converged = True
            iterations -= 1
            break

        if yv[i] != yv[j]:
            lo = max(0.0, alpha[j] - alpha[i])
            hi = min(C, C + alpha[j] - alpha[i])
        else:
            lo = max(0.0, alpha[i] + alpha[j] - C)
            hi = min(C, alpha[i] + alpha[j])
        if hi - lo < bound_eps:
            converged = False
            break

        k_i = kernel_col(i)
        k_j = kernel_col(j)
        eta = k_i[i] + k_j[j] - 2.0 * k_i[j]
        if eta <= 0.0:
            eta = 1e-12
        # E_t = f_t - y_t = -neg_e[t]
        a_j = alpha[j] + yv[j] * (neg_e[j] - neg_e[i]) / eta
        a_j = min(max(a_j, lo), hi)
        a_i = alpha[i] + yv[i] * yv[j] * (alpha[j] - a_j)
        d_i = a_i - alpha[i]
        d_j = a_j - alpha[j]
        alpha[i] = a_i
        alpha[j] = a_j
        f += yv[i] * d_i * k_i + yv[j] * d_j * k_j
        add_row(i, yv[i] * d_i)
        add_row(j, yv[j] * d_j)

    f = Xc @ w
    neg_e = yv - f
    up = ((yv > 0) & (alpha < C - bound_eps)) | ((yv < 0) & (alpha > bound_eps))
    low = ((yv < 0) & (alpha < C - bound_eps)) | ((yv > 0) & (alpha > bound_eps))
    if up.any() and low.any():
        b = 0.5 * (float(np.max(neg_e[up])) + float(np.min(neg_e[low])))
    else:
        free = (alpha > bound_eps) & (alpha < C - bound_eps)
        b = float(np.mean(neg_e[free])) if free.any() else 0.0

    meta = {
        "iterations": iterations,
        "converged": converged,
        "kkt_gap": gap,
        "primal_objective": svm_primal_objective(w, b, Xc, yv, C),
        "support_vectors": int((alpha > 1e-8).sum()),
    }
    hyper_dict = {
        "cost_c": C,
        "kernel": h.kernel,
        "max_iters": h.max_iters,
        "tol": h.tol,
        "seed": h.seed,
    }
    return LinearModel(kind=LINEAR_SVM, weights=w, bias=b, hyper=hyper_dict, meta=meta)
