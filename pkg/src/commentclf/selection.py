"""Filter-style term selection: chi-square and mutual-information scores.

Both statistics are computed from 2-class contingency summaries:

* chi-square uses per-class sums of the feature values, so it works on raw
  counts as well as on weighted matrices;
* mutual information uses document presence only (the term occurs in the
  document or it does not), measured in bits.

Scores are accumulated in a per-column value-sorted order, so they are
bit-identical under document permutation, and each class's contribution is
formed symmetrically, so swapping the two labels leaves scores exactly
unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._sparse import as_csr, column_nnz, sorted_column_sums
from .corpus import Label
from .errors import ColumnOutOfRange, LengthMismatch, MalformedCsv, SingleClassCorpus
from .features import DocTermMatrix, Vocabulary, WeightedMatrix

CHI2 = "chi2"
MUTUAL_INFORMATION = "mi"


@dataclass(frozen=True, eq=False)
class TermScores:
    method: str
    scores: np.ndarray  # aligned to vocabulary column order; >= 0, finite


@dataclass(frozen=True)
class SelectedTerms:
    """Top-k columns, ordered by score descending then term ascending."""

    method: str
    k: int
    columns: tuple[int, ...]
    terms: tuple[str, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "format": "commentclf-selection",
                "version": 1,
                "method": self.method,
                "k": self.k,
                "columns": list(self.columns),
                "terms": list(self.terms),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SelectedTerms":
        payload = json.loads(text)
        if payload.get("format") != "commentclf-selection":
            raise MalformedCsv("not a commentclf selection file")
        return cls(
            method=payload["method"],
            k=int(payload["k"]),
            columns=tuple(int(c) for c in payload["columns"]),
            terms=tuple(payload["terms"]),
        )


def _class_masks(labels: Sequence[Label]) -> tuple[np.ndarray, np.ndarray]:
    useful = np.fromiter((lab is Label.USEFUL for lab in labels), dtype=bool, count=len(labels))
    if useful.all() or not useful.any():
        raise SingleClassCorpus("both classes must be present")
    return useful, ~useful


def chi2_scores(matrix, labels: Sequence[Label]) -> TermScores:
    """Chi-square of per-class feature-value sums against class priors.

    For term i with per-class sums O_c, total T_i and expectations
    E_c = T_i * (N_c / N), the score is sum_c (O_c - E_c)^2 / E_c.
    Terms with T_i = 0 score 0.
    """
    X = as_csr(matrix)
    if len(labels) != X.shape[0]:
        raise LengthMismatch(
            f"label count {len(labels)} does not match matrix rows {X.shape[0]}"
        )
    useful, rest = _class_masks(labels)
    n = float(len(labels))
    n_u = float(useful.sum())
    n_r = float(rest.sum())
    obs_u = sorted_column_sums(X[useful])
    obs_r = sorted_column_sums(X[rest])
    total = obs_u + obs_r
    with np.errstate(divide="ignore", invalid="ignore"):
        exp_u = total * (n_u / n)
        exp_r = total * (n_r / n)
        per_class = (obs_u - exp_u) ** 2 / exp_u + (obs_r - exp_r) ** 2 / exp_r
    scores = np.where(total > 0.0, per_class, 0.0)
    return TermScores(method=CHI2, scores=scores)


def _mi_cell(joint: np.ndarray, marg_u: np.ndarray, marg_c: float, n: float) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        term = (joint / n) * np.log2((n * joint) / (marg_u * marg_c))
    return np.where(joint > 0, term, 0.0)


def mi_scores(matrix, labels: Sequence[Label]) -> TermScores:
    """Document-presence mutual information, in bits.

    Uses the 2x2 table of (term present / absent) against the class label;
    empty cells contribute zero. A term present in every document carries
    no information and scores 0.
    """
    X = as_csr(matrix)
    if len(labels) != X.shape[0]:
        raise LengthMismatch(
            f"label count {len(labels)} does not match matrix rows {X.shape[0]}"
        )
    useful, rest = _class_masks(labels)
    n = float(len(labels))
    n_u = float(useful.sum())
    n_r = float(rest.sum())
    pres_u = column_nnz(X[useful]).astype(np.float64)
    pres_r = column_nnz(X[rest]).astype(np.float64)
    pres = pres_u + pres_r
    abs_u = n_u - pres_u
    abs_r = n_r - pres_r
    absent = n - pres
    scores = (
        _mi_cell(pres_u, pres, n_u, n) + _mi_cell(pres_r, pres, n_r, n)
    ) + (
        _mi_cell(abs_u, absent, n_u, n) + _mi_cell(abs_r, absent, n_r, n)
    )
    return TermScores(method=MUTUAL_INFORMATION, scores=np.maximum(scores, 0.0))


def select_top_k(scores: TermScores, vocab: Vocabulary, k: int) -> SelectedTerms:
    """Pick the ``min(k, |vocab|)`` best-scoring terms, deterministically.

    Ties are broken by term string, ascending, so rankings are reproducible
    across platforms.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    values = np.asarray(scores.scores, dtype=np.float64)
    if values.shape[0] != len(vocab):
        raise ColumnOutOfRange(
            f"scores cover {values.shape[0]} terms, vocabulary has {len(vocab)}"
        )
    if not np.all(np.isfinite(values)):
        raise ValueError("scores must be finite")
    order = sorted(range(len(vocab)), key=lambda i: (-values[i], vocab.terms[i]))
    picked = order[: min(k, len(vocab))]
    return SelectedTerms(
        method=scores.method,
        k=k,
        columns=tuple(picked),
        terms=tuple(vocab.terms[i] for i in picked),
    )


def project_matrix(matrix, selected: SelectedTerms):
    """Restrict a matrix to the selected columns, in selection order.

    The wrapper type of the input is preserved. Row normalization flags are
    dropped because removing columns breaks unit row norms.
    """
    cols = np.asarray(selected.columns, dtype=np.int64)
    X = as_csr(matrix)
    if cols.size and (cols.min() < 0 or cols.max() >= X.shape[1]):
        raise ColumnOutOfRange(
            f"selection references column {int(cols.max())} of a {X.shape[1]}-column matrix"
        )
    if isinstance(matrix, DocTermMatrix):
        sub = matrix.counts[:, cols]
        return DocTermMatrix(counts=sub)
    if isinstance(matrix, WeightedMatrix):
        sub = matrix.weights[:, cols]
        return WeightedMatrix(weights=sub, scheme=matrix.scheme, row_normalized=False)
    return X[:, cols]
