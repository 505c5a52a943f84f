"""Bag-of-words features: tokenization, vocabularies, and term weighting.

Both weighting schemes follow a fit/transform split so corpus-level
statistics are estimated on training documents only and then applied
unchanged to held-out documents:

* tf-idf: ``w = tf * (ln((1 + N) / (1 + df)) + 1)`` (the smoothed idf
  variant), optionally followed by L2 row normalization.

* log-entropy: ``w = log2(1 + tf) * g`` with the global factor
  ``g = 1 + sum_j p_j * log2(p_j) / log2(N + 1)``, where ``p_j`` is the
  share of the term's corpus frequency that falls in document ``j``.
  Terms spread evenly over many documents get a small ``g``; terms
  concentrated in few documents keep ``g`` close to 1.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ._sparse import as_csr, column_nnz, l2_normalize_rows, sorted_column_sums
from .errors import DimensionMismatch, EmptyVocabulary, MalformedCsv

TFIDF = "tfidf"
LOG_ENTROPY = "logentropy"

# Maximal runs of ASCII letters/digits, length >= 2. Single characters and
# all punctuation (comment markers, operators) are dropped.
_TOKEN_RE = re.compile(r"[A-Za-z0-9]{2,}")


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    stopwords: frozenset[str] = frozenset()


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[str]:
    """Split ``text`` into tokens. Deterministic; empty input gives ``[]``."""
    cfg = config if config is not None else TokenizerConfig()
    tokens = _TOKEN_RE.findall(text)
    if cfg.lowercase:
        tokens = [t.lower() for t in tokens]
    if cfg.stopwords:
        tokens = [t for t in tokens if t not in cfg.stopwords]
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    """Frozen, lexicographically sorted term list with a column index."""

    terms: tuple[str, ...]
    min_df: int = 1
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def to_json(self) -> str:
        payload = {
            "format": "commentclf-vocabulary",
            "version": 1,
            "min_df": self.min_df,
            "terms": list(self.terms),
        }
        return json.dumps(payload, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Vocabulary":
        payload = json.loads(text)
        if payload.get("format") != "commentclf-vocabulary":
            raise MalformedCsv("not a commentclf vocabulary file")
        return cls(terms=tuple(payload["terms"]), min_df=int(payload["min_df"]))


def build_vocabulary(docs: list[list[str]], min_df: int = 1) -> Vocabulary:
    """Collect all tokens with document frequency >= ``min_df``, sorted.

    Raises :class:`EmptyVocabulary` when nothing survives the threshold.
    """
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(doc))
    terms = sorted(t for t, n in df.items() if n >= min_df)
    if not terms:
        raise EmptyVocabulary(f"no term appears in at least {min_df} document(s)")
    return Vocabulary(terms=tuple(terms), min_df=min_df)


@dataclass(frozen=True, eq=False)
class DocTermMatrix:
    """Sparse document x term count matrix; absent entries mean zero."""

    counts: sp.csr_array

    @property
    def n_docs(self) -> int:
        return self.counts.shape[0]

    @property
    def n_terms(self) -> int:
        return self.counts.shape[1]


@dataclass(frozen=True, eq=False)
class WeightedMatrix:
    """Real-valued matrix sharing the sparsity pattern of its source counts."""

    weights: sp.csr_array
    scheme: str
    row_normalized: bool

    @property
    def n_docs(self) -> int:
        return self.weights.shape[0]

    @property
    def n_terms(self) -> int:
        return self.weights.shape[1]


def count_matrix(docs: list[list[str]], vocab: Vocabulary) -> DocTermMatrix:
    """Count in-vocabulary token occurrences per document.

    Out-of-vocabulary tokens are ignored; empty documents yield all-zero rows.
    """
    if len(vocab) == 0:
        raise EmptyVocabulary("vocabulary is empty")
    rows: list[int] = []
    cols: list[int] = []
    data: list[int] = []
    for j, doc in enumerate(docs):
        seen = Counter(doc)
        for term, n in seen.items():
            col = vocab.index.get(term)
            if col is not None:
                rows.append(j)
                cols.append(col)
                data.append(n)
    counts = sp.csr_array(
        sp.coo_array(
            (np.asarray(data, dtype=np.int64), (rows, cols)),
            shape=(len(docs), len(vocab)),
        )
    )
    counts.eliminate_zeros()
    return DocTermMatrix(counts=counts)


class TfidfWeighter:
    """Smoothed-idf weighting, fit on one corpus and applicable to another."""

    def __init__(self, normalize: bool = True):
        self.normalize = normalize
        self.idf_: np.ndarray | None = None
        self.n_docs_: int | None = None

    def fit(self, matrix) -> "TfidfWeighter":
        counts = as_csr(matrix)
        n_docs = counts.shape[0]
        if n_docs < 1:
            raise ValueError("cannot fit weighting on an empty matrix")
        df = column_nnz(counts)
        self.idf_ = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
        self.n_docs_ = n_docs
        return self

    def transform(self, matrix) -> WeightedMatrix:
        if self.idf_ is None:
            raise ValueError("weighter is not fitted")
        counts = as_csr(matrix)
        if counts.shape[1] != self.idf_.shape[0]:
            raise DimensionMismatch(
                f"matrix has {counts.shape[1]} columns, weighter was fit on {self.idf_.shape[0]}"
            )
        out = counts.copy()
        out.data = out.data * self.idf_[out.indices]
        if self.normalize:
            out = l2_normalize_rows(out)
        return WeightedMatrix(weights=out, scheme=TFIDF, row_normalized=self.normalize)

    def fit_transform(self, matrix) -> WeightedMatrix:
        return self.fit(matrix).transform(matrix)

    def to_dict(self) -> dict:
        return {
            "scheme": TFIDF,
            "normalize": self.normalize,
            "n_docs": self.n_docs_,
            "idf": [float(v) for v in self.idf_],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TfidfWeighter":
        w = cls(normalize=bool(payload["normalize"]))
        w.idf_ = np.asarray(payload["idf"], dtype=np.float64)
        w.n_docs_ = int(payload["n_docs"])
        return w


class LogEntropyWeighter:
    """Entropy-discounted log term frequency weighting.

    The global factor of a term absent from the fit corpus is defined as 1
    (zero entropy), which only matters for matrices built against a larger
    vocabulary than the one fit here.
    """

    def __init__(self, normalize: bool = True):
        self.normalize = normalize
        self.global_: np.ndarray | None = None
        self.n_docs_: int | None = None

    def fit(self, matrix) -> "LogEntropyWeighter":
        counts = as_csr(matrix)
        n_docs = counts.shape[0]
        if n_docs < 1:
            raise ValueError("cannot fit weighting on an empty matrix")
        n_cols = counts.shape[1]
        csc = counts.tocsc()
        csc.eliminate_zeros()
        col_ids = np.repeat(np.arange(n_cols), np.diff(csc.indptr))
        tf = csc.data.astype(np.float64)
        # Corpus frequency per term; integer-valued, so order-independent.
        gf = np.bincount(col_ids, weights=tf, minlength=n_cols)
        entropy = sorted_column_sums(
            counts,
            transform=lambda data, cols: (data / gf[cols]) * np.log2(data / gf[cols]),
        )
        self.global_ = 1.0 + entropy / np.log2(n_docs + 1.0)
        self.global_[gf == 0] = 1.0
        self.n_docs_ = n_docs
        return self

    def transform(self, matrix) -> WeightedMatrix:
        if self.global_ is None:
            raise ValueError("weighter is not fitted")
        counts = as_csr(matrix)
        if counts.shape[1] != self.global_.shape[0]:
            raise DimensionMismatch(
                f"matrix has {counts.shape[1]} columns, weighter was fit on {self.global_.shape[0]}"
            )
        out = counts.copy()
        out.data = np.log2(1.0 + out.data) * self.global_[out.indices]
        if self.normalize:
            out = l2_normalize_rows(out)
        return WeightedMatrix(weights=out, scheme=LOG_ENTROPY, row_normalized=self.normalize)

    def fit_transform(self, matrix) -> WeightedMatrix:
        return self.fit(matrix).transform(matrix)

    def to_dict(self) -> dict:
        return {
            "scheme": LOG_ENTROPY,
            "normalize": self.normalize,
            "n_docs": self.n_docs_,
            "global_weights": [float(v) for v in self.global_],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LogEntropyWeighter":
        w = cls(normalize=bool(payload["normalize"]))
        w.global_ = np.asarray(payload["global_weights"], dtype=np.float64)
        w.n_docs_ = int(payload["n_docs"])
        return w


def make_weighter(scheme: str, normalize: bool = True):
    if scheme == TFIDF:
        return TfidfWeighter(normalize=normalize)
    if scheme == LOG_ENTROPY:
        return LogEntropyWeighter(normalize=normalize)
    raise ValueError(f"unknown weighting scheme {scheme!r}")


def weighter_from_dict(payload: dict):
    scheme = payload.get("scheme")
    if scheme == TFIDF:
        return TfidfWeighter.from_dict(payload)
    if scheme == LOG_ENTROPY:
        return LogEntropyWeighter.from_dict(payload)
    raise ValueError(f"unknown weighting scheme {scheme!r}")


def weight_tfidf(m: DocTermMatrix, normalize: bool = True) -> WeightedMatrix:
    """Weight a count matrix with its own smoothed-idf statistics."""
    return TfidfWeighter(normalize=normalize).fit_transform(m)


def weight_logentropy(m: DocTermMatrix, normalize: bool = True) -> WeightedMatrix:
    """Weight a count matrix with its own log-entropy statistics."""
    return LogEntropyWeighter(normalize=normalize).fit_transform(m)


def save_matrix_triplets(matrix, path: str | Path) -> None:
    """Write a matrix to the versioned (row, col, value) text format.

    First line is a JSON header; every following line holds one stored
    entry as ``row col value``.
    """
    m = as_csr(matrix)
    header = {
        "format": "commentclf-matrix",
        "version": 1,
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "nnz": int(m.nnz),
        "kind": "counts",
        "row_normalized": None,
    }
    if isinstance(matrix, WeightedMatrix):
        header["kind"] = matrix.scheme
        header["row_normalized"] = matrix.row_normalized
    coo = m.tocoo()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {float(v)!r}\n")


def load_matrix_triplets(path: str | Path):
    """Load a matrix written by :func:`save_matrix_triplets`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != "commentclf-matrix":
            raise MalformedCsv(f"{path}: not a commentclf matrix file")
        rows, cols, data = [], [], []
        for line in fh:
            r, c, v = line.split()
            rows.append(int(r))
            cols.append(int(c))
            data.append(float(v))
    m = sp.csr_array(
        sp.coo_array(
            (np.asarray(data), (rows, cols)),
            shape=(header["rows"], header["cols"]),
        )
    )
    if header["kind"] == "counts":
        return DocTermMatrix(counts=sp.csr_array(m, dtype=np.int64))
    return WeightedMatrix(
        weights=m, scheme=header["kind"], row_normalized=bool(header["row_normalized"])
    )
