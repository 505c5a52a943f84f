"""Small shared helpers for sparse matrices.

Column statistics are accumulated in a value-sorted order so that results
are bit-identical under any permutation of the documents (and therefore
under any parallel split of the work).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def as_csr(matrix) -> sp.csr_array:
    """Coerce a matrix-like object to ``csr_array`` with float64 data.

    Accepts the package's matrix wrappers (anything exposing ``.counts`` or
    ``.weights``), scipy sparse matrices/arrays, and dense numpy arrays.
    """
    inner = getattr(matrix, "counts", None)
    if inner is None:
        inner = getattr(matrix, "weights", None)
    if inner is None:
        inner = matrix
    if sp.issparse(inner):
        out = sp.csr_array(inner, dtype=np.float64)
    else:
        out = sp.csr_array(np.asarray(inner, dtype=np.float64))
    out.eliminate_zeros()
    return out


def column_nnz(m: sp.csr_array) -> np.ndarray:
    """Number of stored (non-zero) entries per column."""
    csc = m.tocsc()
    csc.eliminate_zeros()
    return np.diff(csc.indptr)


def sorted_column_sums(m: sp.csr_array, transform=None) -> np.ndarray:
    """Per-column sums accumulated in ascending value order.

    ``transform`` maps the stored entry values before summation (it receives
    the data array and the column id of every entry). Sorting before
    accumulation makes the float result independent of the row order of
    ``m``.
    """
    csc = m.tocsc()
    csc.eliminate_zeros()
    n_cols = csc.shape[1]
    col_ids = np.repeat(np.arange(n_cols), np.diff(csc.indptr))
    data = csc.data.astype(np.float64)
    if transform is not None:
        data = transform(data, col_ids)
    order = np.lexsort((data, col_ids))
    out = np.zeros(n_cols, dtype=np.float64)
    np.add.at(out, col_ids[order], data[order])
    return out


def l2_normalize_rows(m: sp.csr_array) -> sp.csr_array:
    """Scale every non-empty row to unit Euclidean norm; empty rows pass through."""
    sq = m.multiply(m).sum(axis=1)
    norms = np.sqrt(np.asarray(sq).ravel())
    scale = np.where(norms > 0.0, 1.0 / np.where(norms > 0.0, norms, 1.0), 1.0)
    out = m.copy()
    out.data = out.data * np.repeat(scale, np.diff(m.indptr))
    return out
