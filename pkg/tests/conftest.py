import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from commentclf import Label, Vocabulary, build_vocabulary, count_matrix


@pytest.fixture
def write_corpus(tmp_path):
    """Write a corpus CSV from (comment, code, label) rows; label None omits the cell."""

    def _write(rows, header=("comment", "code", "label"), name="corpus.csv"):
        import csv

        path = tmp_path / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow(row)
        return path

    return _write


@pytest.fixture
def three_doc_matrix():
    """Counts for the documents 'a a b' / 'a c' / 'b b b c' over vocab (a, b, c)."""
    docs = [["a", "a", "b"], ["a", "c"], ["b", "b", "b", "c"]]
    vocab = build_vocabulary(docs, min_df=1)
    return vocab, count_matrix(docs, vocab)


def random_count_corpus(rng, max_docs=10, max_terms=15):
    """Small random count matrix plus token lists, for oracle comparisons."""
    n_docs = int(rng.integers(2, max_docs + 1))
    n_terms = int(rng.integers(1, max_terms + 1))
    dense = (
        rng.integers(1, 4, size=(n_docs, n_terms))
        * (rng.random((n_docs, n_terms)) < 0.6)
    ).astype(np.int64)
    terms = tuple(f"t{j:02d}" for j in range(n_terms))
    docs = [
        [terms[j] for j in range(n_terms) for _ in range(int(dense[i, j]))]
        for i in range(n_docs)
    ]
    vocab = Vocabulary(terms=terms)
    return dense, docs, vocab


def random_labels(rng, n):
    """Random label list guaranteed to contain both classes (n >= 2)."""
    while True:
        labs = [Label.USEFUL if rng.random() < 0.5 else Label.NOT_USEFUL for _ in range(n)]
        if any(l is Label.USEFUL for l in labs) and any(l is Label.NOT_USEFUL for l in labs):
            return labs
