import numpy as np
import pytest

from commentclf import (
    Label,
    SelectedTerms,
    Vocabulary,
    chi2_scores,
    count_matrix,
    mi_scores,
    project_matrix,
    select_top_k,
    weight_tfidf,
)
from commentclf.errors import ColumnOutOfRange, SingleClassCorpus
from commentclf.selection import TermScores
from conftest import random_count_corpus, random_labels
from oracles import chi2_reference, mi_reference

U, N = Label.USEFUL, Label.NOT_USEFUL

# Frozen value for presence pattern [1,1,1,0] against labels [U,U,N,N],
# computed with the brute-force 2x2-table oracle in tests/oracles.py.
MI_THREE_OF_FOUR = 0.31127812445913283


def _matrix(dense):
    terms = tuple(f"t{j}" for j in range(len(dense[0])))
    docs = [
        [terms[j] for j in range(len(row)) for _ in range(int(row[j]))]
        for row in dense
    ]
    return count_matrix(docs, Vocabulary(terms=terms))


class TestChi2:
    def test_proportional_counts_score_zero(self):
        # Counts proportional to the 50/50 priors: observed equals expected.
        m = _matrix([[2], [1], [2], [1]])
        scores = chi2_scores(m, [U, U, N, N]).scores
        assert scores[0] == 0.0

    def test_hand_contingency_value(self):
        m = _matrix([[1], [1], [0], [0]])
        scores = chi2_scores(m, [U, U, N, N]).scores
        assert scores[0] == pytest.approx(2.0, abs=1e-12)

    def test_all_zero_column_scores_zero(self):
        m = _matrix([[0, 1], [0, 1], [0, 1], [0, 2]])
        scores = chi2_scores(m, [U, U, N, N]).scores
        assert scores[0] == 0.0

    def test_single_class_rejected(self):
        m = _matrix([[1], [1]])
        with pytest.raises(SingleClassCorpus):
            chi2_scores(m, [U, U])

    def test_works_on_weighted_matrix(self):
        m = _matrix([[1, 2], [2, 0], [0, 1], [1, 1]])
        w = weight_tfidf(m, normalize=True)
        scores = chi2_scores(w, [U, U, N, N]).scores
        assert scores.shape == (2,) and np.isfinite(scores).all()


class TestMutualInformation:
    def test_term_in_every_document_scores_zero(self):
        m = _matrix([[1], [2], [1], [3]])
        scores = mi_scores(m, [U, U, N, N]).scores
        assert scores[0] == 0.0

    def test_perfect_indicator_on_balanced_classes(self):
        m = _matrix([[1], [1], [0], [0]])
        scores = mi_scores(m, [U, U, N, N]).scores
        assert scores[0] == pytest.approx(1.0, abs=1e-12)

    def test_three_of_four_presence(self):
        m = _matrix([[1], [1], [1], [0]])
        scores = mi_scores(m, [U, U, N, N]).scores
        assert scores[0] == pytest.approx(MI_THREE_OF_FOUR, abs=1e-12)

    def test_single_class_rejected(self):
        m = _matrix([[1], [0]])
        with pytest.raises(SingleClassCorpus):
            mi_scores(m, [U, U])


class TestScoreProperties:
    def test_oracle_equivalence_on_random_corpora(self):
        rng = np.random.default_rng(20240502)
        checked = 0
        while checked < 30:
            dense, docs, vocab = random_count_corpus(rng)
            labels = random_labels(rng, dense.shape[0])
            m = count_matrix(docs, vocab)
            pos = [lab is U for lab in labels]
            np.testing.assert_allclose(
                chi2_scores(m, labels).scores,
                chi2_reference(dense.tolist(), pos),
                atol=1e-9, rtol=0,
            )
            np.testing.assert_allclose(
                mi_scores(m, labels).scores,
                mi_reference(dense.tolist(), pos),
                atol=1e-9, rtol=0,
            )
            checked += 1

    def test_label_swap_symmetry_is_exact(self):
        rng = np.random.default_rng(20240503)
        for _ in range(20):
            dense, docs, vocab = random_count_corpus(rng)
            labels = random_labels(rng, dense.shape[0])
            swapped = [N if lab is U else U for lab in labels]
            m = count_matrix(docs, vocab)
            assert np.array_equal(
                chi2_scores(m, labels).scores, chi2_scores(m, swapped).scores
            )
            assert np.array_equal(
                mi_scores(m, labels).scores, mi_scores(m, swapped).scores
            )

    def test_document_permutation_invariance_is_exact(self):
        rng = np.random.default_rng(20240504)
        dense, docs, vocab = random_count_corpus(rng)
        labels = random_labels(rng, dense.shape[0])
        perm = rng.permutation(len(docs))
        m = count_matrix(docs, vocab)
        m_perm = count_matrix([docs[i] for i in perm], vocab)
        labels_perm = [labels[i] for i in perm]
        assert np.array_equal(
            chi2_scores(m, labels).scores, chi2_scores(m_perm, labels_perm).scores
        )
        assert np.array_equal(
            mi_scores(m, labels).scores, mi_scores(m_perm, labels_perm).scores
        )

    def test_scores_nonnegative_and_finite(self):
        rng = np.random.default_rng(20240505)
        for _ in range(10):
            dense, docs, vocab = random_count_corpus(rng)
            labels = random_labels(rng, dense.shape[0])
            m = count_matrix(docs, vocab)
            for fn in (chi2_scores, mi_scores):
                s = fn(m, labels).scores
                assert (s >= 0).all() and np.isfinite(s).all()


class TestSelectTopK:
    def _vocab(self):
        return Vocabulary(terms=("a", "b", "c"))

    def test_k_at_least_vocab_returns_all(self):
        scores = TermScores(method="chi2", scores=np.array([0.3, 0.9, 0.1]))
        sel = select_top_k(scores, self._vocab(), k=10)
        assert sel.terms == ("b", "a", "c")
        assert sel.columns == (1, 0, 2)

    def test_tie_broken_lexicographically(self):
        scores = TermScores(method="chi2", scores=np.array([1.0, 1.0, 0.5]))
        sel = select_top_k(scores, self._vocab(), k=1)
        assert sel.terms == ("a",)

    def test_highest_score_wins(self):
        scores = TermScores(method="mi", scores=np.array([0.1, 0.9, 0.0]))
        sel = select_top_k(scores, self._vocab(), k=1)
        assert sel.terms == ("b",)

    def test_idempotent_on_already_selected(self):
        rng = np.random.default_rng(20240506)
        dense, docs, vocab = random_count_corpus(rng, max_docs=8, max_terms=12)
        labels = random_labels(rng, dense.shape[0])
        m = count_matrix(docs, vocab)
        scores = chi2_scores(m, labels)
        sel = select_top_k(scores, vocab, k=5)
        projected = project_matrix(m, sel)
        sub_vocab = Vocabulary(terms=sel.terms)
        sub_scores = chi2_scores(projected, labels)
        sel2 = select_top_k(sub_scores, sub_vocab, k=5)
        assert set(sel2.terms) == set(sel.terms)

    def test_json_roundtrip(self):
        scores = TermScores(method="chi2", scores=np.array([0.3, 0.9, 0.1]))
        sel = select_top_k(scores, self._vocab(), k=2)
        again = SelectedTerms.from_json(sel.to_json())
        assert again == sel


class TestProjectMatrix:
    def test_identity_projection(self, three_doc_matrix):
        vocab, m = three_doc_matrix
        sel = SelectedTerms(method="chi2", k=3, columns=(0, 1, 2), terms=vocab.terms)
        out = project_matrix(m, sel)
        assert np.array_equal(out.counts.toarray(), m.counts.toarray())

    def test_single_column(self, three_doc_matrix):
        _, m = three_doc_matrix
        sel = SelectedTerms(method="chi2", k=1, columns=(1,), terms=("b",))
        out = project_matrix(m, sel)
        assert np.array_equal(
            out.counts.toarray().ravel(), m.counts.toarray()[:, 1]
        )

    def test_column_out_of_range(self, three_doc_matrix):
        _, m = three_doc_matrix
        sel = SelectedTerms(method="chi2", k=1, columns=(99,), terms=("zz",))
        with pytest.raises(ColumnOutOfRange):
            project_matrix(m, sel)

    def test_weighted_projection_drops_normalization_flag(self, three_doc_matrix):
        _, m = three_doc_matrix
        w = weight_tfidf(m, normalize=True)
        sel = SelectedTerms(method="chi2", k=2, columns=(2, 0), terms=("c", "a"))
        out = project_matrix(w, sel)
        assert out.row_normalized is False
        assert out.scheme == "tfidf"
        assert np.array_equal(out.weights.toarray(), w.weights.toarray()[:, [2, 0]])
