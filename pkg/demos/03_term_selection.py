# Scoring terms against the class labels and keeping the best k.
#
# Chi-square compares per-class sums of a term's values with what the class
# priors predict; mutual information measures (in bits) how much knowing
# "the term occurs in this document" tells you about the label. Both are
# filter methods: they rank terms before any classifier is involved.

from commentclf import (
    ViewMode,
    build_vocabulary,
    chi2_scores,
    count_matrix,
    extract_view,
    mi_scores,
    project_matrix,
    select_top_k,
    tokenize,
)
from commentclf.fixture import load_fixture_corpus

corpus = load_fixture_corpus()
docs = [tokenize(d) for d in extract_view(corpus, ViewMode.COMMENTS_ONLY).documents]
vocab = build_vocabulary(docs, min_df=1)
counts = count_matrix(docs, vocab)
labels = corpus.labels()

print(f"{len(vocab)} vocabulary terms over {len(corpus)} documents\n")

for scores in (chi2_scores(counts, labels), mi_scores(counts, labels)):
    top = select_top_k(scores, vocab, k=8)
    print(f"top 8 terms by {scores.method}:")
    for col, term in zip(top.columns, top.terms):
        print(f"  {term:<10} {scores.scores[col]:.4f}")
    print()

# Projection keeps the selected columns, in ranking order.
selected = select_top_k(chi2_scores(counts, labels), vocab, k=8)
reduced = project_matrix(counts, selected)
print("matrix shape before:", (counts.n_docs, counts.n_terms))
print("matrix shape after: ", (reduced.n_docs, reduced.n_terms))
