# The two term weighting schemes, side by side on a tiny corpus.
#
# tf-idf multiplies each count by a smoothed inverse document frequency:
# terms in many documents are discounted. Log-entropy instead discounts
# terms whose occurrences are spread evenly across documents; a term
# concentrated in one document keeps its full weight.

import numpy as np

from commentclf import (
    build_vocabulary,
    count_matrix,
    tokenize,
    weight_logentropy,
    weight_tfidf,
)

texts = [
    "frees the buffer before reallocating the buffer",
    "frees the handle",
    "todo todo todo cleanup",
]
docs = [tokenize(t) for t in texts]
vocab = build_vocabulary(docs, min_df=1)
counts = count_matrix(docs, vocab)

print("vocabulary:", vocab.terms)
print("counts:")
print(counts.counts.toarray())

np.set_printoptions(precision=3, suppress=True)
for name, weighted in (
    ("tf-idf", weight_tfidf(counts, normalize=False)),
    ("log-entropy", weight_logentropy(counts, normalize=False)),
):
    print(f"\n{name} (no row normalization):")
    print(weighted.weights.toarray())

# "todo" appears three times but only in one document: log-entropy keeps its
# global factor at 1. "frees" is split across two documents and is
# discounted. Unit-normalized rows are what the classifiers usually see:
normalized = weight_logentropy(counts, normalize=True)
print("\nlog-entropy, L2-normalized rows:")
print(normalized.weights.toarray())
print("row norms:", np.sqrt((normalized.weights.toarray() ** 2).sum(axis=1)))
