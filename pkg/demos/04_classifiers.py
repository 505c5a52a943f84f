# The three native classifiers on the same features.
#
# All three expose the same surface: train on a matrix plus labels, then
# predict labels or inspect raw decision scores. Linear models threshold
# w.x + b at zero; the forest thresholds its Useful-vote fraction at 0.5
# (ties go to NotUseful).

import numpy as np

from commentclf import (
    ForestHyper,
    ViewMode,
    build_vocabulary,
    compute_metrics,
    count_matrix,
    decision_scores,
    extract_view,
    predict_labels,
    tokenize,
    train_linear_svm,
    train_logreg,
    train_random_forest,
    weight_tfidf,
)
from commentclf.fixture import load_fixture_corpus

corpus = load_fixture_corpus()
docs = [tokenize(d) for d in extract_view(corpus, ViewMode.COMMENTS_ONLY).documents]
vocab = build_vocabulary(docs, min_df=1)
X = weight_tfidf(count_matrix(docs, vocab), normalize=True)
y = corpus.labels()

models = {
    "logistic regression": train_logreg(X, y),
    "linear svm": train_linear_svm(X, y),
    "random forest": train_random_forest(X, y, ForestHyper(n_trees=50, seed=13)),
}

print("training-set metrics (fit and scored on the same data):\n")
for name, model in models.items():
    metrics = compute_metrics(predict_labels(model, X), y)
    print(
        f"  {name:<20} acc={metrics.accuracy:.3f} "
        f"p={metrics.precision:.3f} r={metrics.recall:.3f} f1={metrics.f1:.3f}"
    )

# Decision scores are the raw quantity behind each prediction.
svm = models["linear svm"]
scores = decision_scores(svm, X)
print("\nsvm decision scores: min", round(float(np.min(scores)), 3),
      "max", round(float(np.max(scores)), 3))

# Determinism: same seed, same forest, bit for bit.
again = train_random_forest(X, y, ForestHyper(n_trees=50, seed=13))
print("forest reproducible:", again.to_dict() == models["random forest"].to_dict())
