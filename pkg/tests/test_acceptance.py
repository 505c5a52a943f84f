"""Acceptance gate: every criterion prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute. The corpus-reproduction criterion runs against the real
shared-task training CSV when one is provided (COMMENTCLF_IRSE_TRAIN
environment variable or data/irse_train.csv next to the repo root);
otherwise the bundled synthetic fixture property suite runs instead and
must pass unconditionally.
"""

import functools
import os
import time
from pathlib import Path

import numpy as np
import pytest

from commentclf import (
    ForestHyper,
    Label,
    LogRegHyper,
    build_run_registry,
    compute_metrics,
    count_matrix,
    cross_validate,
    custom_run_config,
    decision_scores,
    fit_pipeline,
    generate_fixture_corpus,
    get_run,
    load_csv,
    predict_labels,
    render_report,
    stratified_folds,
    train_linear_svm,
    train_logreg,
    train_random_forest,
    weight_logentropy,
    weight_tfidf,
)
from commentclf.classifiers import logistic_gradient, logistic_objective
from commentclf.cli import main as cli_main
from commentclf.fixture import fixture_corpus_path
from conftest import random_count_corpus, random_labels
from oracles import (
    chi2_reference,
    logentropy_reference,
    mi_reference,
    tfidf_reference,
)

U, N = Label.USEFUL, Label.NOT_USEFUL

PUBLISHED_PR_F1_ROWS = [
    (0.71, 0.62, 0.67),
    (0.73, 0.65, 0.69),
    (0.72, 0.63, 0.67),
    (0.71, 0.73, 0.72),
    (0.72, 0.65, 0.68),
    (0.71, 0.70, 0.71),
    (0.56, 0.66, 0.61),
    (0.54, 0.84, 0.66),
    (0.54, 0.87, 0.67),
]


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE FAIL - {name}")
                raise
            print(f"ACCEPTANCE PASS - {name}")

        return wrapper

    return decorate


@criterion("weighting oracle equivalence (tf-idf, log-entropy; atol 1e-9; < 5 s)")
def test_weighting_oracle_equivalence():
    rng = np.random.default_rng(910)
    started = time.monotonic()
    for _ in range(25):
        dense, docs, vocab = random_count_corpus(rng, max_docs=10, max_terms=15)
        m = count_matrix(docs, vocab)
        for normalize in (False, True):
            np.testing.assert_allclose(
                weight_tfidf(m, normalize).weights.toarray(),
                tfidf_reference(dense.tolist(), normalize),
                atol=1e-9, rtol=0,
            )
            np.testing.assert_allclose(
                weight_logentropy(m, normalize).weights.toarray(),
                logentropy_reference(dense.tolist(), normalize),
                atol=1e-9, rtol=0,
            )
    assert time.monotonic() - started < 5.0


@criterion("selection oracle equivalence and exact label-swap symmetry")
def test_selection_oracle_equivalence():
    from commentclf import chi2_scores, mi_scores

    rng = np.random.default_rng(911)
    for _ in range(25):
        dense, docs, vocab = random_count_corpus(rng, max_docs=10, max_terms=15)
        labels = random_labels(rng, dense.shape[0])
        m = count_matrix(docs, vocab)
        pos = [lab is U for lab in labels]
        np.testing.assert_allclose(
            chi2_scores(m, labels).scores, chi2_reference(dense.tolist(), pos),
            atol=1e-9, rtol=0,
        )
        np.testing.assert_allclose(
            mi_scores(m, labels).scores, mi_reference(dense.tolist(), pos),
            atol=1e-9, rtol=0,
        )
        swapped = [N if lab is U else U for lab in labels]
        assert np.array_equal(
            chi2_scores(m, labels).scores, chi2_scores(m, swapped).scores
        )
        assert np.array_equal(
            mi_scores(m, labels).scores, mi_scores(m, swapped).scores
        )


@criterion("metric identities on 1000 random confusions and published P/R/F1 rows")
def test_metric_identities():
    rng = np.random.default_rng(912)
    for _ in range(1000):
        tp, fp, fn, tn = (int(v) for v in rng.integers(0, 40, size=4))
        if tp + fp + fn + tn == 0:
            tp = 1
        predicted = [U] * (tp + fp) + [N] * (fn + tn)
        gold = [U] * tp + [N] * fp + [U] * fn + [N] * tn
        rep = compute_metrics(predicted, gold)
        total = tp + fp + fn + tn
        assert rep.confusion.total == total
        assert rep.accuracy == pytest.approx((tp + tn) / total, abs=1e-12)
        assert rep.precision == pytest.approx(tp / (tp + fp) if tp + fp else 0.0, abs=1e-12)
        assert rep.recall == pytest.approx(tp / (tp + fn) if tp + fn else 0.0, abs=1e-12)
        p, r = rep.precision, rep.recall
        assert rep.f1 == pytest.approx(2 * p * r / (p + r) if p + r else 0.0, abs=1e-12)
    # harmonic-mean identity reproduces each published F1 at press rounding
    for p, r, f1 in PUBLISHED_PR_F1_ROWS:
        assert 2 * p * r / (p + r) == pytest.approx(f1, abs=0.01)
    assert 2 * 0.71 * 0.73 / (0.71 + 0.73) == pytest.approx(0.72, abs=0.01)
    assert 2 * 0.54 * 0.87 / (0.54 + 0.87) == pytest.approx(0.67, abs=0.01)


@criterion("classifier sanity: separable fits, margins, gradient check, forest determinism (< 30 s)")
def test_classifier_sanity():
    started = time.monotonic()
    rng = np.random.default_rng(913)

    # separable synthetic data in 3 dimensions
    n = 30
    X = rng.normal(size=(n, 3))
    X[: n // 2, 0] -= 3.0
    X[n // 2:, 0] += 3.0
    y = [N] * (n // 2) + [U] * (n // 2)
    yv = np.array([1.0 if lab is U else -1.0 for lab in y])

    lr = train_logreg(X, y, LogRegHyper(max_iters=2000))
    assert predict_labels(lr, X) == y

    svm = train_linear_svm(X, y)
    assert predict_labels(svm, X) == y
    margins = yv * decision_scores(svm, X)
    assert (margins >= 1.0 - 1e-6).all()

    # analytic gradient vs central finite differences, relative 1e-5
    for _ in range(5):
        nd, d = int(rng.integers(3, 9)), int(rng.integers(1, 5))
        Xg = rng.normal(size=(nd, d))
        yg = np.where(rng.random(nd) < 0.5, 1.0, -1.0)
        w = rng.normal(size=d)
        b = float(rng.normal())
        lam = float(rng.uniform(0.2, 2.0))
        gw, gb = logistic_gradient(w, b, Xg, yg, lam)
        eps = 1e-6
        for i in range(d):
            e = np.zeros(d)
            e[i] = eps
            num = (
                logistic_objective(w + e, b, Xg, yg, lam)
                - logistic_objective(w - e, b, Xg, yg, lam)
            ) / (2 * eps)
            assert gw[i] == pytest.approx(num, rel=1e-5, abs=1e-8)
        num_b = (
            logistic_objective(w, b + eps, Xg, yg, lam)
            - logistic_objective(w, b - eps, Xg, yg, lam)
        ) / (2 * eps)
        assert gb == pytest.approx(num_b, rel=1e-5, abs=1e-8)

    # forest: fixed seed -> bit-identical predictions across repeated runs
    Xf = rng.random((60, 6))
    Xf[:, 1] = np.repeat([0.0, 1.0], 30)
    yf = [N] * 30 + [U] * 30
    query = rng.random((40, 6))
    first = train_random_forest(Xf, yf, ForestHyper(seed=99))
    for _ in range(2):
        again = train_random_forest(Xf, yf, ForestHyper(seed=99))
        assert predict_labels(again, query) == predict_labels(first, query)
        assert np.array_equal(
            decision_scores(again, query), decision_scores(first, query)
        )
        assert again.to_dict() == first.to_dict()

    assert time.monotonic() - started < 30.0


@criterion("cross-validation properties: partition, stratification, pooled totals, no leakage")
def test_cv_properties():
    rng = np.random.default_rng(914)
    # stratified partition properties over random label vectors
    for _ in range(10):
        n_u = int(rng.integers(10, 40))
        n_n = int(rng.integers(10, 40))
        labels = [U] * n_u + [N] * n_n
        k = int(rng.integers(2, 11))
        plan = stratified_folds(labels, k=k, seed=int(rng.integers(0, 1000)))
        marks = np.asarray(plan.assignments)
        assert ((marks >= 0) & (marks < k)).all()
        covered = np.zeros(len(labels), dtype=bool)
        for fold in range(k):
            train_idx, test_idx = plan.fold_indices(fold)
            assert not covered[test_idx].any()
            covered[test_idx] = True
            assert np.array_equal(np.sort(np.concatenate([train_idx, test_idx])),
                                  np.arange(len(labels)))
        assert covered.all()
        for cls in (U, N):
            idx = [i for i, lab in enumerate(labels) if lab is cls]
            per_fold = np.bincount(marks[idx], minlength=k)
            assert per_fold.max() - per_fold.min() <= 1

    corpus = generate_fixture_corpus(n_examples=60, seed=17)
    config = custom_run_config("cv-accept", "comments", "tfidf", "logreg")
    report = cross_validate(corpus, config, k=5, seed=3, keep_fold_pipelines=True)
    assert report.pooled.confusion.total == len(corpus)
    assert len(report.per_fold) == 5

    # leakage check: refit with held-out fold removed from the universe
    for fold in range(5):
        train_idx, _ = report.plan.fold_indices(fold)
        refit = fit_pipeline(corpus.subset(train_idx), config)
        assert refit.to_dict() == report.fold_pipelines[fold].to_dict()


def _real_corpus_path() -> Path | None:
    env = os.environ.get("COMMENTCLF_IRSE_TRAIN")
    if env and Path(env).exists():
        return Path(env)
    local = Path(__file__).resolve().parents[1] / "data" / "irse_train.csv"
    if local.exists():
        return local
    return None


@criterion("corpus reproduction (real shared-task CSV if present, else fixture suite)")
def test_corpus_reproduction():
    real = _real_corpus_path()
    if real is not None:
        corpus = load_csv(real)
        targets = [
            (custom_run_config("tfidf-lr", "comments", "tfidf", "logreg"), 0.72),
            (custom_run_config("tfidf-svm", "comments", "tfidf", "svm"), 0.71),
            (custom_run_config("entropy-rf", "comments", "logentropy", "rf",
                               hyper={"n_trees": 50}), 0.69),
        ]
        for config, target in targets:
            report = cross_validate(corpus, config, k=10, seed=0)
            best = min(
                abs(report.pooled.f1 - target), abs(report.macro.f1 - target)
            )
            assert best <= 0.05, (config.name, report.pooled.f1, report.macro.f1)
        return

    # fixture substitute: the full property suite on the bundled corpus
    separable = generate_fixture_corpus(n_examples=200, seed=11, separable=True)
    config = custom_run_config("sep", "comments", "tfidf", "logreg")
    sep_report = cross_validate(separable, config, k=10, seed=1)
    assert sep_report.pooled.accuracy == 1.0

    fixture = load_csv(fixture_corpus_path())
    rendered = []
    for name in ("run1", "run2", "run3"):
        report = cross_validate(fixture, get_run(name), k=10)
        assert report.pooled.confusion.total == len(fixture)
        assert len(report.per_fold) == 10
        assert 0.5 < report.pooled.f1 <= 1.0
        rendered.append(render_report([(name, report)], fmt="json"))
    # determinism: repeating one run renders byte-identical output
    again = render_report(
        [("run1", cross_validate(fixture, get_run("run1"), k=10))], fmt="json"
    )
    assert again == rendered[0]


@criterion("run registry lists the published configurations and runs 1-3 execute end to end")
def test_run_registry(capsys, tmp_path):
    rc = cli_main(["runs", "list"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = [line for line in out.splitlines() if line.strip()]
    assert len(lines) == 5
    assert "#terms=3000, chi2" in lines[0]
    assert "C=1" in lines[1] and "gamma=scale" in lines[1]
    assert "#trees=50" in lines[0] and "#trees=50" in lines[2]
    assert "epochs=18" in lines[3] and "epochs=38" in lines[4]
    for expected in ("warmup=500", "max_len=432", "batch_size=4", "weight_decay=0.01"):
        assert expected in lines[3] and expected in lines[4]
    assert sorted(build_run_registry()) == ["run1", "run2", "run3", "run4", "run5"]

    # runs 1-3 end to end through the CLI on the bundled fixture: fit, predict, report
    fixture = str(fixture_corpus_path())
    for name in ("run1", "run2", "run3"):
        model = tmp_path / f"{name}.json"
        preds = tmp_path / f"{name}-preds.csv"
        assert cli_main(["run", "--name", name, "--train", fixture,
                         "--fit-full", "--out", str(model)]) == 0
        assert cli_main(["predict", "--model", str(model), "--test", fixture,
                         "--out", str(preds)]) == 0
        assert cli_main(["report", "--pred", str(preds), "--gold", fixture]) == 0
    capsys.readouterr()
