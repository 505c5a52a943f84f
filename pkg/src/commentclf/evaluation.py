"""Stratified cross-validation, confusion metrics, and report rendering.

Folds partition the corpus with per-class counts differing by at most one.
All fold-level fitting (vocabulary, weighting statistics, term selection,
classifier) happens on the training split only; the held-out fold is never
seen before scoring, so reports are leakage-free by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

import numpy as np

from .corpus import Corpus, Label
from .errors import EmptyReport, FoldInfeasible, LengthMismatch
from .pipeline import FittedPipeline, RunConfig, config_hash, fit_pipeline

REPORT_FORMATS = ("table", "json", "csv")


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    assignments: tuple[int, ...]

    def fold_indices(self, fold: int) -> tuple[np.ndarray, np.ndarray]:
        """(train, test) example indices for one fold, in corpus order."""
        marks = np.asarray(self.assignments)
        test = np.flatnonzero(marks == fold)
        train = np.flatnonzero(marks != fold)
        return train, test


def stratified_folds(labels: Sequence[Label], k: int = 10, seed: int = 0) -> FoldPlan:
    """Assign every example to one of ``k`` folds, stratified by class.

    Within each class the examples are shuffled with the seeded generator
    and dealt round-robin, which keeps per-class fold counts within one of
    each other. Requires at least ``k`` examples of each class.
    """
    if k < 2:
        raise FoldInfeasible("k must be >= 2")
    rng = np.random.default_rng(seed)
    assignments = np.full(len(labels), -1, dtype=np.int64)
    for cls in (Label.NOT_USEFUL, Label.USEFUL):
        idx = np.flatnonzero(np.fromiter((lab is cls for lab in labels), dtype=bool))
        if idx.size < k:
            raise FoldInfeasible(
                f"class {cls.value} has {idx.size} examples, fewer than k={k}"
            )
        shuffled = rng.permutation(idx)
        assignments[shuffled] = np.arange(idx.size) % k
    return FoldPlan(k=k, seed=seed, assignments=tuple(int(a) for a in assignments))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    confusion: ConfusionCounts
    accuracy: float
    precision: float
    recall: float
    f1: float
    positive_class: Label = Label.USEFUL

    @classmethod
    def from_counts(cls, cc: ConfusionCounts, positive: Label = Label.USEFUL) -> "MetricsReport":
        total = cc.total
        accuracy = (cc.tp + cc.tn) / total if total else 0.0
        precision = cc.tp / (cc.tp + cc.fp) if (cc.tp + cc.fp) else 0.0
        recall = cc.tp / (cc.tp + cc.fn) if (cc.tp + cc.fn) else 0.0
        f1 = 2.0 * precision * recall / (precision + recall) if (precision + recall) else 0.0
        return cls(
            confusion=cc,
            accuracy=accuracy,
            precision=precision,
            recall=recall,
            f1=f1,
            positive_class=positive,
        )

    def to_dict(self) -> dict:
        return {
            "positive_class": self.positive_class.value,
            "confusion": {
                "tp": self.confusion.tp,
                "fp": self.confusion.fp,
                "fn": self.confusion.fn,
                "tn": self.confusion.tn,
            },
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def compute_metrics(
    predicted: Sequence[Label],
    gold: Sequence[Label],
    positive: Label = Label.USEFUL,
) -> MetricsReport:
    """Confusion counts and accuracy/precision/recall/F1 for ``positive``."""
    if len(predicted) != len(gold):
        raise LengthMismatch(
            f"{len(predicted)} predictions vs {len(gold)} gold labels"
        )
    if not predicted:
        raise LengthMismatch("cannot score zero examples")
    tp = fp = fn = tn = 0
    for p, g in zip(predicted, gold):
        if p is positive:
            if g is positive:
                tp += 1
            else:
                fp += 1
        else:
            if g is positive:
                fn += 1
            else:
                tn += 1
    return MetricsReport.from_counts(ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn), positive)


@dataclass(frozen=True)
class AggregateMetrics:
    """Arithmetic fold means; F1 here is the mean of fold F1s, not a harmonic mean."""

    accuracy: float
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


@dataclass(frozen=True, eq=False)
class CvReport:
    run_name: str
    config_digest: str
    seed: int
    plan: FoldPlan
    per_fold: tuple[MetricsReport, ...]
    macro: AggregateMetrics
    pooled: MetricsReport
    fold_pipelines: tuple[FittedPipeline, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "format": "commentclf-cv-report",
            "version": 1,
            "run": self.run_name,
            "config_hash": self.config_digest,
            "seed": self.seed,
            "k": self.plan.k,
            "per_fold": [m.to_dict() for m in self.per_fold],
            "macro": self.macro.to_dict(),
            "pooled": self.pooled.to_dict(),
        }


def cross_validate(
    corpus: Corpus,
    config: RunConfig,
    k: int = 10,
    seed: int | None = None,
    keep_fold_pipelines: bool = False,
) -> CvReport:
    """Run stratified k-fold cross-validation of one pipeline configuration.

    Every example is scored exactly once. ``macro`` averages the per-fold
    metrics; ``pooled`` recomputes them over the concatenated predictions.
    """
    gold = corpus.labels()
    fold_seed = config.seed if seed is None else seed
    plan = stratified_folds(gold, k=k, seed=fold_seed)
    per_fold: list[MetricsReport] = []
    pipelines: list[FittedPipeline] = []
    pooled_pred: list[Label | None] = [None] * len(corpus)
    for fold in range(k):
        train_idx, test_idx = plan.fold_indices(fold)
        pipe = fit_pipeline(corpus.subset(train_idx), config)
        predictions = pipe.predict(corpus.subset(test_idx))
        for local, global_i in enumerate(test_idx):
            pooled_pred[int(global_i)] = predictions[local]
        per_fold.append(
            compute_metrics(predictions, [gold[int(i)] for i in test_idx])
        )
        if keep_fold_pipelines:
            pipelines.append(pipe)
    macro = AggregateMetrics(
        accuracy=float(np.mean([m.accuracy for m in per_fold])),
        precision=float(np.mean([m.precision for m in per_fold])),
        recall=float(np.mean([m.recall for m in per_fold])),
        f1=float(np.mean([m.f1 for m in per_fold])),
    )
    pooled = compute_metrics(pooled_pred, gold)
    return CvReport(
        run_name=config.name,
        config_digest=config_hash(config),
        seed=fold_seed,
        plan=plan,
        per_fold=tuple(per_fold),
        macro=macro,
        pooled=pooled,
        fold_pipelines=tuple(pipelines) if keep_fold_pipelines else None,
    )


def _round2(value: float) -> str:
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _rows_for(name: str, report) -> list[tuple[str, float, float, float, float]]:
    if isinstance(report, CvReport):
        return [
            (f"{name} [pooled]", report.pooled.accuracy, report.pooled.precision,
             report.pooled.recall, report.pooled.f1),
            (f"{name} [macro]", report.macro.accuracy, report.macro.precision,
             report.macro.recall, report.macro.f1),
        ]
    return [(name, report.accuracy, report.precision, report.recall, report.f1)]


def render_report(reports, fmt: str = "table") -> str:
    """Format named reports as a markdown table, JSON, or CSV.

    Table cells are rounded half-up to two decimals; JSON and CSV keep full
    precision.
    """
    if isinstance(reports, Mapping):
        entries = list(reports.items())
    else:
        entries = list(reports)
    if not entries:
        raise EmptyReport("nothing to render")
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"format must be one of {REPORT_FORMATS}")

    if fmt == "json":
        payload = {
            "format": "commentclf-report",
            "version": 1,
            "reports": {name: rep.to_dict() for name, rep in entries},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    rows: list[tuple[str, float, float, float, float]] = []
    for name, rep in entries:
        rows.extend(_rows_for(name, rep))
    if fmt == "csv":
        lines = ["name,accuracy,precision,recall,f1"]
        for name, acc, prec, rec, f1 in rows:
            lines.append(f"{name},{acc!r},{prec!r},{rec!r},{f1!r}")
        return "\n".join(lines) + "\n"

    lines = [
        "| Run | Accuracy | Precision | Recall | F1 |",
        "|---|---|---|---|---|",
    ]
    for name, acc, prec, rec, f1 in rows:
        lines.append(
            f"| {name} | {_round2(acc)} | {_round2(prec)} | {_round2(rec)} | {_round2(f1)} |"
        )
    return "\n".join(lines) + "\n"
