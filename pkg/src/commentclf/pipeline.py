"""End-to-end training pipelines and the registry of preconfigured runs.

A fitted pipeline bundles everything needed to reproduce predictions:
tokenizer settings, the training vocabulary, fitted weighting statistics,
the optional term selection, and the trained classifier. Saving and
reloading a pipeline yields bit-identical predictions.

The registry ships five runs. Runs 1-3 are native bag-of-words pipelines;
runs 4-5 are transformer fine-tuning configurations executed by the
separate ``commentclf-finetune`` component over a subprocess boundary.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .classifiers import (
    ForestHyper,
    LogRegHyper,
    SvmHyper,
    TrainedModel,
    model_from_dict,
    train_linear_svm,
    train_logreg,
    train_random_forest,
)
from .corpus import Corpus, Label, ViewMode, extract_view
from .errors import MalformedCsv, SchemaMismatch, UnknownRun
from .features import (
    TokenizerConfig,
    Vocabulary,
    build_vocabulary,
    count_matrix,
    make_weighter,
    tokenize,
    weighter_from_dict,
)
from .selection import (
    CHI2,
    MUTUAL_INFORMATION,
    SelectedTerms,
    chi2_scores,
    mi_scores,
    project_matrix,
    select_top_k,
)

TRANSFORMER = "transformer"
FINETUNE_COMMAND = "commentclf-finetune"


@dataclass(frozen=True)
class SelectionSpec:
    method: str  # "chi2" | "mi"
    k: int


@dataclass(frozen=True)
class RunConfig:
    name: str
    view: ViewMode
    classifier: str  # "logreg" | "svm" | "rf" | "transformer"
    weighting: str | None = None  # "tfidf" | "logentropy"; None for transformer runs
    normalize: bool = True
    selection: SelectionSpec | None = None
    hyper: dict = field(default_factory=dict)
    annotations: dict = field(default_factory=dict)  # recorded verbatim, never read
    tokenizer: TokenizerConfig = TokenizerConfig()
    min_df: int = 1
    seed: int = 13

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "view": self.view.value,
            "classifier": self.classifier,
            "weighting": self.weighting,
            "normalize": self.normalize,
            "selection": None
            if self.selection is None
            else {"method": self.selection.method, "k": self.selection.k},
            "hyper": dict(self.hyper),
            "annotations": dict(self.annotations),
            "tokenizer": {
                "lowercase": self.tokenizer.lowercase,
                "stopwords": sorted(self.tokenizer.stopwords),
            },
            "min_df": self.min_df,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RunConfig":
        sel = payload.get("selection")
        tok = payload.get("tokenizer", {})
        return cls(
            name=payload["name"],
            view=ViewMode(payload["view"]),
            classifier=payload["classifier"],
            weighting=payload.get("weighting"),
            normalize=bool(payload.get("normalize", True)),
            selection=None if sel is None else SelectionSpec(method=sel["method"], k=int(sel["k"])),
            hyper=dict(payload.get("hyper", {})),
            annotations=dict(payload.get("annotations", {})),
            tokenizer=TokenizerConfig(
                lowercase=bool(tok.get("lowercase", True)),
                stopwords=frozenset(tok.get("stopwords", ())),
            ),
            min_df=int(payload.get("min_df", 1)),
            seed=int(payload.get("seed", 13)),
        )


def config_hash(config: RunConfig) -> str:
    """Stable digest of the full configuration, for report provenance."""
    canonical = json.dumps(config.to_dict(), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def build_run_registry() -> dict[str, RunConfig]:
    """The five preconfigured runs, keyed by name."""
    bow_selection = SelectionSpec(method=CHI2, k=3000)
    forest_hyper = {"n_trees": 50}
    registry = {
        "run1": RunConfig(
            name="run1",
            view=ViewMode.COMMENTS_ONLY,
            classifier="rf",
            weighting="tfidf",
            selection=bow_selection,
            hyper=dict(forest_hyper),
        ),
        "run2": RunConfig(
            name="run2",
            view=ViewMode.COMMENTS_ONLY,
            classifier="svm",
            weighting="logentropy",
            selection=bow_selection,
            hyper={"cost_c": 1.0},
            annotations={"gamma": "scale (inert: linear kernel ignores gamma)"},
        ),
        "run3": RunConfig(
            name="run3",
            view=ViewMode.COMMENTS_ONLY,
            classifier="rf",
            weighting="logentropy",
            selection=bow_selection,
            hyper=dict(forest_hyper),
        ),
        "run4": RunConfig(
            name="run4",
            view=ViewMode.CODE_AND_COMMENTS,
            classifier=TRANSFORMER,
            weighting=None,
            selection=None,
            hyper={
                "preset": "albert",
                "epochs": 18,
                "warmup_steps": 500,
                "max_seq_len": 432,
                "batch_size": 4,
                "weight_decay": 0.01,
            },
        ),
        "run5": RunConfig(
            name="run5",
            view=ViewMode.CODE_AND_COMMENTS,
            classifier=TRANSFORMER,
            weighting=None,
            selection=None,
            hyper={
                "preset": "roberta",
                "epochs": 38,
                "warmup_steps": 500,
                "max_seq_len": 432,
                "batch_size": 4,
                "weight_decay": 0.01,
            },
        ),
    }
    return registry


def get_run(name: str) -> RunConfig:
    registry = build_run_registry()
    try:
        return registry[name]
    except KeyError:
        known = ", ".join(sorted(registry))
        raise UnknownRun(f"unknown run {name!r}; registry: {known}") from None


def describe_run(config: RunConfig) -> str:
    """One-line summary with every hyperparameter spelled out."""
    parts = [f"{config.name}: view={config.view.value}"]
    if config.classifier == TRANSFORMER:
        h = config.hyper
        parts.append(
            "classifier=transformer "
            f"(preset={h['preset']}, epochs={h['epochs']}, warmup={h['warmup_steps']}, "
            f"max_len={h['max_seq_len']}, batch_size={h['batch_size']}, "
            f"weight_decay={h['weight_decay']})"
        )
        parts.append(f"[delegated to {FINETUNE_COMMAND}]")
    else:
        parts.append(f"weighting={config.weighting}")
        if config.classifier == "rf":
            trees = config.hyper.get("n_trees", ForestHyper.n_trees)
            parts.append(f"classifier=rf (sm=information_gain, #trees={trees})")
        elif config.classifier == "svm":
            c = config.hyper.get("cost_c", SvmHyper.cost_c)
            extra = ""
            if "gamma" in config.annotations:
                extra = f", gamma={config.annotations['gamma']}"
            parts.append(f"classifier=svm (linear kernel, C={c:g}{extra})")
        else:
            l2 = config.hyper.get("l2_strength", LogRegHyper.l2_strength)
            parts.append(f"classifier=logreg (l2_strength={l2:g})")
        if config.selection is not None:
            parts.append(f"select: #terms={config.selection.k}, {config.selection.method}")
    parts.append(f"seed={config.seed}")
    return " ".join(parts)


def _train_classifier(config: RunConfig, X, labels) -> TrainedModel:
    h = config.hyper
    if config.classifier == "logreg":
        hyper = LogRegHyper(
            l2_strength=float(h.get("l2_strength", 1.0)),
            max_iters=int(h.get("max_iters", 1000)),
            tol=float(h.get("tol", 1e-6)),
            seed=config.seed,
        )
        return train_logreg(X, labels, hyper)
    if config.classifier == "svm":
        hyper = SvmHyper(
            cost_c=float(h.get("cost_c", 1.0)),
            max_iters=int(h.get("max_iters", 200_000)),
            tol=float(h.get("tol", 1e-6)),
            seed=config.seed,
        )
        return train_linear_svm(X, labels, hyper)
    if config.classifier == "rf":
        hyper = ForestHyper(
            n_trees=int(h.get("n_trees", 50)),
            min_samples_split=int(h.get("min_samples_split", 2)),
            seed=config.seed,
        )
        return train_random_forest(X, labels, hyper)
    raise ValueError(f"classifier {config.classifier!r} is not trained natively")


def _check_view(corpus: Corpus, config: RunConfig) -> None:
    if config.view is ViewMode.CODE_AND_COMMENTS and not corpus.has_code:
        raise SchemaMismatch(
            "configuration uses the code+comments view but the corpus has no code column"
        )


class FittedPipeline:
    """A trained end-to-end pipeline, reusable for prediction."""

    def __init__(self, config: RunConfig, vocabulary: Vocabulary, weighter,
                 selection: SelectedTerms | None, model: TrainedModel):
        self.config = config
        self.vocabulary = vocabulary
        self.weighter = weighter
        self.selection = selection
        self.model = model

    def transform(self, corpus: Corpus):
        """Map a corpus into the feature space the classifier was trained on."""
        _check_view(corpus, self.config)
        docs = extract_view(corpus, self.config.view).documents
        tokenized = [tokenize(d, self.config.tokenizer) for d in docs]
        counts = count_matrix(tokenized, self.vocabulary)
        weighted = self.weighter.transform(counts)
        if self.selection is not None:
            return project_matrix(weighted, self.selection)
        return weighted

    def predict(self, corpus: Corpus) -> list[Label]:
        return self.model.predict(self.transform(corpus))

    def decision_scores(self, corpus: Corpus):
        return self.model.decision_scores(self.transform(corpus))

    def to_dict(self) -> dict:
        return {
            "format": "commentclf-pipeline",
            "version": 1,
            "config": self.config.to_dict(),
            "vocabulary": {"min_df": self.vocabulary.min_df, "terms": list(self.vocabulary.terms)},
            "weighter": self.weighter.to_dict(),
            "selection": None if self.selection is None else json.loads(self.selection.to_json()),
            "model": self.model.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FittedPipeline":
        if payload.get("format") != "commentclf-pipeline":
            raise MalformedCsv("not a commentclf pipeline file")
        sel = payload.get("selection")
        return cls(
            config=RunConfig.from_dict(payload["config"]),
            vocabulary=Vocabulary(
                terms=tuple(payload["vocabulary"]["terms"]),
                min_df=int(payload["vocabulary"]["min_df"]),
            ),
            weighter=weighter_from_dict(payload["weighter"]),
            selection=None if sel is None else SelectedTerms.from_json(json.dumps(sel)),
            model=model_from_dict(payload["model"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "FittedPipeline":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def fit_pipeline(corpus: Corpus, config: RunConfig) -> FittedPipeline:
    """Fit vocabulary, weighting, selection, and classifier on one corpus.

    Order of operations: tokenize, build vocabulary (min_df), count, weight
    (with optional row normalization), score and select terms, project,
    train. Row norms are taken before column selection.
    """
    if config.classifier == TRANSFORMER:
        raise ValueError(
            f"{config.name} is a transformer run; it is delegated to {FINETUNE_COMMAND}"
        )
    if config.weighting is None:
        raise ValueError("native runs need a weighting scheme")
    _check_view(corpus, config)
    labels = corpus.labels()
    docs = extract_view(corpus, config.view).documents
    tokenized = [tokenize(d, config.tokenizer) for d in docs]
    vocab = build_vocabulary(tokenized, min_df=config.min_df)
    counts = count_matrix(tokenized, vocab)
    weighter = make_weighter(config.weighting, normalize=config.normalize)
    weighted = weighter.fit_transform(counts)
    selection = None
    features = weighted
    if config.selection is not None:
        if config.selection.method == CHI2:
            scores = chi2_scores(weighted, labels)
        elif config.selection.method == MUTUAL_INFORMATION:
            scores = mi_scores(counts, labels)
        else:
            raise ValueError(f"unknown selection method {config.selection.method!r}")
        selection = select_top_k(scores, vocab, config.selection.k)
        features = project_matrix(weighted, selection)
    model = _train_classifier(config, features, labels)
    return FittedPipeline(
        config=config,
        vocabulary=vocab,
        weighter=weighter,
        selection=selection,
        model=model,
    )


def custom_run_config(
    name: str,
    view: str,
    weighting: str,
    classifier: str,
    selection_method: str | None = None,
    k_terms: int | None = None,
    normalize: bool = True,
    min_df: int = 1,
    seed: int = 13,
    hyper: dict | None = None,
) -> RunConfig:
    """Build a one-off RunConfig from CLI-style string arguments."""
    selection = None
    if selection_method is not None:
        if k_terms is None:
            raise ValueError("--select needs --k-terms")
        selection = SelectionSpec(method=selection_method, k=int(k_terms))
    return RunConfig(
        name=name,
        view=ViewMode(view),
        classifier=classifier,
        weighting=weighting,
        normalize=normalize,
        selection=selection,
        hyper=dict(hyper or {}),
        min_df=min_df,
        seed=seed,
    )


def with_seed(config: RunConfig, seed: int) -> RunConfig:
    return replace(config, seed=seed)
