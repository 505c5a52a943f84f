"""commentclf: relevance classification for source-code comments.

Pipeline stages, each usable on its own:

* :mod:`commentclf.corpus` - CSV loading, labels, text views
* :mod:`commentclf.features` - tokenization, vocabularies, tf-idf and
  log-entropy weighting
* :mod:`commentclf.selection` - chi-square / mutual-information term scores
* :mod:`commentclf.classifiers` - logistic regression, linear SVM, random
  forest
* :mod:`commentclf.evaluation` - stratified k-fold cross-validation and
  metric reports
* :mod:`commentclf.pipeline` - end-to-end pipelines and the run registry
"""

from . import errors
from .classifiers import (
    ForestHyper,
    ForestModel,
    LinearModel,
    LogRegHyper,
    SvmHyper,
    TrainedModel,
    decision_scores,
    model_from_dict,
    predict_labels,
    train_linear_svm,
    train_logreg,
    train_random_forest,
)
from .corpus import (
    ColumnMapping,
    Corpus,
    Label,
    LabeledExample,
    Stats,
    TextView,
    ViewMode,
    corpus_stats,
    extract_view,
    label_surface,
    load_csv,
    parse_label,
    read_predictions,
    save_csv,
    write_predictions,
)
from .evaluation import (
    AggregateMetrics,
    ConfusionCounts,
    CvReport,
    FoldPlan,
    MetricsReport,
    compute_metrics,
    cross_validate,
    render_report,
    stratified_folds,
)
from .features import (
    DocTermMatrix,
    LogEntropyWeighter,
    TfidfWeighter,
    TokenizerConfig,
    Vocabulary,
    WeightedMatrix,
    build_vocabulary,
    count_matrix,
    load_matrix_triplets,
    save_matrix_triplets,
    tokenize,
    weight_logentropy,
    weight_tfidf,
)
from .fixture import (
    fixture_corpus_path,
    generate_fixture_corpus,
    load_fixture_corpus,
    write_fixture_csv,
)
from .pipeline import (
    FittedPipeline,
    RunConfig,
    SelectionSpec,
    build_run_registry,
    config_hash,
    custom_run_config,
    describe_run,
    fit_pipeline,
    get_run,
)
from .selection import (
    SelectedTerms,
    TermScores,
    chi2_scores,
    mi_scores,
    project_matrix,
    select_top_k,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Label",
    "ViewMode",
    "ColumnMapping",
    "LabeledExample",
    "Corpus",
    "TextView",
    "Stats",
    "load_csv",
    "save_csv",
    "extract_view",
    "corpus_stats",
    "parse_label",
    "label_surface",
    "write_predictions",
    "read_predictions",
    "TokenizerConfig",
    "tokenize",
    "Vocabulary",
    "build_vocabulary",
    "DocTermMatrix",
    "WeightedMatrix",
    "count_matrix",
    "weight_tfidf",
    "weight_logentropy",
    "TfidfWeighter",
    "LogEntropyWeighter",
    "save_matrix_triplets",
    "load_matrix_triplets",
    "TermScores",
    "SelectedTerms",
    "chi2_scores",
    "mi_scores",
    "select_top_k",
    "project_matrix",
    "TrainedModel",
    "LinearModel",
    "ForestModel",
    "LogRegHyper",
    "SvmHyper",
    "ForestHyper",
    "train_logreg",
    "train_linear_svm",
    "train_random_forest",
    "predict_labels",
    "decision_scores",
    "model_from_dict",
    "FoldPlan",
    "ConfusionCounts",
    "MetricsReport",
    "AggregateMetrics",
    "CvReport",
    "stratified_folds",
    "compute_metrics",
    "cross_validate",
    "render_report",
    "RunConfig",
    "SelectionSpec",
    "FittedPipeline",
    "fit_pipeline",
    "build_run_registry",
    "get_run",
    "describe_run",
    "custom_run_config",
    "config_hash",
    "generate_fixture_corpus",
    "write_fixture_csv",
    "fixture_corpus_path",
    "load_fixture_corpus",
    "__version__",
]
