# Persisting a fitted pipeline and getting identical predictions back.
#
# A pipeline file is one JSON document holding the tokenizer settings, the
# vocabulary, the fitted weighting statistics, the term selection, and the
# trained model. Reloading it reproduces predictions exactly, which is what
# makes the CLI's fit-full / predict split safe.

import tempfile
from pathlib import Path

from commentclf import FittedPipeline, custom_run_config, fit_pipeline
from commentclf.fixture import load_fixture_corpus

corpus = load_fixture_corpus()
config = custom_run_config(
    "demo", "comments", "logentropy", "svm",
    selection_method="chi2", k_terms=50, seed=29,
)
pipeline = fit_pipeline(corpus, config)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "pipeline.json"
    pipeline.save(path)
    print(f"saved {path.stat().st_size} bytes")

    clone = FittedPipeline.load(path)
    same = clone.predict(corpus) == pipeline.predict(corpus)
    print("reloaded predictions identical:", same)
    print("selected terms preserved:", clone.selection.terms == pipeline.selection.terms)
