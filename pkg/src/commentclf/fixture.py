"""Deterministic synthetic corpus for tests, demos, and offline CI.

The generator draws comments and code snippets from small phrase pools with
a seeded generator, so the corpus is reproducible byte for byte. Useful
comments describe behavior ("validates the buffer before the copy loop");
not-useful ones are noise markers and vague filler ("todo temporary hack").

With ``separable=True`` the class marker pools never cross, which makes the
corpus linearly separable by construction; the default draws a fraction of
comments from the opposite class's pools (label noise), so cross-validated
metrics land in a realistic band instead of at 1.0.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import Corpus, Label, LabeledExample, load_csv, save_csv

_USEFUL_VERBS = (
    "returns", "computes", "validates", "allocates", "releases",
    "tracks", "clamps", "resets", "guards", "rewinds",
)

_NOISE_MARKERS = (
    "todo", "fixme", "hack", "wip", "xxx", "tbd",
)

_SUBJECTS = (
    "buffer", "index", "pointer", "counter", "flag",
    "cache", "node", "queue", "offset", "handle",
)

_TAILS = (
    "before the copy loop", "for the retry path", "when the socket closes",
    "after the resize", "on overflow", "for each request",
    "during shutdown", "in the fast path", "under the lock", "per iteration",
)

_FILLER = (
    "old code", "do not touch", "temporary workaround", "left for reference",
    "magic numbers here", "see above", "misc cleanup", "copied from forum",
    "debug leftovers", "maybe unused",
)

_CODE_TEMPLATES = (
    "int {a} = {n};",
    "if ({a} > {n}) {{ grow({b}); }}",
    "{a} = realloc({a}, {n} * size);",
    "for (i = 0; i < {n}; i++) {a}[i] = 0;",
    "free({a}); {a} = NULL;",
    "memcpy({a}, {b}, {n});",
    "return {a} - {b};",
    "while ({a}--) push({b});",
    "assert({a} != NULL);",
    "{a} += {b} << {n};",
    "lock(&{a}); {b}++; unlock(&{a});",
    "if (!{a}) return -{n};",
)


def generate_fixture_corpus(
    n_examples: int = 200,
    seed: int = 7,
    separable: bool = False,
) -> Corpus:
    """Generate a labeled synthetic corpus; identical output for identical inputs."""
    if n_examples < 4:
        raise ValueError("n_examples must be >= 4")
    rng = np.random.default_rng(seed)
    pick = lambda pool: pool[int(rng.integers(0, len(pool)))]
    examples = []
    for i in range(n_examples):
        useful = bool(rng.random() < 0.55)
        # Label noise: a slice of comments reads like the other class.
        sounds_useful = useful if separable or rng.random() >= 0.12 else not useful
        if sounds_useful:
            comment = f"{pick(_USEFUL_VERBS)} the {pick(_SUBJECTS)} {pick(_TAILS)}"
        else:
            comment = f"{pick(_NOISE_MARKERS)} {pick(_FILLER)}"
        if rng.random() < 0.05:
            code = ""
        else:
            code = pick(_CODE_TEMPLATES).format(
                a=pick(_SUBJECTS), b=pick(_SUBJECTS), n=int(rng.integers(1, 64))
            )
        examples.append(
            LabeledExample(
                id=i,
                comment_text=comment,
                code_text=code,
                label=Label.USEFUL if useful else Label.NOT_USEFUL,
            )
        )
    return Corpus(examples=tuple(examples), labeled=True, has_code=True)


def useful_marker_terms() -> frozenset[str]:
    """Tokens that only occur in Useful comments of a separable fixture."""
    return frozenset(_USEFUL_VERBS)


def noise_marker_terms() -> frozenset[str]:
    """Tokens that only occur in NotUseful comments of a separable fixture."""
    return frozenset(_NOISE_MARKERS)


def write_fixture_csv(path: str | Path, n_examples: int = 200, seed: int = 7,
                      separable: bool = False) -> None:
    save_csv(generate_fixture_corpus(n_examples, seed, separable), path)


def fixture_corpus_path() -> Path:
    """Path of the corpus CSV bundled with the package."""
    return Path(resources.files("commentclf").joinpath("data/fixture_corpus.csv"))


def load_fixture_corpus() -> Corpus:
    return load_csv(fixture_corpus_path())
