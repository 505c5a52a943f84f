"""Corpus loading, label parsing, and the two text views used downstream.

Loading is strict: schema problems, malformed rows, and unknown label
strings raise typed errors with row numbers instead of being repaired
silently. Corpora and views are immutable after construction.
"""

from __future__ import annotations

import csv
import enum
import io
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    EmptyCorpus,
    MalformedCsv,
    MissingColumn,
    UnlabeledCorpus,
    UnparsableLabel,
)
from .features import TokenizerConfig, tokenize


class Label(enum.Enum):
    """Binary relevance judgment for a comment."""

    USEFUL = "Useful"
    NOT_USEFUL = "NotUseful"


# Accepted input surfaces, after lowercasing and whitespace collapsing.
_LABEL_SURFACES = {
    "useful": Label.USEFUL,
    "not useful": Label.NOT_USEFUL,
    "not_useful": Label.NOT_USEFUL,
    "1": Label.USEFUL,
    "0": Label.NOT_USEFUL,
}

# Canonical surfaces written to prediction and corpus files.
_SURFACE_OUT = {Label.USEFUL: "Useful", Label.NOT_USEFUL: "Not Useful"}

PREDICTION_HEADER = ("id", "predicted_label")


def parse_label(text: str, row: int = -1) -> Label:
    """Parse a label cell, case- and whitespace-insensitively."""
    normalized = " ".join(text.split()).lower()
    try:
        return _LABEL_SURFACES[normalized]
    except KeyError:
        raise UnparsableLabel(row=row, value=text) from None


def label_surface(label: Label) -> str:
    """Canonical output surface: ``Useful`` / ``Not Useful``."""
    return _SURFACE_OUT[label]


class ViewMode(enum.Enum):
    COMMENTS_ONLY = "comments"
    CODE_AND_COMMENTS = "code+comments"


# Comment first (it is the classification target), code after as context.
VIEW_SEPARATOR = "\n"


@dataclass(frozen=True)
class ColumnMapping:
    """Names of the relevant CSV columns; all overridable."""

    comment: str = "comment"
    code: str = "code"
    label: str = "label"


@dataclass(frozen=True)
class LabeledExample:
    id: int
    comment_text: str
    code_text: str = ""
    label: Label | None = None


@dataclass(frozen=True)
class Corpus:
    examples: tuple[LabeledExample, ...]
    labeled: bool
    has_code: bool = True

    def __len__(self) -> int:
        return len(self.examples)

    def labels(self) -> list[Label]:
        if not self.labeled:
            raise UnlabeledCorpus("corpus carries no labels")
        return [ex.label for ex in self.examples]

    def subset(self, indices: Iterable[int]) -> "Corpus":
        picked = tuple(self.examples[i] for i in indices)
        if not picked:
            raise EmptyCorpus("subset selects no examples")
        return Corpus(examples=picked, labeled=self.labeled, has_code=self.has_code)


@dataclass(frozen=True)
class TextView:
    mode: ViewMode
    documents: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.documents)


@dataclass(frozen=True)
class Stats:
    example_count: int
    class_counts: dict[Label, int]
    mean_comment_tokens: float


def load_csv(
    path: str | Path,
    schema: ColumnMapping | None = None,
    expect_labels: bool = True,
) -> Corpus:
    """Read a corpus CSV (RFC 4180 quoting, mandatory header, UTF-8).

    One example per data row; ids are row ordinals starting at 0. When the
    label column is present its every cell must parse, regardless of
    ``expect_labels``; when ``expect_labels`` is true the column must exist.
    """
    schema = schema if schema is not None else ColumnMapping()
    path = Path(path)
    try:
        raw = path.read_bytes().decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"{path}: not valid UTF-8 ({exc})") from exc

    reader = csv.reader(io.StringIO(raw, newline=""), strict=True)
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise MalformedCsv(f"{path}: {exc}") from exc
    if not rows:
        raise MalformedCsv(f"{path}: missing header row")

    header = rows[0]
    columns = {name: i for i, name in enumerate(header)}
    if schema.comment not in columns:
        raise MissingColumn(f"column {schema.comment!r} not in header {header}")
    comment_idx = columns[schema.comment]
    code_idx = columns.get(schema.code)
    label_idx = columns.get(schema.label)
    if expect_labels and label_idx is None:
        raise MissingColumn(f"column {schema.label!r} not in header {header}")

    examples: list[LabeledExample] = []
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise MalformedCsv(
                f"{path}: row {i} has {len(row)} fields, header has {len(header)}"
            )
        comment = row[comment_idx]
        if not comment.strip():
            raise MalformedCsv(f"{path}: row {i}: empty comment text")
        code = row[code_idx] if code_idx is not None else ""
        label = None
        if label_idx is not None:
            cell = row[label_idx]
            if cell.strip():
                label = parse_label(cell, row=i)
            elif expect_labels:
                raise UnparsableLabel(row=i, value=cell)
        examples.append(
            LabeledExample(id=i, comment_text=comment, code_text=code, label=label)
        )

    if not examples:
        raise EmptyCorpus(f"{path}: no data rows")
    labeled = all(ex.label is not None for ex in examples)
    if expect_labels and not labeled:
        raise UnlabeledCorpus(f"{path}: labels expected but some rows have none")
    return Corpus(examples=tuple(examples), labeled=labeled, has_code=code_idx is not None)


def save_csv(corpus: Corpus, path: str | Path, schema: ColumnMapping | None = None) -> None:
    """Write a corpus back to CSV, preserving example order and labels."""
    schema = schema if schema is not None else ColumnMapping()
    header = [schema.comment]
    if corpus.has_code:
        header.append(schema.code)
    if corpus.labeled:
        header.append(schema.label)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for ex in corpus.examples:
            row = [ex.comment_text]
            if corpus.has_code:
                row.append(ex.code_text)
            if corpus.labeled:
                row.append(label_surface(ex.label))
            writer.writerow(row)


def extract_view(corpus: Corpus, mode: ViewMode) -> TextView:
    """Project the corpus onto one document string per example.

    ``CODE_AND_COMMENTS`` concatenates comment, newline, code; examples with
    empty code degrade to the comment alone (plus the separator).
    """
    if mode is ViewMode.COMMENTS_ONLY:
        docs = tuple(ex.comment_text for ex in corpus.examples)
    elif mode is ViewMode.CODE_AND_COMMENTS:
        docs = tuple(
            ex.comment_text + VIEW_SEPARATOR + ex.code_text for ex in corpus.examples
        )
    else:
        raise ValueError(f"unknown view mode {mode!r}")
    return TextView(mode=mode, documents=docs)


def corpus_stats(corpus: Corpus, tokenizer: TokenizerConfig | None = None) -> Stats:
    """Example count, per-class counts, and mean comment length in tokens."""
    if not corpus.labeled:
        raise UnlabeledCorpus("per-class counts need a labeled corpus")
    counts = {Label.USEFUL: 0, Label.NOT_USEFUL: 0}
    for ex in corpus.examples:
        counts[ex.label] += 1
    mean_tokens = statistics.fmean(
        len(tokenize(ex.comment_text, tokenizer)) for ex in corpus.examples
    )
    return Stats(
        example_count=len(corpus),
        class_counts=counts,
        mean_comment_tokens=mean_tokens,
    )


def write_predictions(path: str | Path, ids: Sequence[int], labels: Sequence[Label]) -> None:
    """Write the shared ``id,predicted_label`` prediction CSV."""
    if len(ids) != len(labels):
        raise ValueError("ids and labels differ in length")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTION_HEADER)
        for i, lab in zip(ids, labels):
            writer.writerow([i, label_surface(lab)])


def read_predictions(path: str | Path) -> list[tuple[int, Label]]:
    """Read a prediction CSV written by this package or the finetune component."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCsv(f"{path}: empty prediction file") from None
        if tuple(header) != PREDICTION_HEADER:
            raise MalformedCsv(
                f"{path}: expected header {','.join(PREDICTION_HEADER)}, got {','.join(header)}"
            )
        out: list[tuple[int, Label]] = []
        for i, row in enumerate(reader):
            if len(row) != 2:
                raise MalformedCsv(f"{path}: row {i} has {len(row)} fields")
            out.append((int(row[0]), parse_label(row[1], row=i)))
    if not out:
        raise EmptyCorpus(f"{path}: no prediction rows")
    return out
