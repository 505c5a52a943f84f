"""CSV reading and tokenizer-ready record preparation.

This component deliberately re-implements the shared corpus CSV schema
instead of importing the bag-of-words package: the two sides exchange data
through files only. Columns default to comment/code/label; labels accept
useful / not useful / not_useful / 1 / 0, case- and whitespace-insensitive.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    EmptyCorpus,
    MalformedCsv,
    MissingColumn,
    SchemaMismatch,
    UnparsableLabel,
)

LABEL_SURFACES = {
    "useful": 1,
    "not useful": 0,
    "not_useful": 0,
    "1": 1,
    "0": 0,
}

LABEL_OUT = {1: "Useful", 0: "Not Useful"}

PREDICTION_HEADER = "id,predicted_label"


@dataclass(frozen=True)
class PairExample:
    id: int
    comment: str
    code: str
    label: int | None  # 1 = Useful, 0 = Not Useful


def parse_label(cell: str, row: int) -> int:
    normalized = " ".join(cell.split()).lower()
    try:
        return LABEL_SURFACES[normalized]
    except KeyError:
        raise UnparsableLabel(row=row, value=cell) from None


def read_pairs(
    path: str | Path,
    comment_col: str = "comment",
    code_col: str = "code",
    label_col: str = "label",
    expect_labels: bool = True,
    require_code: bool = True,
) -> list[PairExample]:
    """Read (comment, code, label) rows; ids are row ordinals from 0."""
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
    if comment_col not in columns:
        raise MissingColumn(f"column {comment_col!r} not in header {header}")
    if require_code and code_col not in columns:
        raise SchemaMismatch(
            f"column {code_col!r} not in header {header}; this component consumes "
            "comment+code pairs"
        )
    if expect_labels and label_col not in columns:
        raise MissingColumn(f"column {label_col!r} not in header {header}")

    comment_idx = columns[comment_col]
    code_idx = columns.get(code_col)
    label_idx = columns.get(label_col)
    out: list[PairExample] = []
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise MalformedCsv(
                f"{path}: row {i} has {len(row)} fields, header has {len(header)}"
            )
        comment = row[comment_idx]
        if not comment.strip():
            raise MalformedCsv(f"{path}: row {i}: empty comment text")
        label = None
        if label_idx is not None and row[label_idx].strip():
            label = parse_label(row[label_idx], row=i)
        elif expect_labels:
            raise UnparsableLabel(row=i, value="" if label_idx is not None else "<missing>")
        out.append(
            PairExample(
                id=i,
                comment=comment,
                code=row[code_idx] if code_idx is not None else "",
                label=label,
            )
        )
    if not out:
        raise EmptyCorpus(f"{path}: no data rows")
    return out


def encode_pair(tokenizer, pair: PairExample, max_seq_len: int) -> dict:
    """Tokenize comment (+ code when non-empty), truncated to max_seq_len."""
    code = pair.code.strip()
    if code:
        enc = tokenizer(pair.comment, code, truncation=True, max_length=max_seq_len)
    else:
        enc = tokenizer(pair.comment, truncation=True, max_length=max_seq_len)
    record = {"id": pair.id, "input_ids": enc["input_ids"]}
    if "token_type_ids" in enc:
        record["token_type_ids"] = enc["token_type_ids"]
    if pair.label is not None:
        record["label"] = pair.label
    return record


def prepare_pairs(
    train_csv: str | Path,
    out_path: str | Path,
    tokenizer,
    max_seq_len: int,
    comment_col: str = "comment",
    code_col: str = "code",
    label_col: str = "label",
) -> Path:
    """Write one tokenized JSONL record per labeled example."""
    pairs = read_pairs(
        train_csv,
        comment_col=comment_col,
        code_col=code_col,
        label_col=label_col,
        expect_labels=True,
    )
    out_path = Path(out_path)
    with open(out_path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            record = encode_pair(tokenizer, pair, max_seq_len)
            fh.write(json.dumps(record) + "\n")
    return out_path


def load_records(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    if not records:
        raise EmptyCorpus(f"{path}: no records")
    return records


def write_predictions(path: str | Path, ids, labels01) -> None:
    """Emit the shared id,predicted_label CSV the scorer consumes unchanged."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTION_HEADER.split(","))
        for i, lab in zip(ids, labels01):
            writer.writerow([i, LABEL_OUT[int(lab)]])
