"""Checkpoint loading and prediction in the shared CSV contract."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import encode_pair, read_pairs, write_predictions
from .errors import ModelUnavailable
from .training import TRAINING_LOG, _collate


def load_checkpoint(checkpoint: str | Path):
    """Load model, tokenizer, and the training log from a checkpoint dir."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    checkpoint = Path(checkpoint)
    if not checkpoint.is_dir():
        raise ModelUnavailable(f"{checkpoint} is not a checkpoint directory")
    try:
        tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        model = AutoModelForSequenceClassification.from_pretrained(checkpoint)
    except Exception as exc:
        raise ModelUnavailable(f"could not load checkpoint {checkpoint}: {exc}") from exc
    log_path = checkpoint / TRAINING_LOG
    log = json.loads(log_path.read_text(encoding="utf-8")) if log_path.exists() else {}
    return model, tokenizer, log


def predict_transformer(
    checkpoint: str | Path,
    test_csv: str | Path,
    out_csv: str | Path,
    comment_col: str = "comment",
    code_col: str = "code",
    label_col: str = "label",
    batch_size: int = 16,
) -> Path:
    """Predict every test row and write the id,predicted_label CSV."""
    model, tokenizer, log = load_checkpoint(checkpoint)
    max_seq_len = int(log.get("config", {}).get("max_seq_len", 432))
    pairs = read_pairs(
        test_csv, comment_col=comment_col, code_col=code_col,
        label_col=label_col, expect_labels=False,
    )
    records = [encode_pair(tokenizer, pair, max_seq_len) for pair in pairs]
    model.eval()
    uses_type_ids = "token_type_ids" in model.forward.__code__.co_varnames
    predictions: list[int] = []
    with torch.no_grad():
        for start in range(0, len(records), batch_size):
            batch = _collate(records[start : start + batch_size], tokenizer.pad_token_id)
            inputs = {
                "input_ids": batch["input_ids"],
                "attention_mask": batch["attention_mask"],
            }
            if uses_type_ids:
                inputs["token_type_ids"] = batch["token_type_ids"]
            logits = model(**inputs).logits
            predictions.extend(int(i) for i in logits.argmax(dim=-1))
    out_csv = Path(out_csv)
    write_predictions(out_csv, [p.id for p in pairs], predictions)
    return out_csv
