"""Fine-tuning loop: pretrained encoders, or a tiny offline stand-in.

Desk scale exists so the whole path (tokenize, train, checkpoint, predict)
runs on a CPU with no network: the preset's encoder is replaced by a
randomly initialized two-head, one-layer model of the same family, a
word-level tokenizer is trained from the records themselves, and the
number of optimizer steps is capped. Everything else (pair construction,
warmup schedule, weight decay, checkpoint layout) is identical to a full
run.
"""

from __future__ import annotations

import json
import os
import shutil
import time
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from .config import DESK_SCALE_MAX_STEPS, FinetuneConfig, model_family
from .data import PairExample, load_records, prepare_pairs
from .errors import ModelUnavailable, OutOfMemory

TRAINING_LOG = "training_log.json"

_NO_DECAY_SUFFIXES = ("bias", "LayerNorm.weight", "layer_norm.weight")


def build_desk_tokenizer(pairs: list[PairExample], max_vocab: int = 1000):
    """Train a word-level tokenizer on the corpus itself; fully offline."""
    from tokenizers import Tokenizer, models, pre_tokenizers, processors, trainers
    from transformers import PreTrainedTokenizerFast

    tok = Tokenizer(models.WordLevel(unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordLevelTrainer(
        special_tokens=["[PAD]", "[UNK]", "[CLS]", "[SEP]"], vocab_size=max_vocab
    )
    texts = [p.comment for p in pairs] + [p.code for p in pairs if p.code.strip()]
    tok.train_from_iterator(texts, trainer)
    tok.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[
            ("[CLS]", tok.token_to_id("[CLS]")),
            ("[SEP]", tok.token_to_id("[SEP]")),
        ],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        pad_token="[PAD]",
        unk_token="[UNK]",
        cls_token="[CLS]",
        sep_token="[SEP]",
    )


def build_desk_model(family: str, vocab_size: int, pad_token_id: int, max_seq_len: int):
    """Randomly initialized tiny encoder of the requested family."""
    from transformers import (
        AlbertConfig,
        AlbertForSequenceClassification,
        BertConfig,
        BertForSequenceClassification,
        RobertaConfig,
        RobertaForSequenceClassification,
    )

    common = dict(
        vocab_size=vocab_size,
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        num_labels=2,
        pad_token_id=pad_token_id,
    )
    if family == "albert":
        config = AlbertConfig(
            embedding_size=16, max_position_embeddings=max_seq_len + 2, **common
        )
        return AlbertForSequenceClassification(config)
    if family == "roberta":
        # RoBERTa position ids start after the padding index.
        config = RobertaConfig(max_position_embeddings=max_seq_len + pad_token_id + 2, **common)
        return RobertaForSequenceClassification(config)
    config = BertConfig(max_position_embeddings=max_seq_len + 2, **common)
    return BertForSequenceClassification(config)


def load_pretrained(model_id: str):
    """Fetch tokenizer and weights for a real fine-tuning run."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModelForSequenceClassification.from_pretrained(model_id, num_labels=2)
    except Exception as exc:
        raise ModelUnavailable(
            f"could not load {model_id!r}: {exc}. Check the model id and network "
            "access, or use --desk-scale for an offline run."
        ) from exc
    return tokenizer, model


def _collate(batch: list[dict], pad_token_id: int):
    width = max(len(r["input_ids"]) for r in batch)
    input_ids = torch.full((len(batch), width), pad_token_id, dtype=torch.long)
    attention = torch.zeros((len(batch), width), dtype=torch.long)
    type_ids = torch.zeros((len(batch), width), dtype=torch.long)
    labels = torch.zeros(len(batch), dtype=torch.long)
    for i, rec in enumerate(batch):
        ids = rec["input_ids"]
        input_ids[i, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        attention[i, : len(ids)] = 1
        if "token_type_ids" in rec:
            type_ids[i, : len(rec["token_type_ids"])] = torch.tensor(
                rec["token_type_ids"], dtype=torch.long
            )
        labels[i] = int(rec.get("label", 0))
    return {
        "input_ids": input_ids,
        "attention_mask": attention,
        "token_type_ids": type_ids,
        "labels": labels,
    }


def _optimizer(model, config: FinetuneConfig):
    decay, no_decay = [], []
    for name, param in model.named_parameters():
        if not param.requires_grad:
            continue
        if name.endswith(_NO_DECAY_SUFFIXES):
            no_decay.append(param)
        else:
            decay.append(param)
    return torch.optim.AdamW(
        [
            {"params": decay, "weight_decay": config.weight_decay},
            {"params": no_decay, "weight_decay": 0.0},
        ],
        lr=config.learning_rate,
    )


def _linear_warmup_schedule(optimizer, warmup_steps: int, total_steps: int):
    def factor(step: int) -> float:
        if step < warmup_steps:
            return step / max(1, warmup_steps)
        remaining = total_steps - step
        return max(0.0, remaining / max(1, total_steps - warmup_steps))

    return torch.optim.lr_scheduler.LambdaLR(optimizer, factor)


def finetune(
    config: FinetuneConfig,
    records_path: str | Path,
    out_dir: str | Path,
    tokenizer,
    model=None,
) -> Path:
    """Train on prepared records and write a loadable checkpoint.

    The checkpoint directory receives model weights, the tokenizer, and a
    ``training_log.json`` with one loss entry per completed epoch. Writing
    is atomic: everything lands in a staging directory that replaces
    ``out_dir`` in one rename.
    """
    records = load_records(records_path)
    torch.manual_seed(config.seed)
    if model is None:
        model = build_desk_model(
            model_family(config.model_id),
            vocab_size=len(tokenizer),
            pad_token_id=tokenizer.pad_token_id,
            max_seq_len=config.max_seq_len,
        )
    model.train()

    generator = torch.Generator().manual_seed(config.seed)
    loader = DataLoader(
        records,
        batch_size=config.batch_size,
        shuffle=True,
        generator=generator,
        collate_fn=lambda batch: _collate(batch, tokenizer.pad_token_id),
    )
    step_cap = DESK_SCALE_MAX_STEPS if config.desk_scale else config.epochs * len(loader)
    total_steps = min(config.epochs * len(loader), step_cap)
    optimizer = _optimizer(model, config)
    scheduler = _linear_warmup_schedule(optimizer, config.warmup_steps, total_steps)

    uses_type_ids = "token_type_ids" in getattr(model, "forward").__code__.co_varnames
    epoch_losses: list[float] = []
    steps_executed = 0
    started = time.monotonic()
    try:
        for _ in range(config.epochs):
            if steps_executed >= step_cap:
                break
            running, batches = 0.0, 0
            for batch in loader:
                if steps_executed >= step_cap:
                    break
                inputs = {
                    "input_ids": batch["input_ids"],
                    "attention_mask": batch["attention_mask"],
                    "labels": batch["labels"],
                }
                if uses_type_ids:
                    inputs["token_type_ids"] = batch["token_type_ids"]
                output = model(**inputs)
                output.loss.backward()
                optimizer.step()
                scheduler.step()
                optimizer.zero_grad()
                running += float(output.loss.detach())
                batches += 1
                steps_executed += 1
            if batches:
                epoch_losses.append(running / batches)
    except torch.cuda.OutOfMemoryError as exc:
        raise OutOfMemory(
            f"training ran out of memory at batch_size={config.batch_size}; "
            "retry with a smaller --batch-size"
        ) from exc
    except RuntimeError as exc:
        if "out of memory" in str(exc).lower():
            raise OutOfMemory(
                f"training ran out of memory at batch_size={config.batch_size}; "
                "retry with a smaller --batch-size"
            ) from exc
        raise

    out_dir = Path(out_dir)
    staging = out_dir.parent / (out_dir.name + ".staging")
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir(parents=True)
    model.save_pretrained(staging)
    tokenizer.save_pretrained(staging)
    log = {
        "config": config.to_dict(),
        "epochs_configured": config.epochs,
        "steps_executed": steps_executed,
        "step_cap": step_cap,
        "epoch_losses": epoch_losses,
        "records": len(records),
        "device": "cpu" if not torch.cuda.is_available() else "cuda",
        "wall_seconds": round(time.monotonic() - started, 3),
    }
    (staging / TRAINING_LOG).write_text(json.dumps(log, indent=2), encoding="utf-8")
    if out_dir.exists():
        shutil.rmtree(out_dir)
    os.rename(staging, out_dir)
    return out_dir


def run_finetune(
    config: FinetuneConfig,
    train_csv: str | Path,
    out_dir: str | Path,
    comment_col: str = "comment",
    code_col: str = "code",
    label_col: str = "label",
) -> Path:
    """End-to-end: read pairs, build/fetch tokenizer and model, train, save."""
    from .data import read_pairs

    if config.desk_scale:
        pairs = read_pairs(
            train_csv, comment_col=comment_col, code_col=code_col,
            label_col=label_col, expect_labels=True,
        )
        tokenizer = build_desk_tokenizer(pairs)
        model = None
    else:
        tokenizer, model = load_pretrained(config.model_id)

    out_dir = Path(out_dir)
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    records_path = out_dir.parent / (out_dir.name + ".records.jsonl")
    prepare_pairs(
        train_csv, records_path, tokenizer, config.max_seq_len,
        comment_col=comment_col, code_col=code_col, label_col=label_col,
    )
    try:
        return finetune(config, records_path, out_dir, tokenizer, model=model)
    finally:
        if records_path.exists():
            records_path.unlink()
