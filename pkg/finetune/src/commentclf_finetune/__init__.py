"""Transformer fine-tuning for comment relevance classification.

Talks to the bag-of-words component exclusively through files: it reads
the same corpus CSV schema and writes the same ``id,predicted_label``
prediction CSV, so either side can be swapped out independently.
"""

from . import errors
from .config import DESK_SCALE_MAX_STEPS, PRESETS, FinetuneConfig, preset_config
from .data import PairExample, encode_pair, prepare_pairs, read_pairs, write_predictions
from .predicting import load_checkpoint, predict_transformer
from .training import build_desk_tokenizer, finetune, run_finetune

__version__ = "0.1.0"

__all__ = [
    "errors",
    "FinetuneConfig",
    "PRESETS",
    "DESK_SCALE_MAX_STEPS",
    "preset_config",
    "PairExample",
    "read_pairs",
    "encode_pair",
    "prepare_pairs",
    "write_predictions",
    "finetune",
    "run_finetune",
    "build_desk_tokenizer",
    "load_checkpoint",
    "predict_transformer",
    "__version__",
]
