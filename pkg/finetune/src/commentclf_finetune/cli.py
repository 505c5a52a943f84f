"""Command line: ``commentclf-finetune finetune ...`` and ``... predict ...``.

Exit codes mirror the primary component: 0 success, 2 usage, 3 data or
model error.
"""

from __future__ import annotations

import argparse
import sys

from .config import PRESETS, preset_config
from .errors import FinetuneError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commentclf-finetune",
        description="Fine-tune transformer encoders on comment+code pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ft = sub.add_parser("finetune", help="train a checkpoint from a labeled corpus")
    ft.add_argument("--preset", choices=sorted(PRESETS), help="named recipe")
    ft.add_argument("--model-id", help="explicit encoder id (overrides the preset's)")
    ft.add_argument("--train", required=True, help="labeled corpus CSV")
    ft.add_argument("--out", required=True, help="checkpoint directory to write")
    ft.add_argument("--epochs", type=int)
    ft.add_argument("--warmup-steps", type=int)
    ft.add_argument("--max-seq-len", type=int)
    ft.add_argument("--batch-size", type=int)
    ft.add_argument("--weight-decay", type=float)
    ft.add_argument("--learning-rate", type=float)
    ft.add_argument("--seed", type=int)
    ft.add_argument("--desk-scale", action="store_true",
                    help="tiny offline encoder; optimizer steps capped")
    _add_column_flags(ft)

    pr = sub.add_parser("predict", help="predict labels with a trained checkpoint")
    pr.add_argument("--checkpoint", required=True)
    pr.add_argument("--test", required=True)
    pr.add_argument("--out", required=True)
    pr.add_argument("--batch-size", type=int, default=16)
    _add_column_flags(pr)
    return parser


def _add_column_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--comment-col", default="comment")
    parser.add_argument("--code-col", default="code")
    parser.add_argument("--label-col", default="label")


def _cmd_finetune(args) -> int:
    from .training import run_finetune

    overrides = {
        key: value
        for key, value in (
            ("model_id", args.model_id),
            ("epochs", args.epochs),
            ("warmup_steps", args.warmup_steps),
            ("max_seq_len", args.max_seq_len),
            ("batch_size", args.batch_size),
            ("weight_decay", args.weight_decay),
            ("learning_rate", args.learning_rate),
            ("seed", args.seed),
        )
        if value is not None
    }
    if args.desk_scale:
        overrides["desk_scale"] = True
    if args.preset:
        config = preset_config(args.preset, **overrides)
    elif args.model_id:
        if args.epochs is None:
            raise ValueError("--model-id without --preset needs --epochs")
        config = preset_config("albert", **overrides)  # albert recipe as the base
    else:
        raise ValueError("either --preset or --model-id is required")
    out = run_finetune(
        config, args.train, args.out,
        comment_col=args.comment_col, code_col=args.code_col, label_col=args.label_col,
    )
    print(f"checkpoint written to {out}")
    return 0


def _cmd_predict(args) -> int:
    from .predicting import predict_transformer

    out = predict_transformer(
        args.checkpoint, args.test, args.out,
        comment_col=args.comment_col, code_col=args.code_col,
        label_col=args.label_col, batch_size=args.batch_size,
    )
    print(f"wrote predictions to {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "finetune":
            return _cmd_finetune(args)
        if args.command == "predict":
            return _cmd_predict(args)
        parser.error(f"unknown command {args.command!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FinetuneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 2


def console_main() -> None:
    sys.exit(main())
