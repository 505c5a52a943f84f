"""Command-line entry point.

Subcommands: ``runs list``, ``run``, ``predict``, ``report``. Exit codes:
0 success, 2 usage error, 3 data error, 4 missing finetune component.

Transformer runs (run4, run5) are executed by the separate
``commentclf-finetune`` command over a subprocess boundary; everything the
two components exchange goes through the corpus CSV schema and the
``id,predicted_label`` prediction contract.
"""

from __future__ import annotations

import argparse
import json
import shutil
import subprocess
import sys
from pathlib import Path

from .corpus import (
    ColumnMapping,
    load_csv,
    read_predictions,
    write_predictions,
)
from .errors import (
    CommentClfError,
    LengthMismatch,
    MalformedCsv,
    MissingComponent,
    UnknownRun,
)
from .evaluation import compute_metrics, cross_validate, render_report
from .pipeline import (
    FINETUNE_COMMAND,
    TRANSFORMER,
    FittedPipeline,
    build_run_registry,
    custom_run_config,
    describe_run,
    fit_pipeline,
    get_run,
    with_seed,
)

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_DATA = 3
_EXIT_MISSING_COMPONENT = 4


def _add_column_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--comment-col", default="comment", help="comment column name")
    parser.add_argument("--code-col", default="code", help="code column name")
    parser.add_argument("--label-col", default="label", help="label column name")


def _mapping(args) -> ColumnMapping:
    return ColumnMapping(comment=args.comment_col, code=args.code_col, label=args.label_col)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commentclf",
        description="Classify source-code comments as Useful / Not Useful.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runs = sub.add_parser("runs", help="inspect the run registry")
    runs_sub = runs.add_subparsers(dest="runs_command", required=True)
    runs_sub.add_parser("list", help="print all preconfigured runs")

    run = sub.add_parser("run", help="cross-validate or fit one configuration")
    run.add_argument("--name", help="registry run name (run1..run5)")
    run.add_argument("--train", required=True, help="training corpus CSV")
    mode = run.add_mutually_exclusive_group()
    mode.add_argument("--cv", action="store_true", help="cross-validate (default)")
    mode.add_argument("--fit-full", action="store_true", help="train on the full corpus and save")
    run.add_argument("--out", help="output path for --fit-full (pipeline JSON or checkpoint dir)")
    run.add_argument("--view", choices=["comments", "code+comments"])
    run.add_argument("--weighting", choices=["tfidf", "logentropy"])
    run.add_argument("--select", choices=["chi2", "mi"], help="term selection method")
    run.add_argument("--k-terms", type=int, help="number of selected terms")
    run.add_argument("--classifier", choices=["logreg", "svm", "rf"])
    run.add_argument("--trees", type=int, help="forest size (rf)")
    run.add_argument("--cost-c", type=float, help="SVM cost parameter")
    run.add_argument("--l2-strength", type=float, help="logreg L2 strength")
    run.add_argument("--min-df", type=int, default=1)
    run.add_argument("--no-normalize", action="store_true", help="skip L2 row normalization")
    run.add_argument("--folds", type=int, default=10)
    run.add_argument("--seed", type=int, help="override the configuration seed")
    run.add_argument("--format", choices=["table", "json", "csv"], default="table")
    run.add_argument("--report-out", help="also write the report as JSON to this path")
    run.add_argument("--desk-scale", action="store_true",
                     help="transformer runs: tiny offline encoder, capped steps")
    _add_column_flags(run)

    predict = sub.add_parser("predict", help="predict labels for a test corpus")
    predict.add_argument("--model", required=True,
                         help="pipeline JSON (native) or checkpoint directory (transformer)")
    predict.add_argument("--test", required=True, help="test corpus CSV")
    predict.add_argument("--out", required=True, help="prediction CSV to write")
    predict.add_argument("--format", choices=["table", "json", "csv"], default="table")
    _add_column_flags(predict)

    report = sub.add_parser("report", help="score a prediction file or re-render a report")
    report.add_argument("--pred", help="prediction CSV (id,predicted_label)")
    report.add_argument("--gold", help="labeled corpus CSV to score against")
    report.add_argument("--from-json", dest="from_json", help="re-render a saved JSON report")
    report.add_argument("--name", default=None, help="row label for the report")
    report.add_argument("--format", choices=["table", "json", "csv"], default="table")
    _add_column_flags(report)

    return parser


def _finetune_executable() -> str:
    exe = shutil.which(FINETUNE_COMMAND)
    if exe is None:
        raise MissingComponent(
            f"{FINETUNE_COMMAND} is not on PATH; install the finetune component "
            "to execute transformer runs"
        )
    return exe


def _run_subprocess(cmd: list[str]) -> int:
    completed = subprocess.run(cmd)
    if completed.returncode != 0:
        print(f"error: {' '.join(cmd[:2])} exited with {completed.returncode}", file=sys.stderr)
        return _EXIT_DATA
    return _EXIT_OK


def _cmd_runs_list(args) -> int:
    registry = build_run_registry()
    for name in sorted(registry):
        print(describe_run(registry[name]))
    return _EXIT_OK


def _resolve_run_config(args):
    if args.name:
        config = get_run(args.name)
        if args.seed is not None:
            config = with_seed(config, args.seed)
        return config
    missing = [
        flag
        for flag, val in (
            ("--view", args.view),
            ("--weighting", args.weighting),
            ("--classifier", args.classifier),
        )
        if val is None
    ]
    if missing:
        raise ValueError(
            f"either --name or a full specification is required; missing {', '.join(missing)}"
        )
    hyper = {}
    if args.trees is not None:
        hyper["n_trees"] = args.trees
    if args.cost_c is not None:
        hyper["cost_c"] = args.cost_c
    if args.l2_strength is not None:
        hyper["l2_strength"] = args.l2_strength
    return custom_run_config(
        name="custom",
        view=args.view,
        weighting=args.weighting,
        classifier=args.classifier,
        selection_method=args.select,
        k_terms=args.k_terms,
        normalize=not args.no_normalize,
        min_df=args.min_df,
        seed=args.seed if args.seed is not None else 13,
        hyper=hyper,
    )


def _cmd_run(args) -> int:
    config = _resolve_run_config(args)

    if config.classifier == TRANSFORMER:
        if not args.fit_full or not args.out:
            raise ValueError(
                f"{config.name} is delegated to {FINETUNE_COMMAND}; "
                "use --fit-full --out <checkpoint-dir>"
            )
        exe = _finetune_executable()
        cmd = [
            exe, "finetune",
            "--preset", str(config.hyper["preset"]),
            "--train", args.train,
            "--out", args.out,
            "--comment-col", args.comment_col,
            "--code-col", args.code_col,
            "--label-col", args.label_col,
        ]
        if args.seed is not None:
            cmd += ["--seed", str(args.seed)]
        if args.desk_scale:
            cmd.append("--desk-scale")
        return _run_subprocess(cmd)

    corpus = load_csv(args.train, schema=_mapping(args), expect_labels=True)
    if args.fit_full:
        if not args.out:
            raise ValueError("--fit-full needs --out")
        pipe = fit_pipeline(corpus, config)
        pipe.save(args.out)
        print(f"saved pipeline {config.name} to {args.out}")
        return _EXIT_OK

    report = cross_validate(corpus, config, k=args.folds, seed=args.seed)
    print(render_report([(config.name, report)], fmt=args.format), end="")
    if args.report_out:
        Path(args.report_out).write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return _EXIT_OK


def _cmd_predict(args) -> int:
    model_path = Path(args.model)
    if model_path.is_dir():
        exe = _finetune_executable()
        cmd = [
            exe, "predict",
            "--checkpoint", str(model_path),
            "--test", args.test,
            "--out", args.out,
            "--comment-col", args.comment_col,
            "--code-col", args.code_col,
            "--label-col", args.label_col,
        ]
        return _run_subprocess(cmd)

    pipe = FittedPipeline.load(model_path)
    corpus = load_csv(args.test, schema=_mapping(args), expect_labels=False)
    predictions = pipe.predict(corpus)
    write_predictions(args.out, [ex.id for ex in corpus.examples], predictions)
    print(f"wrote {len(predictions)} predictions to {args.out}")
    if corpus.labeled:
        metrics = compute_metrics(predictions, corpus.labels())
        print(render_report([(pipe.config.name, metrics)], fmt=args.format), end="")
    return _EXIT_OK


def _render_saved_report(payload: dict, fmt: str) -> str:
    if payload.get("format") == "commentclf-cv-report":
        reports = {payload.get("run", "run"): payload}
    elif payload.get("format") == "commentclf-report":
        reports = payload["reports"]
    else:
        raise MalformedCsv("not a commentclf report JSON")
    if fmt == "json":
        return json.dumps(
            {"format": "commentclf-report", "version": 1, "reports": reports},
            indent=2, sort_keys=True,
        )
    rows = []
    for name, rep in reports.items():
        if "pooled" in rep:
            rows.append((f"{name} [pooled]", rep["pooled"]))
            rows.append((f"{name} [macro]", rep["macro"]))
        else:
            rows.append((name, rep))
    if fmt == "csv":
        lines = ["name,accuracy,precision,recall,f1"]
        for name, rep in rows:
            lines.append(
                f"{name},{rep['accuracy']!r},{rep['precision']!r},{rep['recall']!r},{rep['f1']!r}"
            )
        return "\n".join(lines) + "\n"
    from .evaluation import _round2

    lines = ["| Run | Accuracy | Precision | Recall | F1 |", "|---|---|---|---|---|"]
    for name, rep in rows:
        lines.append(
            f"| {name} | {_round2(rep['accuracy'])} | {_round2(rep['precision'])} "
            f"| {_round2(rep['recall'])} | {_round2(rep['f1'])} |"
        )
    return "\n".join(lines) + "\n"


def _cmd_report(args) -> int:
    if args.from_json:
        payload = json.loads(Path(args.from_json).read_text(encoding="utf-8"))
        print(_render_saved_report(payload, args.format), end="")
        return _EXIT_OK
    if not args.pred or not args.gold:
        raise ValueError("report needs either --from-json or both --pred and --gold")
    predictions = read_predictions(args.pred)
    gold = load_csv(args.gold, schema=_mapping(args), expect_labels=True)
    by_id = dict(predictions)
    if len(by_id) != len(predictions):
        raise MalformedCsv(f"{args.pred}: duplicate prediction ids")
    missing = [ex.id for ex in gold.examples if ex.id not in by_id]
    if missing or len(predictions) != len(gold):
        raise LengthMismatch(
            f"{args.pred} has {len(predictions)} rows for {len(gold)} gold examples"
            + (f"; missing ids {missing[:5]}" if missing else "")
        )
    ordered = [by_id[ex.id] for ex in gold.examples]
    metrics = compute_metrics(ordered, gold.labels())
    name = args.name if args.name else Path(args.pred).stem
    print(render_report([(name, metrics)], fmt=args.format), end="")
    return _EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "runs":
            return _cmd_runs_list(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "predict":
            return _cmd_predict(args)
        if args.command == "report":
            return _cmd_report(args)
        parser.error(f"unknown command {args.command!r}")
    except UnknownRun as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except MissingComponent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_MISSING_COMPONENT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except CommentClfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DATA
    return _EXIT_USAGE


def console_main() -> None:
    sys.exit(main())
