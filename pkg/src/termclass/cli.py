"""Command-line entry points: ingest, sweep, train, predict, report.

Exit codes: 0 success, 1 config error, 2 data error, 3 sweep finished with
failed cells.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .corpus import CORPUS_FORMATS, load_corpus
from .errors import ConfigError, DataError
from .evaluate import evaluate
from .experiment import (
    ExperimentConfig,
    _preprocess_from_dict,
    load_model,
    predict_with_model,
    run_sweep,
    save_model,
    train_model,
    write_csvs,
)
from .svm import KERNEL_KINDS, KernelSpec
from .weighting import SCHEMES

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_PARTIAL = 3


def _cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus, args.format)
    from .experiment import corpus_fingerprint

    print(f"path: {args.corpus}")
    print(f"format: {args.format}")
    print(f"documents: {len(corpus)}")
    print(f"classes: {corpus.k}")
    sizes = corpus.class_sizes()
    for j, name in enumerate(corpus.class_names):
        print(f"  {name}: {sizes[j]}")
    print(f"fingerprint: {corpus_fingerprint(corpus)}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    corpus = load_corpus(config.corpus_path, config.corpus_format)
    report = run_sweep(config, corpus=corpus)
    outdir = Path(args.outdir or config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    report_path = outdir / "report.json"
    report.save(report_path)
    write_csvs(report.as_dict(), outdir)
    for cell in report.cells:
        tag = f"{cell.classifier}/{cell.scheme} f={cell.train_fraction} seed={cell.seed}"
        if cell.error is not None:
            print(f"{tag}: ERROR {cell.error}")
        else:
            print(f"{tag}: accuracy={cell.report.accuracy:.4f} macro_f={cell.report.macro_f_measure:.4f}")
    failed = report.failed_cells()
    print(f"report: {report_path}")
    print(f"cells: {len(report.cells)} total, {len(failed)} failed, {report.total_seconds:.2f}s")
    return EXIT_PARTIAL if failed else EXIT_OK


def _cmd_train(args) -> int:
    preprocess, source = _preprocess_from_dict(
        {
            "lowercase": not args.no_lowercase,
            "min_token_len": args.min_token_len,
            "drop_all_digit_tokens": not args.keep_digit_tokens,
            "strip_headers": args.strip_headers,
            "stopwords": args.stopwords,
        }
    )
    kernel = KernelSpec(kind=args.kernel, gamma=args.gamma, degree=args.degree, coef0=args.coef0)
    corpus = load_corpus(args.corpus, args.format)
    model = train_model(
        corpus,
        preprocess=preprocess,
        min_df=args.min_df,
        scheme=args.scheme,
        classifier=args.classifier,
        knn_k=args.knn_k,
        kernel=kernel,
        C=args.C,
        tolerance=args.tolerance,
        seed=args.seed,
        token_weighted=args.token_weighted,
    )
    save_model(model, args.model)
    print(f"trained {args.classifier}/{args.scheme} on {len(corpus)} documents "
          f"({corpus.k} classes, vocabulary {len(model.vocab)}); model: {args.model}")
    return EXIT_OK


def _read_prediction_input(path: str, fmt: str | None):
    """Return (docs, true_labels) where docs are (id, text) and labels may hold None."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"input path not found: {path}")
    if fmt is None:
        if p.is_file():
            fmt = "jsonl"
        elif any(child.is_dir() for child in p.iterdir()):
            fmt = "newsgroups_dir"
        else:
            fmt = "dir"
    if fmt in CORPUS_FORMATS:
        corpus = load_corpus(path, fmt) if fmt == "newsgroups_dir" else None
        if corpus is not None:
            return [(d.id, d.text) for d in corpus], [d.class_label for d in corpus]
        docs, labels = [], []
        with open(p, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
                if "text" not in obj:
                    raise DataError(f"{path}:{lineno}: missing 'text' field")
                docs.append((str(obj.get("id", f"line{lineno}")), str(obj["text"])))
                labels.append(obj.get("class"))
        if not docs:
            raise DataError(f"no documents in {path}")
        return docs, labels
    if fmt == "dir":
        files = sorted(child for child in p.iterdir() if child.is_file())
        if not files:
            raise DataError(f"no files in directory {path}")
        docs = [(f.name, f.read_bytes().decode("utf-8", errors="replace")) for f in files]
        return docs, [None] * len(docs)
    raise ConfigError(f"unknown input format {fmt!r}")


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    docs, true_labels = _read_prediction_input(args.input, args.format)
    predicted = predict_with_model(model, docs)
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        has_labels = any(lbl is not None for lbl in true_labels)
        writer.writerow(["doc_id", "predicted", "class"] if has_labels else ["doc_id", "predicted"])
        for (doc_id, _), pred, true in zip(docs, predicted, true_labels):
            row = [doc_id, pred] + ([true if true is not None else ""] if has_labels else [])
            writer.writerow(row)
    finally:
        if args.output:
            out.close()
    if has_labels:
        known = [(t, p) for t, p in zip(true_labels, predicted) if t is not None]
        index = {name: j for j, name in enumerate(model.class_names)}
        if any(t not in index for t, _ in known):
            unknown = sorted({t for t, _ in known if t not in index})
            raise DataError(f"input labels not in model classes: {unknown}")
        report = evaluate(
            [index[t] for t, _ in known], [index[p] for _, p in known], len(model.class_names)
        )
        print(
            f"labeled documents: {len(known)}  accuracy: {report.accuracy:.4f}  "
            f"macro_f: {report.macro_f_measure:.4f}",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_report(args) -> int:
    path = Path(args.report)
    try:
        with open(path, encoding="utf-8") as fh:
            report = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"report {path} is not valid JSON: {exc}") from exc
    if not isinstance(report, dict) or "cells" not in report:
        raise DataError(f"{path} does not look like a sweep report")
    outdir = Path(args.outdir) if args.outdir else path.parent
    written = write_csvs(report, outdir)
    for w in written:
        print(w)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termclass",
        description="Term-class relevance weighting experiments for text categorization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and validate a corpus, print a summary")
    p.add_argument("--corpus", required=True, help="corpus path")
    p.add_argument("--format", choices=CORPUS_FORMATS, default="newsgroups_dir")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("sweep", help="run a training-fraction sweep from a JSON config")
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--outdir", help="override the config's output_dir")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("train", help="fit one model on a whole corpus and save it as JSON")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", choices=CORPUS_FORMATS, default="newsgroups_dir")
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--scheme", choices=SCHEMES, default="tcr")
    p.add_argument("--classifier", choices=("knn", "svm"), default="knn")
    p.add_argument("--knn-k", type=int, default=10)
    p.add_argument("--kernel", choices=KERNEL_KINDS, default="rbf")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--coef0", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--token-weighted", action="store_true",
                   help="weight terms by occurrence count instead of distinct-term mean")
    p.add_argument("--stopwords", default="smart", help="'smart', 'none', or a file path")
    p.add_argument("--min-token-len", type=int, default=2)
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--keep-digit-tokens", action="store_true")
    p.add_argument("--strip-headers", action="store_true")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="classify documents with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="jsonl file, class directory tree, or flat directory")
    p.add_argument("--format", choices=(*CORPUS_FORMATS, "dir"), default=None,
                   help="input layout (default: guess from the path)")
    p.add_argument("--output", help="write predictions CSV here instead of stdout")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("report", help="re-render CSV files from an existing report.json")
    p.add_argument("--report", required=True, help="path to report.json")
    p.add_argument("--outdir", help="where to write csv/ (default: next to the report)")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
