"""Experiment protocol: training-fraction sweeps, reports, and model files.

A sweep walks every (train fraction, seed) pair: split the corpus, build the
vocabulary and counts from the training side only, then for each weighting
scheme build the score table, represent both sides, and run every configured
classifier. Each (scheme, classifier, fraction, seed) combination becomes one
report cell; a cell failure is recorded and the sweep continues.

Everything except wall-clock timings is a pure function of the corpus bytes
and the config, so reruns reproduce all metrics (and the emitted CSV files)
byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .class_stats import build_stats
from .corpus import Document, LabeledCorpus, SplitSpec, load_corpus, stratified_split
from .errors import ConfigError, DataError
from .evaluate import EvaluationReport, evaluate
from .knn import KnnModel, knn_predict_many
from .preprocess import (
    PreprocessConfig,
    Vocabulary,
    build_vocabulary,
    count_terms,
    load_stopwords,
    smart_stopwords,
)
from .representation import FeatureMatrix, represent_corpus, represent_document
from .svm import KernelSpec, SvmModel, BinaryMachine, svm_fit, svm_predict_many
from .weighting import SCHEMES, TermClassMatrix, relevance_table

DEFAULT_FRACTIONS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
METRICS = ("accuracy", "macro_precision", "macro_recall", "macro_f_measure")

MODEL_FORMAT = "termclass-model"
MODEL_FORMAT_VERSION = 1


def _preprocess_from_dict(obj: dict) -> tuple[PreprocessConfig, str]:
    """Build a PreprocessConfig from config JSON; returns (config, stopword source)."""
    allowed = {"lowercase", "min_token_len", "drop_all_digit_tokens", "strip_headers", "stopwords"}
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown preprocess option(s): {sorted(unknown)}")
    source = obj.get("stopwords", "smart")
    if isinstance(source, list):
        stopwords = frozenset(str(w) for w in source)
        source = "inline"
    elif source == "smart":
        stopwords = smart_stopwords()
    elif source == "none":
        stopwords = frozenset()
    elif isinstance(source, str):
        stopwords = load_stopwords(source)
    else:
        raise ConfigError(f"stopwords must be 'smart', 'none', a path, or a list, got {source!r}")
    config = PreprocessConfig(
        lowercase=bool(obj.get("lowercase", True)),
        min_token_len=int(obj.get("min_token_len", 2)),
        drop_all_digit_tokens=bool(obj.get("drop_all_digit_tokens", True)),
        stopwords=stopwords,
        strip_headers=bool(obj.get("strip_headers", False)),
    )
    return config, str(source)


def _preprocess_as_dict(config: PreprocessConfig, source: str) -> dict:
    return {
        "lowercase": config.lowercase,
        "min_token_len": config.min_token_len,
        "drop_all_digit_tokens": config.drop_all_digit_tokens,
        "strip_headers": config.strip_headers,
        "stopwords": source,
        "stopword_count": len(config.stopwords),
    }


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; loadable from a JSON file."""

    corpus_path: str
    corpus_format: str
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    stopwords_source: str = "smart"
    min_df: int = 2
    schemes: tuple[str, ...] = ("tcr", "bayes")
    classifiers: tuple[str, ...] = ("knn", "svm")
    knn_k: tuple[int, ...] = (10,)
    svm_kernels: tuple[KernelSpec, ...] = (KernelSpec(kind="rbf"),)
    svm_c: float = 1.0
    svm_tolerance: float = 1e-3
    train_fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    seeds: tuple[int, ...] = (0,)
    token_weighted: bool = False
    standardize_features: bool = False
    output_dir: str = "runs"

    def __post_init__(self):
        if self.corpus_format not in ("newsgroups_dir", "jsonl"):
            raise ConfigError(f"unknown corpus format {self.corpus_format!r}")
        if self.min_df < 1:
            raise ConfigError(f"min_df must be >= 1, got {self.min_df}")
        for name, values in (
            ("schemes", self.schemes),
            ("classifiers", self.classifiers),
            ("train_fractions", self.train_fractions),
            ("seeds", self.seeds),
        ):
            if not values:
                raise ConfigError(f"{name} must be nonempty")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ConfigError(f"unknown scheme(s) {bad}; expected subset of {list(SCHEMES)}")
        bad = [c for c in self.classifiers if c not in ("knn", "svm")]
        if bad:
            raise ConfigError(f"unknown classifier(s) {bad}; expected subset of ['knn', 'svm']")
        for f in self.train_fractions:
            if not 0.0 < f < 1.0:
                raise ConfigError(f"train fraction {f} outside (0, 1)")
        if "knn" in self.classifiers and not self.knn_k:
            raise ConfigError("knn_k must be nonempty when knn is configured")
        if any(k < 1 for k in self.knn_k):
            raise ConfigError(f"knn_k values must be >= 1, got {list(self.knn_k)}")
        if "svm" in self.classifiers and not self.svm_kernels:
            raise ConfigError("svm kernels must be nonempty when svm is configured")
        if self.svm_c <= 0:
            raise ConfigError(f"svm C must be > 0, got {self.svm_c}")

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        allowed = {
            "corpus_path", "corpus_format", "preprocess", "min_df", "schemes",
            "classifiers", "knn_k", "svm", "train_fractions", "seeds",
            "token_weighted", "standardize_features", "output_dir",
        }
        unknown = set(obj) - allowed
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        for key in ("corpus_path", "corpus_format"):
            if key not in obj:
                raise ConfigError(f"missing required config key {key!r}")
        try:
            preprocess, source = _preprocess_from_dict(obj.get("preprocess", {}))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad preprocess section: {exc}") from exc
        svm_obj = obj.get("svm", {})
        unknown = set(svm_obj) - {"kernels", "C", "tolerance"}
        if unknown:
            raise ConfigError(f"unknown svm option(s): {sorted(unknown)}")
        kernels = []
        for kspec in svm_obj.get("kernels", [{"kind": "rbf"}]):
            unknown = set(kspec) - {"kind", "gamma", "degree", "coef0"}
            if unknown:
                raise ConfigError(f"unknown kernel option(s): {sorted(unknown)}")
            kernels.append(
                KernelSpec(
                    kind=kspec.get("kind", "rbf"),
                    gamma=kspec.get("gamma"),
                    degree=int(kspec.get("degree", 3)),
                    coef0=float(kspec.get("coef0", 1.0)),
                )
            )
        try:
            return cls(
                corpus_path=str(obj["corpus_path"]),
                corpus_format=str(obj["corpus_format"]),
                preprocess=preprocess,
                stopwords_source=source,
                min_df=int(obj.get("min_df", 2)),
                schemes=tuple(obj.get("schemes", ("tcr", "bayes"))),
                classifiers=tuple(obj.get("classifiers", ("knn", "svm"))),
                knn_k=tuple(int(k) for k in obj.get("knn_k", (10,))),
                svm_kernels=tuple(kernels),
                svm_c=float(svm_obj.get("C", 1.0)),
                svm_tolerance=float(svm_obj.get("tolerance", 1e-3)),
                train_fractions=tuple(float(f) for f in obj.get("train_fractions", DEFAULT_FRACTIONS)),
                seeds=tuple(int(s) for s in obj.get("seeds", (0,))),
                token_weighted=bool(obj.get("token_weighted", False)),
                standardize_features=bool(obj.get("standardize_features", False)),
                output_dir=str(obj.get("output_dir", "runs")),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ConfigError(f"config file {path} must contain a JSON object")
        return cls.from_dict(obj)

    def as_dict(self) -> dict:
        return {
            "corpus_path": self.corpus_path,
            "corpus_format": self.corpus_format,
            "preprocess": _preprocess_as_dict(self.preprocess, self.stopwords_source),
            "min_df": self.min_df,
            "schemes": list(self.schemes),
            "classifiers": list(self.classifiers),
            "knn_k": list(self.knn_k),
            "svm": {
                "kernels": [
                    {"kind": k.kind, "gamma": k.gamma, "degree": k.degree, "coef0": k.coef0}
                    for k in self.svm_kernels
                ],
                "C": self.svm_c,
                "tolerance": self.svm_tolerance,
            },
            "train_fractions": list(self.train_fractions),
            "seeds": list(self.seeds),
            "token_weighted": self.token_weighted,
            "standardize_features": self.standardize_features,
            "output_dir": self.output_dir,
        }

    def classifier_labels(self) -> list[str]:
        labels = []
        for kind in self.classifiers:
            if kind == "knn":
                labels.extend(f"knn_k{k}" for k in self.knn_k)
            else:
                labels.extend(f"svm_{spec.kind}" for spec in self.svm_kernels)
        return labels


def corpus_fingerprint(corpus: LabeledCorpus) -> str:
    """SHA-256 over (id, class, text digest) of every document, in canonical order."""
    h = hashlib.sha256()
    for doc in corpus:
        h.update(doc.id.encode())
        h.update(b"\x00")
        h.update(doc.class_label.encode())
        h.update(b"\x00")
        h.update(hashlib.sha256(doc.text.encode()).digest())
    return h.hexdigest()


@dataclass
class CellResult:
    """One (scheme, classifier, fraction, seed) combination of a sweep."""

    scheme: str
    classifier: str
    train_fraction: float
    seed: int
    report: EvaluationReport | None = None
    error: str | None = None
    n_train: int = 0
    n_test: int = 0
    zero_term_train_docs: int = 0
    zero_term_test_docs: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "classifier": self.classifier,
            "train_fraction": self.train_fraction,
            "seed": self.seed,
            "error": self.error,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "zero_term_train_docs": self.zero_term_train_docs,
            "zero_term_test_docs": self.zero_term_test_docs,
            "seconds": self.seconds,
            "metrics": self.report.as_dict() if self.report is not None else None,
        }


@dataclass
class RunReport:
    """Everything needed to reproduce a run plus one cell per combination."""

    config: dict
    dataset: dict
    versions: dict
    cells: list[CellResult]
    stage_timings: list[dict]
    total_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "dataset": self.dataset,
            "versions": self.versions,
            "cells": [c.as_dict() for c in self.cells],
            "stage_timings": self.stage_timings,
            "total_seconds": self.total_seconds,
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def failed_cells(self) -> list[CellResult]:
        return [c for c in self.cells if c.error is not None]


def _standardized(train: FeatureMatrix, test: FeatureMatrix):
    mu = train.values.mean(axis=0)
    sd = train.values.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)

    def scale(fm: FeatureMatrix) -> FeatureMatrix:
        return FeatureMatrix(
            values=(fm.values - mu) / sd,
            doc_ids=fm.doc_ids,
            class_names=fm.class_names,
            labels=fm.labels,
            zero_term_doc_ids=fm.zero_term_doc_ids,
        )

    return scale(train), scale(test)


def _run_classifier(
    label: str,
    config: ExperimentConfig,
    f_train: FeatureMatrix,
    f_test: FeatureMatrix,
    seed: int,
) -> np.ndarray:
    if label.startswith("knn_k"):
        model = KnnModel(train=f_train, k_neighbors=int(label.removeprefix("knn_k")))
        return knn_predict_many(model, f_test)
    kind = label.removeprefix("svm_")
    spec = next(s for s in config.svm_kernels if s.kind == kind)
    model = svm_fit(
        f_train,
        kernel=spec,
        C=config.svm_c,
        tolerance=config.svm_tolerance,
        seed=seed,
    )
    return svm_predict_many(model, f_test)


def run_sweep(config: ExperimentConfig, corpus: LabeledCorpus | None = None) -> RunReport:
    """Execute the full sweep; cell failures are recorded, not raised.

    ``corpus`` may be passed to skip re-loading (the CLI loads once for
    validation). Raises DataError only if the corpus itself cannot be
    loaded or split preconditions fail for every combination.
    """
    t_start = time.perf_counter()
    if corpus is None:
        corpus = load_corpus(config.corpus_path, config.corpus_format)
    labels = config.classifier_labels()
    cells: list[CellResult] = []
    stage_timings: list[dict] = []

    for fraction in config.train_fractions:
        for seed in config.seeds:
            cells.extend(_run_split_cells(config, corpus, fraction, seed, labels, stage_timings))

    report = RunReport(
        config=config.as_dict(),
        dataset={
            "path": str(config.corpus_path),
            "format": config.corpus_format,
            "n_documents": len(corpus),
            "class_names": list(corpus.class_names),
            "fingerprint": corpus_fingerprint(corpus),
        },
        versions={
            "termclass": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        cells=cells,
        stage_timings=stage_timings,
        total_seconds=time.perf_counter() - t_start,
    )
    return report


def _run_split_cells(config, corpus, fraction, seed, labels, stage_timings):
    """All cells for one (fraction, seed); shared-stage errors poison them all."""
    cells = []
    timing = {"train_fraction": fraction, "seed": seed}
    try:
        t0 = time.perf_counter()
        train, test = stratified_split(corpus, SplitSpec(train_fraction=fraction, seed=seed))
        timing["split_s"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        vocab = build_vocabulary(train, config.preprocess, config.min_df)
        timing["vocab_s"] = time.perf_counter() - t0
        timing["vocab_size"] = len(vocab)
        t0 = time.perf_counter()
        stats = build_stats(train, vocab, config.preprocess)
        timing["stats_s"] = time.perf_counter() - t0
    except Exception as exc:  # noqa: BLE001 - every cell reports the shared failure
        for scheme in config.schemes:
            for label in labels:
                cells.append(
                    CellResult(scheme, label, fraction, seed, error=f"{type(exc).__name__}: {exc}")
                )
        stage_timings.append(timing)
        return cells

    for scheme in config.schemes:
        try:
            t0 = time.perf_counter()
            table = relevance_table(stats, scheme)
            timing[f"{scheme}_table_s"] = time.perf_counter() - t0
            t0 = time.perf_counter()
            f_train = represent_corpus(train, vocab, config.preprocess, table, config.token_weighted)
            f_test = represent_corpus(test, vocab, config.preprocess, table, config.token_weighted)
            if config.standardize_features:
                f_train, f_test = _standardized(f_train, f_test)
            timing[f"{scheme}_represent_s"] = time.perf_counter() - t0
        except Exception as exc:  # noqa: BLE001
            for label in labels:
                cells.append(
                    CellResult(scheme, label, fraction, seed, error=f"{type(exc).__name__}: {exc}")
                )
            continue
        for label in labels:
            cell = CellResult(
                scheme=scheme,
                classifier=label,
                train_fraction=fraction,
                seed=seed,
                n_train=len(train),
                n_test=len(test),
                zero_term_train_docs=len(f_train.zero_term_doc_ids),
                zero_term_test_docs=len(f_test.zero_term_doc_ids),
            )
            t0 = time.perf_counter()
            try:
                y_pred = _run_classifier(label, config, f_train, f_test, seed)
                cell.report = evaluate(f_test.labels, y_pred, corpus.k)
            except Exception as exc:  # noqa: BLE001
                cell.error = f"{type(exc).__name__}: {exc}"
            cell.seconds = time.perf_counter() - t0
            cells.append(cell)
    stage_timings.append(timing)
    return cells


# ---------------------------------------------------------------------------
# CSV emission (plot-ready data; no image rendering here)
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return repr(float(value))


def write_csvs(report: dict, outdir) -> list[Path]:
    """Emit per-metric and per-class CSV files from a report dict.

    One file per (classifier, scheme, metric) with a row per train fraction
    (mean/min/max over seeds plus each seed's value), and one per-class
    F-measure file per (classifier, scheme) with a row per class and a column
    per fraction (mean over seeds). Returns the written paths.
    """
    csv_dir = Path(outdir) / "csv"
    csv_dir.mkdir(parents=True, exist_ok=True)
    cells = [c for c in report["cells"] if c.get("metrics")]
    fractions = sorted({c["train_fraction"] for c in cells})
    seeds = sorted({c["seed"] for c in cells})
    class_names = report["dataset"]["class_names"]
    written = []
    pairs = sorted({(c["classifier"], c["scheme"]) for c in cells})
    for classifier, scheme in pairs:
        selected = [c for c in cells if c["classifier"] == classifier and c["scheme"] == scheme]

        def value(fraction, seed, pick):
            for c in selected:
                if c["train_fraction"] == fraction and c["seed"] == seed:
                    return pick(c["metrics"])
            return None

        for metric in METRICS:
            if metric == "accuracy":
                pick = lambda m: m["accuracy"]  # noqa: E731
            else:
                key = metric.removeprefix("macro_")
                pick = lambda m, key=key: m["macro"][key]  # noqa: E731
            path = csv_dir / f"{classifier}_{scheme}_{metric}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["train_fraction", "mean", "min", "max", *(f"seed_{s}" for s in seeds)])
                for fraction in fractions:
                    values = [value(fraction, s, pick) for s in seeds]
                    present = [v for v in values if v is not None]
                    if not present:
                        continue
                    writer.writerow(
                        [
                            _fmt(fraction),
                            _fmt(sum(present) / len(present)),
                            _fmt(min(present)),
                            _fmt(max(present)),
                            *(_fmt(v) if v is not None else "" for v in values),
                        ]
                    )
            written.append(path)

        path = csv_dir / f"{classifier}_{scheme}_per_class_f.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["class", *(_fmt(f) for f in fractions)])
            for j, name in enumerate(class_names):
                row = [name]
                for fraction in fractions:
                    values = [
                        value(fraction, s, lambda m, j=j: m["per_class"]["f_measure"][j])
                        for s in seeds
                    ]
                    present = [v for v in values if v is not None]
                    row.append(_fmt(sum(present) / len(present)) if present else "")
                writer.writerow(row)
        written.append(path)

    confusion_dir = csv_dir / "confusion"
    if cells:
        confusion_dir.mkdir(exist_ok=True)
    for c in cells:
        name = f"{c['classifier']}_{c['scheme']}_f{c['train_fraction']}_seed{c['seed']}.csv"
        path = confusion_dir / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\predicted", *class_names])
            for name_j, row in zip(class_names, c["metrics"]["confusion"]):
                writer.writerow([name_j, *row])
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# Single-model train / predict round trip
# ---------------------------------------------------------------------------


@dataclass
class TrainedModel:
    """A self-contained classifier: preprocessing, score table, and predictor."""

    preprocess: PreprocessConfig
    min_df: int
    vocab: Vocabulary
    scheme: str
    table: TermClassMatrix
    token_weighted: bool
    class_names: tuple[str, ...]
    knn: KnnModel | None = None
    svm: SvmModel | None = None

    @property
    def classifier_kind(self) -> str:
        return "knn" if self.knn is not None else "svm"


def train_model(
    corpus: LabeledCorpus,
    preprocess: PreprocessConfig,
    min_df: int,
    scheme: str,
    classifier: str,
    knn_k: int = 10,
    kernel: KernelSpec | None = None,
    C: float = 1.0,
    tolerance: float = 1e-3,
    seed: int = 0,
    token_weighted: bool = False,
) -> TrainedModel:
    """Fit a single model on the whole labeled corpus."""
    vocab = build_vocabulary(corpus, preprocess, min_df)
    stats = build_stats(corpus, vocab, preprocess)
    table = relevance_table(stats, scheme)
    features = represent_corpus(corpus, vocab, preprocess, table, token_weighted)
    model = TrainedModel(
        preprocess=preprocess,
        min_df=min_df,
        vocab=vocab,
        scheme=scheme,
        table=table,
        token_weighted=token_weighted,
        class_names=corpus.class_names,
    )
    if classifier == "knn":
        model.knn = KnnModel(train=features, k_neighbors=knn_k)
    elif classifier == "svm":
        model.svm = svm_fit(
            features, kernel=kernel or KernelSpec(), C=C, tolerance=tolerance, seed=seed
        )
    else:
        raise ConfigError(f"unknown classifier {classifier!r}; expected 'knn' or 'svm'")
    return model


def predict_with_model(model: TrainedModel, docs) -> list[str]:
    """Predict class names for (id, text) pairs or Document objects."""
    rows = np.zeros((len(docs), len(model.class_names)), dtype=np.float64)
    for r, doc in enumerate(docs):
        if not isinstance(doc, Document):
            doc = Document(id=str(doc[0]), class_label="(unlabeled)", text=str(doc[1]))
        counts = count_terms(doc, model.vocab, model.preprocess)
        rows[r] = represent_document(counts, model.table, model.token_weighted).values
    if model.knn is not None:
        pred = knn_predict_many(model.knn, rows)
    else:
        pred = svm_predict_many(model.svm, rows)
    return [model.class_names[int(j)] for j in pred]


def save_model(model: TrainedModel, path) -> None:
    obj = {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "preprocess": {
            "lowercase": model.preprocess.lowercase,
            "min_token_len": model.preprocess.min_token_len,
            "drop_all_digit_tokens": model.preprocess.drop_all_digit_tokens,
            "strip_headers": model.preprocess.strip_headers,
            "stopwords": sorted(model.preprocess.stopwords),
        },
        "min_df": model.min_df,
        "vocabulary": list(model.vocab.terms),
        "class_names": list(model.class_names),
        "scheme": model.scheme,
        "token_weighted": model.token_weighted,
        "table": model.table.scores.tolist(),
    }
    if model.knn is not None:
        obj["classifier"] = {
            "type": "knn",
            "k_neighbors": model.knn.k_neighbors,
            "features": model.knn.train.values.tolist(),
            "labels": model.knn.train.labels.tolist(),
            "doc_ids": list(model.knn.train.doc_ids),
        }
    else:
        obj["classifier"] = {
            "type": "svm",
            "C": model.svm.C,
            "tolerance": model.svm.tolerance,
            "gamma": model.svm.gamma,
            "kernel": {
                "kind": model.svm.kernel.kind,
                "gamma": model.svm.kernel.gamma,
                "degree": model.svm.kernel.degree,
                "coef0": model.svm.kernel.coef0,
            },
            "machines": [
                {
                    "class_index": m.class_index,
                    "coef": m.coef.tolist(),
                    "support_vectors": m.support_vectors.tolist(),
                    "bias": m.bias,
                }
                for m in model.svm.machines
            ],
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"model file {path} is not valid JSON: {exc}") from exc
    if obj.get("format") != MODEL_FORMAT:
        raise DataError(f"{path} is not a {MODEL_FORMAT} file")
    pp = obj["preprocess"]
    preprocess = PreprocessConfig(
        lowercase=pp["lowercase"],
        min_token_len=pp["min_token_len"],
        drop_all_digit_tokens=pp["drop_all_digit_tokens"],
        stopwords=frozenset(pp["stopwords"]),
        strip_headers=pp["strip_headers"],
    )
    vocab = Vocabulary(terms=tuple(obj["vocabulary"]), min_df=int(obj["min_df"]))
    class_names = tuple(obj["class_names"])
    table = TermClassMatrix(
        scheme=obj["scheme"],
        scores=np.array(obj["table"], dtype=np.float64),
        terms=vocab.terms,
        class_names=class_names,
    )
    model = TrainedModel(
        preprocess=preprocess,
        min_df=int(obj["min_df"]),
        vocab=vocab,
        scheme=obj["scheme"],
        table=table,
        token_weighted=bool(obj["token_weighted"]),
        class_names=class_names,
    )
    clf = obj["classifier"]
    if clf["type"] == "knn":
        features = FeatureMatrix(
            values=np.array(clf["features"], dtype=np.float64),
            doc_ids=tuple(clf["doc_ids"]),
            class_names=class_names,
            labels=np.array(clf["labels"], dtype=np.int64),
        )
        model.knn = KnnModel(train=features, k_neighbors=int(clf["k_neighbors"]))
    elif clf["type"] == "svm":
        kspec = clf["kernel"]
        kernel = KernelSpec(
            kind=kspec["kind"], gamma=kspec["gamma"], degree=kspec["degree"], coef0=kspec["coef0"]
        )
        machines = [
            BinaryMachine(
                class_index=int(m["class_index"]),
                coef=np.array(m["coef"], dtype=np.float64),
                support_vectors=np.array(m["support_vectors"], dtype=np.float64).reshape(
                    len(m["coef"]), len(class_names)
                ),
                bias=float(m["bias"]),
            )
            for m in clf["machines"]
        ]
        model.svm = SvmModel(
            machines=machines,
            kernel=kernel,
            gamma=float(clf["gamma"]),
            C=float(clf["C"]),
            tolerance=float(clf["tolerance"]),
            class_names=class_names,
            feature_dim=len(class_names),
        )
    else:
        raise DataError(f"unknown classifier type {clf.get('type')!r} in {path}")
    return model
