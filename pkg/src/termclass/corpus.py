"""Labeled document collections: loading from disk and seeded stratified splitting.

Two on-disk layouts are supported:

* ``newsgroups_dir``: one subdirectory per class, one flat file per document;
  the file name is the document id.
* ``jsonl``: UTF-8, one JSON object per line with keys ``id``, ``class``,
  ``text``.

A loaded corpus keeps its documents in a canonical order (class name, then
document id), so every downstream computation is a pure function of the
corpus contents rather than of directory iteration order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError

CORPUS_FORMATS = ("newsgroups_dir", "jsonl")


@dataclass(frozen=True)
class Document:
    """One labeled text document."""

    id: str
    class_label: str
    text: str


class LabeledCorpus:
    """An immutable, canonically ordered collection of labeled documents.

    Documents are sorted by (class_label, id); ``class_names`` is the sorted
    list of distinct labels and defines the class index used everywhere else.
    Instances are safe for concurrent reads.
    """

    def __init__(self, documents, class_names=None):
        docs = sorted(documents, key=lambda d: (d.class_label, d.id))
        if not docs:
            raise DataError("corpus contains no documents")
        seen = set()
        for doc in docs:
            if not doc.id:
                raise DataError("document with empty id")
            if not doc.class_label:
                raise DataError(f"document {doc.id!r} has an empty class label")
            if doc.id in seen:
                raise DataError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        if class_names is None:
            class_names = sorted({d.class_label for d in docs})
        else:
            class_names = list(class_names)
            known = set(class_names)
            for doc in docs:
                if doc.class_label not in known:
                    raise DataError(
                        f"document {doc.id!r} has label {doc.class_label!r} "
                        "not in class_names"
                    )
        self.documents: tuple[Document, ...] = tuple(docs)
        self.class_names: tuple[str, ...] = tuple(class_names)
        self.class_index: dict[str, int] = {c: j for j, c in enumerate(self.class_names)}

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def k(self) -> int:
        """Number of classes."""
        return len(self.class_names)

    def labels(self) -> np.ndarray:
        """Class index of every document, in document order."""
        return np.array(
            [self.class_index[d.class_label] for d in self.documents], dtype=np.int64
        )

    def documents_of_class(self, name: str) -> list[Document]:
        return [d for d in self.documents if d.class_label == name]

    def class_sizes(self) -> np.ndarray:
        sizes = np.zeros(self.k, dtype=np.int64)
        for d in self.documents:
            sizes[self.class_index[d.class_label]] += 1
        return sizes


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of a stratified train/test split."""

    train_fraction: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(
                f"train_fraction must lie in (0, 1), got {self.train_fraction}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def load_corpus(path, format: str) -> LabeledCorpus:
    """Load a labeled corpus from ``path`` in the given format.

    Document text is decoded leniently: invalid byte sequences are replaced,
    never fatal. Raises DataError for a missing path, fewer than two classes,
    an empty class, a malformed line, or duplicate document ids (every
    offender is listed).
    """
    root = Path(path)
    if format not in CORPUS_FORMATS:
        raise DataError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    if not root.exists():
        raise DataError(f"corpus path does not exist: {root}")
    if format == "newsgroups_dir":
        return _load_newsgroups_dir(root)
    return _load_jsonl(root)


def _load_newsgroups_dir(root: Path) -> LabeledCorpus:
    if not root.is_dir():
        raise DataError(f"not a directory: {root}")
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if len(class_dirs) < 2:
        raise DataError(
            f"fewer than 2 classes under {root}: found {len(class_dirs)} "
            f"class director{'y' if len(class_dirs) == 1 else 'ies'}"
        )
    documents = []
    seen: dict[str, Path] = {}
    duplicates = []
    for class_dir in class_dirs:
        files = sorted(p for p in class_dir.iterdir() if p.is_file())
        if not files:
            raise DataError(f"empty class directory: {class_dir}")
        for f in files:
            doc_id = f.name
            if doc_id in seen:
                duplicates.append(f"{doc_id!r} in {seen[doc_id]} and {f}")
                continue
            seen[doc_id] = f
            text = f.read_bytes().decode("utf-8", errors="replace")
            documents.append(Document(id=doc_id, class_label=class_dir.name, text=text))
    if duplicates:
        raise DataError("duplicate document ids: " + "; ".join(duplicates))
    return LabeledCorpus(documents, class_names=[d.name for d in class_dirs])


def _load_jsonl(path: Path) -> LabeledCorpus:
    if not path.is_file():
        raise DataError(f"not a file: {path}")
    documents = []
    seen: dict[str, int] = {}
    duplicates = []
    with open(path, encoding="utf-8", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            missing = [key for key in ("id", "class", "text") if key not in obj]
            if missing:
                raise DataError(f"{path}:{lineno}: missing key(s) {missing}")
            doc_id = str(obj["id"])
            if doc_id in seen:
                duplicates.append(f"{doc_id!r} at lines {seen[doc_id]} and {lineno}")
                continue
            seen[doc_id] = lineno
            documents.append(
                Document(id=doc_id, class_label=str(obj["class"]), text=str(obj["text"]))
            )
    if duplicates:
        raise DataError(f"duplicate document ids in {path}: " + "; ".join(duplicates))
    corpus = LabeledCorpus(documents)
    if corpus.k < 2:
        raise DataError(f"fewer than 2 classes in {path}: found {corpus.k}")
    return corpus


def _train_count(fraction: float, class_size: int) -> int:
    # Round half up, then clamp so both sides keep at least one document.
    n = math.floor(fraction * class_size + 0.5)
    return min(max(n, 1), class_size - 1)


def stratified_split(corpus: LabeledCorpus, spec: SplitSpec):
    """Split a corpus into (train, test), stratified per class.

    Each class contributes round(train_fraction * class_size) documents to
    the training side (half-up, clamped to keep >= 1 document on each side).
    Selection is a seeded permutation per class, drawn from a PCG64 generator
    keyed by (seed, class index), so the split depends only on the corpus
    contents, the fraction, and the seed.

    Raises DataError for any class with fewer than 2 documents.
    """
    train_docs: list[Document] = []
    test_docs: list[Document] = []
    for j, name in enumerate(corpus.class_names):
        docs = corpus.documents_of_class(name)
        if len(docs) < 2:
            raise DataError(
                f"class {name!r} has {len(docs)} document(s); need at least 2 to split"
            )
        n_train = _train_count(spec.train_fraction, len(docs))
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([spec.seed, j])))
        order = rng.permutation(len(docs))
        chosen = set(order[:n_train].tolist())
        for idx, doc in enumerate(docs):
            (train_docs if idx in chosen else test_docs).append(doc)
    return (
        LabeledCorpus(train_docs, class_names=corpus.class_names),
        LabeledCorpus(test_docs, class_names=corpus.class_names),
    )
