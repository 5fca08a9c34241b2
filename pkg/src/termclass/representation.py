"""Class-count-dimensional document vectors.

A document becomes a vector of length k (the number of classes): component j
is the mean relevance-to-class-j over the document's distinct in-vocabulary
terms. The per-term score table is the trained state; no |V|-dimensional
vector is ever materialized. Documents with no in-vocabulary terms map to the
zero vector and are flagged, not rejected.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .corpus import LabeledCorpus
from .preprocess import PreprocessConfig, TermCounts, Vocabulary, count_terms
from .weighting import TermClassMatrix


@dataclass
class FeatureVector:
    """One document's k-dimensional representation."""

    doc_id: str
    values: np.ndarray


@dataclass
class FeatureMatrix:
    """Stacked feature vectors, one row per document.

    ``labels`` holds class indices when the source corpus was labeled, else
    None. ``zero_term_doc_ids`` lists documents that contained no
    in-vocabulary term and therefore map to the zero vector.
    """

    values: np.ndarray
    doc_ids: tuple[str, ...]
    class_names: tuple[str, ...]
    labels: np.ndarray | None = None
    zero_term_doc_ids: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.class_names)

    def __len__(self) -> int:
        return len(self.doc_ids)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["doc_id", "label", *self.class_names])
            for row, doc_id in enumerate(self.doc_ids):
                label = "" if self.labels is None else self.class_names[int(self.labels[row])]
                writer.writerow([doc_id, label, *(repr(float(v)) for v in self.values[row])])


def represent_document(
    counts: TermCounts, table: TermClassMatrix, token_weighted: bool = False
) -> FeatureVector:
    """Average the relevance rows of the document's terms, per class.

    By default each distinct term contributes once regardless of repetition;
    with ``token_weighted`` the mean is weighted by occurrence counts (a
    sensitivity-analysis alternative). No terms -> zero vector.
    """
    k = table.k
    if not counts.counts:
        return FeatureVector(doc_id=counts.doc_id, values=np.zeros(k, dtype=np.float64))
    idx = np.fromiter(counts.counts.keys(), dtype=np.int64, count=len(counts.counts))
    if token_weighted:
        weights = np.fromiter(counts.counts.values(), dtype=np.float64, count=len(counts.counts))
        values = weights @ table.scores[idx] / weights.sum()
    else:
        values = table.scores[idx].mean(axis=0)
    return FeatureVector(doc_id=counts.doc_id, values=values)


def represent_corpus(
    corpus: LabeledCorpus,
    vocab: Vocabulary,
    config: PreprocessConfig,
    table: TermClassMatrix,
    token_weighted: bool = False,
) -> FeatureMatrix:
    """Represent every document of a corpus, one row per document in corpus order."""
    k = table.k
    values = np.zeros((len(corpus), k), dtype=np.float64)
    doc_ids = []
    zero_term = []
    for row, doc in enumerate(corpus):
        counts = count_terms(doc, vocab, config)
        if not counts.counts:
            zero_term.append(doc.id)
        values[row] = represent_document(counts, table, token_weighted).values
        doc_ids.append(doc.id)
    return FeatureMatrix(
        values=values,
        doc_ids=tuple(doc_ids),
        class_names=table.class_names,
        labels=corpus.labels(),
        zero_term_doc_ids=tuple(zero_term),
    )
