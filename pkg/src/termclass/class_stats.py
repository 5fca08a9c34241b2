"""Single-pass class-conditional counting over a training corpus.

``ClassTermStats`` holds every count the relevance formulas consume, as exact
integers: per-class and corpus document frequencies, per-class occurrence
totals, class sizes, and in-vocabulary word totals. The arrays are immutable
in spirit (never mutated after the build) and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import LabeledCorpus
from .errors import DataError
from .preprocess import PreprocessConfig, Vocabulary, count_terms


@dataclass
class ClassTermStats:
    """Counts over a training corpus for a fixed vocabulary and class list.

    Shapes: ``class_frequency`` and ``term_frequency`` are |V| x k,
    ``corpus_frequency`` is |V|, ``class_sizes`` and ``words_per_class`` are k.
    ``words_per_class`` counts in-vocabulary token occurrences only, so the
    word-total ratios downstream close over the modeled vocabulary.
    ``source_doc_ids`` records which documents fed the build (leakage audits).
    """

    class_names: tuple[str, ...]
    vocab: Vocabulary
    class_sizes: np.ndarray
    class_frequency: np.ndarray
    corpus_frequency: np.ndarray
    term_frequency: np.ndarray
    words_per_class: np.ndarray
    total_words: int
    total_docs: int
    source_doc_ids: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.class_names)

    def validate(self) -> None:
        """Check the internal count identities; raises DataError on violation."""
        if not np.array_equal(self.class_frequency.sum(axis=1), self.corpus_frequency):
            raise DataError("class_frequency rows do not sum to corpus_frequency")
        if not np.array_equal(self.term_frequency.sum(axis=0), self.words_per_class):
            raise DataError("term_frequency columns do not sum to words_per_class")
        if int(self.words_per_class.sum()) != self.total_words:
            raise DataError("words_per_class does not sum to total_words")
        if int(self.class_sizes.sum()) != self.total_docs:
            raise DataError("class_sizes does not sum to total_docs")
        if np.any(self.corpus_frequency < 1):
            raise DataError("a vocabulary term occurs in no training document")

    def as_dict(self) -> dict:
        """JSON-friendly dump for inspection (not load-bearing)."""
        return {
            "class_names": list(self.class_names),
            "class_sizes": self.class_sizes.tolist(),
            "words_per_class": self.words_per_class.tolist(),
            "total_words": self.total_words,
            "total_docs": self.total_docs,
            "terms": [
                {
                    "term": t,
                    "corpus_frequency": int(self.corpus_frequency[i]),
                    "class_frequency": self.class_frequency[i].tolist(),
                    "term_frequency": self.term_frequency[i].tolist(),
                }
                for i, t in enumerate(self.vocab.terms)
            ],
        }


def build_stats(
    train: LabeledCorpus, vocab: Vocabulary, config: PreprocessConfig
) -> ClassTermStats:
    """Count everything in one pass over the training documents."""
    if len(train) == 0:
        raise DataError("cannot build stats from an empty corpus")
    n_terms, k = len(vocab), train.k
    class_frequency = np.zeros((n_terms, k), dtype=np.int64)
    term_frequency = np.zeros((n_terms, k), dtype=np.int64)
    class_sizes = np.zeros(k, dtype=np.int64)
    words_per_class = np.zeros(k, dtype=np.int64)
    for doc in train:
        j = train.class_index[doc.class_label]
        class_sizes[j] += 1
        counts = count_terms(doc, vocab, config).counts
        for i, c in counts.items():
            term_frequency[i, j] += c
            class_frequency[i, j] += 1
            words_per_class[j] += c
    return ClassTermStats(
        class_names=train.class_names,
        vocab=vocab,
        class_sizes=class_sizes,
        class_frequency=class_frequency,
        corpus_frequency=class_frequency.sum(axis=1),
        term_frequency=term_frequency,
        words_per_class=words_per_class,
        total_words=int(words_per_class.sum()),
        total_docs=len(train),
        source_doc_ids=tuple(d.id for d in train),
    )


def merge_stats(a: ClassTermStats, b: ClassTermStats) -> ClassTermStats:
    """Combine two builds over disjoint document subsets by field-wise sums.

    Every count is additive over disjoint document sets, so a merge equals a
    single build over the union. Requires identical vocabulary and class list.
    """
    if a.vocab.terms != b.vocab.terms or a.class_names != b.class_names:
        raise DataError("cannot merge stats built over different vocabularies or classes")
    overlap = set(a.source_doc_ids) & set(b.source_doc_ids)
    if overlap:
        raise DataError(f"cannot merge stats sharing documents: {sorted(overlap)[:5]}")
    return ClassTermStats(
        class_names=a.class_names,
        vocab=a.vocab,
        class_sizes=a.class_sizes + b.class_sizes,
        class_frequency=a.class_frequency + b.class_frequency,
        corpus_frequency=a.corpus_frequency + b.corpus_frequency,
        term_frequency=a.term_frequency + b.term_frequency,
        words_per_class=a.words_per_class + b.words_per_class,
        total_words=a.total_words + b.total_words,
        total_docs=a.total_docs + b.total_docs,
        source_doc_ids=tuple(sorted(a.source_doc_ids + b.source_doc_ids)),
    )
