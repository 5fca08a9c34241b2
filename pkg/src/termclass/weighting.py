"""Term-to-class relevance scores.

Two schemes are implemented as pure functions of ``ClassTermStats``:

* ``tcr`` — the product of three factors: the class's share of the corpus
  (class weight), the class's share of the documents containing the term
  (class-term weight), and the class's share of the term's occurrences
  (class-term density).
* ``bayes`` — the posterior probability of the class given the term, built
  from word-count ratios. Algebraically this reduces to the term's per-class
  occurrence share, but it is computed through its three published factors so
  each can be inspected and tested; the simplification serves as a test oracle.

All scores lie in [0, 1].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .class_stats import ClassTermStats
from .errors import ConfigError, DataError

SCHEMES = ("tcr", "bayes")


@dataclass
class TermClassMatrix:
    """|V| x k table of relevance scores for one scheme.

    Rows follow the vocabulary order of ``terms``; columns follow
    ``class_names``. ``source_doc_ids`` records the training documents the
    underlying counts came from.
    """

    scheme: str
    scores: np.ndarray
    terms: tuple[str, ...]
    class_names: tuple[str, ...]
    source_doc_ids: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.class_names)

    def row(self, term: str) -> np.ndarray:
        i = self.terms.index(term)
        return self.scores[i]

    def argmax_class(self, term: str) -> str:
        """Most relevant class for a term (exploration aid, not a classifier)."""
        return self.class_names[int(np.argmax(self.row(term)))]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["term", *self.class_names])
            for i, term in enumerate(self.terms):
                writer.writerow([term, *(repr(float(v)) for v in self.scores[i])])


def class_term_weight(stats: ClassTermStats, i: int, j: int) -> float:
    """Fraction of the documents containing term i that belong to class j."""
    denom = int(stats.corpus_frequency[i])
    if denom == 0:
        raise DataError(
            f"term index {i} occurs in no document; stats/vocabulary mismatch"
        )
    return int(stats.class_frequency[i, j]) / denom


def class_term_density(stats: ClassTermStats, i: int, j: int) -> float:
    """Fraction of term i's occurrences that fall in class j."""
    denom = int(stats.term_frequency[i].sum())
    if denom == 0:
        raise DataError(
            f"term index {i} has zero total occurrences; stats/vocabulary mismatch"
        )
    return int(stats.term_frequency[i, j]) / denom


def class_weight(stats: ClassTermStats, j: int) -> float:
    """Class j's share of the training documents."""
    if stats.class_sizes[j] < 1:
        raise DataError(f"class index {j} has no documents")
    return int(stats.class_sizes[j]) / stats.total_docs


def term_class_relevance(stats: ClassTermStats, i: int, j: int) -> float:
    """Product of class weight, class-term weight, and class-term density."""
    return (
        class_weight(stats, j)
        * class_term_weight(stats, i, j)
        * class_term_density(stats, i, j)
    )


def bayes_posterior(stats: ClassTermStats, i: int, j: int) -> float:
    """Posterior probability of class j given term i, from word-count ratios.

    Computed as P(term|class) * P(class) / P(term) where P(class) is the
    class's share of all in-vocabulary words and P(term|class) its share
    within the class. A class with zero in-vocabulary words contributes 0.
    """
    if stats.total_words < 1:
        raise DataError("stats contain no in-vocabulary words")
    p_term = int(stats.term_frequency[i].sum()) / stats.total_words
    if p_term == 0:
        raise DataError(
            f"term index {i} has zero total occurrences; stats/vocabulary mismatch"
        )
    wpc = int(stats.words_per_class[j])
    if wpc == 0:
        return 0.0
    p_term_given_class = int(stats.term_frequency[i, j]) / wpc
    p_class = wpc / stats.total_words
    return p_term_given_class * p_class / p_term


def relevance_table(stats: ClassTermStats, scheme: str) -> TermClassMatrix:
    """Score every (term, class) pair under the chosen scheme."""
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if np.any(stats.corpus_frequency < 1):
        raise DataError("a vocabulary term occurs in no document; stats/vocabulary mismatch")
    term_totals = stats.term_frequency.sum(axis=1)
    if np.any(term_totals < 1):
        raise DataError("a vocabulary term has zero occurrences; stats/vocabulary mismatch")
    if scheme == "tcr":
        cw = stats.class_sizes / stats.total_docs
        ctw = stats.class_frequency / stats.corpus_frequency[:, None]
        ctd = stats.term_frequency / term_totals[:, None]
        scores = cw[None, :] * ctw * ctd
    else:
        wpc = stats.words_per_class
        with np.errstate(divide="ignore", invalid="ignore"):
            p_t_given_c = np.where(wpc > 0, stats.term_frequency / np.where(wpc > 0, wpc, 1), 0.0)
        p_c = wpc / stats.total_words
        p_t = term_totals / stats.total_words
        scores = p_t_given_c * p_c[None, :] / p_t[:, None]
    return TermClassMatrix(
        scheme=scheme,
        scores=scores.astype(np.float64),
        terms=stats.vocab.terms,
        class_names=stats.class_names,
        source_doc_ids=stats.source_doc_ids,
    )
