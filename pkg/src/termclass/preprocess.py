"""Text normalization: tokenizing, vocabulary construction, per-document counts.

The pipeline is deliberately plain so runs are bit-reproducible: tokens are
maximal alphanumeric runs, optionally lowercased, with length / all-digit /
stopword filters. No stemming, no n-grams. Every knob lives in
``PreprocessConfig`` and is echoed into experiment reports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .corpus import Document, LabeledCorpus
from .errors import ConfigError, DataError

# Maximal runs of alphanumeric characters (word chars minus underscore).
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@lru_cache(maxsize=1)
def smart_stopwords() -> frozenset[str]:
    """The SMART English stopword list shipped with the package."""
    data = resources.files("termclass.data").joinpath("smart_stopwords.txt").read_text("utf-8")
    return frozenset(w for w in data.split() if w)


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: one word per line, UTF-8.

    Entries are lowercased so they match tokens regardless of the file's
    casing (stopword filtering runs after lowercasing).
    """
    text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    min_token_len: int = 2
    drop_all_digit_tokens: bool = True
    stopwords: frozenset[str] = field(default_factory=smart_stopwords)
    strip_headers: bool = False

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ConfigError(f"min_token_len must be >= 1, got {self.min_token_len}")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))


def _strip_headers(text: str) -> str:
    # Drop lines up to the first blank line; keep everything if there is none.
    for mark in ("\n\n", "\r\n\r\n"):
        pos = text.find(mark)
        if pos >= 0:
            return text[pos + len(mark):]
    return text


def tokenize(text: str, config: PreprocessConfig) -> list[str]:
    """Split text into filtered tokens, preserving order.

    Tokens are maximal alphanumeric runs; lowercasing, the minimum-length
    filter, the all-digit filter, and stopword removal are applied per the
    config. Empty input yields an empty list.
    """
    if config.strip_headers:
        text = _strip_headers(text)
    if config.lowercase:
        text = text.lower()
    tokens = _TOKEN_RE.findall(text)
    out = []
    for tok in tokens:
        if len(tok) < config.min_token_len:
            continue
        if config.drop_all_digit_tokens and tok.isdigit():
            continue
        if tok in config.stopwords:
            continue
        out.append(tok)
    return out


@dataclass(frozen=True)
class Vocabulary:
    """Lexicographically ordered term list with its index map.

    Built from training text only: terms are the distinct tokens whose
    document frequency in the training corpus is at least ``min_df``.
    """

    terms: tuple[str, ...]
    min_df: int
    index: dict[str, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


def build_vocabulary(train: LabeledCorpus, config: PreprocessConfig, min_df: int = 1) -> Vocabulary:
    """Collect training terms with document frequency >= min_df, sorted.

    Test text must never reach this function; the vocabulary (and everything
    derived from it) is training-side state.
    """
    if len(train) == 0:
        raise DataError("cannot build a vocabulary from an empty corpus")
    if min_df < 1:
        raise ConfigError(f"min_df must be >= 1, got {min_df}")
    df: dict[str, int] = {}
    for doc in train:
        for term in set(tokenize(doc.text, config)):
            df[term] = df.get(term, 0) + 1
    terms = sorted(t for t, n in df.items() if n >= min_df)
    if not terms:
        raise DataError(
            f"empty vocabulary: no term reaches document frequency {min_df} "
            f"over {len(train)} training documents"
        )
    return Vocabulary(terms=tuple(terms), min_df=min_df)


@dataclass(frozen=True)
class TermCounts:
    """Occurrence counts of in-vocabulary terms for one document."""

    doc_id: str
    counts: dict[int, int]


def count_terms(doc: Document, vocab: Vocabulary, config: PreprocessConfig) -> TermCounts:
    """Count in-vocabulary token occurrences; out-of-vocabulary tokens are dropped."""
    counts: dict[int, int] = {}
    for tok in tokenize(doc.text, config):
        i = vocab.index.get(tok)
        if i is not None:
            counts[i] = counts.get(i, 0) + 1
    return TermCounts(doc_id=doc.id, counts=counts)
