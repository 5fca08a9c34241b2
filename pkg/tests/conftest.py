"""Shared fixtures: the three-document toy corpus, random corpora, naive recounts."""

import numpy as np
import pytest

import termclass as tc

TINY_DOCS = (
    ("A1", "A", "x x y"),
    ("A2", "A", "x z"),
    ("B1", "B", "y y y x"),
)


def plain_config(**overrides):
    """Preprocessing with every filter off, so tokens are just whitespace words."""
    base = dict(
        lowercase=True,
        min_token_len=1,
        drop_all_digit_tokens=False,
        stopwords=frozenset(),
    )
    base.update(overrides)
    return tc.PreprocessConfig(**base)


@pytest.fixture
def tiny_corpus():
    return tc.LabeledCorpus([tc.Document(*d) for d in TINY_DOCS])


@pytest.fixture
def tiny(tiny_corpus):
    """(corpus, config, vocab, stats) for the two-class toy corpus."""
    config = plain_config()
    vocab = tc.build_vocabulary(tiny_corpus, config, min_df=1)
    stats = tc.build_stats(tiny_corpus, vocab, config)
    return tiny_corpus, config, vocab, stats


def random_corpus(rng, max_docs=10, n_terms=20, max_classes=4, min_per_class=1):
    """A small random corpus: classes c0.., ids cJdN, 1-12 tokens per document."""
    k = int(rng.integers(2, max_classes + 1))
    terms = [f"t{i:02d}" for i in range(n_terms)]
    per_class = [min_per_class] * k
    extra = int(rng.integers(0, max(1, max_docs - k * min_per_class + 1)))
    for _ in range(extra):
        per_class[int(rng.integers(k))] += 1
    docs = []
    for j in range(k):
        for n in range(per_class[j]):
            words = rng.choice(terms, size=int(rng.integers(1, 13)))
            docs.append(tc.Document(f"c{j}d{n}", f"c{j}", " ".join(words)))
    return tc.LabeledCorpus(docs)


def naive_stats(corpus, vocab, config):
    """Recount every statistic with plain loops, independently of build_stats.

    Re-tokenizes per document and counts with dicts; returns plain arrays for
    comparison against the streaming implementation.
    """
    V, k = len(vocab), corpus.k
    cf = np.zeros((V, k), dtype=np.int64)
    tf = np.zeros((V, k), dtype=np.int64)
    wpc = np.zeros(k, dtype=np.int64)
    for doc in corpus:
        j = corpus.class_index[doc.class_label]
        tokens = [t for t in tc.tokenize(doc.text, config) if t in vocab]
        wpc[j] += len(tokens)
        seen = set()
        for t in tokens:
            i = vocab.index[t]
            tf[i, j] += 1
            if i not in seen:
                cf[i, j] += 1
                seen.add(i)
    return {
        "class_frequency": cf,
        "term_frequency": tf,
        "corpus_frequency": cf.sum(axis=1),
        "words_per_class": wpc,
        "total_words": int(wpc.sum()),
        "total_docs": len(corpus),
    }


def separable_corpus(n_per_class=20, n_classes=3, seed=7):
    """Disjoint per-class vocabularies, so any sane classifier should be exact."""
    rng = np.random.default_rng(seed)
    docs = []
    for j in range(n_classes):
        words = [f"w{j}{i}" for i in range(6)]
        for n in range(n_per_class):
            text = " ".join(rng.choice(words, size=int(rng.integers(3, 9))))
            docs.append(tc.Document(f"k{j}n{n:02d}", f"class{j}", text))
    return tc.LabeledCorpus(docs)
