"""k-nearest-neighbor classification with Euclidean distance.

Distances are scanned brute-force: the feature dimension equals the class
count and training sets are small, so an index buys nothing. Tie rules are
fixed and deterministic: equal distances rank by lower training-row index,
and a tied vote goes to the class of the nearest neighbor among the tied
classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .representation import FeatureMatrix, FeatureVector


@dataclass
class KnnModel:
    """Stored training rows plus the neighbor count."""

    train: FeatureMatrix
    k_neighbors: int = 10

    def __post_init__(self):
        if len(self.train) == 0:
            raise DataError("cannot build a k-NN model from an empty feature matrix")
        if self.train.labels is None:
            raise DataError("k-NN training data must be labeled")
        if not 1 <= self.k_neighbors <= len(self.train):
            raise DataError(
                f"k_neighbors={self.k_neighbors} out of range for "
                f"{len(self.train)} training rows"
            )


def _vote(model: KnnModel, d2: np.ndarray) -> int:
    # Stable sort on squared distances: equal distances resolve to the lower
    # training-row index. Squaring preserves the Euclidean ordering.
    order = np.argsort(d2, kind="stable")[: model.k_neighbors]
    top_labels = model.train.labels[order]
    votes = np.bincount(top_labels, minlength=model.train.k)
    best = votes.max()
    tied = np.flatnonzero(votes == best)
    if len(tied) == 1:
        return int(tied[0])
    tied_set = set(tied.tolist())
    for label in top_labels:
        if int(label) in tied_set:
            return int(label)
    raise AssertionError("unreachable: some neighbor must carry a tied class")


def knn_predict(model: KnnModel, query: FeatureVector | np.ndarray) -> int:
    """Predict the class index of one query vector."""
    q = query.values if isinstance(query, FeatureVector) else np.asarray(query, dtype=np.float64)
    if q.shape != (model.train.k,):
        raise DataError(
            f"query has dimension {q.shape}, expected ({model.train.k},)"
        )
    d2 = ((model.train.values - q) ** 2).sum(axis=1)
    return _vote(model, d2)


def knn_predict_many(model: KnnModel, queries: FeatureMatrix | np.ndarray, chunk: int = 256) -> np.ndarray:
    """Predict class indices for many queries, chunked to bound memory."""
    Q = queries.values if isinstance(queries, FeatureMatrix) else np.asarray(queries, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[1] != model.train.k:
        raise DataError(f"query matrix has shape {Q.shape}, expected (*, {model.train.k})")
    out = np.empty(len(Q), dtype=np.int64)
    X = model.train.values
    for start in range(0, len(Q), chunk):
        block = Q[start : start + chunk]
        # (q - x)^2 summed over features, for every (query, train) pair
        d2 = (
            (block**2).sum(axis=1)[:, None]
            - 2.0 * block @ X.T
            + (X**2).sum(axis=1)[None, :]
        )
        np.maximum(d2, 0.0, out=d2)
        for r in range(len(block)):
            out[start + r] = _vote(model, d2[r])
    return out
