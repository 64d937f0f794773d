"""KNN cross-validated wrapper fitness."""

from __future__ import annotations

import threading

import numpy as np

from .data import Dataset, stratified_folds
from .model import FitnessRecord

# Bound on the (queries x train x features) difference tensor built per chunk.
_CHUNK_ELEMS = 4_000_000


def _knn_votes(train_X: np.ndarray, train_y: np.ndarray, queries: np.ndarray, k: int, n_classes: int) -> np.ndarray:
    """Predicted labels for each query row.

    Distance ties go to the lower training index (stable sort) and vote ties
    to the smaller class id (first argmax).
    """
    n_train = train_X.shape[0]
    k = min(k, n_train)
    width = max(train_X.shape[1], 1)
    step = max(1, _CHUNK_ELEMS // (n_train * width))
    onehot = (train_y[:, None] == np.arange(n_classes)).astype(np.int64)
    out = np.empty(queries.shape[0], dtype=np.int64)
    for start in range(0, queries.shape[0], step):
        q = queries[start : start + step]
        d = ((q[:, None, :] - train_X[None, :, :]) ** 2).sum(axis=-1)
        # Same set as the first k of a stable argsort, without the full sort:
        # everything strictly inside the k-th distance, then the lowest-index ties.
        kth = np.partition(d, k - 1, axis=1)[:, k - 1 : k]
        inside = d < kth
        on_edge = d == kth
        room = k - inside.sum(axis=1, keepdims=True)
        chosen = inside | (on_edge & (np.cumsum(on_edge, axis=1) <= room))
        votes = chosen.astype(np.int64) @ onehot
        out[start : start + step] = votes.argmax(axis=1)
    return out


def knn_predict(train_X, train_y, query, k: int) -> int:
    """Majority label among the ``k`` nearest training rows (Euclidean)."""
    train_X = np.asarray(train_X, dtype=float)
    train_y = np.asarray(train_y, dtype=np.int64)
    if train_X.ndim == 1:
        train_X = train_X[:, None]
    if train_X.shape[0] == 0:
        raise ValueError("empty training set")
    if k < 1:
        raise ValueError("k must be >= 1")
    query = np.asarray(query, dtype=float).reshape(1, -1)
    n_classes = int(train_y.max()) + 1
    return int(_knn_votes(train_X, train_y, query, k, n_classes)[0])


def wrapper_fitness(accuracy: float, selected_count: int, n: int, alpha: float, beta: float) -> FitnessRecord:
    """Weighted sum of accuracy and the fraction of features left out."""
    if not 1 <= selected_count <= n:
        raise ValueError(f"selected_count {selected_count} outside [1, {n}]")
    if not 0.0 <= accuracy <= 1.0:
        raise ValueError(f"accuracy {accuracy} outside [0, 1]")
    fitness = alpha * accuracy + beta * (n - selected_count) / n
    return FitnessRecord(fitness=fitness, accuracy=accuracy, selected_count=selected_count, n_features=n)


class EvalContext:
    """Fixed-fold KNN evaluator shared by every whale of a run.

    Scores are memoized by bitmask; the evaluation counter still counts every
    request so it reflects the number of wrapper evaluations the search made.
    """

    def __init__(self, dataset: Dataset, knn_k: int = 5, cv_folds: int = 5, seed: int = 0, folds=None):
        self.dataset = dataset
        self.knn_k = knn_k
        self.cv_folds = cv_folds
        self.folds = np.asarray(folds) if folds is not None else stratified_folds(dataset.y, cv_folds, seed)
        self._splits = [
            (np.flatnonzero(self.folds != f), np.flatnonzero(self.folds == f)) for f in range(cv_folds)
        ]
        self._splits = [(tr, te) for tr, te in self._splits if te.size]
        self._memo: dict[bytes, float] = {}
        self._lock = threading.Lock()
        self.evaluations = 0

    @property
    def n_features(self) -> int:
        return self.dataset.n_features

    def _count(self):
        with self._lock:
            self.evaluations += 1

    def __call__(self, mask) -> float:
        return cv_accuracy(self, mask)


def cv_accuracy(ctx: EvalContext, mask) -> float:
    """Mean held-out accuracy over the folds of ``ctx`` using only masked features."""
    mask = np.asarray(mask, dtype=bool)
    if mask.shape[0] != ctx.n_features:
        raise ValueError(f"mask length {mask.shape[0]} != {ctx.n_features} features")
    if not mask.any():
        raise ValueError("cannot evaluate an empty feature subset")
    ctx._count()
    key = np.packbits(mask).tobytes()
    cached = ctx._memo.get(key)
    if cached is not None:
        return cached
    X = ctx.dataset.X[:, mask]
    y = ctx.dataset.y
    n_classes = ctx.dataset.n_classes
    scores = []
    for train, test in ctx._splits:
        pred = _knn_votes(X[train], y[train], X[test], ctx.knn_k, n_classes)
        scores.append(float(np.mean(pred == y[test])))
    acc = float(np.mean(scores))
    ctx._memo[key] = acc
    return acc
