"""k-nearest-neighbour classification with deterministic tie-breaking."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gaussian_shift import Dataset


@dataclass(frozen=True, eq=False)
class KNNModel:
    """Majority vote over the k nearest training points (Euclidean).

    Distance ties go to the lower training index; a split vote goes to the
    label of the single nearest neighbour. Queries wider than the training
    data are truncated to its leading coordinates.
    """

    train: Dataset
    k: int

    def __post_init__(self):
        if self.train.n == 0:
            raise ValueError("empty training set")
        if not 1 <= self.k <= self.train.n:
            raise ValueError(f"k must lie in [1, {self.train.n}], got {self.k}")

    @property
    def d(self) -> int:
        return self.train.d

    def neighbours(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)[:, : self.d]
        T = self.train.X
        sq = (
            np.einsum("ij,ij->i", X, X)[:, None]
            - 2.0 * (X @ T.T)
            + np.einsum("ij,ij->i", T, T)[None, :]
        )
        return np.argsort(sq, axis=1, kind="stable")[:, : self.k]

    def predict(self, X: np.ndarray) -> np.ndarray:
        idx = self.neighbours(X)
        labels = self.train.y[idx]
        votes = labels.sum(axis=1)
        return np.where(votes > 0, 1, np.where(votes < 0, -1, labels[:, 0]))


def knn_classify(model: KNNModel, x: np.ndarray) -> int:
    return int(model.predict(np.asarray(x, dtype=float)[None, :])[0])
