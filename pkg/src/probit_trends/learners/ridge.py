"""Ridge regression onto +-1 labels, used as a linear classifier."""
from __future__ import annotations

import numpy as np
import scipy.linalg

from ..gaussian_shift import Dataset, LinearClassifier


def ridge_primal(X: np.ndarray, y: np.ndarray, reg_alpha: float) -> np.ndarray:
    """(X^T X + alpha I)^-1 X^T y, a d x d solve."""
    G = X.T @ X
    G[np.diag_indices_from(G)] += reg_alpha
    return scipy.linalg.solve(G, X.T @ y, assume_a="pos")


def ridge_dual(X: np.ndarray, y: np.ndarray, reg_alpha: float) -> np.ndarray:
    """X^T (X X^T + alpha I)^-1 y, an n x n solve."""
    K = X @ X.T
    K[np.diag_indices_from(K)] += reg_alpha
    return X.T @ scipy.linalg.solve(K, y, assume_a="pos")


def train_ridge(data: Dataset, reg_alpha: float, method: str = "auto") -> LinearClassifier:
    """Minimize ||X theta - y||^2 + alpha ||theta||^2 without intercept.

    ``method="auto"`` solves in the dual when d > n.
    """
    if data.n == 0:
        raise ValueError("empty training set")
    if not reg_alpha > 0:
        raise ValueError("ridge regularization must be positive")
    y = data.y.astype(float)
    if method == "auto":
        method = "dual" if data.d > data.n else "primal"
    if method == "dual":
        theta = ridge_dual(data.X, y, reg_alpha)
    elif method == "primal":
        theta = ridge_primal(data.X, y, reg_alpha)
    else:
        raise ValueError(f"unknown ridge method {method!r}")
    return LinearClassifier(theta)
