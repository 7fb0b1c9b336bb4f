"""Bagged CART trees with Gini splits on random feature subsets."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..gaussian_shift import Dataset

_LEAF = -1


@dataclass(frozen=True, eq=False)
class Tree:
    """Flat tree arrays; ``feature[i] == -1`` marks a leaf.

    ``value`` is the fraction of +1 labels among the training rows in a node.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    @property
    def is_leaf(self) -> bool:
        return self.n_nodes == 1

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=int)
        for i in range(self.n_nodes):
            if self.feature[i] != _LEAF:
                depths[self.left[i]] = depths[self.right[i]] = depths[i] + 1
        return int(depths.max())

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = np.flatnonzero(self.feature[node] != _LEAF)
        while active.size:
            cur = node[active]
            go_left = X[active, self.feature[cur]] <= self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])
            active = active[self.feature[node[active]] != _LEAF]
        return self.value[node]

    def predict(self, X: np.ndarray) -> np.ndarray:
        # an evenly split leaf predicts -1
        return np.where(self.predict_proba(X) > 0.5, 1, -1)


def _best_split(Xn: np.ndarray, yn: np.ndarray, features: np.ndarray):
    """Lowest weighted Gini over ``features``; None if no feature varies.

    Ties resolve to the earliest feature in ``features``, then the lowest threshold.
    """
    m = yn.size
    cols = Xn[:, features]
    order = np.argsort(cols, axis=0, kind="stable")
    sv = np.take_along_axis(cols, order, axis=0)
    pos = np.cumsum(yn[order], axis=0)[:-1]
    n_left = np.arange(1, m, dtype=float)[:, None]
    n_right = m - n_left
    total_pos = yn.sum()
    p_left = pos / n_left
    p_right = (total_pos - pos) / n_right
    impurity = n_left * 2.0 * p_left * (1.0 - p_left) + n_right * 2.0 * p_right * (1.0 - p_right)
    valid = sv[1:] > sv[:-1]
    if not valid.any():
        return None
    impurity = np.where(valid, impurity, np.inf).T  # (features, positions)
    flat = int(np.argmin(impurity))
    fi, row = divmod(flat, m - 1)
    threshold = 0.5 * (sv[row, fi] + sv[row + 1, fi])
    if not threshold < sv[row + 1, fi]:
        # midpoint rounded up onto the right value
        threshold = sv[row, fi]
    return int(features[fi]), float(threshold)


def build_tree(
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    max_features: int | None = None,
    max_depth: int | None = None,
) -> Tree:
    """Grow a CART tree on labels in {-1, +1} until nodes are pure or ``max_depth``.

    At each node ``max_features`` candidate features are drawn without
    replacement; if none of them varies, further features are tried in the
    same random order.
    """
    n, d = X.shape
    y01 = (np.asarray(y) > 0).astype(float)
    k = d if max_features is None else max(1, min(d, int(max_features)))
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(idx):
        feature.append(_LEAF)
        threshold.append(0.0)
        left.append(_LEAF)
        right.append(_LEAF)
        value.append(float(y01[idx].mean()))
        return len(feature) - 1

    stack = [(new_node(np.arange(n)), np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        v = value[node]
        if v in (0.0, 1.0) or idx.size < 2 or (max_depth is not None and depth >= max_depth):
            continue
        perm = rng.permutation(d)
        Xn, yn = X[idx], y01[idx]
        split = _best_split(Xn, yn, perm[:k])
        if split is None and k < d:
            split = _best_split(Xn, yn, perm[k:])
        if split is None:
            continue
        f, t = split
        go_left = Xn[:, f] <= t
        li, ri = idx[go_left], idx[~go_left]
        feature[node], threshold[node] = f, t
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # right child pushed first so the left subtree is numbered first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))
    return Tree(
        np.asarray(feature, dtype=np.int64),
        np.asarray(threshold, dtype=float),
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.asarray(value, dtype=float),
    )


@dataclass(frozen=True, eq=False)
class ForestModel:
    """Majority vote of trees; a tied vote falls back to the mean leaf fraction, then -1."""

    trees: tuple
    d: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)[:, : self.d]
        votes = np.zeros(X.shape[0])
        proba = np.zeros(X.shape[0])
        for tree in self.trees:
            p = tree.predict_proba(X)
            votes += np.where(p > 0.5, 1.0, -1.0)
            proba += p
        return np.where(votes > 0, 1, np.where(votes < 0, -1, np.where(proba > 0.5 * len(self.trees), 1, -1)))


def train_forest(
    data: Dataset,
    n_trees: int,
    max_depth: int | None,
    rng: np.random.Generator,
    max_features: int | str | None = "sqrt",
    bootstrap: bool = True,
) -> ForestModel:
    """Random forest: each tree sees a bootstrap resample of size n and
    sqrt(d) candidate features per split."""
    if data.n == 0:
        raise ValueError("empty training set")
    if n_trees < 1:
        raise ValueError("need at least one tree")
    if max_features == "sqrt":
        max_features = max(1, int(math.sqrt(data.d)))
    trees = []
    for _ in range(n_trees):
        idx = rng.integers(0, data.n, data.n) if bootstrap else np.arange(data.n)
        trees.append(build_tree(data.X[idx], data.y[idx], rng, max_features, max_depth))
    return ForestModel(tuple(trees), data.d)
