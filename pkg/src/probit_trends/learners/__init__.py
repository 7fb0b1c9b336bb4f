"""From-scratch trainers for the simulation's model roster."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..gaussian_shift import Dataset, GaussianTask, LinearClassifier, exact_linear_accuracy, sample_dataset
from ..stats import MetricEstimate
from .forest import ForestModel, Tree, build_tree, train_forest
from .knn import KNNModel, knn_classify
from .logistic import ConvergenceError, logistic_objective, train_logistic
from .ridge import ridge_dual, ridge_primal, train_ridge

__all__ = [
    "Logistic",
    "Ridge",
    "KNN",
    "RandomForest",
    "LearnerSpec",
    "TrainedModel",
    "ConvergenceError",
    "ForestModel",
    "KNNModel",
    "Tree",
    "build_tree",
    "train",
    "train_logistic",
    "train_ridge",
    "train_forest",
    "ridge_primal",
    "ridge_dual",
    "knn_classify",
    "logistic_objective",
    "subsample",
    "project",
    "count_correct",
    "empirical_accuracy",
]


@dataclass(frozen=True)
class Logistic:
    penalty: str = "l2"
    inv_reg_C: float = 1.0

    def __post_init__(self):
        if self.penalty not in ("l1", "l2"):
            raise ValueError(f"penalty must be l1 or l2, got {self.penalty!r}")
        if not self.inv_reg_C > 0:
            raise ValueError("C must be positive")

    @property
    def family(self) -> str:
        return f"logistic-{self.penalty}"

    def hyperparams(self) -> dict:
        return {"C": self.inv_reg_C}


@dataclass(frozen=True)
class Ridge:
    reg_alpha: float = 1.0

    def __post_init__(self):
        if not self.reg_alpha > 0:
            raise ValueError("ridge alpha must be positive")

    family = "ridge"

    def hyperparams(self) -> dict:
        return {"alpha": self.reg_alpha}


@dataclass(frozen=True)
class KNN:
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    family = "knn"

    def hyperparams(self) -> dict:
        return {"k": self.k}


@dataclass(frozen=True)
class RandomForest:
    n_trees: int = 100
    max_depth: int | None = None

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")

    family = "forest"

    def hyperparams(self) -> dict:
        out = {"trees": self.n_trees}
        if self.max_depth is not None:
            out["max_depth"] = self.max_depth
        return out


LearnerSpec = Union[Logistic, Ridge, KNN, RandomForest]
TrainedModel = Union[LinearClassifier, KNNModel, ForestModel]


def is_linear(spec: LearnerSpec) -> bool:
    return isinstance(spec, (Logistic, Ridge))


def train(spec: LearnerSpec, data: Dataset, rng: np.random.Generator | None = None, tol: float = 1e-8) -> TrainedModel:
    if isinstance(spec, Logistic):
        return train_logistic(data, spec.penalty, spec.inv_reg_C, tol=tol)
    if isinstance(spec, Ridge):
        return train_ridge(data, spec.reg_alpha)
    if isinstance(spec, KNN):
        return KNNModel(data, spec.k)
    if isinstance(spec, RandomForest):
        if rng is None:
            raise ValueError("random forests need a generator")
        return train_forest(data, spec.n_trees, spec.max_depth, rng)
    raise TypeError(f"unknown learner spec {spec!r}")


def subsample(data: Dataset, n_sub: int) -> Dataset:
    """The first ``n_sub`` samples, in order."""
    if not 1 <= n_sub <= data.n:
        raise ValueError(f"n_sub must lie in [1, {data.n}], got {n_sub}")
    return Dataset(data.X[:n_sub], data.y[:n_sub])


def project(data: Dataset, d_proj: int) -> Dataset:
    """Keep the first ``d_proj`` coordinates of every sample."""
    if not 1 <= d_proj <= data.d:
        raise ValueError(f"d_proj must lie in [1, {data.d}], got {d_proj}")
    return Dataset(data.X[:, :d_proj], data.y)


def count_correct(model: TrainedModel, data: Dataset) -> int:
    return int(np.sum(model.predict(data.X) == data.y))


_CHUNK = 4096


def empirical_accuracy(
    model: TrainedModel,
    task: GaussianTask,
    n_test: int,
    rng: np.random.Generator | None = None,
    confidence: float = 0.95,
    exact: bool = False,
) -> MetricEstimate:
    """Accuracy on ``n_test`` fresh samples with a Clopper-Pearson interval.

    For linear models ``exact=True`` skips sampling and returns the
    closed-form accuracy (zero-width interval). Models trained on a
    coordinate prefix are scored on the same prefix of ``task``.
    """
    if exact:
        if not isinstance(model, LinearClassifier):
            raise TypeError("exact accuracy is only available for linear models")
        return MetricEstimate.exact(exact_linear_accuracy(task, model.padded(task.d)))
    if n_test < 1:
        raise ValueError("n_test must be >= 1")
    if rng is None:
        raise ValueError("sampling needs a generator")
    sub = task.truncated(min(task.d, model.d))
    correct = 0
    remaining = n_test
    while remaining:
        m = min(_CHUNK, remaining)
        correct += count_correct(model, sample_dataset(sub, m, rng))
        remaining -= m
    return MetricEstimate.from_counts(correct, n_test, confidence)
