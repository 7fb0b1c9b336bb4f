"""Class-conditional Gaussian tasks, their shifts, and exact linear accuracies.

Labels are uniform on {-1, +1} and x | y ~ N(mu * y, noise). The noise is
either isotropic (sigma^2 I) or diagonal. A linear classifier sign(theta^T x)
then has accuracy Phi(theta^T mu / sqrt(theta^T Sigma theta)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .numerics import normal_cdf, probit

__all__ = [
    "Isotropic",
    "Diagonal",
    "GaussianTask",
    "MeanShift",
    "AdversarialMeanShift",
    "CovarianceAdd",
    "CovarianceScale",
    "ShiftSpec",
    "LinearClassifier",
    "LabeledSample",
    "Dataset",
    "AuxTask",
    "ShiftIncompatibleError",
    "make_rng",
    "sample_unit_sphere",
    "random_task",
    "diagonal_covariance_task",
    "apply_shift",
    "exact_probit_margin",
    "exact_linear_accuracy",
    "exact_linear_error",
    "probit_deviation",
    "theorem_bound",
    "theorem_bound_union",
    "sample_dataset",
    "make_aux_task",
]

_UNIT_TOL = 1e-12


class ShiftIncompatibleError(ValueError):
    pass


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based (Philox) generator for the stream named by ``keys``.

    Streams with different keys under one master seed are independent, so
    work can be split across threads without sharing a generator.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Isotropic:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class Diagonal:
    variances: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.variances, dtype=float)
        if v.ndim != 1 or v.size == 0 or not np.all(v > 0):
            raise ValueError("diagonal variances must be a non-empty positive vector")
        v.setflags(write=False)
        object.__setattr__(self, "variances", v)


Noise = Union[Isotropic, Diagonal]


@dataclass(frozen=True, eq=False)
class GaussianTask:
    """Binary task with x | y ~ N(mu * y, noise)."""

    mu: np.ndarray
    noise: Noise

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        if mu.ndim != 1 or mu.size == 0:
            raise ValueError("mu must be a non-empty vector")
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        if isinstance(self.noise, Diagonal) and self.noise.variances.size != mu.size:
            raise ValueError("variance vector length differs from dimension")

    @property
    def d(self) -> int:
        return self.mu.size

    def variances(self) -> np.ndarray:
        if isinstance(self.noise, Isotropic):
            return np.full(self.d, self.noise.sigma ** 2)
        return self.noise.variances

    def truncated(self, k: int) -> "GaussianTask":
        """The marginal task on the first ``k`` coordinates."""
        if not 1 <= k <= self.d:
            raise ValueError(f"cannot truncate dimension {self.d} to {k}")
        if isinstance(self.noise, Isotropic):
            return GaussianTask(self.mu[:k], self.noise)
        return GaussianTask(self.mu[:k], Diagonal(self.noise.variances[:k]))


@dataclass(frozen=True, eq=False)
class MeanShift:
    """mu' = alpha * mu + beta * delta, sigma' = gamma * sigma, with unit delta."""

    alpha: float
    beta: float
    gamma: float
    delta: np.ndarray

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        delta = np.array(self.delta, dtype=float)
        self._check_delta(delta)
        delta.setflags(write=False)
        object.__setattr__(self, "delta", delta)

    def _check_delta(self, delta):
        if abs(np.linalg.norm(delta) - 1.0) > _UNIT_TOL:
            raise ValueError(f"shift direction must be a unit vector (norm {np.linalg.norm(delta)!r})")


@dataclass(frozen=True, eq=False)
class AdversarialMeanShift(MeanShift):
    """Mean shift whose direction is c * theta* / ||theta*|| for a target classifier.

    Built with :meth:`targeting`; the direction has norm |c| <= 1.
    """

    c: float = 0.0

    @classmethod
    def targeting(cls, alpha, beta, gamma, c, target_theta) -> "AdversarialMeanShift":
        if not -1.0 <= c <= 1.0:
            raise ValueError("c must lie in [-1, 1]")
        t = np.asarray(target_theta, dtype=float)
        norm = np.linalg.norm(t)
        if norm == 0:
            raise ValueError("target classifier is all zeros")
        return cls(alpha, beta, gamma, c * t / norm, c=float(c))

    def _check_delta(self, delta):
        if np.linalg.norm(delta) > 1.0 + _UNIT_TOL:
            raise ValueError("adversarial shift direction must have norm at most 1")


@dataclass(frozen=True)
class CovarianceAdd:
    """Sigma' = Sigma + s2 * I."""

    s2: float

    def __post_init__(self):
        if not self.s2 > 0:
            raise ValueError("s2 must be positive")


@dataclass(frozen=True)
class CovarianceScale:
    """Sigma' = kappa * Sigma."""

    kappa: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")


ShiftSpec = Union[MeanShift, CovarianceAdd, CovarianceScale]


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    """x -> sign(theta^T x), no intercept."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        if theta.ndim != 1:
            raise ValueError("theta must be a vector")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def d(self) -> int:
        return self.theta.size

    @property
    def is_zero(self) -> bool:
        return not np.any(self.theta)

    def padded(self, d: int) -> "LinearClassifier":
        """Embed into dimension ``d`` by appending zero weights."""
        if d < self.d:
            raise ValueError(f"cannot pad dimension {self.d} down to {d}")
        if d == self.d:
            return self
        out = np.zeros(d)
        out[: self.d] = self.theta
        return LinearClassifier(out)

    def predict(self, X: np.ndarray) -> np.ndarray:
        # sign(0) counts as +1
        return np.where(np.asarray(X)[:, : self.d] @ self.theta >= 0, 1, -1)


@dataclass(frozen=True)
class LabeledSample:
    x: np.ndarray
    y: int


@dataclass(frozen=True, eq=False)
class Dataset:
    """Samples stored row-wise: ``X`` is (n, d), ``y`` holds labels in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise ValueError("X must be (n, d) and y must have length n")
        if y.size and not np.all(np.isin(y, (-1, 1))):
            raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y.astype(np.int64))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[LabeledSample]:
        for x, y in zip(self.X, self.y):
            yield LabeledSample(x, int(y))

    @classmethod
    def from_samples(cls, samples) -> "Dataset":
        samples = list(samples)
        return cls(np.array([s.x for s in samples], dtype=float), np.array([s.y for s in samples]))

    @classmethod
    def concat(cls, *parts: "Dataset") -> "Dataset":
        return cls(np.vstack([p.X for p in parts]), np.concatenate([p.y for p in parts]))


@dataclass(frozen=True, eq=False)
class AuxTask:
    base: GaussianTask
    delta_tilde: np.ndarray = field(repr=False)


def sample_unit_sphere(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the unit sphere in R^d (normalized Gaussian)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    while True:
        v = rng.standard_normal(d)
        norm = np.linalg.norm(v)
        if norm > 0:
            return v / norm


def random_task(d: int, sigma: float, rng: np.random.Generator, mu_norm: float = 1.0) -> GaussianTask:
    """Isotropic task with mu drawn uniformly from the sphere of radius ``mu_norm``."""
    return GaussianTask(mu_norm * sample_unit_sphere(d, rng), Isotropic(sigma))


def diagonal_covariance_task(
    d: int,
    n_small: int,
    big: float,
    small: float,
    rng: np.random.Generator,
    mu_norm: float = 1.0,
) -> GaussianTask:
    """Diagonal-noise task: ``n_small`` randomly placed variances ``small``, the rest ``big``."""
    if not 0 <= n_small <= d:
        raise ValueError("n_small must lie in [0, d]")
    mu = mu_norm * sample_unit_sphere(d, rng)
    variances = np.full(d, float(big))
    variances[rng.choice(d, size=n_small, replace=False)] = small
    return GaussianTask(mu, Diagonal(variances))


def apply_shift(task: GaussianTask, shift: ShiftSpec) -> GaussianTask:
    """The shifted task D'. ``task`` is not modified."""
    if isinstance(shift, MeanShift):
        if not isinstance(task.noise, Isotropic):
            raise ShiftIncompatibleError("mean shifts require an isotropic task")
        if shift.delta.size != task.d:
            raise ShiftIncompatibleError("shift direction dimension differs from task")
        mu = shift.alpha * task.mu + shift.beta * shift.delta
        return GaussianTask(mu, Isotropic(shift.gamma * task.noise.sigma))
    if isinstance(shift, CovarianceAdd):
        if isinstance(task.noise, Isotropic):
            return GaussianTask(task.mu, Isotropic(math.sqrt(task.noise.sigma ** 2 + shift.s2)))
        return GaussianTask(task.mu, Diagonal(task.noise.variances + shift.s2))
    if isinstance(shift, CovarianceScale):
        if isinstance(task.noise, Isotropic):
            return GaussianTask(task.mu, Isotropic(task.noise.sigma * math.sqrt(shift.kappa)))
        return GaussianTask(task.mu, Diagonal(task.noise.variances * shift.kappa))
    raise ShiftIncompatibleError(f"unknown shift {shift!r}")


def _check_clf(task: GaussianTask, clf: LinearClassifier):
    if clf.d != task.d:
        raise ValueError(f"classifier dimension {clf.d} differs from task dimension {task.d}")
    if clf.is_zero:
        raise ValueError("the zero classifier has no defined accuracy")


def exact_probit_margin(task: GaussianTask, clf: LinearClassifier) -> float:
    """theta^T mu / sqrt(theta^T Sigma theta): the probit of the exact accuracy."""
    _check_clf(task, clf)
    theta = clf.theta
    if isinstance(task.noise, Isotropic):
        scale = np.linalg.norm(theta) * task.noise.sigma
    else:
        scale = math.sqrt(float(np.dot(theta * task.noise.variances, theta)))
    return float(np.dot(theta, task.mu)) / scale


def exact_linear_accuracy(task: GaussianTask, clf: LinearClassifier) -> float:
    return normal_cdf(exact_probit_margin(task, clf))


def exact_linear_error(task: GaussianTask, clf: LinearClassifier) -> float:
    """1 - accuracy, evaluated in the lower tail so it stays accurate near 0."""
    return normal_cdf(-exact_probit_margin(task, clf))


def probit_deviation(
    task: GaussianTask, shift: MeanShift, clf: LinearClassifier, tol: float = 1e-8
) -> float:
    """probit(acc_D') - (alpha/gamma) probit(acc_D) for a mean shift.

    Computed from the exact accuracies and checked against the closed form
    (beta / (gamma sigma)) * theta^T delta / ||theta||; an ArithmeticError is
    raised if the two disagree by more than ``tol``.
    """
    if not isinstance(task.noise, Isotropic):
        raise ShiftIncompatibleError("probit deviation is defined for isotropic tasks")
    _check_clf(task, clf)
    shifted = apply_shift(task, shift)
    via_acc = -probit(exact_linear_error(shifted, clf)) + (shift.alpha / shift.gamma) * probit(
        exact_linear_error(task, clf)
    )
    theta = clf.theta
    closed = (shift.beta / (shift.gamma * task.noise.sigma)) * float(
        np.dot(theta, shift.delta) / np.linalg.norm(theta)
    )
    if abs(via_acc - closed) > tol:
        raise ArithmeticError(
            f"probit deviation paths disagree: exact accuracies give {via_acc!r}, closed form {closed!r}"
        )
    return float(via_acc)


def theorem_bound(beta: float, gamma: float, sigma: float, d: int, delta: float) -> float:
    """High-probability bound (1 - delta) on |probit_deviation| for a direction-independent classifier."""
    return theorem_bound_union(beta, gamma, sigma, d, delta, n_models=1)


def theorem_bound_union(
    beta: float, gamma: float, sigma: float, d: int, delta: float, n_models: int = 1
) -> float:
    """Bound holding simultaneously for ``n_models`` classifiers (union bound)."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if n_models < 1 or d < 1 or gamma <= 0 or sigma <= 0 or beta < 0:
        raise ValueError("invalid bound parameters")
    return (beta / (gamma * sigma)) * math.sqrt(2.0 * math.log(2.0 * n_models / delta) / d)


def sample_dataset(task: GaussianTask, n: int, rng: np.random.Generator) -> Dataset:
    """Draw ``n`` i.i.d. labelled samples from ``task``."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    y = np.where(rng.random(n) < 0.5, -1, 1)
    noise = rng.standard_normal((n, task.d))
    if isinstance(task.noise, Isotropic):
        noise *= task.noise.sigma
    else:
        noise *= np.sqrt(task.noise.variances)
    X = noise
    X += y[:, None] * task.mu
    return Dataset(X, y)


def make_aux_task(
    shifted: GaussianTask, beta: float, sigma_aux: float, rng: np.random.Generator
) -> AuxTask:
    """The auxiliary distribution D'': mean mu' + beta * delta~ with a fresh direction."""
    delta_tilde = sample_unit_sphere(shifted.d, rng)
    return AuxTask(GaussianTask(shifted.mu + beta * delta_tilde, Isotropic(sigma_aux)), delta_tilde)
