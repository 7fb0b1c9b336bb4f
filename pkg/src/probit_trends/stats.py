"""Evaluation statistics for ID/OOD scatter data.

Exact binomial intervals, the macro-F1 interval heuristic, trend fitting in a
transformed domain, effective robustness, the correlation-property check and
the random-classifier interpolation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import brentq

from .numerics import (
    TransformKind,
    apply_transform,
    clamp_probability,
    normal_cdf,
    probit,
    regularized_beta,
)

__all__ = [
    "MetricEstimate",
    "EvalRecord",
    "TrendLine",
    "TrendFit",
    "PerClassF1",
    "CorrelationTransform",
    "DegenerateFitError",
    "clopper_pearson",
    "per_class_f1",
    "macro_f1_ci",
    "fit_line",
    "fit_trend",
    "effective_robustness",
    "check_correlation_property",
    "interpolate_with_random",
]

_ROOT_XTOL = 1e-14


class DegenerateFitError(ValueError):
    """Raised when a trend cannot be fitted (fewer than two distinct x values)."""


@dataclass(frozen=True)
class MetricEstimate:
    """A probability-valued metric with its confidence interval.

    ``n`` is None for exactly computed metrics, whose interval has zero width.
    """

    value: float
    n: int | None = None
    ci_lo: float | None = None
    ci_hi: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"metric value outside [0, 1]: {self.value}")
        if self.n is not None and self.n < 1:
            raise ValueError(f"sample count must be >= 1, got {self.n}")
        if self.ci_lo is None:
            object.__setattr__(self, "ci_lo", self.value)
        if self.ci_hi is None:
            object.__setattr__(self, "ci_hi", self.value)
        if not (0.0 <= self.ci_lo <= self.value <= self.ci_hi <= 1.0):
            raise ValueError(
                f"inconsistent interval: {self.ci_lo} <= {self.value} <= {self.ci_hi}"
            )

    @classmethod
    def exact(cls, value: float) -> "MetricEstimate":
        return cls(float(value))

    @classmethod
    def from_counts(cls, successes: int, n: int, confidence: float = 0.95) -> "MetricEstimate":
        lo, hi = clopper_pearson(successes, n, confidence)
        return cls(successes / n, n, lo, hi)

    @property
    def is_exact(self) -> bool:
        return self.n is None


@dataclass(frozen=True)
class EvalRecord:
    """One model's paired ID/OOD metrics: a single scatter point.

    Records whose ``status`` is not ``"ok"`` carry no metrics and are
    ignored by fits.
    """

    model_id: str
    family: str
    hyperparams: Mapping[str, object] = field(default_factory=dict)
    metric_id: MetricEstimate | None = None
    metric_ood: MetricEstimate | None = None
    status: str = "ok"

    def __post_init__(self):
        if self.status == "ok" and (self.metric_id is None or self.metric_ood is None):
            raise ValueError(f"record {self.model_id!r} has status ok but no metrics")

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class TrendLine:
    transform: TransformKind
    slope: float
    intercept: float

    def predict(self, x_transformed):
        return self.slope * np.asarray(x_transformed) + self.intercept


@dataclass(frozen=True)
class TrendFit(TrendLine):
    r_squared: float = 1.0
    n_points: int = 2


@dataclass(frozen=True)
class PerClassF1:
    f1: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("class must appear in the test data (n >= 1)")
        if not 0.0 <= self.f1 <= 1.0:
            raise ValueError(f"F1 outside [0, 1]: {self.f1}")


@dataclass(frozen=True)
class CorrelationTransform:
    """gamma(l) = Phi(slope * probit(l) + offset)."""

    slope: float
    offset: float

    def __post_init__(self):
        if not math.isfinite(self.slope):
            raise ValueError("slope must be finite")

    def __call__(self, acc):
        return normal_cdf(self.slope * probit(acc) + self.offset)


def clopper_pearson(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact binomial confidence interval for ``successes`` out of ``n``.

    Each endpoint is the root of a binomial tail equation, bracketed in
    [0, 1] and solved with Brent's method.
    """
    if n < 1 or successes < 0 or successes > n:
        raise ValueError(f"invalid counts: successes={successes}, n={n}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    tail = (1.0 - confidence) / 2.0
    k = successes
    if k == 0:
        lo = 0.0
    else:
        # P[Bin(n, p) >= k] = I_p(k, n - k + 1), increasing in p
        lo = brentq(lambda p: regularized_beta(p, k, n - k + 1) - tail,
                    0.0, 1.0, xtol=_ROOT_XTOL, rtol=4 * np.finfo(float).eps)
    if k == n:
        hi = 1.0
    else:
        # P[Bin(n, p) <= k] = 1 - I_p(k + 1, n - k), decreasing in p
        hi = brentq(lambda p: regularized_beta(p, k + 1, n - k, upper=True) - tail,
                    0.0, 1.0, xtol=_ROOT_XTOL, rtol=4 * np.finfo(float).eps)
    return lo, hi


def per_class_f1(y_true: Sequence, y_pred: Sequence) -> dict[object, PerClassF1]:
    """Per-class F1 for every class present in ``y_true``.

    A class with zero precision and recall gets F1 = 0.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have the same shape")
    out = {}
    for c in sorted(set(y_true.tolist())):
        tp = int(np.sum((y_true == c) & (y_pred == c)))
        fp = int(np.sum((y_true != c) & (y_pred == c)))
        fn = int(np.sum((y_true == c) & (y_pred != c)))
        denom = 2 * tp + fp + fn
        out[c] = PerClassF1(2 * tp / denom if tp > 0 else 0.0, tp + fn)
    return out


def macro_f1_ci(classes: Iterable[PerClassF1], confidence: float = 0.95) -> tuple[float, float]:
    """Macro F1 and the half-width of its heuristic interval.

    Each class contributes the half-width of the Clopper-Pearson interval for
    floor(n_i / 2) successes in n_i trials; the average half-width is scaled
    by 1/sqrt(C).
    """
    classes = list(classes)
    if not classes:
        raise ValueError("macro F1 needs at least one class")
    deltas = []
    for c in classes:
        lo, hi = clopper_pearson(c.n // 2, c.n, confidence)
        deltas.append((hi - lo) / 2.0)
    f_bar = math.fsum(c.f1 for c in classes) / len(classes)
    d_bar = math.fsum(deltas) / len(deltas)
    return f_bar, d_bar / math.sqrt(len(classes))


def fit_line(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """OLS of y on x; returns (slope, intercept, r_squared).

    Sums use math.fsum so the result does not depend on point order.
    """
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    if n != len(y):
        raise ValueError("x and y differ in length")
    if n < 2 or len(set(x)) < 2:
        raise DegenerateFitError("need at least two distinct x values to fit a line")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(a * a for a in dx)
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    syy = math.fsum(b * b for b in dy)
    slope = sxy / sxx
    intercept = my - slope * mx
    if syy == 0.0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, (sxy * sxy) / (sxx * syy)))
    return slope, intercept, r2


def _transformed(metric: MetricEstimate, kind: TransformKind) -> float:
    return float(apply_transform(metric.value, kind, clamp_n=metric.n))


def _fit_points(records: Iterable[EvalRecord], kind: TransformKind):
    xs, ys = [], []
    for r in records:
        if not r.ok:
            continue
        if kind is not TransformKind.LINEAR:
            degenerate = [
                m for m in (r.metric_id, r.metric_ood)
                if m.n is None and m.value in (0.0, 1.0)
            ]
            if degenerate:
                warnings.warn(
                    f"excluding {r.model_id!r} from {kind.value} fit: exact accuracy of 0 or 1",
                    stacklevel=3,
                )
                continue
        xs.append(_transformed(r.metric_id, kind))
        ys.append(_transformed(r.metric_ood, kind))
    return xs, ys


def fit_trend(records: Iterable[EvalRecord], transform: "TransformKind | str" = TransformKind.PROBIT) -> TrendFit:
    """Fit transformed OOD metric against transformed ID metric.

    Metrics with a sample count are clamped by the 1/(2n) rule before
    transforming; exact metrics equal to 0 or 1 are dropped with a warning.
    """
    kind = TransformKind.parse(transform)
    xs, ys = _fit_points(records, kind)
    slope, intercept, r2 = fit_line(xs, ys)
    return TrendFit(kind, slope, intercept, r2, len(xs))


def effective_robustness(record: EvalRecord, fit: TrendLine) -> float:
    """Signed residual of the record above ``fit`` in the fit's domain."""
    x = _transformed(record.metric_id, fit.transform)
    y = _transformed(record.metric_ood, fit.transform)
    return y - (fit.slope * x + fit.intercept)


def check_correlation_property(
    records: Iterable[EvalRecord], gamma: CorrelationTransform, alpha: float
) -> tuple[bool, float]:
    """Largest |gamma(acc_id) - acc_ood| over the records, and whether it is <= alpha."""
    records = [r for r in records if r.ok]
    if not records:
        raise ValueError("correlation property needs at least one record")
    worst = 0.0
    for r in records:
        l_id = clamp_probability(r.metric_id.value, r.metric_id.n)
        dev = abs(float(gamma(l_id)) - r.metric_ood.value)
        worst = max(worst, dev)
    return worst <= alpha, worst


def interpolate_with_random(
    acc_id: float, acc_ood: float, num_classes: int, ps: Iterable[float]
) -> list[tuple[float, float]]:
    """Accuracies of the model that answers with probability p and guesses otherwise."""
    if num_classes < 2:
        raise ValueError("need at least two classes")
    for a in (acc_id, acc_ood):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"accuracy outside [0, 1]: {a}")
    chance = 1.0 / num_classes
    out = []
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"mixing probability outside [0, 1]: {p}")
        out.append((p * acc_id + (1.0 - p) * chance, p * acc_ood + (1.0 - p) * chance))
    return out
