"""Special functions: normal cdf, probit/logit, axis transforms, binomial tails.

Functions accept Python floats or numpy arrays and return the same kind.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy.special import betaln, erfc

__all__ = [
    "TransformKind",
    "normal_cdf",
    "probit",
    "logit",
    "inv_logit",
    "apply_transform",
    "inverse_transform",
    "clamp_probability",
    "regularized_beta",
    "binomial_cdf",
]

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


class TransformKind(str, enum.Enum):
    LINEAR = "linear"
    PROBIT = "probit"
    LOGIT = "logit"

    @classmethod
    def parse(cls, value: "str | TransformKind") -> "TransformKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown transform {value!r}; expected one of "
                + ", ".join(k.value for k in cls)
            ) from None


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


def normal_cdf(x):
    """Standard normal cdf, evaluated through erfc so both tails keep relative accuracy."""
    xa = np.asarray(x, dtype=float)
    return _scalar_or_array(0.5 * erfc(-xa / _SQRT2), x)


# Acklam's rational approximation (relative error ~1.15e-9), refined below.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _probit_lower(q: np.ndarray) -> np.ndarray:
    """Inverse cdf for q in (0, 0.5]; returns values <= 0."""
    x = np.empty_like(q)
    tail = q < _P_LOW
    if np.any(tail):
        t = np.sqrt(-2.0 * np.log(q[tail]))
        num = ((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]
        den = (((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0
        x[tail] = num / den
    mid = ~tail
    if np.any(mid):
        u = q[mid] - 0.5
        r = u * u
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * u
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        x[mid] = num / den
    # two Halley steps against the erfc-based cdf
    for _ in range(2):
        err = 0.5 * erfc(-x / _SQRT2) - q
        u = err * _SQRT2PI * np.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    x[q == 0.5] = 0.0
    return x


def probit(p):
    """Inverse standard normal cdf on the open interval (0, 1).

    Raises ValueError for p outside (0, 1). Upper-half inputs are mapped to
    the lower tail through 1 - p (exact for p >= 0.5), which makes the
    function exactly odd about 0.5.
    """
    pa = np.asarray(p, dtype=float)
    if np.any(~(pa > 0.0)) or np.any(~(pa < 1.0)):
        raise ValueError("probit is defined only for 0 < p < 1")
    flat = np.atleast_1d(pa).ravel()
    upper = flat > 0.5
    q = np.where(upper, 1.0 - flat, flat)
    x = _probit_lower(q)
    x = np.where(upper, -x, x).reshape(pa.shape)
    return _scalar_or_array(x, p)


def logit(p):
    pa = np.asarray(p, dtype=float)
    if np.any(~(pa > 0.0)) or np.any(~(pa < 1.0)):
        raise ValueError("logit is defined only for 0 < p < 1")
    return _scalar_or_array(np.log(pa) - np.log1p(-pa), p)


def inv_logit(x):
    xa = np.asarray(x, dtype=float)
    out = np.empty_like(np.atleast_1d(xa))
    flat = np.atleast_1d(xa)
    pos = flat >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-flat[pos]))
    ez = np.exp(flat[~pos])
    out[~pos] = ez / (1.0 + ez)
    return _scalar_or_array(out.reshape(xa.shape), x)


def clamp_probability(p, n):
    """Continuity-corrected clamp into [1/(2n), 1 - 1/(2n)]."""
    if n is None:
        return p
    if n < 1:
        raise ValueError(f"clamp sample size must be >= 1, got {n}")
    eps = 1.0 / (2.0 * n)
    pa = np.clip(np.asarray(p, dtype=float), eps, 1.0 - eps)
    return _scalar_or_array(pa, p)


def apply_transform(p, kind: "TransformKind | str", clamp_n: int | None = None):
    """Map an accuracy onto an axis scale.

    With ``clamp_n`` the value is first clamped by ``clamp_probability``;
    the linear scale is the identity and ignores clamping.
    """
    kind = TransformKind.parse(kind)
    pa = np.asarray(p, dtype=float)
    if np.any(pa < 0.0) or np.any(pa > 1.0) or np.any(np.isnan(pa)):
        raise ValueError(f"probability outside [0, 1]: {p!r}")
    if kind is TransformKind.LINEAR:
        return p if np.ndim(p) == 0 and isinstance(p, float) else _scalar_or_array(pa, p)
    if clamp_n is not None:
        pa = np.asarray(clamp_probability(pa, clamp_n))
    fn = probit if kind is TransformKind.PROBIT else logit
    return _scalar_or_array(fn(pa), p)


def inverse_transform(z, kind: "TransformKind | str"):
    """Map an axis coordinate back to an accuracy."""
    kind = TransformKind.parse(kind)
    if kind is TransformKind.LINEAR:
        return z
    if kind is TransformKind.PROBIT:
        return normal_cdf(z)
    return inv_logit(z)


def _beta_cf(x: float, a: float, b: float, max_iter: int = 10_000, eps: float = 1e-16) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_beta(x: float, a: float, b: float, upper: bool = False) -> float:
    """I_x(a, b), or 1 - I_x(a, b) when ``upper`` is set.

    The tail that is small is computed directly, so both ``upper`` and lower
    values keep full relative accuracy in their own tails.
    """
    if a <= 0 or b <= 0:
        raise ValueError("regularized_beta requires a, b > 0")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 1.0 if upper else 0.0
    if x == 1.0:
        return 0.0 if upper else 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - float(betaln(a, b))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        lower = front * _beta_cf(x, a, b) / a
        return 1.0 - lower if upper else lower
    upper_val = front * _beta_cf(1.0 - x, b, a) / b
    return upper_val if upper else 1.0 - upper_val


def binomial_cdf(k: int, n: int, p: float) -> float:
    """P[Bin(n, p) <= k]."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binomial_cdf requires 0 <= k <= n, got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if k == n:
        return 1.0
    # P[X <= k] = 1 - I_p(k + 1, n - k)
    return regularized_beta(p, k + 1, n - k, upper=True)
