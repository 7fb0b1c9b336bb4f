"""Logistic regression without intercept, l1 or l2 penalized.

Objective: (1/C) R(theta) + sum_i log(1 + exp(-y_i theta^T x_i)) with
R = ||theta||^2 / 2 (l2) or ||theta||_1 (l1).
"""
from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.special import expit

from ..gaussian_shift import Dataset, LinearClassifier


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, gap: float, theta: np.ndarray | None = None):
        super().__init__(f"{message} (final optimality gap {gap:.3e})")
        self.gap = gap
        self.theta = theta


def _check(data: Dataset, inv_reg_C: float):
    if data.n == 0:
        raise ValueError("empty training set")
    if not (np.any(data.y == 1) and np.any(data.y == -1)):
        raise ValueError("logistic regression needs both labels in the training set")
    if not inv_reg_C > 0:
        raise ValueError("C must be positive")


def _loss_grad(X, y, theta):
    m = y * (X @ theta)
    loss = float(np.sum(np.logaddexp(0.0, -m)))
    s = expit(-m)
    grad = -(X.T @ (y * s))
    return loss, grad, s


def logistic_objective(data: Dataset, theta, penalty: str, inv_reg_C: float) -> float:
    """Value of the penalized objective at ``theta``."""
    X, y = data.X, data.y.astype(float)
    m = y * (X @ np.asarray(theta, dtype=float))
    reg = 0.5 * np.dot(theta, theta) if penalty == "l2" else np.sum(np.abs(theta))
    return float(reg / inv_reg_C + np.sum(np.logaddexp(0.0, -m)))


def _scale(X, y) -> float:
    # gradient of the data term at theta = 0 sets the tolerance scale
    return max(1.0, float(np.max(np.abs(X.T @ y))) / 2.0)


def _newton_direction(X, w, lam, grad):
    n, d = X.shape
    if d <= n:
        H = X.T @ (w[:, None] * X)
        H[np.diag_indices_from(H)] += lam
        return scipy.linalg.solve(H, grad, assume_a="pos")
    # Woodbury: (lam I + B^T B)^-1 g = (g - B^T (lam I + B B^T)^-1 B g) / lam, B = sqrt(w) X
    B = np.sqrt(w)[:, None] * X
    K = B @ B.T
    K[np.diag_indices_from(K)] += lam
    inner = scipy.linalg.solve(K, B @ grad, assume_a="pos")
    return (grad - B.T @ inner) / lam


def _fit_l2(X, y, lam, tol, max_iter):
    theta = np.zeros(X.shape[1])
    scale = _scale(X, y)
    loss, g, s = _loss_grad(X, y, theta)
    f = loss
    for _ in range(max_iter):
        grad = g + lam * theta
        gap = float(np.max(np.abs(grad))) / scale
        if gap <= tol:
            return theta, gap
        step = _newton_direction(X, s * (1.0 - s), lam, grad)
        slope = float(np.dot(grad, step))
        g_norm = float(np.max(np.abs(grad)))
        t = 1.0
        while True:
            cand = theta - t * step
            c_loss, c_g, c_s = _loss_grad(X, y, cand)
            c_f = c_loss + 0.5 * lam * float(np.dot(cand, cand))
            if c_f <= f - 1e-4 * t * slope or t < 1e-12:
                break
            # objective changes below rounding: accept if the gradient shrinks
            if c_f <= f + 64 * np.finfo(float).eps * abs(f) and (
                float(np.max(np.abs(c_g + lam * cand))) < g_norm
            ):
                break
            t *= 0.5
        theta, g, s, f = cand, c_g, c_s, c_f
    grad = g + lam * theta
    gap = float(np.max(np.abs(grad))) / scale
    if gap <= tol:
        return theta, gap
    raise ConvergenceError("l2 logistic regression did not converge", gap, theta)


def _l1_gap(grad, theta, lam):
    nz = theta != 0
    sub = np.where(nz, np.abs(grad + lam * np.sign(theta)), np.maximum(np.abs(grad) - lam, 0.0))
    return float(np.max(sub)) if sub.size else 0.0


def _fit_l1(X, y, lam, tol, max_iter):
    """Accelerated proximal gradient with function-value restarts, then a
    Newton polish on the identified support."""
    d = X.shape[1]
    scale = _scale(X, y)
    L = max(float(np.linalg.norm(X, 2)) ** 2 / 4.0, 1e-300)
    thr = lam / L
    theta = np.zeros(d)
    z = theta.copy()
    t = 1.0
    f_prev = np.inf
    gap = np.inf
    coarse = max(tol, 1e-6)
    for _ in range(max_iter):
        _, gz, _ = _loss_grad(X, y, z)
        u = z - gz / L
        new = np.sign(u) * np.maximum(np.abs(u) - thr, 0.0)
        loss, g_new, _ = _loss_grad(X, y, new)
        f_new = loss + lam * float(np.sum(np.abs(new)))
        if f_new > f_prev:
            # restart momentum from the last iterate
            z = theta.copy()
            t = 1.0
            continue
        gap = _l1_gap(g_new, new, lam) / scale
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        z = new + ((t - 1.0) / t_next) * (new - theta)
        theta, t, f_prev = new, t_next, f_new
        if gap <= coarse:
            break
    if gap <= tol:
        return theta, gap
    theta, gap = _polish_l1(X, y, lam, theta, tol, scale)
    if gap <= tol:
        return theta, gap
    raise ConvergenceError("l1 logistic regression did not converge", gap, theta)


def _polish_l1(X, y, lam, theta, tol, scale, max_rounds=100):
    """Orthant-projected Newton steps on the active coordinates."""
    loss, g, s = _loss_grad(X, y, theta)
    f = loss + lam * float(np.sum(np.abs(theta)))
    gap = _l1_gap(g, theta, lam) / scale
    for _ in range(max_rounds):
        if gap <= tol:
            break
        orient = np.sign(theta)
        entering = (theta == 0) & (np.abs(g) > lam)
        orient[entering] = -np.sign(g[entering])
        active = np.flatnonzero(orient)
        if active.size == 0:
            break
        Xa = X[:, active]
        grad_a = g[active] + lam * orient[active]
        H = Xa.T @ ((s * (1.0 - s))[:, None] * Xa)
        H[np.diag_indices_from(H)] += 1e-12 * max(1.0, float(np.max(np.diag(H))))
        step = scipy.linalg.solve(H, grad_a, assume_a="sym")
        step_len = 1.0
        while step_len > 1e-12:
            cand = theta.copy()
            cand[active] = theta[active] - step_len * step
            # coordinates leaving their orthant are clipped to zero
            cand[active] = np.where(cand[active] * orient[active] < 0, 0.0, cand[active])
            c_loss, c_g, c_s = _loss_grad(X, y, cand)
            c_f = c_loss + lam * float(np.sum(np.abs(cand)))
            if c_f <= f:
                break
            step_len *= 0.5
        else:
            break
        theta, g, s, f = cand, c_g, c_s, c_f
        gap = _l1_gap(g, theta, lam) / scale
    return theta, gap


def train_logistic(
    data: Dataset,
    penalty: str = "l2",
    inv_reg_C: float = 1.0,
    tol: float = 1e-8,
    max_iter: int | None = None,
) -> LinearClassifier:
    """Fit penalized logistic regression; raises ConvergenceError after ``max_iter``.

    ``tol`` bounds the sup-norm of the (minimum-norm sub)gradient, relative to
    max(1, ||X^T y||_inf / 2). l2 uses damped Newton steps; l1 uses FISTA.
    """
    _check(data, inv_reg_C)
    X, y = data.X, data.y.astype(float)
    lam = 1.0 / inv_reg_C
    if penalty == "l2":
        theta, _ = _fit_l2(X, y, lam, tol, max_iter or 100)
    elif penalty == "l1":
        theta, _ = _fit_l1(X, y, lam, tol, max_iter or 200_000)
    else:
        raise ValueError(f"unknown penalty {penalty!r}")
    return LinearClassifier(theta)
