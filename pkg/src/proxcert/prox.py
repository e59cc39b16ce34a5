"""Closed-form proximal maps and the oracles built on them.

Prox convention throughout: ``prox(v, tau)`` returns
argmin_x g(x) + tau/2 ||x - v||^2, i.e. tau is the weight on the quadratic,
matching the solver update equations. A larger tau means a smaller move.
"""

import numpy as np

__all__ = [
    "soft_threshold",
    "group_soft_threshold",
    "project_nonneg",
    "ProxOracle",
    "ZeroProx",
    "L1Prox",
    "NonnegProx",
    "GroupL21Prox",
    "BoxProx",
]


def soft_threshold(v, mu):
    """Entrywise sign(v) * max(|v| - mu, 0); the prox of mu*||.||_1."""
    if mu < 0:
        raise ValueError("threshold must be nonnegative")
    v = np.asarray(v, dtype=np.float64)
    return np.sign(v) * np.maximum(np.abs(v) - mu, 0.0)


def group_soft_threshold(v, group_size, mu):
    """Blockwise shrinkage: each contiguous block g of ``group_size`` entries
    maps to max(1 - mu/||g||, 0) * g, with the zero block fixed (the limit of
    the scaling as ||g|| -> 0)."""
    if mu < 0:
        raise ValueError("threshold must be nonnegative")
    v = np.asarray(v, dtype=np.float64)
    if group_size < 1 or v.size % group_size != 0:
        raise ValueError(
            f"length {v.size} not divisible by group size {group_size}")
    blocks = v.reshape(-1, group_size)
    norms = np.linalg.norm(blocks, axis=1)
    scale = np.zeros_like(norms)
    nz = norms > 0.0
    scale[nz] = np.maximum(1.0 - mu / norms[nz], 0.0)
    return (blocks * scale[:, None]).ravel()


def project_nonneg(v):
    """Entrywise max(v, 0), the projection onto the nonnegative orthant."""
    return np.maximum(np.asarray(v, dtype=np.float64), 0.0)


class ProxOracle:
    """Interface: ``value(x)`` (may be +inf) and ``prox(v, tau)``.

    ``prox_diag_jacobian(v, tau)``, when not None, returns the diagonal of a
    generalized Jacobian of v -> prox(v, tau); separable proxes provide it so
    inner subproblem solvers can take Newton steps.
    """

    def value(self, x):
        raise NotImplementedError

    def prox(self, v, tau):
        raise NotImplementedError

    def prox_diag_jacobian(self, v, tau):
        return None


class ZeroProx(ProxOracle):
    """g = 0; prox is the identity."""

    def value(self, x):
        return 0.0

    def prox(self, v, tau):
        return np.asarray(v, dtype=np.float64)

    def prox_diag_jacobian(self, v, tau):
        return np.ones(np.asarray(v).shape[0])


class L1Prox(ProxOracle):
    """g(x) = sum_i w_i |x_i| with w_i = mu by default.

    ``weights`` allows per-coordinate scaling (0 leaves a coordinate
    unpenalized, e.g. an intercept).
    """

    def __init__(self, mu, weights=None):
        if mu < 0:
            raise ValueError("mu must be nonnegative")
        self.mu = float(mu)
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        if self.weights is not None and np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")

    def _thresh(self, v, tau):
        w = self.mu if self.weights is None else self.mu * self.weights
        return w / tau

    def value(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.weights is None:
            return self.mu * float(np.sum(np.abs(x)))
        return self.mu * float(self.weights @ np.abs(x))

    def prox(self, v, tau):
        v = np.asarray(v, dtype=np.float64)
        t = self._thresh(v, tau)
        return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)

    def prox_diag_jacobian(self, v, tau):
        v = np.asarray(v, dtype=np.float64)
        return (np.abs(v) > self._thresh(v, tau)).astype(np.float64)


class NonnegProx(ProxOracle):
    """Indicator of {x >= 0}; prox is the orthant projection."""

    def value(self, x):
        if np.min(x) < 0.0:
            return np.inf
        return 0.0

    def prox(self, v, tau):
        return project_nonneg(v)

    def prox_diag_jacobian(self, v, tau):
        return (np.asarray(v, dtype=np.float64) > 0.0).astype(np.float64)


class GroupL21Prox(ProxOracle):
    """g(x) = mu * sum over contiguous groups of ||x_group||_2."""

    def __init__(self, mu, group_size):
        if mu < 0:
            raise ValueError("mu must be nonnegative")
        if group_size < 1:
            raise ValueError("group size must be positive")
        self.mu = float(mu)
        self.group_size = int(group_size)

    def value(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.size % self.group_size != 0:
            raise ValueError("length not divisible by group size")
        norms = np.linalg.norm(x.reshape(-1, self.group_size), axis=1)
        return self.mu * float(np.sum(norms))

    def prox(self, v, tau):
        return group_soft_threshold(v, self.group_size, self.mu / tau)


class BoxProx(ProxOracle):
    """Indicator of {lo <= x <= hi}; prox clips. Bounds may be +-inf."""

    def __init__(self, lo=-np.inf, hi=np.inf):
        if np.any(np.asarray(lo) > np.asarray(hi)):
            raise ValueError("lower bound exceeds upper bound")
        self.lo = lo
        self.hi = hi

    def value(self, x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < self.lo) or np.any(x > self.hi):
            return np.inf
        return 0.0

    def prox(self, v, tau):
        return np.clip(np.asarray(v, dtype=np.float64), self.lo, self.hi)

    def prox_diag_jacobian(self, v, tau):
        v = np.asarray(v, dtype=np.float64)
        return ((v > self.lo) & (v < self.hi)).astype(np.float64)
