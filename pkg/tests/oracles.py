"""Independent brute-force oracles used to cross-check the package.

Nothing here imports solver internals; these are deliberately naive
implementations (direct elimination, Jacobi rotations, grid search,
coordinate descent, finite differences) so they form a second route to
every value they check.
"""

import math

import numpy as np


def jacobi_eigenvalues(sym, tol=1e-14, max_sweeps=100):
    """All eigenvalues of a symmetric matrix via classical Jacobi rotations."""
    a = np.array(sym, dtype=np.float64, copy=True)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * max(1.0, np.max(np.abs(np.diag(a)))):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def gauss_solve(mat, rhs):
    """Gaussian elimination with partial pivoting."""
    a = np.array(mat, dtype=np.float64, copy=True)
    b = np.array(rhs, dtype=np.float64, copy=True)
    n = a.shape[0]
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[piv, col]) < 1e-300:
            raise ValueError("singular matrix")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
            b[row] -= factor * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def grid_search_prox(objective_grid, center, radius=3.0, step=1e-4):
    """Minimize a 1-D or 2-D prox objective by dense grid search around
    ``center``; returns the best grid point at resolution ``step``.

    ``objective_grid`` maps stacked points (shape (npts, dim)) to values.
    The 2-D case searches a coarse grid first and then a dense step-sized
    grid around the coarse minimizer (sound for these convex objectives,
    and the only way a 1e-4 grid over the plane stays tractable).
    """
    center = np.atleast_1d(np.asarray(center, dtype=np.float64))

    def best_on(axes):
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        vals = objective_grid(pts)
        return pts[int(np.argmin(vals))]

    if center.size == 1:
        axis = np.arange(center[0] - radius, center[0] + radius + step, step)
        return best_on([axis])
    coarse = 100.0 * step
    rough = best_on([np.arange(c - radius, c + radius + coarse, coarse)
                     for c in center])
    return best_on([np.arange(r - 2.0 * coarse, r + 2.0 * coarse + step, step)
                    for r in rough])


def finite_diff_grad(func, x, h=1e-6):
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (func(x + e) - func(x - e)) / (2.0 * h)
    return g


def l1_logistic_coordinate_descent(signed_design, lam_vec, sweeps=400):
    """Proximal coordinate descent for the l1-penalized logistic loss.

    Each coordinate update is an exact 1-D minimization by bracketed
    ternary search (robust at the l1 kink). Slow but independent.
    """
    m, d = signed_design.shape
    x = np.zeros(d)

    def total(xv):
        margins = signed_design @ xv
        return float(np.sum(np.logaddexp(0.0, -margins)) + lam_vec @ np.abs(xv))

    margins = signed_design @ x
    for _ in range(sweeps):
        for j in range(d):
            col = signed_design[:, j]
            base = margins - col * x[j]

            def fj(t):
                return float(np.sum(np.logaddexp(0.0, -(base + col * t)))
                             + lam_vec[j] * abs(t)
                             + (lam_vec @ np.abs(x)) - lam_vec[j] * abs(x[j]))

            lo, hi = x[j] - 4.0, x[j] + 4.0
            for _ in range(120):
                third = (hi - lo) / 3.0
                if fj(lo + third) < fj(hi - third):
                    hi = hi - third
                else:
                    lo = lo + third
            t = 0.5 * (lo + hi)
            if abs(t) < 1e-10 or fj(0.0) <= fj(t):
                t = 0.0
            margins = base + col * t
            x[j] = t
    return x, total(x)
