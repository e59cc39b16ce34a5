"""Solver for the proximal-quadratic subproblems of the splitting methods.

The target is
    minimize_x  <w, x> + kappa/2 ||A x - b||^2 + p/2 ||x - x_ref||^2 + g(x)
with p > 0, so the problem is strongly convex with a unique solution.
Termination is on the fixed-point displacement of the proximal gradient
map ||x - prox_g(x - grad_s(x)/L, L)|| with L = kappa ||A||^2 + p, which is
zero exactly at the solution regardless of which method produced x.

Three routes:
  * kappa == 0 (or no operator): one prox call, exact.
  * dual Newton: maximize the m-dimensional concave dual
        D(nu) = min_x { g(x) + <w + A^T nu, x> + p/2 ||x - x_ref||^2 }
                - ||nu||^2/(2 kappa) - <b, nu>
    whose gradient A x(nu) - b - nu/kappa is piecewise linear when the prox
    of g is; a semismooth Newton step solves an m x m system. This is the
    route of choice when A is dense and g exposes a diagonal prox Jacobian,
    because the primal conditioning kappa ||A||^2 / p grows without bound
    along the solver schedules while m stays small.
  * accelerated proximal gradient on the primal with the strong-convexity
    momentum (1 - sqrt(p/L)) / (1 + sqrt(p/L)), used when the dual route is
    unavailable.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["InnerSolveError", "InnerSolveResult", "solve_prox_quadratic"]


class InnerSolveError(RuntimeError):
    """Subproblem iteration budget exhausted; carries the attained residual."""

    def __init__(self, message, x, residual):
        super().__init__(message)
        self.x = x
        self.residual = residual


def fista(g, smooth_grad, L, x0, tol, max_iter=20000):
    """Plain accelerated proximal gradient for min s(x) + g(x), s smooth
    with an L-Lipschitz gradient. Stops on the fixed-point displacement
    ||x - prox_g(x - grad s(x)/L, L)|| <= tol."""
    x = np.asarray(x0, dtype=np.float64).copy()
    y = x.copy()
    t = 1.0
    residual = np.inf
    for it in range(1, int(max_iter) + 1):
        x_new = g.prox(y - smooth_grad(y) / L, L)
        residual = float(np.linalg.norm(x_new - g.prox(x_new - smooth_grad(x_new) / L, L)))
        if residual <= tol:
            return InnerSolveResult(x=x_new, residual=residual, iterations=it,
                                    method="fista")
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = x_new + ((t - 1.0) / t_new) * (x_new - x)
        x, t = x_new, t_new
    raise InnerSolveError(
        f"fista: residual {residual:.3e} above tolerance {tol:.3e} "
        f"after {max_iter} iterations",
        x=x, residual=residual,
    )


@dataclass
class InnerSolveResult:
    x: np.ndarray
    residual: float
    iterations: int
    method: str


def _smooth_grad(x, w, A, b, kappa, p, x_ref):
    g = w + p * (x - x_ref)
    if A is not None and kappa > 0.0:
        g = g + kappa * A.adjoint(A.forward(x) - b)
    return g


def _fixed_point_residual(x, w, A, b, kappa, p, x_ref, g, L):
    step = x - _smooth_grad(x, w, A, b, kappa, p, x_ref) / L
    return float(np.linalg.norm(x - g.prox(step, L)))


def solve_prox_quadratic(g, w, A, b, kappa, p, x_ref, x0=None, tol=None,
                         max_iter=2000, method="auto", op_norm_sq=None):
    """Minimize <w,x> + kappa/2 ||Ax-b||^2 + p/2 ||x-x_ref||^2 + g(x).

    ``tol`` bounds the proximal-gradient fixed-point displacement of the
    returned point (default 1e-10 * (1 + ||x_ref||)). ``op_norm_sq`` caches
    ||A||^2; it is required whenever kappa > 0. Raises InnerSolveError when
    the budget runs out before the tolerance is met.
    """
    x_ref = np.asarray(x_ref, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if tol is None:
        tol = 1e-10 * (1.0 + float(np.linalg.norm(x_ref)))
    if p <= 0.0:
        raise ValueError("proximal weight p must be positive")
    if kappa < 0.0:
        raise ValueError("kappa must be nonnegative")

    if kappa == 0.0 or A is None:
        x = g.prox(x_ref - w / p, p)
        return InnerSolveResult(x=x, residual=0.0, iterations=0, method="closed_form")

    if op_norm_sq is None:
        raise ValueError("op_norm_sq (||A||^2) is required when kappa > 0")
    L = kappa * op_norm_sq + p
    b = np.asarray(b, dtype=np.float64)

    dense = getattr(A, "matrix", None)
    jac_ok = g.prox_diag_jacobian(x_ref, p) is not None
    use_dual = method in ("auto", "dual") and dense is not None and jac_ok
    if method == "dual" and not use_dual:
        raise ValueError("dual method needs a dense operator and a prox Jacobian")

    if use_dual:
        res = _dual_newton(g, w, dense, b, kappa, p, x_ref, x0, tol, L, A, op_norm_sq)
        if res is not None:
            return res
        # dual stalled (should be rare); fall through to the primal method

    return _apg(g, w, A, b, kappa, p, x_ref, x0, tol, max_iter, L)


def _dual_newton(g, w, M, b, kappa, p, x_ref, x0, tol, L, A, op_norm_sq):
    m = M.shape[0]
    # warm start the dual from the primal guess: nu ~ kappa (A x0 - b)
    if x0 is not None:
        nu = kappa * (M @ np.asarray(x0, dtype=np.float64) - b)
    else:
        nu = np.zeros(m)

    def primal_point(nu):
        return g.prox(x_ref - (w + M.T @ nu) / p, p)

    x = primal_point(nu)
    r = M @ x - b - nu / kappa
    rn = float(np.linalg.norm(r))
    best = (x, np.inf)
    grad_step = 1.0 / (op_norm_sq / p + 1.0 / kappa)

    for it in range(100):
        fp = _fixed_point_residual(x, w, A, b, kappa, p, x_ref, g, L)
        if fp < best[1]:
            best = (x, fp)
        if fp <= tol:
            return InnerSolveResult(x=x, residual=fp, iterations=it, method="dual_newton")
        d = g.prox_diag_jacobian(x_ref - (w + M.T @ nu) / p, p)
        # generalized Jacobian of the dual gradient: -(M D M^T / p + I/kappa)
        H = (M * d[None, :]) @ M.T / p
        H[np.diag_indices_from(H)] += 1.0 / kappa
        try:
            step_dir = np.linalg.solve(H, r)
        except np.linalg.LinAlgError:
            step_dir = r * grad_step
        s = 1.0
        while s > 1e-12:
            nu_try = nu + s * step_dir
            x_try = primal_point(nu_try)
            r_try = M @ x_try - b - nu_try / kappa
            rn_try = float(np.linalg.norm(r_try))
            if rn_try <= (1.0 - 1e-4 * s) * rn or rn_try == 0.0:
                nu, x, r, rn = nu_try, x_try, r_try, rn_try
                break
            s *= 0.5
        else:
            # Newton direction made no progress; try plain dual ascent once
            nu_try = nu + grad_step * r
            x_try = primal_point(nu_try)
            r_try = M @ x_try - b - nu_try / kappa
            rn_try = float(np.linalg.norm(r_try))
            if rn_try >= rn:
                return None
            nu, x, r, rn = nu_try, x_try, r_try, rn_try
    fp = _fixed_point_residual(x, w, A, b, kappa, p, x_ref, g, L)
    if fp <= tol:
        return InnerSolveResult(x=x, residual=fp, iterations=100, method="dual_newton")
    return None


def _apg(g, w, A, b, kappa, p, x_ref, x0, tol, max_iter, L):
    x = x_ref.copy() if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    y = x.copy()
    q = np.sqrt(p / L)
    beta = (1.0 - q) / (1.0 + q)
    residual = np.inf
    for it in range(1, int(max_iter) + 1):
        grad_y = _smooth_grad(y, w, A, b, kappa, p, x_ref)
        x_new = g.prox(y - grad_y / L, L)
        residual = _fixed_point_residual(x_new, w, A, b, kappa, p, x_ref, g, L)
        if residual <= tol:
            return InnerSolveResult(x=x_new, residual=residual, iterations=it, method="apg")
        if float((y - x_new) @ (x_new - x)) > 0.0:
            y = x_new  # momentum restart
        else:
            y = x_new + beta * (x_new - x)
        x = x_new
    raise InnerSolveError(
        f"inner solve: residual {residual:.3e} above tolerance {tol:.3e} "
        f"after {max_iter} iterations",
        x=x, residual=residual,
    )
