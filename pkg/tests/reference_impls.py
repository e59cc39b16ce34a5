"""Independently coded plain-variable twins of the reduced solvers.

These re-derive the alpha=1 (and kappa=beta=1) specializations from the
update equations directly, without the hatted bookkeeping, so the
reduction-equivalence tests compare two separate code paths.
"""

import numpy as np

from proxcert.inner import solve_prox_quadratic
from proxcert.linalg import cg_solve
from proxcert.schedules import next_t


def apgm_iterates(problem, x1, iters):
    """Accelerated proximal gradient, second form: keeps (z, x_ag)."""
    L = problem.f.L
    z = np.asarray(x1, dtype=np.float64).copy()
    x_ag = z.copy()
    t_prev = 0.0
    out = []
    for _ in range(iters):
        t = next_t(t_prev)
        theta = 1.0 / t
        tau = L * theta
        x_md = (1.0 - theta) * x_ag + theta * z
        z = problem.g.prox(z - problem.f.grad(x_md) / tau, tau)
        x_ag = (1.0 - theta) * x_ag + theta * z
        t_prev = t
        out.append((z.copy(), x_ag.copy()))
    return out


def alalm_iterates(problem, x1, gamma, eta, iters, op_norm_sq=None):
    """Plain accelerated linearized augmented Lagrangian loop."""
    if op_norm_sq is None:
        op_norm_sq = problem.op_norm_sq()
    x = np.asarray(x1, dtype=np.float64).copy()
    x_ag = x.copy()
    z = np.zeros(problem.b.shape[0])
    out = []
    for k in range(1, iters + 1):
        theta = 2.0 / (k + 1.0)
        gamma_k = k * gamma
        kappa_k = gamma * k / 2.0
        p_k = eta / k
        x_md = (1.0 - theta) * x_ag + theta * x
        w = problem.f.grad(x_md) - problem.A.adjoint(z)
        res = solve_prox_quadratic(problem.g, w, problem.A, problem.b,
                                   kappa_k, p_k, x_ref=x, x0=x,
                                   op_norm_sq=op_norm_sq)
        x = res.x
        x_ag = (1.0 - theta) * x_ag + theta * x
        z = z - gamma_k * (problem.A.forward(x) - problem.b)
        out.append((x.copy(), x_ag.copy(), z.copy()))
    return out


class _ShiftedGram:
    def __init__(self, A, lam, eta):
        self.A, self.lam, self.eta = A, lam, eta

    def __call__(self, v):
        return self.lam * self.A.adjoint(self.A.forward(v)) + self.eta * v


def aladmm_iterates(problem, x1, y1, L, gamma, xi, N, cg_tol=1e-10):
    """Plain-variable accelerated linearized two-block loop (horizon N)."""
    x = np.asarray(x1, dtype=np.float64).copy()
    y = np.asarray(y1, dtype=np.float64).copy()
    z = np.zeros(problem.b.shape[0])
    x_ag, y_ag, z_ag = x.copy(), y.copy(), z.copy()
    out = []
    for k in range(1, N):
        theta = 2.0 / (k + 1.0)
        lam = gamma * N / k
        tau = lam
        gamma_k = (2.0 - xi) * gamma * k / N
        eta_k = 2.0 * L / k
        x_md = (1.0 - theta) * x_ag + theta * x
        rhs = (eta_k * x + problem.A.adjoint(lam * (problem.B.forward(y) - problem.b) - z)
               - problem.f.grad(x_md))
        x = cg_solve(_ShiftedGram(problem.A, lam, eta_k), rhs, tol=cg_tol, x0=x)
        x_ag = (1.0 - theta) * x_ag + theta * x
        target = problem.A.forward(x) + problem.b
        y = problem.g.prox(target + z / tau, tau)
        y_ag = (1.0 - theta) * y_ag + theta * y
        z = z - gamma_k * (problem.B.forward(y) - target)
        z_ag = (1.0 - theta) * z_ag + theta * z
        out.append((x.copy(), y.copy(), z.copy(), x_ag.copy(), y_ag.copy(),
                    z_ag.copy()))
    return out
