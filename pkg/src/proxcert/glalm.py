"""Linearized augmented Lagrangian method with primal and dual extrapolation.

Solves  minimize f(x) + g(x)  s.t.  A x = b. One iteration, with
theta_k = 2/(k+1), gamma_k = k*gamma, kappa_k = kappa*gamma*k/2 and
proximal weight p_k = eta/k:

    x_md  = (1 - theta_k) x_ag + theta_k x_hat
    x+    = argmin_x  <grad f(x_md) - A^T z_hat, x> + g(x)
                      + kappa_k/2 ||A x - b||^2 + p_k/2 ||x - x_hat||^2
    x_hat+ = (alpha - 1) x_hat + (2 - alpha) x+
    x_ag+  = (1 - theta_k) x_ag + theta_k x+
    z+     = z_hat - gamma_k (A x+ - b)
    z_hat+ = (1 - kappa) z_hat + kappa z+

alpha = 1, kappa = 1 collapses both extrapolations (x_hat = x, z_hat = z)
and gives the plain accelerated variant used for reference runs. The rate
hypothesis couples alpha and eta through alpha * eta >= 2 L; runs enforce
it unless ``strict=False`` (experiment-mirroring configs may relax it, at
the price of certificates no longer being guaranteed).

The x update has no closed form in general; it is delegated to the
subproblem solver, which reports the proximal-gradient fixed-point
residual it achieved so downstream checks can account for inexactness.
"""

from dataclasses import dataclass

import numpy as np

from .certificates import glalm_bound
from .inner import solve_prox_quadratic
from .schedules import glalm_schedule
from .trace import Timer, Trace

__all__ = ["GlalmConfig", "GlalmState", "glalm_x_update", "glalm_step", "glalm_run"]


@dataclass
class GlalmConfig:
    alpha: float = 0.5
    kappa: float = 1.5
    gamma: float = 1.0
    eta: float = None          # resolve_eta() defaults it to 2 L / alpha
    inner_tol: float = None    # default 1e-10 * (1 + ||x_hat||) per step
    inner_max: int = 20000
    inner_method: str = "auto"
    strict: bool = True

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not (1.0 <= self.kappa < 2.0):
            raise ValueError(f"kappa must be in [1, 2), got {self.kappa}")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")

    @property
    def reduction_mode(self):
        return self.alpha == 1.0 and self.kappa == 1.0

    def resolve_eta(self, L):
        if self.eta is None:
            self.eta = 2.0 * L / self.alpha if L > 0 else 1.0
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if self.strict and L > 0.0:
            if self.eta < 2.0 * L * (1.0 - 1e-12):
                raise ValueError(
                    f"eta={self.eta} < 2L={2 * L}: no admissible alpha exists")
            if self.alpha * self.eta < 2.0 * L * (1.0 - 1e-12):
                raise ValueError(
                    f"alpha*eta={self.alpha * self.eta} < 2L={2 * L}: rate "
                    "hypothesis violated (use strict=False to run anyway)")
        return self.eta


@dataclass
class GlalmState:
    k: int
    x: np.ndarray
    x_hat: np.ndarray
    x_ag: np.ndarray
    z: np.ndarray
    z_hat: np.ndarray
    inner_residual: float = 0.0

    @staticmethod
    def initial(x1, constraint_dim):
        x1 = np.asarray(x1, dtype=np.float64)
        z = np.zeros(int(constraint_dim))
        return GlalmState(k=1, x=x1.copy(), x_hat=x1.copy(), x_ag=x1.copy(),
                          z=z.copy(), z_hat=z.copy())


def glalm_x_update(state, problem, params, inner_tol=None, inner_max=20000,
                   method="auto", op_norm_sq=None):
    """Approximately minimize the x subproblem at the current state.

    Returns (x_new, achieved_residual). Exact (residual 0) when the
    coupling weight kappa_k is zero, since the subproblem is then a single
    prox evaluation.
    """
    theta = params.theta
    x_md = (1.0 - theta) * state.x_ag + theta * state.x_hat
    w = problem.f.grad(x_md) - problem.A.adjoint(state.z_hat)
    if params.kappa_k > 0.0 and op_norm_sq is None:
        op_norm_sq = problem.op_norm_sq()
    res = solve_prox_quadratic(
        problem.g, w, problem.A, problem.b, params.kappa_k, params.p_k,
        x_ref=state.x_hat, x0=state.x, tol=inner_tol, max_iter=inner_max,
        method=method, op_norm_sq=op_norm_sq)
    return res.x, res.residual


def glalm_step(state, problem, cfg, op_norm_sq=None):
    """Advance one iteration; see the module docstring for the updates."""
    eta = cfg.resolve_eta(problem.f.L)
    params = glalm_schedule(state.k, cfg.gamma, cfg.kappa, eta)
    x_new, inner_res = glalm_x_update(
        state, problem, params, inner_tol=cfg.inner_tol,
        inner_max=cfg.inner_max, method=cfg.inner_method,
        op_norm_sq=op_norm_sq)
    x_hat_new = (cfg.alpha - 1.0) * state.x_hat + (2.0 - cfg.alpha) * x_new
    x_ag_new = (1.0 - params.theta) * state.x_ag + params.theta * x_new
    z_new = state.z_hat - params.gamma_k * (problem.A.forward(x_new) - problem.b)
    z_hat_new = (1.0 - cfg.kappa) * state.z_hat + cfg.kappa * z_new
    return GlalmState(k=state.k + 1, x=x_new, x_hat=x_hat_new, x_ag=x_ag_new,
                      z=z_new, z_hat=z_hat_new, inner_residual=inner_res)


def glalm_run(problem, cfg, x1=None, max_iters=1000, stop=None,
              x_star=None, f_star=None, z_star=None):
    """Run from x1 (default 0) and log one trace row per iteration.

    With references supplied, the trace carries the objective gap, the
    rate bound for iteration k and, in the extras, the telescoped decrease
    quantity evaluated at z = z_star along with the per-step subproblem
    residuals (the decrease check tolerance is inflated by those).
    """
    if x1 is None:
        x1 = np.zeros(problem.dim)
    eta = cfg.resolve_eta(problem.f.L)
    op_norm_sq = problem.op_norm_sq() if hasattr(problem, "op_norm_sq") else None
    state = GlalmState.initial(x1, problem.b.shape[0])
    x_start = state.x.copy()
    have_ref = x_star is not None and f_star is not None and z_star is not None
    trace = Trace(columns=("k", "obj", "obj_gap", "feas", "bound", "elapsed_s"))
    trace.meta.update(solver="glalm", alpha=cfg.alpha, kappa=cfg.kappa,
                      gamma=cfg.gamma, eta=eta, L=problem.f.L,
                      strict=cfg.strict)
    trace.final["x1"] = x_start
    if have_ref:
        c_x = eta / (2.0 - cfg.alpha)
        c_z = 1.0 / (cfg.kappa * cfg.gamma)
        lyap0 = (c_x * float(np.sum((x_start - x_star) ** 2))
                 + c_z * float(np.sum(z_star ** 2)))  # z_hat starts at 0
        trace.add_extra("lyap", lyap0)
    objectives = []
    timer = Timer()
    for k in range(1, int(max_iters) + 1):
        state = glalm_step(state, problem, cfg, op_norm_sq=op_norm_sq)
        obj = problem.objective(state.x_ag)
        feas = problem.feasibility(state.x_ag)
        objectives.append(obj)
        row = dict(k=k, obj=obj, feas=feas, elapsed_s=timer.elapsed())
        trace.add_extra("inner_residual", state.inner_residual)
        if have_ref:
            gap = obj - f_star
            row.update(
                obj_gap=gap,
                bound=glalm_bound(k, eta, cfg.alpha, cfg.gamma, cfg.kappa,
                                  x_start, x_star, z_star),
            )
            lag_gap = gap - float(z_star @ (problem.A.forward(state.x_ag) - problem.b))
            hat_d = float(np.sum((state.x_hat - x_star) ** 2))
            zhat_d = float(np.sum((state.z_hat - z_star) ** 2))
            trace.add_extra("hat_dist", np.sqrt(hat_d))
            trace.add_extra("zhat_dist", np.sqrt(zhat_d))
            trace.add_extra("lyap", k * (k + 1.0) * lag_gap + c_x * hat_d + c_z * zhat_d)
        trace.append(**row)
        if stop is not None and stop.should_stop(k, objectives, state):
            break
    trace.final.update(x=state.x, x_hat=state.x_hat, x_ag=state.x_ag,
                       z=state.z, z_hat=state.z_hat)
    return trace
