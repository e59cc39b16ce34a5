"""Momentum sequence and per-iteration parameter schedules of the solvers.

The scalar sequence t_k drives the accelerated proximal gradient method;
the two splitting methods use fully explicit horizon-free (GLALM) or
horizon-dependent (GLADMM) schedules whose analytical admissibility
conditions are checked by ``validate_gladmm``.
"""

import math
from dataclasses import dataclass, field

__all__ = [
    "next_t",
    "momentum_sequence",
    "GlalmStepParams",
    "glalm_schedule",
    "GladmmConfig",
    "GladmmStepParams",
    "gladmm_schedule",
    "validate_gladmm",
]


def next_t(t_prev):
    """Advance the momentum scalar: t = (1 + sqrt(1 + 4 t_prev^2)) / 2.

    Starting from t_0 = 0 the sequence satisfies t_{k-1}^2 = t_k (t_k - 1)
    and t_k >= (k+1)/2, which is what the O(1/k^2) rate needs. The value is
    always produced by this recurrence, never by a closed-form
    approximation, so the identity holds to rounding.
    """
    if t_prev < 0:
        raise ValueError("t_prev must be nonnegative")
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_prev * t_prev))


def momentum_sequence(count):
    """First ``count`` values t_1..t_count of the recurrence (t_0 = 0)."""
    ts = []
    t = 0.0
    for _ in range(int(count)):
        t = next_t(t)
        ts.append(t)
    return ts


@dataclass(frozen=True)
class GlalmStepParams:
    """Per-iteration parameters theta_k, gamma_k, kappa_k and the scalar of
    the proximal weight matrix (eta/k) * I."""
    k: int
    theta: float
    gamma_k: float
    kappa_k: float
    p_k: float


def glalm_schedule(k, gamma, kappa, eta):
    """theta_k = 2/(k+1), gamma_k = k*gamma, kappa_k = kappa*gamma*k/2,
    p_k = eta/k.

    kappa must lie in [1, 2); kappa = 1 is the reduction mode in which the
    multiplier extrapolation collapses.
    """
    if k < 1:
        raise ValueError("iteration index must be >= 1")
    if gamma <= 0 or eta <= 0:
        raise ValueError("gamma and eta must be positive")
    if not (1.0 <= kappa < 2.0):
        raise ValueError(f"kappa must be in [1, 2), got {kappa}")
    return GlalmStepParams(
        k=int(k),
        theta=2.0 / (k + 1.0),
        gamma_k=k * gamma,
        kappa_k=kappa * gamma * k / 2.0,
        p_k=eta / k,
    )


@dataclass(frozen=True)
class GladmmStepParams:
    k: int
    theta: float
    Gamma: float
    lam: float       # weight on the coupling quadratic in the x update
    tau: float       # weight on the quadratic in the y update
    gamma_k: float   # multiplier step size
    eta_k: float     # proximal weight in the x update
    xi_k: float


@dataclass(frozen=True)
class GladmmConfig:
    """Horizon-dependent schedule header for the two-block solver.

    All per-iteration values are determined by (N, alpha, beta, kappa,
    gamma, xi, L). beta defaults to 1/xi, the smallest admissible value.
    """
    N: int
    L: float
    alpha: float = 0.5
    kappa: float = 1.5
    gamma: float = 1.0
    xi: float = 1.5
    beta: float = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("horizon N must be >= 1")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.kappa < 1.0:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if not (1.5 <= self.xi < 2.0):
            raise ValueError(f"xi must be in [1.5, 2), got {self.xi}")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.L < 0:
            raise ValueError("L must be nonnegative")
        if self.beta is None:
            object.__setattr__(self, "beta", 1.0 / self.xi)
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")

    def step_params(self, k):
        return gladmm_schedule(k, self)


def gladmm_schedule(k, cfg):
    """Per-iteration values for 1 <= k <= cfg.N:

    theta_k = 2/(k+1), Gamma_k = 2/(k(k+1)), lam_k = tau_k = gamma*N/k,
    gamma_k = (2-xi)*gamma*k/(kappa*N), eta_k = 2L/(alpha*k), xi_k = xi.
    """
    if k < 1:
        raise ValueError("iteration index must be >= 1")
    if k > cfg.N:
        raise ValueError(f"k={k} beyond schedule horizon N={cfg.N}")
    lam = cfg.gamma * cfg.N / k
    return GladmmStepParams(
        k=int(k),
        theta=2.0 / (k + 1.0),
        Gamma=2.0 / (k * (k + 1.0)),
        lam=lam,
        tau=lam,
        gamma_k=(2.0 - cfg.xi) * cfg.gamma * k / (cfg.kappa * cfg.N),
        eta_k=2.0 * cfg.L / (cfg.alpha * k),
        xi_k=cfg.xi,
    )


@dataclass(frozen=True)
class ScheduleViolation:
    k: int
    inequality: str
    lhs: float
    rhs: float

    def __str__(self):
        return f"k={self.k}: {self.inequality} fails ({self.lhs:.6g} vs {self.rhs:.6g})"


def validate_gladmm(cfg, beta=None, schedule=None, rel_tol=1e-9):
    """Check the three admissibility inequalities for every k <= N.

    For each k the schedule must satisfy
        L*theta_k / eta_k      <= alpha,
        1 / xi_k               <= beta,
        (tau_k + (1 - xi_k)*lam_k) / gamma_k >= kappa.
    Returns the list of violations (empty means the schedule is admissible).
    Violations are data, not errors. ``schedule`` overrides the per-k
    parameter source (callable k -> GladmmStepParams), which lets callers
    audit externally supplied or tampered schedules.
    """
    if beta is None:
        beta = cfg.beta
    if schedule is None:
        schedule = lambda k: gladmm_schedule(k, cfg)
    out = []
    for k in range(1, cfg.N + 1):
        p = schedule(k)
        slack = rel_tol * max(1.0, abs(cfg.alpha), abs(beta), abs(cfg.kappa))
        if p.eta_k > 0:
            lhs = cfg.L * p.theta / p.eta_k
            if lhs > cfg.alpha + slack:
                out.append(ScheduleViolation(k, "L*theta_k/eta_k <= alpha", lhs, cfg.alpha))
        elif cfg.L > 0:
            out.append(ScheduleViolation(k, "L*theta_k/eta_k <= alpha", math.inf, cfg.alpha))
        lhs = 1.0 / p.xi_k
        if lhs > beta + slack:
            out.append(ScheduleViolation(k, "1/xi_k <= beta", lhs, beta))
        lhs = (p.tau + (1.0 - p.xi_k) * p.lam) / p.gamma_k
        if lhs < cfg.kappa - slack:
            out.append(ScheduleViolation(k, "(tau_k+(1-xi_k)*lam_k)/gamma_k >= kappa", lhs, cfg.kappa))
    return out
