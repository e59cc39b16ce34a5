"""Checkable analytical objects: identities, rate bounds, gap function.

Everything here is a pure formula evaluation. The reports pair a measured
quantity with its theoretical bound per iteration and flag violations;
references (x*, z*, ...) must be supplied explicitly, they are never
estimated here.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "identity_residuals", "gpgm_bound", "glalm_bound", "GladmmBound",
    "gladmm_bound", "gap_Q", "rho_convert", "rho_from_multiplier",
    "CertRow", "CertificateReport", "report_from_series",
    "monotonicity_report",
]


def _nsq(v):
    v = np.asarray(v, dtype=np.float64)
    return float(v @ v)


def identity_residuals(a, b, c, d, t):
    """Absolute residuals of the four quadratic-expansion identities:

    (i)   (2-t)(||a+b||^2 - ||a||^2 - (1-t)||b||^2) = ||a+b||^2 - ||a-(1-t)b||^2
    (ii)  t(||a+b||^2 - ||a||^2 - (t-1)||b||^2)     = ||a+b||^2 - ||a-(t-1)b||^2
    (iii) t(t-1)||a||^2 + t||b||^2                  = ||(t-1)a+b||^2 + (t-1)||a-b||^2
    (iv)  2<a-b, c-d> = ||a-d||^2 - ||a-c||^2 + ||b-c||^2 - ||b-d||^2

    All four hold exactly in real arithmetic; the residuals expose only
    floating-point rounding at the scale of the squared norms.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    apb = _nsq(a + b)
    r1 = abs((2.0 - t) * (apb - _nsq(a) - (1.0 - t) * _nsq(b))
             - (apb - _nsq(a - (1.0 - t) * b)))
    r2 = abs(t * (apb - _nsq(a) - (t - 1.0) * _nsq(b))
             - (apb - _nsq(a - (t - 1.0) * b)))
    r3 = abs(t * (t - 1.0) * _nsq(a) + t * _nsq(b)
             - (_nsq((t - 1.0) * a + b) + (t - 1.0) * _nsq(a - b)))
    r4 = abs(2.0 * float((a - b) @ (c - d))
             - (_nsq(a - d) - _nsq(a - c) + _nsq(b - c) - _nsq(b - d)))
    return r1, r2, r3, r4


def gpgm_bound(k, gamma, alpha, x_hat1, x_hat_next, x_star):
    """Objective-gap bound after k iterations of the composite solver:

        2 gamma / ((2-alpha) (k+1)^2) * (||x_hat^1 - x*||^2 - ||x_hat^{k+1} - x*||^2)

    A negative value (the trailing distance grew past the initial one) is
    returned as-is; report builders flag it, since it would certify either
    super-tight progress or a wrong reference.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    d1 = _nsq(np.asarray(x_hat1) - np.asarray(x_star))
    dk = _nsq(np.asarray(x_hat_next) - np.asarray(x_star))
    return 2.0 * gamma / ((2.0 - alpha) * (k + 1.0) ** 2) * (d1 - dk)


def glalm_bound(k, eta, alpha, gamma, kappa, x1, x_star, z_star):
    """Shared bound on |F(x_ag^{k+1}) - F*| and ||A x_ag^{k+1} - b||:

        (1/(k(k+1))) * ( eta/(2-alpha) ||x^1 - x*||^2
                         + max{(1+||z*||)^2, 4||z*||^2} / (gamma kappa) )
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    znorm = float(np.linalg.norm(z_star))
    dual = max((1.0 + znorm) ** 2, 4.0 * znorm * znorm) / (gamma * kappa)
    primal = eta / (2.0 - alpha) * _nsq(np.asarray(x1) - np.asarray(x_star))
    return (primal + dual) / (k * (k + 1.0))


@dataclass(frozen=True)
class GladmmBound:
    """Three-term bound; the first term decays one order faster in N than
    the other two, which is the scheme's distinguishing rate feature."""
    total: float
    primal_x: float   # 2L ||x1-x*||^2 / (alpha (2-alpha) N (N-1)), O(1/N^2)
    dual: float       # kappa max{(1+||z*||)^2, 4||z*||^2} / (gamma (2-xi) (N-1))
    primal_y: float   # 2 gamma ||B y1 - B y*||^2 / ((2-beta) (N-1))


def gladmm_bound(N, L, alpha, beta, kappa, gamma, xi, x1, y1, x_star, y_star,
                 z_star, B):
    """Bound on |F(w_ag^N) - F*| and on the constraint residual at the
    final aggregate of a horizon-N run. Requires N >= 2."""
    if N < 2:
        raise ValueError("the bound needs N >= 2")
    znorm = float(np.linalg.norm(z_star))
    primal_x = (2.0 * L * _nsq(np.asarray(x1) - np.asarray(x_star))
                / (alpha * (2.0 - alpha) * N * (N - 1.0)))
    dual = (kappa * max((1.0 + znorm) ** 2, 4.0 * znorm * znorm)
            / (gamma * (2.0 - xi) * (N - 1.0)))
    dy = B.forward(np.asarray(y1)) - B.forward(np.asarray(y_star))
    primal_y = 2.0 * gamma * _nsq(dy) / ((2.0 - beta) * (N - 1.0))
    return GladmmBound(total=primal_x + dual + primal_y,
                       primal_x=primal_x, dual=dual, primal_y=primal_y)


def gap_Q(x_t, y_t, z_t, x, y, z, problem):
    """Primal-dual merit of the two-block saddle formulation:

        [f(x) + g(y) - <z_t, By - Ax - b>] - [f(x_t) + g(y_t) - <z, By_t - Ax_t - b>]

    Nonnegative whenever (x_t, y_t, z_t) is a saddle point.
    """
    first = (problem.objective(x, y) - float(np.asarray(z_t) @ problem.residual(x, y)))
    second = (problem.objective(x_t, y_t) - float(np.asarray(z) @ problem.residual(x_t, y_t)))
    return first - second


def rho_from_multiplier(z_norm):
    """The perturbation radius max{1 + ||z*||, 2 ||z*||} used in the rate proofs."""
    return max(1.0 + z_norm, 2.0 * z_norm)


def rho_convert(eps, rho, z_norm):
    """Convert a perturbed-gap level eps into separate guarantees:

        feasibility <= eps / (rho - ||z*||)
        -||z*|| eps / (rho - ||z*||) <= F(x) - F* <= eps

    Requires rho > ||z*||.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if rho <= z_norm:
        raise ValueError(f"rho={rho} must exceed the multiplier norm {z_norm}")
    feas = eps / (rho - z_norm)
    return feas, -z_norm * feas, eps


# ---------------------------------------------------------------------------
# reports

@dataclass
class CertRow:
    k: int
    measured: float
    bound: float
    slack: float
    violated: bool
    flag: str = ""


@dataclass
class CertificateReport:
    """Per-iteration (measured, bound) pairs with a violation verdict.

    violated <=> measured > bound + tol_abs + tol_rel * |bound|. ``slack``
    is bound - measured, so the worst (smallest) slack summarizes how
    close the run came to its guarantee.
    """
    name: str
    rows: list = field(default_factory=list)
    tol_abs: float = 1e-6
    tol_rel: float = 1e-8

    def add(self, k, measured, bound, flag=""):
        tol = self.tol_abs + self.tol_rel * abs(bound)
        violated = measured > bound + tol
        self.rows.append(CertRow(k=int(k), measured=float(measured),
                                 bound=float(bound),
                                 slack=float(bound - measured),
                                 violated=bool(violated), flag=flag))

    @property
    def violations(self):
        return [r for r in self.rows if r.violated]

    @property
    def ok(self):
        return not self.violations

    @property
    def worst_slack(self):
        return min((r.slack for r in self.rows), default=float("inf"))

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("k,measured,bound,slack,violated\n")
            for r in self.rows:
                fh.write(f"{r.k},{r.measured!r},{r.bound!r},{r.slack!r},"
                         f"{int(r.violated)}\n")

    def summary(self):
        return (f"{self.name}: {len(self.rows)} checks, "
                f"{len(self.violations)} violated, "
                f"worst slack {self.worst_slack:.3e}")


def report_from_series(name, ks, measured, bounds, tol_abs=1e-6, tol_rel=1e-8):
    rep = CertificateReport(name=name, tol_abs=tol_abs, tol_rel=tol_rel)
    for k, m, b in zip(ks, measured, bounds):
        rep.add(k, m, b, flag="negative bound" if b < 0 else "")
    return rep


def monotonicity_report(name, values, tol_abs=0.0, tol_rel=0.0, step_tols=None):
    """Check that a sequence never increases: rows pair each forward
    difference against 0, with an optional per-step tolerance allowance."""
    rep = CertificateReport(name=name, tol_abs=tol_abs, tol_rel=tol_rel)
    for i in range(1, len(values)):
        extra = step_tols[i - 1] if step_tols is not None else 0.0
        rep.add(i, values[i] - values[i - 1] - extra, 0.0)
    return rep
