"""Accelerated proximal splitting solvers with convergence-rate certificates.

Three solver families (composite, linearly constrained, two-block), their
plain non-extrapolated specializations, synthetic experiment generators,
and a certificate engine that evaluates every analytic rate bound against
live iterates. See the command line entry point ``proxcert`` for the
experiment harness.
"""

from .certificates import (CertificateReport, gap_Q, gladmm_bound,
                           glalm_bound, gpgm_bound, identity_residuals,
                           rho_convert, rho_from_multiplier)
from .glalm import GlalmConfig, GlalmState, glalm_run, glalm_step
from .gladmm import GladmmState, gladmm_run, gladmm_step, ladmm_run
from .gpgm import GpgmState, gpgm_run, gpgm_step
from .linalg import (DenseOperator, IdentityOperator, LinearOperator,
                     TVOperator, cg_solve, power_iteration, tv_operator)
from .problems import (CompositeProblem, LinConstrainedProblem,
                       TwoBlockProblem, gen_cs_tv, gen_logistic, gen_qp,
                       reference_solve, shepp_logan)
from .prox import (GroupL21Prox, L1Prox, NonnegProx, ZeroProx,
                   group_soft_threshold, project_nonneg, soft_threshold)
from .schedules import (GladmmConfig, glalm_schedule, gladmm_schedule,
                        momentum_sequence, next_t, validate_gladmm)

__version__ = "0.1.0"
