"""Fredholm determinants of the confluent hypergeometric, Bessel and sine
kernels, the arc Toeplitz/Hankel determinants that converge to them, and
the closed-form large-gap expansions they are compared against."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AccuracyError,
    DeterminantBreakdown,
    GapdetError,
    NonConvergenceError,
    ParameterDomainError,
    PoleError,
    UnderflowGuardError,
)
from .specfun import (  # noqa: E402
    PrecisionConfig,
    barnes_g_ln,
    bessel_j,
    gamma_ln,
    kummer_m,
    zeta_prime_minus_one,
)
from .kernels import Family, KernelSpec, KernelValue, g_beta, kernel_eval, kernel_matrix  # noqa: E402
from .fredholm import (  # noqa: E402
    DetResult,
    QuadratureRule,
    Transform,
    fredholm_det,
    gauss_legendre,
    nystrom_det,
    square_map_rule,
)
from .toeplitz import (  # noqa: E402
    ArcSymbol,
    ToeplitzResult,
    dln_second_derivative_fd,
    dln_second_derivative_richardson,
    dn_near_pi,
    fourier_coeff,
    orthopoly_eval,
    scaling_ratio,
    selberg_an,
    toeplitz_det,
)
from .hankel import HankelResult, HankelWeight, hankel_det, hankel_moment, hankel_scaling_ratio  # noqa: E402
from .asymptotics import AsymptoticValue, di3_rhs, gap_ln_asymptotic, toeplitz_ln_asymptotic  # noqa: E402
