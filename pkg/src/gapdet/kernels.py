"""Point and matrix evaluation of the four integrable kernels.

Families
--------
CHF      confluent hypergeometric kernel with parameters (alpha, beta)
BESSEL1  its beta = 0 specialisation, written with J_{alpha +- 1/2}
SINE     sin(u - v) / (pi (u - v))
BESSEL2  hard-edge Bessel kernel with parameter a, on (0, inf)

All kernels are of the form  sum_i f_i(u) g_i(v) / (u - v), so a matrix on m
nodes costs O(m) special-function evaluations plus O(m^2) arithmetic.  On and
near the diagonal the L'Hopital limit is used.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError
from .specfun import (
    PrecisionConfig,
    bessel_j,
    bessel_j_reduced,
    gamma_ln,
    kummer_m,
)

__all__ = [
    "Family",
    "KernelSpec",
    "KernelValue",
    "g_beta",
    "kernel_eval",
    "kernel_matrix",
    "diagonal_threshold",
    "SMALL_ALPHA",
]

# below this |alpha| the CHF kernel switches to the (A B - A B)/(u - v) form,
# since the other form carries phi(alpha+beta, 2 alpha, .) with c -> 0
SMALL_ALPHA = 1e-6


class Family(str, enum.Enum):
    CHF = "chf"
    BESSEL1 = "bessel1"
    SINE = "sine"
    BESSEL2 = "bessel2"


def _near_negative_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= -1 and z.real == math.floor(z.real)


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus its (complex) parameters."""

    family: Family
    alpha: complex = 0.0
    beta: complex = 0.0
    a: complex = 0.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        for name in ("alpha", "beta", "a"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if fam in (Family.CHF, Family.BESSEL1):
            if not self.alpha.real > -0.5:
                raise ParameterDomainError("need Re(alpha) > -1/2")
        if fam is Family.CHF:
            for z in (self.alpha + self.beta, self.alpha - self.beta):
                if _near_negative_integer(z):
                    raise ParameterDomainError(
                        f"alpha +- beta = {z} is a negative integer"
                    )
        if fam is Family.BESSEL2 and not self.a.real > -1:
            raise ParameterDomainError("need Re(a) > -1")

    @classmethod
    def chf(cls, alpha, beta) -> "KernelSpec":
        return cls(Family.CHF, alpha=alpha, beta=beta)

    @classmethod
    def bessel1(cls, alpha) -> "KernelSpec":
        return cls(Family.BESSEL1, alpha=alpha)

    @classmethod
    def sine(cls) -> "KernelSpec":
        return cls(Family.SINE)

    @classmethod
    def bessel2(cls, a) -> "KernelSpec":
        return cls(Family.BESSEL2, a=a)

    @property
    def half_line(self) -> bool:
        """True when the natural domain is (0, inf) rather than R."""
        return self.family is Family.BESSEL2

    @property
    def is_real(self) -> bool:
        """Kernel values are real for these parameters."""
        if self.family is Family.CHF:
            return self.alpha.imag == 0 and self.beta.real == 0
        if self.family is Family.BESSEL1:
            return self.alpha.imag == 0
        if self.family is Family.BESSEL2:
            return self.a.imag == 0
        return True


@dataclass(frozen=True)
class KernelValue:
    value: complex
    on_diagonal: bool


def g_beta(x: float, beta) -> complex:
    """Phase factor: e^{-i pi beta} for x >= 0, e^{i pi beta} for x < 0."""
    beta = complex(beta)
    return cmath.exp(-1j * math.pi * beta) if x >= 0 else cmath.exp(1j * math.pi * beta)


def diagonal_threshold(u: float) -> float:
    return 1e-5 * max(1.0, abs(u))


# ---------------------------------------------------------------------------
# per-node factor tables
# ---------------------------------------------------------------------------
#
# Each family provides arrays L (k x m), R (k x m) and a scalar prefactor so
#   K(u_i, u_j) = pref * sum_r [L_r(u_i) R_r(u_j) - L_r(u_j) R_r(u_i)] / (u_i - u_j)
# together with the exact diagonal values D(u_i).


def _chf_form2(spec: KernelSpec, x: np.ndarray, prec):
    al, bt = spec.alpha, spec.beta
    pref = cmath.exp(
        gamma_ln(1 + al + bt) + gamma_ln(1 + al - bt) - 2 * gamma_ln(1 + 2 * al)
    ) / (math.pi * (1 + 2 * al))
    m = len(x)
    p = np.empty(m, complex)
    F = np.empty(m, complex)
    H = np.empty(m, complex)
    dF = np.empty(m, complex)
    dH = np.empty(m, complex)
    for i, xi in enumerate(x):
        z = 2j * xi
        p[i] = cmath.sqrt(g_beta(xi, bt)) * abs(2 * xi) ** al * cmath.exp(-1j * xi)
        F[i] = kummer_m(1 + al + bt, 2 + 2 * al, z, prec)
        H[i] = kummer_m(al + bt, 2 * al, z, prec)
        # d/dx phi(a, c, 2ix) = 2i (a/c) phi(a+1, c+1, 2ix)
        dF[i] = 2j * (1 + al + bt) / (2 + 2 * al) * kummer_m(2 + al + bt, 3 + 2 * al, z, prec)
        dH[i] = 2j * (al + bt) / (2 * al) * kummer_m(1 + al + bt, 1 + 2 * al, z, prec)
    # K = pref p(u) p(v) [u F(u) H(v) - v F(v) H(u)] / (u - v)
    L = np.array([p * x * F])
    R = np.array([p * H])
    diag = pref * p * p * (F * H + x * dF * H - x * F * dH)
    return pref, L, R, diag


def _chf_form1(spec: KernelSpec, x: np.ndarray, prec):
    al, bt = spec.alpha, spec.beta
    pref = cmath.exp(
        gamma_ln(1 + al + bt) + gamma_ln(1 + al - bt) - 2 * gamma_ln(1 + 2 * al)
    ) / (2j * math.pi)
    m = len(x)
    A = np.empty(m, complex)
    B = np.empty(m, complex)
    dA = np.empty(m, complex)
    dB = np.empty(m, complex)
    for i, xi in enumerate(x):
        z = 2j * xi
        base = cmath.sqrt(g_beta(xi, bt)) * abs(2 * xi) ** al
        ea, eb = cmath.exp(-1j * xi), cmath.exp(1j * xi)
        A[i] = base * ea * kummer_m(1 + al + bt, 1 + 2 * al, z, prec)
        B[i] = base * eb * kummer_m(1 + al - bt, 1 + 2 * al, -z, prec)
        # the alpha/x terms from |2x|^alpha cancel in A'B - AB' and are dropped
        dA[i] = -1j * A[i] + base * ea * 2j * (1 + al + bt) / (1 + 2 * al) * kummer_m(
            2 + al + bt, 2 + 2 * al, z, prec
        )
        dB[i] = 1j * B[i] - base * eb * 2j * (1 + al - bt) / (1 + 2 * al) * kummer_m(
            2 + al - bt, 2 + 2 * al, -z, prec
        )
    L = np.array([A])
    R = np.array([B])
    diag = pref * (dA * B - A * dB)
    return pref, L, R, diag


def _bessel1(spec: KernelSpec, x: np.ndarray, prec):
    al = spec.alpha
    nu = al if al.imag != 0 else al.real
    ax = np.abs(x)
    Ep = np.array([bessel_j_reduced(nu + 0.5, t) for t in ax])
    Em = np.array([bessel_j_reduced(nu - 0.5, t) for t in ax])
    Epp = np.array([bessel_j_reduced(nu + 1.5, t) for t in ax])
    w = ax.astype(complex) ** al
    # K = 1/2 |u|^a |v|^a [u E+(u) E-(v) - v E+(v) E-(u)] / (u - v), E even
    L = np.array([w * x * Ep])
    R = np.array([w * Em])
    diag = 0.5 * w * w * (Ep * Em + x * x * (Ep * Ep - Epp * Em))
    return 0.5, L, R, diag


def _bessel2(spec: KernelSpec, x: np.ndarray, prec):
    a = spec.a
    nu = a if a.imag != 0 else a.real
    r = np.sqrt(x)
    Ja = np.array([bessel_j(nu, t) for t in r])
    Ja1 = np.array([bessel_j(nu + 1, t) for t in r])
    # K = [sqrt(x) J_{a+1}(sqrt x) J_a(sqrt y) - (x <-> y)] / (2 (x - y))
    L = np.array([r * Ja1])
    R = np.array([Ja])
    diag = 0.25 * (Ja * Ja + Ja1 * Ja1 - 2 * a / r * Ja * Ja1)
    return 0.5, L, R, diag


def _factors(spec: KernelSpec, x: np.ndarray, prec):
    fam = spec.family
    if fam is Family.CHF:
        if abs(spec.alpha) < SMALL_ALPHA:
            return _chf_form1(spec, x, prec)
        return _chf_form2(spec, x, prec)
    if fam is Family.BESSEL1:
        return _bessel1(spec, x, prec)
    if fam is Family.BESSEL2:
        return _bessel2(spec, x, prec)
    raise AssertionError(fam)


def _check_domain(spec: KernelSpec, x: np.ndarray):
    if spec.half_line and np.any(x <= 0):
        raise ParameterDomainError("Bessel2 kernel is defined on (0, inf)")
    if spec.family in (Family.CHF, Family.BESSEL1) and spec.alpha.real < 0:
        if np.any(x == 0):
            raise ParameterDomainError("|2x|^alpha is infinite at x = 0 for Re alpha < 0")


def kernel_matrix(
    spec: KernelSpec, x, prec: PrecisionConfig | None = None
) -> np.ndarray:
    """Kernel values K(x_i, x_j) on a node set, as a complex m x m array."""
    x = np.asarray(x, dtype=float)
    _check_domain(spec, x)
    if spec.family is Family.SINE:
        d = x[:, None] - x[None, :]
        return (np.sinc(d / math.pi) / math.pi).astype(complex)
    pref, L, R, diag = _factors(spec, x, prec)
    num = np.einsum("ri,rj->ij", L, R)
    num = num - num.T
    d = x[:, None] - x[None, :]
    near = np.abs(d) < np.maximum(1.0, np.abs(x))[:, None] * 1e-5
    with np.errstate(divide="ignore", invalid="ignore"):
        K = (pref * num / d).astype(complex)
    if np.any(near):
        ii, jj = np.nonzero(near)
        mid = 0.5 * (x[ii] + x[jj])
        if np.all(ii == jj):
            K[ii, jj] = diag[ii]
        else:
            _, _, _, dmid = _factors(spec, mid, prec)
            K[ii, jj] = dmid
    return K


def kernel_eval(
    spec: KernelSpec, u: float, v: float, prec: PrecisionConfig | None = None
) -> KernelValue:
    """K(u, v) for one pair of points.

    Within ``diagonal_threshold(u)`` of the diagonal the exact diagonal value
    at the midpoint is returned; the error there is O(|u - v|^2).
    """
    u, v = float(u), float(v)
    on_diag = abs(u - v) < diagonal_threshold(u)
    if spec.family is Family.SINE:
        _check_domain(spec, np.array([u, v]))
        d = u - v
        return KernelValue(complex(np.sinc(d / math.pi) / math.pi), on_diag)
    if on_diag:
        mid = 0.5 * (u + v)
        _check_domain(spec, np.array([mid]))
        _, _, _, diag = _factors(spec, np.array([mid]), prec)
        return KernelValue(complex(diag[0]), True)
    x = np.array([u, v])
    _check_domain(spec, x)
    pref, L, R, _ = _factors(spec, x, prec)
    num = np.sum(L[:, 0] * R[:, 1] - L[:, 1] * R[:, 0])
    return KernelValue(complex(pref * num / (u - v)), False)
