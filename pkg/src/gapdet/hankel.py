"""Hankel determinants for the weight

    w(x) = 2^alpha (1 - x)^alpha / sqrt(1 - x^2),   -1 < x < cos(phi),

i.e. the arc symbol pushed to [-1, 1] by x = cos(theta).  The moments are
computed exactly in extended precision: with t = sin^2(theta/2),

    mu_m = 2^{2 alpha} sum_j C(m, j) (-2)^j J(alpha + 1/2 + j),
    J(p) = int_{t0}^1 t^{p-1} (1 - t)^{-1/2} dt,  t0 = sin^2(phi/2),

and J obeys J(p+1) = (p J(p) + t0^p sqrt(1 - t0)) / (p + 1/2), a recurrence
with positive terms.  The alternating binomial sum loses about 1.6 m bits,
which are added to the working precision.  The determinant of the moment
matrix is then taken in mpmath at 64 + ceil(2.6 n) bits, raised for phi > 0
where the shorter support makes the monomial basis worse conditioned.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DeterminantBreakdown, ParameterDomainError
from .specfun import default_precision

__all__ = [
    "HankelWeight",
    "HankelResult",
    "hankel_precision_bits",
    "hankel_moments",
    "hankel_moment",
    "hankel_det",
    "hankel_scaling_ratio",
]


@dataclass(frozen=True)
class HankelWeight:
    alpha: complex = 0.0
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "phi", float(self.phi))
        if not self.alpha.real > -0.5:
            raise ParameterDomainError("need Re(alpha) > -1/2")
        if not 0.0 <= self.phi < math.pi:
            raise ParameterDomainError("phi must lie in [0, pi)")

    @property
    def upper(self) -> float:
        return math.cos(self.phi)

    def __call__(self, x: float) -> complex:
        """w(x) on (-1, cos phi), zero elsewhere."""
        x = float(x)
        if not -1.0 < x < self.upper:
            return 0j
        return 2.0**self.alpha * (1.0 - x) ** self.alpha / math.sqrt(1.0 - x * x)


@dataclass(frozen=True)
class HankelResult:
    sign: complex
    log_abs: float
    n: int
    precision_bits_used: int

    @property
    def log_value(self) -> complex:
        return self.log_abs + 1j * cmath.phase(self.sign)

    @property
    def value(self) -> complex:
        if self.log_abs < -745:
            return 0j
        return self.sign * math.exp(self.log_abs)


@functools.lru_cache(maxsize=256)
def _bits_per_order(phi: float) -> float:
    """Bits lost per unit of n in the moment matrix on [-1, cos phi].

    Monomials expanded in Chebyshev polynomials of the support interval grow
    like rho^k, rho the largest |t + sqrt(t^2 - 1)| with t the image of the
    unit circle; the Hankel matrix loses rho^{2n}.  On [-1, 1] rho = 1 + sqrt 2,
    giving 2.54 bits, so the 2.6 n budget is kept as the floor.
    """
    c = math.cos(phi)
    mid, rad = 0.5 * (c - 1.0), 0.5 * (c + 1.0)
    t = (np.exp(1j * np.linspace(0.0, math.pi, 721)) - mid) / rad
    w = t + np.sqrt(t * t - 1.0)
    rho = np.max(np.maximum(np.abs(w), 1.0 / np.abs(w)))
    return max(2.6, 2.0 * math.log2(rho))


def hankel_precision_bits(n: int, phi: float = 0.0) -> int:
    """64 + ceil(2.6 n) bits on the full interval, more as the support shrinks."""
    return max(default_precision().mantissa_bits, 64 + math.ceil(_bits_per_order(float(phi)) * n))


def _mp(z: complex):
    return mpmath.mpf(z.real) if z.imag == 0 else mpmath.mpc(z)


@functools.lru_cache(maxsize=32)
def _moments_mp(alpha: complex, phi: float, count: int, bits: int):
    # extra bits for the alternating binomial sum, whose largest term is ~3^m
    work = bits + math.ceil(1.6 * count) + 32
    with mpmath.workprec(work):
        a = _mp(alpha)
        p0 = a + mpmath.mpf(1) / 2
        t0 = mpmath.sin(mpmath.mpf(phi) / 2) ** 2
        if phi == 0.0:
            J = mpmath.beta(p0, mpmath.mpf(1) / 2)
        else:
            J = mpmath.betainc(p0, mpmath.mpf(1) / 2, t0, 1)
        Js = [J]
        root = mpmath.sqrt(1 - t0)
        p = p0
        for _ in range(count - 1):
            J = (p * J + (t0**p) * root) / (p + mpmath.mpf(1) / 2)
            Js.append(J)
            p += 1
        scale = mpmath.power(4, a)
        terms = [Js[j] * (-2) ** j for j in range(count)]
        out = []
        for m in range(count):
            acc = mpmath.mpf(0)
            c = mpmath.mpf(1)
            for j in range(m + 1):
                acc += c * terms[j]
                c = c * (m - j) / (j + 1)
            out.append(+(scale * acc))
    return tuple(out)


def hankel_moments(w: HankelWeight, count: int, bits: int = 53):
    """mpmath moments mu_0 .. mu_{count-1}, accurate to about ``bits`` bits."""
    count = int(count)
    if count < 1:
        raise ParameterDomainError("count must be >= 1")
    return _moments_mp(w.alpha, w.phi, count, int(bits))


def hankel_moment(w: HankelWeight, m: int):
    """int_{-1}^{cos phi} x^m w(x) dx (float, or complex for complex alpha)."""
    m = int(m)
    if m < 0:
        raise ParameterDomainError("m must be >= 0")
    mu = hankel_moments(w, m + 1)[m]
    return complex(mu) if w.alpha.imag != 0 else float(mu)


def hankel_det(w: HankelWeight, n: int) -> HankelResult:
    """det(mu_{j+k})_{j,k=0}^{n-1} as sign + log magnitude.

    Cholesky for real alpha (the moment matrix is positive definite), LU
    otherwise.
    """
    n = int(n)
    if n < 1:
        raise ParameterDomainError("n must be >= 1")
    bits = hankel_precision_bits(n, w.phi)
    mu = hankel_moments(w, 2 * n - 1, bits)
    with mpmath.workprec(bits):
        H = mpmath.matrix(n, n)
        for j in range(n):
            for k in range(n):
                H[j, k] = mu[j + k]
        if w.alpha.imag == 0:
            try:
                L = mpmath.cholesky(H)
            except ValueError as exc:
                raise DeterminantBreakdown("moment matrix is not positive definite") from exc
            logabs = 2 * mpmath.fsum(mpmath.log(L[i, i]) for i in range(n))
            return HankelResult(1.0 + 0j, float(logabs), n, bits)
        det = mpmath.det(H)
        if det == 0:
            raise DeterminantBreakdown("moment matrix is singular")
        return HankelResult(
            complex(det / abs(det)), float(mpmath.log(abs(det))), n, bits
        )


def hankel_scaling_ratio(n: int, s: float, alpha) -> complex:
    """D_n^H(2s/n) / D_n^H(0); tends to det(I - K_Bessel2^{(alpha - 1/2)}) on (0, 4 s^2)."""
    n = int(n)
    if not s > 0:
        raise ParameterDomainError("s must be positive")
    phi = 2.0 * s / n
    if not phi < math.pi:
        raise ParameterDomainError("need 2s/n < pi")
    top = hankel_det(HankelWeight(alpha, phi), n)
    bot = hankel_det(HankelWeight(alpha, 0.0), n)
    val = cmath.exp(top.log_value - bot.log_value)
    return val.real if complex(alpha).imag == 0 else val
