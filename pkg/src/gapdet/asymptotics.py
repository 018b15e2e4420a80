"""Closed-form large-parameter expansions, all returned as logarithms.

Fredholm determinants (gap probabilities)
    chf      ln det(I - K^{(alpha,beta)}) on (-s, s), error O(1/s)
    bessel1  its beta = 0 case, written with G(alpha + 1/2) G(alpha + 3/2)
    sine     the alpha = beta = 0 case
    bessel2  ln det(I - K_Bessel2^{(a)}) on (0, s), error O(s^{-1/2})

Toeplitz / Hankel / Selberg expansions in n
    Dn0      arc-free Toeplitz determinant, one Fisher-Hartwig singularity
    Dnphi    arc Toeplitz determinant for 2s/n < phi < pi
    An       the Selberg integral A_n
    DH0      Hankel determinant of the phi = 0 Jacobi-type weight
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ParameterDomainError
from .kernels import Family, KernelSpec
from .specfun import barnes_g_ln, zeta_prime_minus_one

__all__ = [
    "AsymptoticValue",
    "ErrorOrder",
    "gap_ln_asymptotic",
    "toeplitz_ln_asymptotic",
    "di3_rhs",
    "sine_constant",
    "tau_ln",
    "FORBIDDEN_RADIUS",
]

LN2 = math.log(2.0)
LNPI = math.log(math.pi)
LN2PI = math.log(2.0 * math.pi)

# distance kept from alpha +- beta in {-1, -2, ...}; the expansions are
# not uniform near those points and no radius is known, so this is a guard
FORBIDDEN_RADIUS = 0.05


class ErrorOrder:
    INV_S = "O(1/s)"
    INV_SQRT_S = "O(s^-1/2)"
    LITTLE_O = "o(1)"
    INV_N_SIN = "O(1/(n sin(phi/2)))"


@dataclass(frozen=True)
class AsymptoticValue:
    ln_value: complex
    error_order: str

    @property
    def value(self) -> complex:
        return cmath.exp(self.ln_value)


def sine_constant() -> float:
    """(1/12) ln 2 + 3 zeta'(-1), the constant term of the sine-kernel expansion."""
    return LN2 / 12.0 + 3.0 * zeta_prime_minus_one()


def tau_ln(a) -> complex:
    """ln tau_a = ln G(1 + a) - (a/2) ln(2 pi)."""
    a = complex(a)
    return barnes_g_ln(1.0 + a) - 0.5 * a * LN2PI


def _guard(alpha: complex, beta: complex):
    for z in (alpha + beta, alpha - beta):
        k = round(z.real)
        if k <= -1 and abs(z - k) < FORBIDDEN_RADIUS:
            raise ParameterDomainError(
                f"alpha +- beta = {z} is within {FORBIDDEN_RADIUS} of the negative integer {k}"
            )


def _chf(alpha: complex, beta: complex, s: float) -> complex:
    _guard(alpha, beta)
    lns = math.log(s)
    return (
        0.5 * LNPI
        + 2.0 * barnes_g_ln(0.5)
        + barnes_g_ln(1.0 + 2.0 * alpha)
        - 2.0 * alpha * alpha * LN2
        - barnes_g_ln(1.0 + alpha + beta)
        - barnes_g_ln(1.0 + alpha - beta)
        + (-0.25 - alpha * alpha + beta * beta) * lns
        - 0.5 * s * s
        + 2.0 * alpha * s
    )


def _bessel1(alpha: complex, s: float) -> complex:
    _guard(alpha, 0j)
    return (
        -alpha * LN2PI
        + barnes_g_ln(alpha + 0.5)
        + barnes_g_ln(alpha + 1.5)
        + (-0.25 - alpha * alpha) * math.log(s)
        - 0.5 * s * s
        + 2.0 * alpha * s
    )


def gap_ln_asymptotic(spec: KernelSpec, s: float) -> AsymptoticValue:
    """Large-s expansion of ln det(I - K) for the kernel in ``spec``.

    The interval is (-s, s), or (0, s) for Bessel2.  Complex powers are
    taken as exp(c ln s) with real s > 0.
    """
    s = float(s)
    if not s > 0:
        raise ParameterDomainError("s must be positive")
    fam = spec.family
    if fam is Family.CHF:
        return AsymptoticValue(_chf(spec.alpha, spec.beta, s), ErrorOrder.INV_S)
    if fam is Family.BESSEL1:
        return AsymptoticValue(_bessel1(spec.alpha, s), ErrorOrder.INV_S)
    if fam is Family.SINE:
        val = -0.5 * s * s - 0.25 * math.log(s) + sine_constant()
        return AsymptoticValue(complex(val), ErrorOrder.INV_S)
    a = spec.a
    val = tau_ln(a) - 0.25 * a * a * math.log(s) - 0.25 * s + a * math.sqrt(s)
    return AsymptoticValue(complex(val), ErrorOrder.INV_SQRT_S)


def toeplitz_ln_asymptotic(kind: str, alpha=0.0, beta=0.0, n: int = 1, phi: float = 0.0) -> AsymptoticValue:
    """Large-n expansions: kind is one of "Dn0", "Dnphi", "An", "DH0"."""
    alpha, beta = complex(alpha), complex(beta)
    n = int(n)
    if n < 1:
        raise ParameterDomainError("n must be >= 1")
    lnn = math.log(n)
    if kind == "Dn0":
        _guard(alpha, beta)
        val = (
            (alpha * alpha - beta * beta) * lnn
            + barnes_g_ln(1.0 + alpha + beta)
            + barnes_g_ln(1.0 + alpha - beta)
            - barnes_g_ln(1.0 + 2.0 * alpha)
        )
        return AsymptoticValue(val, ErrorOrder.LITTLE_O)
    if kind == "Dnphi":
        _guard(alpha, beta)
        if not 0.0 < phi < math.pi:
            raise ParameterDomainError("Dnphi needs 0 < phi < pi")
        sn, cs = math.sin(0.5 * phi), math.cos(0.5 * phi)
        val = (
            n * n * math.log(cs)
            + 2.0 * (alpha * n + alpha * alpha) * math.log(1.0 + sn)
            - 0.25 * lnn
            + sine_constant()
            - 2.0 * alpha * alpha * LN2
            - (0.25 - beta * beta + alpha * alpha) * math.log(sn)
        )
        return AsymptoticValue(val, ErrorOrder.INV_N_SIN)
    if kind == "An":
        val = -n * n * LN2 + n * LN2PI - 0.25 * lnn + sine_constant()
        return AsymptoticValue(complex(val), ErrorOrder.LITTLE_O)
    if kind == "DH0":
        if not alpha.real > -0.5:
            raise ParameterDomainError("need Re(alpha) > -1/2")
        val = (
            (n + 0.5 * alpha) * LNPI
            + barnes_g_ln(0.5)
            - barnes_g_ln(0.5 + alpha)
            + (-((n - 1) ** 2) - 0.5 * alpha * alpha + 1.5 * alpha) * LN2
            + 0.5 * (alpha * alpha - alpha) * lnn
        )
        return AsymptoticValue(val, ErrorOrder.LITTLE_O)
    raise ParameterDomainError(f"unknown expansion kind {kind!r}")


def di3_rhs(alpha, beta, n: int, phi: float) -> complex:
    """Large-n value of d^2/dphi^2 ln D_n(phi), for 2s/n < phi < pi."""
    if not 0.0 < phi < math.pi:
        raise ParameterDomainError("need 0 < phi < pi")
    alpha, beta = complex(alpha), complex(beta)
    sn, cs = math.sin(0.5 * phi), math.cos(0.5 * phi)
    c2 = cs * cs
    return (
        -n * n / (4.0 * c2)
        - (alpha * n + alpha * alpha) * (1.0 - sn) / (2.0 * c2)
        + (1.0 + 4.0 * (alpha * alpha - beta * beta)) / (16.0 * sn * sn)
    )
