"""Complex special functions used by the kernels and the asymptotic formulas.

Double precision is used where it is enough (log-Gamma, Barnes G); the
confluent hypergeometric series and the Bessel ascending series are summed
with mpmath at a working precision large enough to absorb the cancellation
between terms, then rounded back to Python complex/float.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from .errors import NonConvergenceError, ParameterDomainError, PoleError

__all__ = [
    "PrecisionConfig",
    "default_precision",
    "gamma_ln",
    "barnes_g_ln",
    "kummer_m",
    "kummer_m_many",
    "bessel_j",
    "bessel_j_prime",
    "bessel_j_reduced",
    "zeta_prime_minus_one",
]

LOG_2PI = math.log(2.0 * math.pi)

PRECISION_ENV = "GAPDET_PRECISION_BITS"


@dataclass(frozen=True)
class PrecisionConfig:
    """Working-precision policy for the extended-precision series.

    ``series_term_cap=None`` means the default cap ``10*|z| + 200``.
    """

    mantissa_bits: int = 53
    series_term_cap: int | None = None
    tail_tolerance: float = 1e-17

    def __post_init__(self):
        if int(self.mantissa_bits) < 53:
            raise ParameterDomainError("mantissa_bits must be >= 53")
        if not 0.0 < self.tail_tolerance < 1.0:
            raise ParameterDomainError("tail_tolerance must lie in (0, 1)")
        if self.series_term_cap is not None and self.series_term_cap < 1:
            raise ParameterDomainError("series_term_cap must be positive")

    def term_cap(self, z: complex) -> int:
        if self.series_term_cap is not None:
            return int(self.series_term_cap)
        return int(10 * abs(z)) + 200


def default_precision() -> PrecisionConfig:
    """Default policy; ``GAPDET_PRECISION_BITS`` overrides the mantissa floor."""
    bits = os.environ.get(PRECISION_ENV)
    if bits:
        return PrecisionConfig(mantissa_bits=int(bits))
    return PrecisionConfig()


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------------------
# Gamma and Barnes G
# ---------------------------------------------------------------------------


def gamma_ln(z):
    """Principal branch of log Gamma.

    Backed by ``scipy.special.loggamma``, which reflects Re z < 0.5 into the
    right half-plane and is continuous on C minus (-inf, 0].  Accepts scalars
    or arrays; a scalar in gives a Python complex out.
    """
    arr = np.asarray(z, dtype=complex)
    bad = (arr.imag == 0.0) & (arr.real <= 0.0) & (arr.real == np.floor(arr.real))
    if np.any(bad):
        raise PoleError(f"log Gamma has a pole at {arr[bad].ravel()[0]}")
    out = special.loggamma(arr)
    if out.ndim == 0:
        return complex(out)
    return out


# lnG(1+w) = w/2 ln(2 pi) - (w + (1+gamma) w^2)/2
#            + sum_k [k ln(1 + w/k) - w + w^2/(2k)]
# the tail k > K is summed as sum_{p>=3} (-1)^(p+1) w^p/p * zeta(p-1, K+1).


def _lng_one_plus(w: complex) -> complex:
    K = max(64, int(math.ceil(20.0 * abs(w))))
    k = np.arange(1, K + 1, dtype=float)
    terms = k * np.log1p(w / k) - w + w * w / (2.0 * k)
    # sum small terms first
    acc = complex(np.sum(terms[::-1]))
    ratio = abs(w) / (K + 1.0)
    p = 3
    wp = w**3
    tail = 0.0j
    while True:
        t = (-1) ** (p + 1) * wp / p * special.zeta(p - 1, K + 1.0)
        tail += t
        if abs(t) < 1e-18 * max(1.0, abs(acc)) or ratio**p < 1e-18:
            break
        p += 1
        wp *= w
    return (
        0.5 * w * LOG_2PI
        - 0.5 * (w + (1.0 + np.euler_gamma) * w * w)
        + acc
        + tail
    )


def barnes_g_ln(z) -> complex:
    """log of Barnes' G-function, the branch continuous from the positive axis.

    Evaluates the Weierstrass product for G(1+w) with |Re w| <= 1/2 and moves
    to z with G(z+1) = Gamma(z) G(z).
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Barnes G vanishes at the nonpositive integer {z.real:g}")
    shift = int(round(z.real - 1.0))
    w = z - 1.0 - shift
    val = _lng_one_plus(w)
    if shift > 0:
        for j in range(shift):
            val += gamma_ln(1.0 + w + j)
    else:
        for j in range(-shift):
            # lnG(x) = lnG(x+1) - lnGamma(x) with x = 1 + w - (j+1)
            val -= gamma_ln(w - j)
    return complex(val)


# ---------------------------------------------------------------------------
# zeta'(-1)
# ---------------------------------------------------------------------------

_ZETA_LOCK = threading.Lock()
_ZETA_PRIME_M1: float | None = None


def _zeta_prime_two() -> float:
    """zeta'(2) = -sum ln k / k^2 with an Euler-Maclaurin tail at k = N."""
    N = 20
    k = np.arange(1, N, dtype=float)
    head = np.sum(np.log(k) / k**2)
    lnN = math.log(N)
    # f(x) = ln x / x^2;  f^(m)(x) = x^(-2-m) (a_m ln x + b_m)
    tail = (lnN + 1.0) / N + 0.5 * lnN / N**2
    a, b = 1.0, 0.0
    bern = special.bernoulli(24)
    for m in range(1, 24):
        p = -2 - (m - 1)
        a, b = p * a, p * b + a
        if m % 2 == 1:
            j2 = m + 1
            deriv = N ** (-2.0 - m) * (a * lnN + b)
            tail -= bern[j2] / math.factorial(j2) * deriv
    return -(head + tail)


def zeta_prime_minus_one() -> float:
    """zeta'(-1) = 1/12 - ln A with Glaisher's constant A.

    ln A comes from Kinkelin's relation
    ln A = (gamma + ln 2 pi)/12 - zeta'(2)/(2 pi^2), and zeta'(2) from an
    Euler-Maclaurin-accelerated sum.  Computed once per process.
    """
    global _ZETA_PRIME_M1
    if _ZETA_PRIME_M1 is None:
        with _ZETA_LOCK:
            if _ZETA_PRIME_M1 is None:
                ln_a = (np.euler_gamma + LOG_2PI) / 12.0 - _zeta_prime_two() / (
                    2.0 * math.pi**2
                )
                _ZETA_PRIME_M1 = 1.0 / 12.0 - ln_a
    return _ZETA_PRIME_M1


# ---------------------------------------------------------------------------
# Confluent hypergeometric function phi(a, c, z) = 1F1(a; c; z)
# ---------------------------------------------------------------------------


def _working_bits(z: complex, prec: PrecisionConfig) -> int:
    # terms reach e^{|z|} while the result can be as small as e^{Re z}
    loss = abs(z) + max(0.0, -z.real)
    return max(int(prec.mantissa_bits), int(math.ceil(1.45 * loss)) + 64)


def _kummer_series(a, c, z, tol, cap):
    """Taylor series of 1F1 at the current mpmath precision."""
    total = mpmath.mpc(1)
    term = mpmath.mpc(1)
    abs_z = abs(z)
    re_c = float(mpmath.re(c))
    a_minus_c = float(abs(a - c))
    n = 0
    while True:
        term = term * (a + n) / (c + n) * z / (n + 1)
        total += term
        n += 1
        if term == 0:
            return total
        if n > cap:
            raise NonConvergenceError(
                f"1F1 series did not converge within {cap} terms (|z|={float(abs_z):.3g})"
            )
        # For k >= n the term ratio is bounded by
        #   (1 + |a - c|/(Re c + k)) |z| / (k + 1),
        # so once that bound r is < 1 the tail is at most |term| r/(1-r).
        denom = re_c + n
        if denom <= 0:
            continue
        r = (1.0 + a_minus_c / denom) * float(abs_z) / (n + 1)
        if r >= 0.5:
            continue
        if float(abs(term)) * r / (1.0 - r) <= tol * float(abs(total)):
            return total


def kummer_m(a, c, z, prec: PrecisionConfig | None = None) -> complex:
    """Confluent hypergeometric function phi(a, c, z) (Kummer's M).

    Sums the defining Taylor series with ``max(bits, ceil(1.45 L) + 64)``
    bits, L = |z| + max(0, -Re z), so that the ~e^{|z|} cancellation for
    imaginary z (and ~e^{2|z|} for negative real z) is absorbed.
    Raises PoleError for c in {0, -1, -2, ...} and NonConvergenceError if the
    term cap runs out.
    """
    if prec is None:
        prec = default_precision()
    if _is_nonpositive_integer(c):
        raise PoleError(f"1F1 parameter c={c} is a nonpositive integer")
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    with mpmath.workprec(_working_bits(z, prec)):
        val = _kummer_series(
            mpmath.mpmathify(complex(a)),
            mpmath.mpmathify(complex(c)),
            mpmath.mpmathify(z),
            prec.tail_tolerance,
            prec.term_cap(z),
        )
        return complex(val)


def kummer_m_many(a, c, zs, prec: PrecisionConfig | None = None) -> np.ndarray:
    """``kummer_m`` over an array of arguments with fixed (a, c)."""
    zs = np.asarray(zs, dtype=complex)
    out = np.empty(zs.shape, dtype=complex)
    flat = out.reshape(-1)
    for i, z in enumerate(zs.reshape(-1)):
        flat[i] = kummer_m(a, c, z, prec)
    return out


# ---------------------------------------------------------------------------
# Bessel functions of the first kind
# ---------------------------------------------------------------------------


def _bessel_series(nu, x: float, deriv: bool):
    """Ascending series of J_nu(x) (or J'_nu(x)) as an mpmath number.

    J_nu(x) = sum_k (-1)^k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)); the derivative
    is summed termwise.  Negative integer orders use J_{-m} = (-1)^m J_m.
    """
    nu_c = complex(nu)
    if nu_c.imag == 0 and nu_c.real < 0 and nu_c.real == math.floor(nu_c.real):
        m = -int(nu_c.real)
        return (-1) ** m * _bessel_series(float(m), x, deriv)
    bits = 53 + int(math.ceil(1.45 * x)) + 24
    with mpmath.workprec(bits):
        nu_m = mpmath.mpmathify(nu)
        xm = mpmath.mpf(x)
        q = -(xm * xm) / 4
        term = mpmath.rgamma(nu_m + 1)
        total = term * nu_m / 2 if deriv else term
        tol = mpmath.mpf(2) ** (-62)
        cap = 10 * int(x) + 200
        k = 0
        while True:
            k += 1
            term = term * q / (k * (k + nu_m))
            contrib = term * (2 * k + nu_m) / 2 if deriv else term
            total += contrib
            if k > x and abs(contrib) <= tol * abs(total):
                break
            if k > cap:
                raise NonConvergenceError("Bessel ascending series did not converge")
        if deriv:
            return total * (xm / 2) ** (nu_m - 1)
        return total * (xm / 2) ** nu_m


def _to_py(val, nu):
    if isinstance(nu, complex):
        return complex(val)
    return float(mpmath.re(val))


def bessel_j(nu, x) -> float:
    """J_nu(x) for x >= 0 from the ascending series in extended precision.

    The working precision grows like 1.45 x bits to absorb the e^x-sized
    intermediate terms, so the series is usable on the whole of [0, 100].
    Complex ``nu`` is accepted and returns a complex value.
    """
    x = float(x)
    if x < 0:
        raise ParameterDomainError("bessel_j requires x >= 0")
    if x == 0:
        if nu == 0:
            return 1.0
        if complex(nu).real > 0:
            return 0.0
        raise ParameterDomainError("J_nu(0) is infinite for Re nu < 0")
    return _to_py(_bessel_series(nu, x, False), nu)


def bessel_j_prime(nu, x) -> float:
    """Derivative J'_nu(x), x > 0, summed termwise from the same series."""
    x = float(x)
    if x <= 0:
        raise ParameterDomainError("bessel_j_prime requires x > 0")
    return _to_py(_bessel_series(nu, x, True), nu)


def bessel_j_reduced(nu, x) -> float:
    """J_nu(x) / x^nu, an even entire function of x; x >= 0."""
    x = float(x)
    if x < 0:
        raise ParameterDomainError("bessel_j_reduced requires x >= 0")
    if x == 0:
        return _to_py(mpmath.rgamma(mpmath.mpmathify(nu) + 1) / mpmath.mpf(2) ** mpmath.mpmathify(nu), nu)
    with mpmath.workprec(53 + int(math.ceil(1.45 * x)) + 24):
        val = _bessel_series(nu, x, False) / mpmath.mpf(x) ** mpmath.mpmathify(nu)
        return _to_py(val, nu)
