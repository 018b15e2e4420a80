"""Fredholm determinants det(I - K) on an interval by the Nystrom method.

The operator is discretized on an m-point Gauss-Legendre rule and the
determinant of the symmetrized matrix  I - W^{1/2} K W^{1/2}  is taken by LU
with partial pivoting.  For analytic kernels the error decays exponentially
in m, so ``fredholm_det`` simply doubles m until two levels agree.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import special

from .errors import DeterminantBreakdown, ParameterDomainError
from .kernels import Family, KernelSpec, kernel_matrix
from .specfun import PrecisionConfig

__all__ = [
    "Transform",
    "QuadratureRule",
    "DetResult",
    "gauss_legendre",
    "square_map_rule",
    "jacobi_endpoint_rule",
    "split_jacobi_rule",
    "nystrom_det",
    "nystrom_logdet",
    "fredholm_det",
    "roundoff_floor",
    "auto_tolerance",
]

M_START = 32
M_CAP = 4096


class Transform(str, enum.Enum):
    IDENTITY = "identity"
    SQUARE_MAP = "square_map"
    # Gauss-Jacobi for a |x - x0|^p endpoint factor; weights are divided by
    # that factor so the rule is used on the bare kernel
    JACOBI = "jacobi"


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]
    transform: Transform = Transform.IDENTITY

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f) -> complex:
        return np.sum(self.weights * f(self.nodes))


@functools.lru_cache(maxsize=64)
def _leggauss(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(m: int, lo: float = -1.0, hi: float = 1.0) -> QuadratureRule:
    """m-point Gauss-Legendre rule on (lo, hi)."""
    if int(m) != m or m < 1:
        raise ParameterDomainError("m must be a positive integer")
    if not lo < hi:
        raise ParameterDomainError("need lo < hi")
    x, w = _leggauss(int(m))
    half = 0.5 * (hi - lo)
    return QuadratureRule(lo + half * (x + 1.0), half * w, (lo, hi))


def square_map_rule(m: int, s: float) -> QuadratureRule:
    """Rule on (0, s) through x = s t^2, t in (0, 1); dx = 2 s t dt.

    Clusters nodes at 0 so that integrands behaving like powers of sqrt(x)
    there (the hard-edge Bessel kernel) become smooth in t.
    """
    base = gauss_legendre(m, 0.0, 1.0)
    t = base.nodes
    return QuadratureRule(s * t * t, 2.0 * s * t * base.weights, (0.0, s), Transform.SQUARE_MAP)


@functools.lru_cache(maxsize=64)
def _jacobi01(m: int, p: float):
    """Gauss-Jacobi nodes/weights for the weight t^p on (0, 1)."""
    t, w = special.roots_jacobi(m, 0.0, p)
    t = 0.5 * (t + 1.0)
    w = w * 0.5 ** (p + 1.0)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def jacobi_endpoint_rule(m: int, lo: float, hi: float, p: float, at: str = "lo") -> QuadratureRule:
    """Rule on (lo, hi) exact for |x - end|^p times polynomials of degree < 2m.

    The returned weights are the Gauss-Jacobi weights divided by |x - end|^p,
    i.e. the rule integrates g(x) accurately when g(x) / |x - end|^p is smooth.
    """
    if not lo < hi:
        raise ParameterDomainError("need lo < hi")
    if not p > -1:
        raise ParameterDomainError("Jacobi exponent must exceed -1")
    t, w = _jacobi01(int(m), float(p))
    L = hi - lo
    dist = L * t
    weff = L * w / t**p
    if at == "lo":
        x = lo + dist
    else:
        x = hi - dist[::-1]
        weff = weff[::-1]
    return QuadratureRule(x, weff, (lo, hi), Transform.JACOBI)


def split_jacobi_rule(m: int, s: float, p: float) -> QuadratureRule:
    """m nodes on (-s, s): m/2 Gauss-Jacobi nodes on each side of 0, weight |x|^p."""
    half = max(1, m // 2)
    right = jacobi_endpoint_rule(half, 0.0, s, p, at="lo")
    left = jacobi_endpoint_rule(half, -s, 0.0, p, at="hi")
    return QuadratureRule(
        np.concatenate([left.nodes, right.nodes]),
        np.concatenate([left.weights, right.weights]),
        (-s, s),
        Transform.JACOBI,
    )


def _symmetrized(spec: KernelSpec, rule: QuadratureRule, prec) -> np.ndarray:
    K = kernel_matrix(spec, rule.nodes, prec)
    sw = np.sqrt(rule.weights)
    return np.eye(len(rule)) - sw[:, None] * K * sw[None, :]


def nystrom_logdet(
    spec: KernelSpec, rule: QuadratureRule, prec: PrecisionConfig | None = None
) -> tuple[complex, float]:
    """(phase, ln|det|) of I - W^{1/2} K W^{1/2} on the given rule."""
    M = _symmetrized(spec, rule, prec)
    lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    d = np.diag(lu)
    if not np.all(np.isfinite(d)) or np.any(d == 0):
        raise DeterminantBreakdown("Nystrom matrix has a zero or non-finite pivot")
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    phase = (-1.0) ** swaps * np.prod(d / np.abs(d))
    return complex(phase), float(np.sum(np.log(np.abs(d))))


def nystrom_det(
    spec: KernelSpec, rule: QuadratureRule, prec: PrecisionConfig | None = None
) -> complex:
    """det(delta_jk - sqrt(w_j) K(x_j, x_k) sqrt(w_k))."""
    phase, logabs = nystrom_logdet(spec, rule, prec)
    return phase * math.exp(logabs)


@dataclass(frozen=True)
class DetResult:
    value: complex
    m_final: int
    err_estimate: float
    converged: bool
    log_value: complex

    @property
    def ln_abs(self) -> float:
        return self.log_value.real


def _rule_for(spec: KernelSpec, s: float, m: int) -> QuadratureRule:
    """Node placement adapted to each kernel's non-smooth points.

    CHF and Bessel1 carry |u|^alpha |v|^alpha (and for beta != 0 a phase jump)
    at 0, so each half-interval gets its own Jacobi rule.  Bessel2 behaves
    like (xy)^(a/2) at 0: the square map makes this smooth when 2a + 1 is an
    integer, otherwise a Jacobi rule with weight x^a is used.
    """
    fam = spec.family
    if fam is Family.SINE:
        return gauss_legendre(m, -s, s)
    if fam is Family.BESSEL2:
        a = spec.a.real
        if 2 * a + 1 == round(2 * a + 1):
            return square_map_rule(m, s)
        return jacobi_endpoint_rule(m, 0.0, s, a, at="lo")
    return split_jacobi_rule(m, s, 2 * spec.alpha.real)


def roundoff_floor(spec: KernelSpec, s: float) -> float:
    """Rough size of the double-precision floor on ln det(I - K).

    The top eigenvalue of K sits about e^{-2s} below 1 on (-s, s) (e^{-2 sqrt s}
    on (0, s) for Bessel2), so O(eps) errors in the kernel entries move
    ln det by about eps e^{2s}.  Tolerances below this cannot be met.
    """
    reach = 2.0 * math.sqrt(s) if spec.family is Family.BESSEL2 else 2.0 * s
    return float(np.finfo(float).eps * math.exp(min(reach, 700.0)))


def auto_tolerance(spec: KernelSpec, s: float) -> float:
    """1e-10, or ten times the roundoff floor once that is larger."""
    return max(1e-10, 10.0 * roundoff_floor(spec, s))


def _distance(prev: tuple[complex, float], cur: tuple[complex, float]) -> float:
    (p0, l0), (p1, l1) = prev, cur
    if math.exp(l1) < 1e-3:
        # log det difference; phases compared on the unit circle
        return abs(l1 - l0) + abs(p1 - p0)
    v0, v1 = p0 * math.exp(l0), p1 * math.exp(l1)
    return abs(v1 - v0) / abs(v1)


def fredholm_det(
    spec: KernelSpec,
    s: float,
    tol: float = 1e-10,
    m0: int = M_START,
    m_max: int = M_CAP,
    prec: PrecisionConfig | None = None,
) -> DetResult:
    """det(I - K) on (-s, s), or on (0, s) for the hard-edge Bessel kernel.

    m doubles from ``m0`` until successive values agree within ``tol``
    (absolute in ln det once |det| < 1e-3, relative otherwise).  Hitting
    ``m_max`` returns the last value with ``converged=False``; so does a
    roundoff plateau, i.e. two doublings past m = 128 that fail to shrink
    the difference, since further doubling only adds noise.
    """
    if not s > 0:
        raise ParameterDomainError("s must be positive")
    if not tol > 0:
        raise ParameterDomainError("tol must be positive")
    m = int(m0)
    prev = nystrom_logdet(spec, _rule_for(spec, s, m), prec)
    err = math.inf
    stalls = 0
    while m < m_max:
        m = min(2 * m, m_max)
        cur = nystrom_logdet(spec, _rule_for(spec, s, m), prec)
        last, err = err, _distance(prev, cur)
        prev = cur
        if err <= tol:
            break
        if m > 128 and err > 0.5 * last:
            stalls += 1
            if stalls >= 2:
                break
    phase, logabs = prev
    log_value = complex(logabs, math.atan2(phase.imag, phase.real))
    return DetResult(
        value=phase * math.exp(logabs),
        m_final=m,
        err_estimate=err,
        converged=err <= tol,
        log_value=log_value,
    )
