"""Toeplitz determinants for a Fisher-Hartwig symbol supported on an arc.

The symbol is

    f(e^{i theta}) = (2 sin(theta/2))^{2 alpha} e^{i beta (theta - pi)},
    phi <= theta <= 2 pi - phi,

and zero on the rest of the circle.  It has a root/jump singularity at
z = 1, which lies inside the gap when phi > 0.

Fourier coefficients come from composite Gauss-Legendre panels (Gauss-Jacobi
at theta = 0, 2 pi when phi = 0).  Determinants are taken by LU when the
matrix is well conditioned.  Otherwise they go through the orthogonal
polynomials of the discretized measure, i.e. a two-sided Gram-Schmidt on
the quadrature nodes, which keeps full relative accuracy in every
h_k = D_{k+1}/D_k even when D_n itself is far below the double range.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import special
from scipy.linalg import lapack

from .errors import (
    AccuracyError,
    DeterminantBreakdown,
    ParameterDomainError,
    UnderflowGuardError,
)
from .specfun import gamma_ln, kummer_m

__all__ = [
    "ArcSymbol",
    "ToeplitzResult",
    "symbol_value",
    "fourier_coeff",
    "fourier_coeffs",
    "arc_rule",
    "toeplitz_det",
    "selberg_an",
    "dn_near_pi",
    "scaling_ratio",
    "orthopoly_coeffs",
    "orthopoly_eval",
    "orthopoly_local_asymptotic",
    "dln_second_derivative_fd",
]

TWO_PI = 2.0 * math.pi
PANEL_POINTS = 32
COEFF_TOL = 1e-11
# LU is trusted while n * eps / rcond stays below this
LU_LOSS_LIMIT = 1e-8


def _neg_int(z: complex) -> bool:
    return z.imag == 0 and z.real <= -1 and z.real == math.floor(z.real)


@dataclass(frozen=True)
class ArcSymbol:
    """Root/jump symbol on the arc phi <= theta <= 2 pi - phi."""

    alpha: complex = 0.0
    beta: complex = 0.0
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "phi", float(self.phi))
        if not self.alpha.real > -0.5:
            raise ParameterDomainError("need Re(alpha) > -1/2")
        for z in (self.alpha + self.beta, self.alpha - self.beta):
            if _neg_int(z):
                raise ParameterDomainError(f"alpha +- beta = {z} is a negative integer")
        if not 0.0 <= self.phi < math.pi:
            raise ParameterDomainError("phi must lie in [0, pi)")

    @property
    def is_positive(self) -> bool:
        """Real positive on the arc (alpha real, beta imaginary)."""
        return self.alpha.imag == 0 and self.beta.real == 0

    def with_phi(self, phi: float) -> "ArcSymbol":
        return ArcSymbol(self.alpha, self.beta, phi)


@dataclass(frozen=True)
class ToeplitzResult:
    value: complex
    n: int
    coeff_accuracy: float
    log_value: complex
    method: str = "lu"


def symbol_value(sym: ArcSymbol, theta):
    """f(e^{i theta}) for theta in (0, 2 pi); zero outside the arc."""
    th = np.asarray(theta, dtype=float)
    base = 2.0 * np.sin(0.5 * th)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.exp(2.0 * sym.alpha * np.log(base) + 1j * sym.beta * (th - math.pi))
    inside = (th >= sym.phi) & (th <= TWO_PI - sym.phi) & (th > 0) & (th < TWO_PI)
    return np.where(inside, val, 0.0)


# ---------------------------------------------------------------------------
# quadrature on the arc
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=8)
def _gl(m: int):
    return np.polynomial.legendre.leggauss(m)


@functools.lru_cache(maxsize=32)
def _gj(m: int, p: float):
    # weight t^p on (0, 1)
    t, w = special.roots_jacobi(m, 0.0, p)
    return 0.5 * (t + 1.0), w * 0.5 ** (p + 1.0)


def _panel(a: float, b: float):
    x, w = _gl(PANEL_POINTS)
    h = 0.5 * (b - a)
    return a + h * (x + 1.0), h * w


def _left_end(sym: ArcSymbol, h: float):
    """Nodes/weights covering [phi, phi + reach) and the reach."""
    phi = sym.phi
    xs, ws = [], []
    if phi > 0:
        # the singularity sits at theta = 0, a distance phi before the arc;
        # panels [phi 2^j, phi 2^{j+1}] keep it one panel-width away
        a = phi
        while 2.0 * a < phi + h:
            x, w = _panel(a, 2.0 * a)
            xs.append(x)
            ws.append(w)
            a *= 2.0
        return xs, ws, a
    p = 2.0 * sym.alpha.real
    levels = 0 if sym.alpha.imag == 0 else 40
    inner = h * 0.5**levels
    t, w = _gj(PANEL_POINTS, p)
    # Jacobi weight divided back out: the rule acts on the bare integrand
    xs.append(inner * t)
    ws.append(inner * w / t**p)
    a = inner
    for _ in range(levels):
        x, w = _panel(a, 2.0 * a)
        xs.append(x)
        ws.append(w)
        a *= 2.0
    return xs, ws, a


def arc_rule(sym: ArcSymbol, panels: int):
    """Composite rule (theta, weight) on the arc with ``panels`` uniform panels.

    The ends are graded toward theta = 0 and 2 pi, mirror images of each
    other since f is symmetric in theta -> 2 pi - theta up to the beta phase.
    """
    lo, hi = sym.phi, TWO_PI - sym.phi
    h = (hi - lo) / panels
    xl, wl, reach = _left_end(sym, h)
    count = max(1, int(math.ceil((TWO_PI - 2.0 * reach) / h)))
    mid = np.linspace(reach, TWO_PI - reach, count + 1)
    xm, wm = [], []
    for a, b in zip(mid[:-1], mid[1:]):
        x, w = _panel(a, b)
        xm.append(x)
        wm.append(w)
    left_x = np.concatenate(xl) if xl else np.empty(0)
    left_w = np.concatenate(wl) if wl else np.empty(0)
    theta = np.concatenate([left_x, *xm, (TWO_PI - left_x)[::-1]])
    weight = np.concatenate([left_w, *wm, left_w[::-1]])
    return theta, weight


def _panels_for(kmax: int) -> int:
    return max(8, int(math.ceil(kmax / 4)))


def _coeffs_on_rule(sym: ArcSymbol, theta, weight, kmax: int) -> np.ndarray:
    fw = weight * symbol_value(sym, theta) / TWO_PI
    ks = np.arange(-kmax, kmax + 1)
    out = np.empty(len(ks), dtype=complex)
    step = max(1, 2_000_000 // len(theta))
    for i in range(0, len(ks), step):
        kk = ks[i : i + step]
        out[i : i + step] = np.exp(-1j * np.outer(kk, theta)) @ fw
    return out


def _round_kmax(k: int) -> int:
    k = max(8, int(k))
    return 1 << (k - 1).bit_length()


@functools.lru_cache(maxsize=64)
def _coeff_table(alpha: complex, beta: complex, phi: float, kmax: int):
    sym = ArcSymbol(alpha, beta, phi)
    P = _panels_for(kmax)
    coarse = _coeffs_on_rule(sym, *arc_rule(sym, P), kmax)
    fine = _coeffs_on_rule(sym, *arc_rule(sym, 2 * P), kmax)
    err = float(np.max(np.abs(fine - coarse)))
    scale = float(np.max(np.abs(fine)))
    if err > COEFF_TOL * max(scale, 1e-300):
        raise AccuracyError(
            f"Fourier coefficients unresolved: refinement changed them by {err:.2e}"
        )
    fine.setflags(write=False)
    return fine, err


def fourier_coeffs(sym: ArcSymbol, kmax: int):
    """(f_{-kmax}, ..., f_{kmax}) and the refinement error estimate.

    Tables are cached per symbol at power-of-two sizes, so sweeps over n
    share one coefficient computation.
    """
    K = _round_kmax(kmax)
    table, err = _coeff_table(sym.alpha, sym.beta, sym.phi, K)
    return table[K - kmax : K + kmax + 1], err


def fourier_coeff(sym: ArcSymbol, k: int) -> complex:
    """f_k = (1/2 pi) int_phi^{2 pi - phi} f(e^{i theta}) e^{-i k theta} d theta."""
    k = int(k)
    table, _ = fourier_coeffs(sym, abs(k))
    return complex(table[k + abs(k)])


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def _wrap(logz: complex) -> complex:
    im = math.remainder(logz.imag, TWO_PI)
    return complex(logz.real, im)


def _toeplitz_matrix(sym: ArcSymbol, n: int):
    f, err = fourier_coeffs(sym, max(n - 1, 1))
    k0 = len(f) // 2
    col = f[k0 : k0 + n]  # f_0, f_1, ..., f_{n-1}
    row = f[k0 - n + 1 : k0 + 1][::-1]  # f_0, f_{-1}, ...
    return scipy.linalg.toeplitz(col, row), err


def _lu_logdet(T):
    lu, piv = scipy.linalg.lu_factor(T, check_finite=False)
    d = np.diag(lu)
    if np.any(d == 0) or not np.all(np.isfinite(d)):
        raise DeterminantBreakdown("Toeplitz LU hit a zero pivot")
    anorm = np.max(np.sum(np.abs(T), axis=0))
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    logdet = complex(np.sum(np.log(d.astype(complex)))) + (1j * math.pi if swaps % 2 else 0)
    return logdet, float(rcond)


def _gram_logdet(sym: ArcSymbol, n: int) -> complex:
    """ln D_n from biorthogonal polynomials of the discretized arc measure.

    With <p, q> = sum conj(p_i) e^{i psi_i} q_i over nodes weighted by
    sqrt|w f / 2 pi|, the monomials have Gram matrix (f_{j-k}).  z-multiplied
    vectors are orthogonalized twice against the previous ones; the pivots
    of the implicit LDU factorization are d_{k+1} = d_k <u_k, v_k>.
    """
    theta, weight = arc_rule(sym, _panels_for(2 * n))
    wf = weight * symbol_value(sym, theta) / TWO_PI
    a = np.sqrt(np.abs(wf))
    W = np.exp(1j * np.angle(wf))
    z = np.exp(1j * theta)
    hermitian = sym.is_positive
    N = len(theta)
    Q = np.empty((N, n), dtype=complex)
    P = Q if hermitian else np.empty((N, n), dtype=complex)
    d0 = complex(np.sum(wf))
    nrm = np.linalg.norm(a)
    Q[:, 0] = a / nrm
    if not hermitian:
        P[:, 0] = a * nrm / np.conj(d0)
    logd = cmath.log(d0)
    total = logd
    for k in range(n - 1):
        v = z * Q[:, k]
        u = None if hermitian else z * P[:, k]
        for _ in range(2):
            if hermitian:
                v -= Q[:, : k + 1] @ (Q[:, : k + 1].conj().T @ v)
            else:
                v -= Q[:, : k + 1] @ (P[:, : k + 1].conj().T @ (W * v))
                u -= P[:, : k + 1] @ (Q[:, : k + 1].conj().T @ (np.conj(W) * u))
        vn = np.linalg.norm(v)
        g = vn * vn if hermitian else complex(np.vdot(u, W * v))
        if vn == 0 or g == 0 or not np.isfinite(g):
            raise DeterminantBreakdown(f"orthogonalization broke down at degree {k + 1}")
        Q[:, k + 1] = v / vn
        if not hermitian:
            P[:, k + 1] = u * vn / np.conj(g)
        logd = logd + cmath.log(g)
        total += logd
    return total


def toeplitz_det(sym: ArcSymbol, n: int, method: str = "auto") -> ToeplitzResult:
    """D_n = det(f_{j-k})_{j,k=0}^{n-1}.

    ``method`` is "lu", "gram" or "auto"; auto takes LU unless the LAPACK
    condition estimate predicts a relative loss above 1e-8, then switches to
    the orthogonalization path.
    """
    n = int(n)
    if n < 1:
        raise ParameterDomainError("n must be >= 1")
    if method not in ("auto", "lu", "gram"):
        raise ParameterDomainError(f"unknown method {method!r}")
    T, err = _toeplitz_matrix(sym, n)
    used = method
    logdet = None
    if method in ("auto", "lu"):
        logdet, rcond = _lu_logdet(T)
        used = "lu"
        if method == "auto" and n * np.finfo(float).eps > LU_LOSS_LIMIT * rcond:
            logdet = None
    if logdet is None:
        logdet = _gram_logdet(sym, n)
        used = "gram"
    logdet = _wrap(logdet)
    if sym.is_positive:
        logdet = complex(logdet.real, 0.0) if abs(logdet.imag) < 1e-6 else logdet
    value = cmath.exp(logdet) if logdet.real > -745 else 0j
    return ToeplitzResult(value, n, err, logdet, used)


# ---------------------------------------------------------------------------
# phi -> pi and the Selberg integral
# ---------------------------------------------------------------------------


def selberg_an(n: int) -> float:
    """ln A_n, A_n = (1/n!) int_{[-1,1]^n} prod_{j<k} (x_j - x_k)^2 dx."""
    n = int(n)
    if n < 1:
        raise ParameterDomainError("n must be >= 1")
    k = np.arange(n, dtype=float)
    return float(
        n * n * math.log(2.0)
        + np.sum(3.0 * special.gammaln(k + 1.0) - special.gammaln(n + k + 1.0))
    )


def dn_near_pi_ln(n: int, alpha, eps: float) -> complex:
    """log of the leading-order D_n(pi - eps) = eps^{n^2} 2^{2 alpha n} A_n / (2 pi)^n."""
    n = int(n)
    if n < 1:
        raise ParameterDomainError("n must be >= 1")
    if not eps > 0:
        raise ParameterDomainError("eps must be positive")
    alpha = complex(alpha)
    return (
        n * n * math.log(eps)
        + 2.0 * alpha * n * math.log(2.0)
        - n * math.log(TWO_PI)
        + selberg_an(n)
    )


def dn_near_pi(n: int, alpha, eps: float) -> complex:
    """Leading-order D_n(pi - eps); the beta dependence drops out at this order."""
    lv = dn_near_pi_ln(n, alpha, eps)
    if lv.real < -700:
        raise UnderflowGuardError(
            f"eps^(n^2) underflows (ln value {lv.real:.1f}); use dn_near_pi_ln"
        )
    return cmath.exp(lv)


__all__.append("dn_near_pi_ln")


# ---------------------------------------------------------------------------
# scaling limit, orthogonal polynomials, second derivative in phi
# ---------------------------------------------------------------------------


def scaling_ratio(n: int, s: float, alpha, beta) -> complex:
    """D_n(2s/n) / D_n(0), which tends to det(I - K^{(alpha,beta)}) on (-s, s)."""
    n = int(n)
    if not s > 0:
        raise ParameterDomainError("s must be positive")
    phi = 2.0 * s / n
    if not phi < math.pi:
        raise ParameterDomainError("need 2s/n < pi")
    base = ArcSymbol(alpha, beta, 0.0)
    top = toeplitz_det(base.with_phi(phi), n)
    bot = toeplitz_det(base, n)
    return cmath.exp(top.log_value - bot.log_value)


def orthopoly_coeffs(sym: ArcSymbol, n: int):
    """Coefficients (ascending) of the orthonormal q_n and its leading coefficient chi_n.

    Solves (f_{j-k})_{j,k=0}^{n} x = e_n; then x_n = D_n/D_{n+1} = chi_n^2 and
    q_n = x / sqrt(x_n) (principal root).
    """
    n = int(n)
    if n < 0:
        raise ParameterDomainError("n must be >= 0")
    T, _ = _toeplitz_matrix(sym, n + 1)
    rhs = np.zeros(n + 1, dtype=complex)
    rhs[-1] = 1.0
    try:
        x = scipy.linalg.solve(T, rhs, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise DeterminantBreakdown("singular Toeplitz system") from exc
    if x[-1] == 0:
        raise DeterminantBreakdown("D_n vanishes; q_n does not exist")
    chi = np.sqrt(complex(x[-1]))
    return x / chi, complex(chi)


def orthopoly_eval(sym: ArcSymbol, n: int, z) -> complex:
    """q_n(z) for the orthonormal polynomials of the symbol."""
    z = complex(z)
    if z == 0:
        raise ParameterDomainError("z must be nonzero")
    c, _ = orthopoly_coeffs(sym, n)
    return complex(np.polyval(c[::-1], z))


def _pow_upper(w: complex, a: complex) -> complex:
    # w^a with 0 < arg w < 2 pi
    arg = cmath.phase(w)
    if arg <= 0:
        arg += TWO_PI
    return cmath.exp(a * complex(math.log(abs(w)), arg))


def orthopoly_local_asymptotic(alpha, beta, n: int, z) -> complex:
    """Large-n form of q_n(z) near z = 1 for the phi = 0 symbol.

    q_n ~ c (n ln z)^{a-b} (z-1)^{b-a} z^{a-b} G(1+a+b)/G(1+2a) phi(1+a+b, 1+2a, n ln z)
    with powers on 0 < arg < 2 pi, principal ln z, and c = 1 above the real
    axis, e^{-2 pi i (a - b)} below it.  For z = e^{2iu/n} this is
    n^{a-b} Gamma(1+a+b)/Gamma(1+2a) phi(1+a+b, 1+2a, 2iu) (1 + O(1/n)).
    """
    a, b = complex(alpha), complex(beta)
    z = complex(z)
    zeta = n * cmath.log(z)
    e = a - b
    val = (
        _pow_upper(zeta, e)
        * _pow_upper(z - 1.0, -e)
        * _pow_upper(z, e)
        * cmath.exp(gamma_ln(1 + a + b) - gamma_ln(1 + 2 * a))
        * kummer_m(1 + a + b, 1 + 2 * a, zeta)
    )
    if z.imag < 0:
        val *= cmath.exp(-2j * math.pi * e)
    return val


def dln_second_derivative_fd(alpha, beta, n: int, phi: float, h: float | None = None) -> complex:
    """Central second difference of ln D_n in phi; h defaults to phi / 100."""
    if h is None:
        h = 1e-2 * phi
    if not h > 0:
        raise ParameterDomainError("h must be positive")
    if not (0 < phi - h and phi + h < math.pi):
        raise ParameterDomainError("phi +- h must stay inside (0, pi)")
    base = ArcSymbol(alpha, beta, phi)
    lm = toeplitz_det(base.with_phi(phi - h), n).log_value
    l0 = toeplitz_det(base, n).log_value
    lp = toeplitz_det(base.with_phi(phi + h), n).log_value
    # imaginary parts are phases; bring them onto one sheet before differencing
    im = np.unwrap([lm.imag, l0.imag, lp.imag])
    lm, l0, lp = (complex(x.real, y) for x, y in zip((lm, l0, lp), im))
    return (lp - 2.0 * l0 + lm) / (h * h)


def dln_second_derivative_richardson(alpha, beta, n: int, phi: float, h: float | None = None) -> complex:
    """Second difference at h and h/2 combined to cancel the h^2 term.

    The plain difference carries an O(h^2 d^4 ln D_n) bias that grows like
    n^2 h^2 / cos^6(phi/2); one extrapolation step removes it.
    """
    if h is None:
        h = 1e-2 * phi
    coarse = dln_second_derivative_fd(alpha, beta, n, phi, h)
    fine = dln_second_derivative_fd(alpha, beta, n, phi, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


__all__.append("dln_second_derivative_richardson")
