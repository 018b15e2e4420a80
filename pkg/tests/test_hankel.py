import math

import numpy as np
import pytest
from scipy.special import beta as beta_fn

import oracles
from gapdet.asymptotics import toeplitz_ln_asymptotic
from gapdet.errors import ParameterDomainError
from gapdet.fredholm import fredholm_det
from gapdet.hankel import (
    HankelWeight,
    hankel_det,
    hankel_moment,
    hankel_moments,
    hankel_precision_bits,
    hankel_scaling_ratio,
)
from gapdet.kernels import KernelSpec
from gapdet.toeplitz import ArcSymbol, symbol_value


class TestWeight:
    @pytest.mark.parametrize("kw", [dict(alpha=-0.5), dict(phi=math.pi), dict(phi=-1.0)])
    def test_domain(self, kw):
        with pytest.raises(ParameterDomainError):
            HankelWeight(**kw)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, -0.3, 1.7])
    def test_relation_to_symbol(self, alpha):
        # w(cos t) = f(e^{it}) / |sin t|
        w = HankelWeight(alpha, 0.0)
        sym = ArcSymbol(alpha, 0.0, 0.0)
        for t in (0.2, 1.0, 2.0, 3.0):
            ref = symbol_value(sym, t) / abs(math.sin(t))
            assert w(math.cos(t)) == pytest.approx(ref, rel=1e-12)

    def test_support(self):
        w = HankelWeight(0.3, 1.0)
        assert w(0.9) == 0 and w(-1.5) == 0 and w(0.0) != 0


class TestMoments:
    def test_chebyshev(self):
        w = HankelWeight(0, 0)
        assert hankel_moment(w, 0) == pytest.approx(math.pi, rel=1e-15)
        assert abs(hankel_moment(w, 1)) < 1e-15
        assert hankel_moment(w, 2) == pytest.approx(math.pi / 2, rel=1e-15)

    @pytest.mark.parametrize("alpha", [0.3, -0.4, 2.5])
    def test_beta_integral(self, alpha):
        ref = 4**alpha * beta_fn(alpha + 0.5, 0.5)
        assert hankel_moment(HankelWeight(alpha, 0), 0) == pytest.approx(ref, rel=1e-14)

    @pytest.mark.parametrize("alpha,phi", [(0.3, 0.0), (0.3, 0.8), (-0.3, 2.0), (1.2, 0.1)])
    def test_against_quadrature(self, alpha, phi):
        w = HankelWeight(alpha, phi)
        for m in (0, 1, 5, 12):
            ref = float(oracles.hankel_moment_mp(alpha, phi, m))
            assert hankel_moment(w, m) == pytest.approx(ref, rel=1e-13, abs=1e-15)

    def test_exact_half(self):
        # alpha = 1/2 moments have a finite closed form; compare at 200 bits
        phi, count = 0.7, 60
        mu = hankel_moments(HankelWeight(0.5, phi), count, 200)
        ref = oracles.hankel_moments_half(phi, count, 120)
        for a, b in zip(mu, ref):
            assert abs(a - b) <= 1e-55 * max(1, abs(b))

    def test_complex_alpha(self):
        w = HankelWeight(0.3 + 0.2j, 0.5)
        v = hankel_moment(w, 3)
        assert isinstance(v, complex)
        import mpmath

        with mpmath.workdps(30):
            f = lambda t: mpmath.cos(t) ** 3 * (2 * mpmath.sin(t / 2)) ** (2 * mpmath.mpc(0.3, 0.2))  # noqa: E731
            ref = complex(mpmath.quad(f, [0.5, mpmath.pi]))
        assert abs(v - ref) < 1e-13

    def test_negative_order(self):
        with pytest.raises(ParameterDomainError):
            hankel_moment(HankelWeight(), -1)


class TestDeterminant:
    def test_small(self):
        w = HankelWeight(0, 0)
        assert hankel_det(w, 1).value == pytest.approx(math.pi, rel=1e-15)
        assert hankel_det(w, 2).value == pytest.approx(math.pi**2 / 2, rel=1e-15)

    def test_chebyshev_closed_form(self):
        # monic Chebyshev norms: pi, pi/2, pi/8, ..., so D_n = pi^n 2^{-(n-1)^2}
        n = 64
        ref = n * math.log(math.pi) - (n - 1) ** 2 * math.log(2)
        r = hankel_det(HankelWeight(0, 0), n)
        assert r.log_abs == pytest.approx(ref, abs=1e-12)
        assert r.precision_bits_used == hankel_precision_bits(n) == 64 + math.ceil(2.6 * n)

    def test_budget_grows_with_phi(self):
        assert hankel_precision_bits(40, 0.0) == 64 + 104
        assert hankel_precision_bits(40, 1.5) > hankel_precision_bits(40, 0.5) > hankel_precision_bits(40, 0.0)

    def test_high_precision_oracle(self):
        # short support: the case the phi-dependent budget exists for
        n, alpha, phi = 24, -0.2, 1.5
        mu = [oracles.hankel_moment_mp(alpha, phi, m, dps=80) for m in range(2 * n - 1)]
        ref = oracles.hankel_logdet_from_moments(mu, n, 80)
        assert hankel_det(HankelWeight(alpha, phi), n).log_abs == pytest.approx(ref, abs=1e-11)

    @pytest.mark.parametrize("alpha,phi", [(0.5, 0.6), (0.3, 0.0), (-0.2, 1.5)])
    def test_against_stieltjes(self, alpha, phi):
        n = 24
        ref = oracles.hankel_logdet_lanczos(alpha, phi, n)
        assert hankel_det(HankelWeight(alpha, phi), n).log_abs == pytest.approx(ref, abs=1e-10)

    def test_against_exact_moments(self):
        n, phi = 20, 1.1
        ref = oracles.hankel_logdet_from_moments(oracles.hankel_moments_half(phi, 2 * n - 1, 80), n, 80)
        assert hankel_det(HankelWeight(0.5, phi), n).log_abs == pytest.approx(ref, abs=1e-12)

    def test_positive(self):
        for alpha in (0.0, 0.4, -0.3):
            assert hankel_det(HankelWeight(alpha, 0.9), 16).sign == 1

    def test_complex_alpha(self):
        r = hankel_det(HankelWeight(0.3 + 0.2j, 0.4), 6)
        assert abs(r.sign) == pytest.approx(1)
        assert np.isfinite(r.log_abs)

    def test_shrinking_support(self):
        vals = [hankel_det(HankelWeight(0.3, math.pi - e), 1).log_abs for e in (0.4, 0.2, 0.1, 0.05)]
        assert np.all(np.diff(vals) < 0)

    def test_asymptotic_trend(self):
        al = 0.3
        devs = []
        for n in (16, 32, 64):
            r = hankel_det(HankelWeight(al, 0), n)
            devs.append(abs(r.log_value - toeplitz_ln_asymptotic("DH0", al, 0, n).ln_value))
        assert devs[0] > devs[1] > devs[2]


class TestScaling:
    def test_small_s(self):
        assert hankel_scaling_ratio(16, 1e-9, 0.5) == pytest.approx(1, abs=1e-7)

    def test_bessel2_trend(self):
        s = 1.5
        ref = fredholm_det(KernelSpec.bessel2(0), (2 * s) ** 2).value.real
        d = [abs(hankel_scaling_ratio(n, s, 0.5) - ref) for n in (16, 32, 64)]
        assert d[0] > d[1] > d[2]

    def test_domain(self):
        with pytest.raises(ParameterDomainError):
            hankel_scaling_ratio(2, 4.0, 0.5)
