import math

import numpy as np
import pytest

import gapdet.fredholm as fh
from gapdet.asymptotics import gap_ln_asymptotic
from gapdet.errors import ParameterDomainError
from gapdet.fredholm import (
    Transform,
    auto_tolerance,
    fredholm_det,
    gauss_legendre,
    jacobi_endpoint_rule,
    nystrom_det,
    roundoff_floor,
    split_jacobi_rule,
    square_map_rule,
)
from gapdet.kernels import KernelSpec


class TestRules:
    def test_one_point(self):
        r = gauss_legendre(1)
        assert np.allclose(r.nodes, [0.0]) and np.allclose(r.weights, [2.0])

    def test_two_point(self):
        r = gauss_legendre(2)
        assert np.allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
        assert np.allclose(r.weights, [1.0, 1.0], atol=1e-15)

    def test_degree_five(self):
        assert gauss_legendre(3).integrate(lambda x: x**4) == pytest.approx(0.4, abs=1e-14)

    @pytest.mark.parametrize("m", [5, 32, 64])
    def test_exactness(self, m):
        r = gauss_legendre(m, -0.3, 2.0)
        d = 2 * m - 1
        exact = (2.0 ** (d + 1) - (-0.3) ** (d + 1)) / (d + 1)
        assert r.integrate(lambda x: x**d) == pytest.approx(exact, rel=1e-13)

    @pytest.mark.parametrize("rule", [gauss_legendre(40, -3, 5), square_map_rule(40, 7.0)], ids=["gl", "square"])
    def test_invariants(self, rule):
        lo, hi = rule.interval
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all((rule.nodes > lo) & (rule.nodes < hi))
        assert np.all(rule.weights > 0)
        assert np.sum(rule.weights) == pytest.approx(hi - lo, abs=1e-12)

    def test_square_map_jacobian(self):
        s = 9.0
        r = square_map_rule(24, s)
        assert r.transform is Transform.SQUARE_MAP
        g = lambda x: 3 * x**5 - x**2 + 0.5  # noqa: E731
        exact = 0.5 * s**6 - s**3 / 3 + 0.5 * s
        assert r.integrate(g) == pytest.approx(exact, rel=1e-13)

    @pytest.mark.parametrize("p", [-0.6, 0.0, 0.7, 1.9])
    def test_jacobi_endpoint(self, p):
        # weights already carry 1/x^p, so x^p * poly is integrated exactly
        r = jacobi_endpoint_rule(12, 0.0, 2.0, p)
        got = r.integrate(lambda x: x**p * (1 + x**3))
        exact = 2.0 ** (p + 1) / (p + 1) + 2.0 ** (p + 4) / (p + 4)
        assert got == pytest.approx(exact, rel=1e-13)
        assert np.all((r.nodes > 0) & (r.nodes < 2))

    def test_split_jacobi(self):
        p = 0.6
        r = split_jacobi_rule(16, 3.0, p)
        got = r.integrate(lambda x: np.abs(x) ** p * (x**2 + x))
        assert got == pytest.approx(2 * 3.0 ** (p + 3) / (p + 3), rel=1e-13)
        assert np.all(np.diff(r.nodes) > 0) and not np.any(r.nodes == 0)

    @pytest.mark.parametrize("args", [(0, -1, 1), (3, 1.0, 1.0)])
    def test_bad_rule(self, args):
        with pytest.raises(ParameterDomainError):
            gauss_legendre(*args)


class TestNystrom:
    def test_zero_kernel(self, monkeypatch):
        monkeypatch.setattr(fh, "kernel_matrix", lambda spec, x, prec=None: np.zeros((len(x), len(x)), complex))
        assert nystrom_det(KernelSpec.sine(), gauss_legendre(10, 0, 1)) == pytest.approx(1.0)

    def test_rank_one(self, monkeypatch):
        monkeypatch.setattr(fh, "kernel_matrix", lambda spec, x, prec=None: np.ones((len(x), len(x)), complex))
        assert nystrom_det(KernelSpec.sine(), gauss_legendre(10, 0, 0.5)) == pytest.approx(0.5, abs=1e-14)

    def test_small_interval(self):
        s = 0.01
        d = nystrom_det(KernelSpec.sine(), gauss_legendre(20, -s, s))
        assert d.real == pytest.approx(1 - 2 * s / math.pi, abs=1e-6)
        assert d.real == pytest.approx(0.99363, abs=1e-5)


class TestFredholmDet:
    def test_empty_gap(self):
        assert fredholm_det(KernelSpec.sine(), 1e-8).value == pytest.approx(1.0, abs=1e-7)

    def test_sine_s6(self):
        spec = KernelSpec.sine()
        r = fredholm_det(spec, 6.0, tol=auto_tolerance(spec, 6.0))
        assert r.converged
        assert abs(r.ln_abs - gap_ln_asymptotic(spec, 6.0).ln_value.real) < 0.1 / 6

    def test_chf_bessel1_agree(self):
        a = fredholm_det(KernelSpec.chf(0.3, 0), 6.0)
        b = fredholm_det(KernelSpec.bessel1(0.3), 6.0)
        assert abs(a.value - b.value) <= 1e-9 * abs(b.value)
        assert b.ln_abs == pytest.approx(-15.6351483128, abs=1e-8)

    def test_converged_implies_tolerance(self):
        for spec in (KernelSpec.sine(), KernelSpec.chf(0.4, -0.3j), KernelSpec.bessel2(0.7)):
            r = fredholm_det(spec, 3.0, tol=1e-10)
            assert r.converged and r.err_estimate <= 1e-10

    def test_nonconvergence_flag(self):
        r = fredholm_det(KernelSpec.sine(), 10.0, tol=1e-14, m0=8, m_max=16)
        assert not r.converged and r.m_final == 16

    def test_spectral_convergence(self):
        # pre-asymptotic regime; past m = 64 the change sits at roundoff level
        spec = KernelSpec.sine()
        vals = [fh.nystrom_logdet(spec, gauss_legendre(m, -5, 5))[1] for m in (8, 16, 32, 64)]
        diffs = np.abs(np.diff(vals))
        assert diffs[1] <= diffs[0] / 10
        assert diffs[2] <= max(diffs[1] / 10, 1e-12)

    @pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.3, 0.2j), (-0.3, 0.5j), (1.4, -0.1j)])
    def test_real_probability(self, alpha, beta):
        r = fredholm_det(KernelSpec.chf(alpha, beta), 2.5)
        assert abs(r.value.imag) <= 1e-10
        assert 0 < r.value.real <= 1

    def test_monotone_in_s(self):
        vals = [fredholm_det(KernelSpec.sine(), s).ln_abs for s in np.linspace(0.2, 6, 12)]
        assert np.all(np.diff(vals) < 0)

    @pytest.mark.parametrize("a", [0.0, 0.5, 0.3, -0.4])
    def test_bessel2_rules_converge(self, a):
        r = fredholm_det(KernelSpec.bessel2(a), 16.0)
        assert r.converged

    def test_bessel2_edelman(self):
        # for a = 0 the hard-edge gap probability is exactly e^{-s/4}
        r = fredholm_det(KernelSpec.bessel2(0), 20.0)
        assert r.ln_abs == pytest.approx(-5.0, abs=1e-10)

    def test_roundoff_floor(self):
        spec = KernelSpec.sine()
        assert roundoff_floor(spec, 12.0) == pytest.approx(np.finfo(float).eps * math.exp(24))
        assert auto_tolerance(spec, 1.0) == 1e-10
        assert auto_tolerance(spec, 12.0) > 1e-5

    def test_bad_s(self):
        with pytest.raises(ParameterDomainError):
            fredholm_det(KernelSpec.sine(), 0.0)
