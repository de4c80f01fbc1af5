import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from crossover_rmt import specfun
from crossover_rmt.errors import ConvergenceError, DomainError


def laguerre_series(j, nu, x):
    """Explicit sum_m (-1)^m binom(j + nu, j - m) x^m / m!."""
    return sum((-1) ** m * special.binom(j + nu, j - m) * x**m / math.factorial(m)
               for m in range(j + 1))


class TestLaguerrePoly:
    def test_base_cases(self):
        assert specfun.laguerre_poly(0, 2.3, 7.1) == 1.0
        assert specfun.laguerre_poly(1, 1.0, 2.0) == 0.0
        assert specfun.laguerre_poly(2, 0.0, 2.0) == pytest.approx(-1.0, abs=1e-14)

    def test_minus_one_is_zero(self):
        np.testing.assert_array_equal(specfun.laguerre_poly(-1, 0.5, [0.1, 3.0]), 0.0)

    @pytest.mark.parametrize("nu", [0.0, 1.0, 2.5])
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_matches_series(self, nu, x):
        for j in range(7):
            ref = laguerre_series(j, nu, x)
            assert specfun.laguerre_poly(j, nu, x) == pytest.approx(ref, rel=1e-10, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.laguerre_poly(3, -1.0, 1.0)


class TestNorms:
    def test_alpha_examples(self):
        assert specfun.alpha_norm(0, -0.5) == pytest.approx(1.0, rel=1e-15)
        assert specfun.alpha_norm(1, 0.0) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_alpha_product_formula(self):
        a = 1.5
        # Gamma(j + 2a + 2) / Gamma(j + 1) = Gamma(2a + 2) prod_{i=1}^{j} (i + 2a + 1) / i
        prod = math.gamma(2 * a + 2)
        for i in range(1, 11):
            prod *= (i + 2 * a + 1) / i
        assert specfun.alpha_norm(10, a) == pytest.approx(math.sqrt(prod), rel=1e-12)

    def test_alpha_large_j_finite(self):
        assert np.isfinite(specfun.alpha_norm(10_000, 3.0))

    def test_log_gamma(self):
        assert specfun.log_gamma(5.0) == pytest.approx(math.log(24.0))
        with pytest.raises(DomainError):
            specfun.log_gamma(0.0)
        with pytest.raises(DomainError):
            specfun.alpha_norm(2, -1.0)


class TestLaguerreFunctions:
    @pytest.mark.parametrize("nu", [0.0, 2.0, 0.4])
    def test_against_scipy(self, nu):
        t = np.array([0.05, 0.7, 3.0, 25.0, 90.0])
        tab = specfun.laguerre_functions(30, nu, t)
        k = np.arange(31)[:, None]
        ref = np.exp(0.5 * nu * np.log(t) - 0.5 * t
                     - 0.5 * (special.gammaln(k + nu + 1) - special.gammaln(k + 1))) \
            * special.eval_genlaguerre(k, nu, t)
        np.testing.assert_allclose(tab, ref, rtol=1e-9, atol=1e-13)

    def test_orthonormal(self):
        nu = 1.5
        rule = specfun.gauss_laguerre(40, nu)
        # ell_j ell_k = t^nu e^{-t} p_j p_k: divide the weight back out
        t = rule.nodes
        tab = specfun.laguerre_functions(12, nu, t)
        gram = (tab * rule.weights / (t**nu * np.exp(-t))) @ tab.T
        np.testing.assert_allclose(gram, np.eye(13), atol=1e-10)

    def test_blocked_matches_scaled_iterator(self):
        t = np.linspace(0.01, 400, 37)
        it = specfun.iter_laguerre_functions(3.0, t)
        slow = np.array([next(it) for _ in range(600)])
        fast = next(specfun.iter_laguerre_blocks(3.0, t, 600))
        np.testing.assert_allclose(fast, slow, atol=1e-12)

    def test_large_t_no_overflow(self):
        tab = specfun.laguerre_functions(50, 1.0, np.array([1500.0, 3000.0]))
        assert np.all(np.isfinite(tab))
        assert np.abs(tab).max() < 1e-100


class TestSineIntegral:
    def test_values(self):
        assert specfun.sine_integral(0.0) == 0.0
        ref = integrate.quad(lambda t: math.sin(t) / t, 0, math.pi, epsabs=1e-13)[0]
        assert specfun.sine_integral(math.pi) == pytest.approx(ref, abs=1e-12)
        assert specfun.sine_integral(math.pi) == pytest.approx(1.8519370, abs=1e-7)

    def test_large_argument(self):
        x = 50.0
        approx = math.pi / 2 - math.cos(x) / x - math.sin(x) / x**2
        # next asymptotic term is 2 cos(x)/x^3 ~ 1.6e-5
        assert abs(specfun.sine_integral(x) - approx) < 2.5 / x**3

    def test_maximum_at_pi(self):
        x = np.linspace(0, 3 * math.pi, 3001)
        si = specfun.sine_integral(x)
        assert np.all(np.diff(si[x <= math.pi]) > 0)
        assert x[np.argmax(si)] == pytest.approx(math.pi, abs=5e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.sine_integral(-1.0)


class TestQuadratureRules:
    @pytest.mark.parametrize("n", [5, 20, 64])
    def test_legendre(self, n):
        rule = specfun.gauss_legendre(n)
        assert rule.weights.sum() == pytest.approx(2.0, abs=1e-12)
        assert np.all(rule.weights > 0) and np.all(np.diff(rule.nodes) > 0)
        for m in range(0, 2 * n, 3):
            exact = (1 - (-1) ** (m + 1)) / (m + 1)
            assert rule(lambda x: x**m) == pytest.approx(exact, rel=1e-10, abs=1e-13)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 3.0])
    def test_generalised_laguerre(self, nu):
        n = 12
        rule = specfun.gauss_laguerre(n, nu)
        assert rule.weights.sum() == pytest.approx(math.gamma(nu + 1), rel=1e-10)
        assert np.all(rule.weights > 0) and np.all(np.diff(rule.nodes) > 0)
        for m in range(2 * n):
            exact = math.exp(special.gammaln(m + nu + 1))
            assert rule(lambda x: x**m) == pytest.approx(exact, rel=1e-10)

    def test_panel_rule(self):
        rule = specfun.panel_rule([0.0, 0.5, 2.0, 7.0], order=10)
        assert len(rule) == 30
        assert rule(np.exp) == pytest.approx(math.exp(7) - 1, rel=1e-13)


class TestAdaptiveQuad:
    def test_examples(self):
        assert specfun.adaptive_quad(lambda x: 1.0, 0, 1)[0] == pytest.approx(1.0)
        assert specfun.adaptive_quad(lambda k: k * math.sin(k), 0, math.pi)[0] == \
            pytest.approx(math.pi, abs=1e-10)
        assert specfun.adaptive_quad(lambda x: x * math.exp(-x), 0, np.inf)[0] == \
            pytest.approx(1.0, abs=1e-8)

    def test_returns_error_estimate(self):
        val, err = specfun.adaptive_quad(math.cos, 0, 1)
        assert 0 <= err < 1e-8

    def test_failure_carries_estimate(self):
        with pytest.raises(ConvergenceError) as info:
            specfun.adaptive_quad(lambda x: math.sin(1 / x) / x, 1e-6, 1, tol=1e-14, limit=5)
        assert info.value.estimate is not None

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.1, 5.0), st.floats(0.2, 4.0))
    def test_gaussian_moments(self, c, hi):
        val, _ = specfun.adaptive_quad(lambda x: math.exp(-c * x * x), 0, hi)
        exact = 0.5 * math.sqrt(math.pi / c) * math.erf(math.sqrt(c) * hi)
        assert val == pytest.approx(exact, rel=1e-8)
