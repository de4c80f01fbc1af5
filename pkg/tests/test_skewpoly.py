import math

import numpy as np
import pytest
from scipy import integrate, special

from crossover_rmt import specfun
from crossover_rmt.errors import DomainError, TruncationError, UnsupportedError
from crossover_rmt.skewpoly import (
    EnsembleSpec,
    Family,
    Route,
    SkewFunctionSet,
    eigenfunction_u,
    propagator_apply,
    skew_pairing_matrix,
    z_matrix,
)


def phi_direct(j, x, a, tau):
    """phi_j from the unnormalised Laguerre formulas with scipy polynomials."""
    nu = 2 * a + 1
    mu = j // 2
    alpha = math.sqrt(math.gamma(2 * mu + 2 * a + 2) / math.gamma(2 * mu + 1))
    pref = math.exp(2 * mu * tau) * 2 ** (a + 0.5) / alpha * x**a * np.exp(-x)
    if j % 2 == 0:
        return pref * special.eval_genlaguerre(2 * mu, nu, 2 * x)
    lower = special.eval_genlaguerre(2 * mu - 1, nu, 2 * x) if mu else 0.0
    return pref * (math.exp(tau) * (2 * mu + 1) * special.eval_genlaguerre(2 * mu + 1, nu, 2 * x)
                   - math.exp(-tau) * (2 * mu + 2 * a + 1) * lower)


def psi_odd_direct(j, x, a, tau):
    nu = 2 * a + 1
    mu = (j - 1) // 2
    alpha = math.sqrt(math.gamma(2 * mu + 2 * a + 2) / math.gamma(2 * mu + 1))
    return math.exp(-2 * mu * tau) * 2 ** (a + 1.5) / alpha * x ** (a + 1) * np.exp(-x) \
        * special.eval_genlaguerre(2 * mu, nu, 2 * x)


class TestEnsembleSpec:
    def test_wishart_exponent(self):
        spec = EnsembleSpec.wishart(72, 64, 0.1)
        assert spec.a == pytest.approx(3.5)
        assert spec.nprime == 72

    @pytest.mark.parametrize("kwargs", [
        dict(N=0), dict(N=4, a=-1.0), dict(N=4, tau=-0.1),
        dict(N=4, family=Family.JACOBI), dict(N=4, a=0.0, nprime=6), dict(N=4, a=0.0, nprime=2),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            EnsembleSpec(**kwargs)

    def test_weights(self):
        spec = EnsembleSpec(N=2, a=1.5)
        assert spec.weight(2.0) == pytest.approx(2**1.5 * math.exp(-2))
        assert spec.weight_eq(2.0) == pytest.approx(2**4 * math.exp(-4))

    def test_odd_n_rejected_for_skew_functions(self):
        with pytest.raises(DomainError):
            SkewFunctionSet(EnsembleSpec(N=3))

    def test_unsupported_routes(self):
        with pytest.raises(UnsupportedError):
            SkewFunctionSet(EnsembleSpec(N=4, route=Route.SE_UE))
        with pytest.raises(UnsupportedError):
            SkewFunctionSet(EnsembleSpec(N=4, family=Family.GAUSSIAN))


def test_z_matrix():
    z = z_matrix(4)
    assert z[0, 1] == 1 and z[1, 0] == -1 and z[2, 3] == 1 and z[0, 2] == 0
    np.testing.assert_array_equal(z, -z.T)


class TestEigenfunctions:
    @pytest.mark.parametrize("a", [0.0, 1.5])
    def test_orthonormal(self, a):
        # u_j u_k = 2^{2a+2}/(alpha_j alpha_k) x^{2a+1} e^{-2x} L_j L_k; t = 2x onto GL(2a+1)
        rule = specfun.gauss_laguerre(40, 2 * a + 1)
        x = rule.nodes / 2
        u = np.array([eigenfunction_u(j, a, x) for j in range(13)])
        gram = (u * rule.weights / (2 * (2 * x) ** (2 * a + 1) * np.exp(-2 * x))) @ u.T
        np.testing.assert_allclose(gram, np.eye(13), atol=1e-8)

    def test_ground_state_positive(self):
        x = np.linspace(0.01, 30, 500)
        assert np.all(eigenfunction_u(0, 0.0, x) > 0)

    @pytest.mark.parametrize("j", range(6))
    def test_node_count(self, j):
        x = np.linspace(1e-3, 40, 20001)
        u = eigenfunction_u(j, 0.5, x)
        assert np.count_nonzero(np.diff(np.sign(u)) != 0) == j


class TestPropagator:
    a = 0.5

    def f(self, x):
        return np.sqrt(x) * x ** (self.a + 0.5) * np.exp(-1.5 * x)

    def test_identity_at_zero(self):
        spec = EnsembleSpec(N=2, a=self.a)
        g = lambda x: np.sqrt(x) * eigenfunction_u(3, self.a, x) - 0.4 * np.sqrt(x) * eigenfunction_u(0, self.a, x)
        out = propagator_apply(g, 0.0, spec, k_max=20)
        x = np.linspace(0.1, 8, 30)
        np.testing.assert_allclose(out(x), g(x), atol=1e-10)
        assert out.coeffs[3] == pytest.approx(1.0, abs=1e-12)

    def test_semigroup(self):
        spec = EnsembleSpec(N=2, a=self.a)
        once = propagator_apply(self.f, 0.7, spec, k_max=120)
        twice = propagator_apply(propagator_apply(self.f, 0.3, spec, k_max=120), 0.4, spec, k_max=120)
        x = np.linspace(0.05, 10, 40)
        np.testing.assert_allclose(twice(x), once(x), atol=1e-6)
        np.testing.assert_allclose(propagator_apply(self.f, 0.3, spec, k_max=120).then(0.4)(x),
                                   once(x), atol=1e-12)

    def test_large_tau_projection(self):
        spec = EnsembleSpec(N=2, a=self.a)
        out = propagator_apply(self.f, 40.0, spec, k_max=80)
        x = np.linspace(0.1, 6, 12)
        ground = out.coeffs[0] * np.sqrt(x) * eigenfunction_u(0, self.a, x)
        np.testing.assert_allclose(out(x), ground, atol=1e-15)

    def test_adaptive_matches_gauss(self):
        spec = EnsembleSpec(N=2, a=self.a)
        g = propagator_apply(self.f, 0.2, spec, k_max=30)
        ad = propagator_apply(self.f, 0.2, spec, k_max=30, method="adaptive")
        np.testing.assert_allclose(ad.coeffs, g.coeffs, atol=1e-8)

    def test_truncation_detected(self):
        spec = EnsembleSpec(N=2, a=self.a)
        rough = lambda x: np.sqrt(x) * (np.abs(x - 1.0) < 0.5)
        with pytest.raises(TruncationError):
            propagator_apply(rough, 0.0, spec, k_max=30, method="gauss")


class TestSkewFunctions:
    def test_phi0_value(self, skew_sets):
        fs = skew_sets(2, 0.0, 0.0)
        assert fs.phi(0, 1.0) == pytest.approx(math.sqrt(2) / math.e, rel=1e-13)

    @pytest.mark.parametrize("tau", [0.0, 0.3, 1.0])
    def test_phi1_vanishes_at_one(self, skew_sets, tau):
        assert abs(skew_sets(2, 0.0, tau).phi(1, 1.0)) < 1e-14

    @pytest.mark.parametrize("tau", [0.0, 0.7])
    def test_psi1_value(self, skew_sets, tau):
        assert skew_sets(2, 0.0, tau).psi(1, 1.0) == pytest.approx(2**1.5 / math.e, rel=1e-13)

    @pytest.mark.parametrize("a,tau", [(0.0, 0.0), (1.5, 0.4), (-0.5, 1.2)])
    def test_against_direct_formulas(self, skew_sets, a, tau):
        fs = skew_sets(8, a, tau)
        x = np.array([0.2, 1.1, 3.7, 9.0])
        tab = fs.table(x)
        for j in range(8):
            np.testing.assert_allclose(tab.phi[j], phi_direct(j, x, a, tau), rtol=1e-10, atol=1e-13)
        for j in range(1, 8, 2):
            np.testing.assert_allclose(tab.psi[j], psi_odd_direct(j, x, a, tau), rtol=1e-10, atol=1e-13)

    def test_tau_scaling(self, skew_sets):
        x = np.array([0.5, 2.0, 6.0])
        t0, t1 = skew_sets(8, 1.0, 0.0).table(x), skew_sets(8, 1.0, 0.35).table(x)
        for mu in range(4):
            np.testing.assert_allclose(t1.phi[2 * mu] / t0.phi[2 * mu], math.exp(2 * mu * 0.35), rtol=1e-13)
            np.testing.assert_allclose(t1.psi[2 * mu + 1] / t0.psi[2 * mu + 1], math.exp(-2 * mu * 0.35),
                                       rtol=1e-13)

    def test_psi0_initial_is_eps_integral(self, skew_sets):
        fs = skew_sets(2, 0.7, 0.0)
        for x in (0.3, 1.0, 4.0):
            left = integrate.quad(lambda y: fs.phi(0, y), 0, x)[0]
            right = integrate.quad(lambda y: fs.phi(0, y), x, np.inf)[0]
            assert fs.psi0(x) == pytest.approx(0.5 * (left - right), abs=1e-10)

    def test_psi0_coefficients_match_quadrature(self, skew_sets):
        a, tau = 0.7, 0.25
        fs = skew_sets(2, a, tau)
        seed = skew_sets(2, a, 0.0).psi0_initial
        ref = propagator_apply(seed, tau, fs.spec, k_max=12, method="adaptive", tail_tol=1.0)
        np.testing.assert_allclose(fs.psi0_coeffs()[:13], ref.coeffs, atol=1e-8)
        assert np.all(np.abs(fs.psi0_coeffs()[0:13:2]) < 1e-14)

    def test_backward_matches_forward(self, skew_sets):
        fs = skew_sets(16, 0.5, 0.3)
        x = np.linspace(0.2, 20, 25)
        np.testing.assert_allclose(fs.psi_even(x, 7), fs.psi_even(x, 7, method="forward"), atol=1e-12)

    @pytest.mark.parametrize("tau", [0.0, 0.3, 1.0])
    def test_pairing_phi0_psi1(self, skew_sets, tau):
        z = skew_pairing_matrix(skew_sets(2, 0.0, tau))
        assert z[0, 1] == pytest.approx(1.0, abs=1e-10)
        assert abs(z[0, 0]) < 1e-10

    @pytest.mark.parametrize("a", [0.0, 1.5, -0.5])
    @pytest.mark.parametrize("tau", [0.0, 0.05, 0.5])
    def test_skew_orthonormal(self, skew_sets, a, tau):
        z = skew_pairing_matrix(skew_sets(8, a, tau))
        np.testing.assert_allclose(z, z_matrix(8), atol=1e-10)

    def test_index_out_of_range(self, skew_sets):
        fs = skew_sets(4, 0.0, 0.1)
        with pytest.raises(IndexError):
            fs.phi(4, 1.0)
        with pytest.raises(DomainError):
            fs.table(np.array([0.0, 1.0]))

    def test_b_tail_needs_positive_tau(self, skew_sets):
        with pytest.raises(UnsupportedError):
            skew_sets(4, 0.0, 0.0).b_tail(np.array([1.0, 2.0]))
