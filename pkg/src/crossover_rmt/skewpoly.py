"""Skew-orthogonal function pairs for the LOE -> LUE crossover.

The one-body Laguerre Hamiltonian has normalised eigenfunctions

    u_k(x) = 2^{a+1} / alpha_k * x^{a+1/2} e^{-x} L_k^{(2a+1)}(2x)
           = sqrt(2) * ell_k(2x),       eigenvalue k,

and with the initial weight w(x) = x^a e^{-x} the evolution operator is
O_x f = x^{1/2} e^{-H tau} (x^{-1/2} f). Every function below is expressed in
the ell_k basis so that long expansions stay numerically O(1).

The seed psi_0 is the only function that is not a finite combination of
eigenfunctions. Its spectral coefficients against u_k vanish for even k and
are known in closed form for odd k, so the propagated seed is a damped series
in u_{2v-1}; at tau = 0 the closed form via the regularised incomplete gamma
function is used instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from . import specfun
from .errors import DomainError, TruncationError, UnsupportedError

__all__ = [
    "EnsembleSpec",
    "Family",
    "FunctionTable",
    "Propagated",
    "Route",
    "SkewFunctionSet",
    "eigenfunction_u",
    "propagator_apply",
    "skew_pairing_matrix",
    "z_matrix",
]

# hard ceiling on spectral series length; tau ~ 1e-5 at tol 1e-13
MAX_TERMS = 4_000_000


class Family(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"


class Route(str, enum.Enum):
    OE_UE = "oe-ue"
    SE_UE = "se-ue"


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of a crossover ensemble.

    ``nprime`` is only meaningful for Wishart-built Laguerre ensembles, where
    the weight exponent is tied to the rectangular shape by 2a + 1 = N' - N.
    """

    N: int
    tau: float = 0.0
    a: float = 0.0
    b: float | None = None
    family: Family = Family.LAGUERRE
    route: Route = Route.OE_UE
    nprime: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "route", Route(self.route))
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N={self.N} must be a positive integer")
        if self.a <= -1:
            raise DomainError(f"a={self.a} must exceed -1")
        if self.family is Family.JACOBI:
            if self.b is None or self.b <= -1:
                raise DomainError(f"Jacobi ensembles need b > -1, got b={self.b}")
        if not self.tau >= 0:
            raise DomainError(f"tau={self.tau} must be >= 0")
        if self.nprime is not None:
            if self.nprime < self.N:
                raise DomainError(f"nprime={self.nprime} must be >= N={self.N}")
            if not math.isclose(2 * self.a + 1, self.nprime - self.N, abs_tol=1e-12):
                raise DomainError(
                    f"2a+1={2 * self.a + 1} does not equal nprime-N={self.nprime - self.N}"
                )

    @classmethod
    def wishart(cls, nprime, N, tau, route=Route.OE_UE):
        """Laguerre spec for A^dagger A with A of shape nprime x N."""
        return cls(N=N, tau=tau, a=(nprime - N - 1) / 2, family=Family.LAGUERRE,
                   route=route, nprime=nprime)

    def with_tau(self, tau):
        return EnsembleSpec(self.N, tau, self.a, self.b, self.family, self.route, self.nprime)

    def weight(self, x):
        """Initial one-body weight w(x) giving compact skew functions."""
        x = np.asarray(x, dtype=float)
        shift = 1 if self.route is Route.SE_UE else 0
        if self.family is Family.GAUSSIAN:
            return np.exp(-x**2 / 2)
        if self.family is Family.LAGUERRE:
            return x ** (self.a + shift) * np.exp(-x)
        return (1 - x) ** (self.a + shift) * (1 + x) ** (self.b + shift)

    def weight_eq(self, x):
        """Unitary-ensemble equilibrium weight (squared ground state)."""
        x = np.asarray(x, dtype=float)
        if self.family is Family.GAUSSIAN:
            return np.exp(-x**2)
        if self.family is Family.LAGUERRE:
            return x ** (2 * self.a + 1) * np.exp(-2 * x)
        return (1 - x) ** (2 * self.a + 1) * (1 + x) ** (2 * self.b + 1)


def z_matrix(n):
    """Canonical skew pairing: Z[j, j+1] = 1 for even j, Z[j, j-1] = -1 for odd j."""
    z = np.zeros((n, n))
    for j in range(0, n - 1, 2):
        z[j, j + 1] = 1.0
        z[j + 1, j] = -1.0
    return z


def eigenfunction_u(j, a, x):
    """Normalised eigenfunction u_j of the Laguerre one-body Hamiltonian."""
    if a <= -1:
        raise DomainError(f"a={a} must exceed -1")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("u_j is defined on x > 0")
    ell = specfun.laguerre_functions(int(j), 2 * a + 1, 2 * x)[-1]
    return math.sqrt(2.0) * ell


@dataclass(frozen=True)
class Propagated:
    """Result of applying O_x = x^{1/2} e^{-H tau} x^{-1/2} to a function.

    Calling it evaluates x^{1/2} sum_k e^{-k tau} c_k u_k(x).
    """

    coeffs: np.ndarray
    tau: float
    a: float
    tail_bound: float

    @property
    def k_max(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        damped = self.coeffs * np.exp(-self.tau * np.arange(len(self.coeffs)))
        ell = specfun.laguerre_functions(self.k_max, 2 * self.a + 1, 2 * x)
        return np.sqrt(2.0 * x) * np.tensordot(damped, ell, axes=1)

    def then(self, tau):
        """Compose with a further propagation by ``tau`` (semigroup step)."""
        return Propagated(self.coeffs, self.tau + tau, self.a, self.tail_bound)


def propagator_apply(f: Callable, tau, spec: EnsembleSpec | float, k_max=None,
                     method="gauss", n_quad=None, tail_tol=1e-8):
    """Apply the one-body evolution O_x to ``f`` by spectral decomposition.

    Coefficients c_k = <u_k, x^{-1/2} f> are computed by quadrature.
    ``method="gauss"`` uses the generalised Gauss-Laguerre rule in t = 2x with
    exponent 2a+1 and is exact when f(x) = x^{a+1} e^{-x} g(x) with g a
    polynomial of degree below 2 n_quad - k_max; ``method="adaptive"``
    integrates each coefficient adaptively and accepts any f with
    x^{-1/2} f square integrable.

    Raises
    ------
    TruncationError
        If the damped coefficients have not decayed at ``k_max``
        (largest of the last five above ``tail_tol`` times the largest overall).
    """
    a = spec.a if isinstance(spec, EnsembleSpec) else float(spec)
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if k_max is None:
        n = spec.N if isinstance(spec, EnsembleSpec) else 16
        k_max = max(4 * n, 64)
    nu = 2 * a + 1
    coeffs = np.empty(k_max + 1)
    if method == "gauss":
        rule = specfun.gauss_laguerre(n_quad or (k_max + 64), nu)
        t = rule.nodes
        # integrand of <u_k, x^{-1/2} f> in t, divided by the weight t^nu e^{-t}
        with np.errstate(over="ignore"):
            reduced = np.exp(t / 2 - (a + 1) * np.log(t)) * f(t / 2)
        polys = specfun.laguerre_functions(k_max, nu, t) * np.exp(t / 2 - nu / 2 * np.log(t))
        coeffs[:] = polys @ (rule.weights * reduced)
    elif method == "adaptive":
        for k in range(k_max + 1):
            coeffs[k], _ = specfun.adaptive_quad(
                lambda x: eigenfunction_u(k, a, x) * x**-0.5 * f(x), 0.0, np.inf, tol=1e-11)
    else:
        raise ValueError(f"unknown method {method!r}")
    damped = np.abs(coeffs) * np.exp(-tau * np.arange(k_max + 1))
    peak = damped.max() if damped.size else 0.0
    tail = damped[-5:].max()
    if peak > 0 and tail > tail_tol * peak:
        raise TruncationError(
            f"spectral coefficients not decayed at k_max={k_max}: "
            f"tail {tail:.3g} vs peak {peak:.3g}",
            estimate=coeffs, error=tail)
    return Propagated(coeffs, float(tau), a, float(damped[-5:].sum()))


@dataclass(frozen=True)
class FunctionTable:
    """phi_j and psi_j tabulated on a caller grid, rows j = 0..j_max."""

    x: np.ndarray
    phi: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class SkewFunctionSet:
    """Evaluable phi_j^(tau), psi_j^(tau) for the LOE -> LUE crossover.

    Odd psi and all phi are finite Laguerre combinations. Even psi follow the
    forward recursion

        psi_{2m} = T_m + r_m psi_{2m-2},

    seeded by the propagated psi_0. ``tol`` controls truncation of the seed
    series and of the B_N tail.
    """

    spec: EnsembleSpec
    j_max: int | None = None
    tol: float = 1e-13
    k_max: int | None = field(default=None)

    def __post_init__(self):
        s = self.spec
        if s.family is not Family.LAGUERRE:
            raise UnsupportedError(f"finite-N skew functions for {s.family.value} not available")
        if s.route is not Route.OE_UE:
            raise UnsupportedError("finite-N skew functions for the SE->UE route not available")
        if s.N % 2:
            raise DomainError(f"skew functions need even N, got N={s.N}")
        if self.j_max is None:
            object.__setattr__(self, "j_max", s.N - 1)
        if self.k_max is None and s.tau > 0:
            k = max(4 * s.N, 64, int(math.ceil(math.log(1 / self.tol) / s.tau)) + 8)
            if k > MAX_TERMS:
                raise TruncationError(
                    f"tau={s.tau:g} needs {k} spectral terms (limit {MAX_TERMS})")
            object.__setattr__(self, "k_max", k)

    @property
    def a(self):
        return self.spec.a

    @property
    def tau(self):
        return self.spec.tau

    # -- coefficients -------------------------------------------------------

    def _r(self, m):
        """Ratio in the even-psi recursion, (alpha_{2m-2}/alpha_{2m})(2m+2a)/(2m)."""
        a = self.a
        return math.sqrt((2 * m - 1) * (2 * m + 2 * a) / ((2 * m) * (2 * m + 2 * a + 1)))

    def _t_coef(self, m):
        # (2^{a+3/2}/alpha_{2m}) (1/(2m)) rewritten against ell_{2m-1}
        return math.sqrt(2 * m / (2 * m + 2 * self.a + 1)) / m

    def psi0_coeffs(self):
        """Spectral coefficients c_k of psi_0^(0) against u_k (odd k only)."""
        kmax = self.k_max or max(4 * self.spec.N, 64)
        c = np.zeros(kmax + 1)
        prod = 1.0
        for m in range(1, (kmax + 1) // 2 + 1):
            prod *= self._r(m)
            c[2 * m - 1] = -self._t_coef(m) / (math.sqrt(2.0) * prod)
        return c

    # -- psi_0 --------------------------------------------------------------

    def psi0_initial(self, x):
        """psi_0^(0)(x) = int eps(x - y) phi_0(y) dy in closed form."""
        a = self.a
        x = np.asarray(x, dtype=float)
        c = 2 ** (a + 0.5) / specfun.alpha_norm(0, a)
        return c * math.gamma(a + 1) * (special.gammainc(a + 1, x) - 0.5)

    def psi0(self, x):
        """Propagated seed psi_0^(tau) = O_x psi_0^(0).

        For tau > 0 this is x^{1/2} sum_k e^{-k tau} c_k u_k(x) with the
        closed-form coefficients of :meth:`psi0_coeffs`.
        """
        x = np.asarray(x, dtype=float)
        if self.tau == 0:
            return self.psi0_initial(x)
        flat = x.ravel()
        coeffs = self.psi0_coeffs() * np.exp(-self.tau * np.arange(self.k_max + 1))
        total = np.zeros_like(flat)
        block = 2048
        blocks = specfun.iter_laguerre_blocks(2 * self.a + 1, 2 * flat, block)
        for k0 in range(0, self.k_max + 1, block):
            c = coeffs[k0:k0 + block]
            total += c @ next(blocks)[:len(c)]
        return (np.sqrt(2.0 * flat) * total).reshape(x.shape)

    # -- even psi ---------------------------------------------------------------

    def _backward_depth(self, mu_max):
        """Start index K for the backward recursion, so psi_{2K} ~ 0 is harmless."""
        return mu_max + int(math.ceil(math.log(1 / self.tol) / (2 * self.tau))) + 8

    def psi_even(self, x, mu_max, method="backward"):
        """psi_{2m}^(tau)(x) for m = 0..mu_max, shape (mu_max + 1,) + shape(x).

        ``method="backward"`` runs psi_{2m-2} = (psi_{2m} - T_m) / r_m down from
        a depth where psi is negligible; psi_{2m} is the decaying solution, so
        this keeps full relative accuracy even where e^{(2m+1) tau} in phi
        would amplify absolute errors. ``method="forward"`` is the plain
        upward recursion from the seed (used at tau = 0, where it is exact
        and the backward start does not exist).
        """
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        if self.tau == 0 or method == "forward":
            out = np.empty((mu_max + 1, flat.size))
            out[0] = self.psi0(flat)
            it = specfun.iter_laguerre_functions(2 * self.a + 1, 2 * flat)
            next(it)
            sx = np.sqrt(flat)
            for m in range(1, mu_max + 1):
                ell = next(it)
                next(it)
                t_m = math.exp(-(2 * m - 1) * self.tau) * self._t_coef(m) * sx * ell
                out[m] = t_m + self._r(m) * out[m - 1]
            return out.reshape((mu_max + 1,) + x.shape)
        if method != "backward":
            raise ValueError(f"unknown method {method!r}")
        depth = self._backward_depth(mu_max)
        if depth > MAX_TERMS // 2:
            raise TruncationError(f"tau={self.tau:g} needs recursion depth {depth}")
        tau, nu = self.tau, 2 * self.a + 1
        ms = np.arange(1, depth + 1)
        weights = np.exp(-(2 * ms - 1) * tau) * np.sqrt(2 * ms / (2 * ms + 2 * self.a + 1)) / ms
        ratios = np.sqrt((2 * ms - 1) * (2 * ms + 2 * self.a)
                         / ((2 * ms) * (2 * ms + 2 * self.a + 1)))
        sx = np.sqrt(flat)
        if depth * flat.size <= 4_000_000:
            odd = specfun.laguerre_functions(2 * depth, nu, 2 * flat)[1::2]
            odd *= weights[:, None] * sx[None, :]
            out = np.empty((mu_max + 1, flat.size))
            cur = np.zeros(flat.size)
            for m in range(depth, 0, -1):
                cur = (cur - odd[m - 1]) / ratios[m - 1]
                if m - 1 <= mu_max:
                    out[m - 1] = cur
            return out.reshape((mu_max + 1,) + x.shape)
        # too many points to store the recursion: accumulate each tail sum
        # psi_{2m} = -prod_{i<=m} r_i * sum_{v>m} T_v / prod_{i<=v} r_i directly
        logp = np.cumsum(np.log(ratios))
        acc = np.zeros((mu_max + 1, flat.size))
        block = 1024
        blocks = specfun.iter_laguerre_blocks(nu, 2 * flat, 2 * block)
        for v0 in range(1, depth + 1, block):
            rows = next(blocks)[1::2]          # ell_{2v-1} for v = v0..v0+block-1
            vs = np.arange(v0, min(v0 + block, depth + 1))
            rows = rows[:len(vs)]
            coef = weights[vs - 1] * np.exp(-logp[vs - 1])
            mask = vs[None, :] > np.arange(mu_max + 1)[:, None]
            acc -= (mask * coef[None, :]) @ rows
        pref = np.exp(np.concatenate([[0.0], logp[:mu_max]]))
        out = pref[:, None] * acc * sx[None, :]
        return out.reshape((mu_max + 1,) + x.shape)

    # -- tables ---------------------------------------------------------------

    def table(self, x, j_max=None) -> FunctionTable:
        """Tabulate phi_j, psi_j for j = 0..j_max on grid ``x`` (x > 0)."""
        j_max = self.j_max if j_max is None else j_max
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise DomainError("Laguerre skew functions are evaluated on x > 0")
        a, tau = self.a, self.tau
        ell = specfun.laguerre_functions(j_max + 1, 2 * a + 1, 2 * x)
        sx = np.sqrt(x)
        phi = np.empty((j_max + 1,) + x.shape)
        psi = np.empty((j_max + 1,) + x.shape)
        for j in range(j_max + 1):
            m = j // 2
            if j % 2 == 0:
                phi[j] = math.exp(2 * m * tau) * ell[2 * m] / sx
            else:
                up = (2 * m + 1) * math.sqrt((2 * m + 2 * a + 2) / (2 * m + 1))
                # L_{-1} = 0 kills the second term at m = 0
                down = (2 * m + 2 * a + 1) * math.sqrt(2 * m / (2 * m + 2 * a + 1)) if m else 0.0
                lower = ell[2 * m - 1] if m else 0.0
                phi[j] = math.exp(2 * m * tau) * (
                    math.exp(tau) * up * ell[2 * m + 1] - math.exp(-tau) * down * lower) / sx
                psi[j] = math.exp(-2 * m * tau) * 2.0 * sx * ell[2 * m]
        if j_max >= 0:
            psi[0::2] = self.psi_even(x, j_max // 2)
        return FunctionTable(x, phi, psi)

    def _check(self, j):
        if not 0 <= j <= self.j_max:
            raise IndexError(f"index j={j} outside 0..{self.j_max}")

    def phi(self, j, x):
        self._check(j)
        return self.table(x, j).phi[j]

    def psi(self, j, x):
        self._check(j)
        return self.table(x, j).psi[j]

    # -- B_N tail -------------------------------------------------------------

    def b_tail(self, x):
        """Matrix B_N(x_i, x_j) = sum_{m >= N/2} [psi_{2m+1}(x_i) psi_{2m}(x_j) - (i<->j)].

        Summation stops once three consecutive terms fall below
        ``tol * max|B|`` past the e-folding scale 1/(4 tau).
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        tau, half = self.tau, self.spec.N // 2
        if tau <= 0:
            raise UnsupportedError("B_N series does not converge at tau = 0")
        mu_max = half + int(math.ceil(math.log(1 / self.tol) / (2 * tau))) + 8
        even = self.psi_even(x, mu_max)
        sx = np.sqrt(x)
        ell = specfun.laguerre_functions(2 * mu_max, 2 * self.a + 1, 2 * x)
        b = np.zeros((len(x), len(x)))
        quiet = 0
        settle = half + int(math.ceil(1 / (4 * tau)))
        term = b
        for m in range(0, mu_max + 1):
            if m < half:
                continue
            psi_odd = math.exp(-2 * m * tau) * 2.0 * sx * ell[2 * m]
            term = np.outer(psi_odd, even[m])
            term -= term.T
            b += term
            small = np.abs(term).max() <= self.tol * max(np.abs(b).max(), 1e-300)
            quiet = quiet + 1 if small else 0
            if quiet >= 3 and m >= settle:
                return b
        raise TruncationError(f"B_N tail not converged after {mu_max} terms",
                              estimate=b, error=float(np.abs(term).max()))


def skew_pairing_matrix(fs: SkewFunctionSet, n=None, x_max=None, panels=90, order=20):
    """Matrix of integral phi_j psi_k dx over (0, inf).

    Composite Gauss-Legendre in s = sqrt(x), which turns the x^a endpoint
    factors into smooth (for half-integer a, polynomial) ones.
    """
    n = fs.spec.N if n is None else n
    x_max = x_max or (2.0 * n + 90.0)
    rule = specfun.panel_rule(np.linspace(0.0, math.sqrt(x_max), panels + 1), order)
    s = rule.nodes
    x = s * s
    tab = fs.table(x, n - 1)
    return (tab.phi * (2 * s * rule.weights)) @ tab.psi.T
