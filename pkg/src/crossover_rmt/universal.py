"""Universal large-N unfolded correlations of the crossover ensembles.

With beta = 2 lambda^2 the kernels are

    OE->UE: A = -(1/pi) int_0^pi k sin(kr) e^{beta k^2} dk,
            B = -(1/pi) int_pi^inf sin(kr)/k e^{-beta k^2} dk
    SE->UE: A = -(1/pi) int_0^pi sin(kr)/k e^{beta k^2} dk,
            B = -(1/pi) int_pi^inf k sin(kr) e^{-beta k^2} dk

and S(r) = sin(pi r)/(pi r). A grows like e^{beta pi^2} while B shrinks like
e^{-beta pi^2}; internally both are carried with that factor removed, which
is exact for every quantity built from products A B (all Qdet terms) and
removes the overflow and the cancellation in B at large lambda.

B is obtained in one of two ways. For beta >= BETA_SPLIT the tail integral
over k > pi is done directly (it decays within a few units). Below that the
tail is the full-line Gaussian transform minus the [0, pi] part:

    int_0^inf sin(kr)/k e^{-beta k^2} dk = (pi/2) erf(r / (2 sqrt(beta))),
    int_0^inf k sin(kr) e^{-beta k^2} dk = sqrt(pi) r / (4 beta^{3/2}) e^{-r^2/(4 beta)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import specfun
from .errors import DomainError, UnsupportedError
from .kernels import pfaffian, quaternion_block_matrix
from .skewpoly import Family, Route

__all__ = [
    "LAMBDA_MAX",
    "ConductanceVariance",
    "LambdaOverflowError",
    "TransportSpec",
    "UniversalKernel",
    "cluster_Y2",
    "conductance_variance",
    "jacobi_to_transmission",
    "kernel_A",
    "kernel_B",
    "lambda_map",
    "number_variance",
    "sine_kernel",
    "transmission_to_jacobi",
    "universal_Rn",
]

LAMBDA_MAX = 3.0
BETA_SPLIT = 0.05
_ORDER = 16
_R_CHUNK = 512


class LambdaOverflowError(DomainError):
    """lambda above the overflow guard (e^{2 lambda^2 pi^2} leaves double range)."""


def _route(route):
    return Route(route)


def sine_kernel(r):
    """S(r) = sin(pi r) / (pi r), with S(0) = 1."""
    return np.sinc(np.asarray(r, dtype=float))[()]


def _graded_breaks(length, scale, max_width):
    """Breakpoints on [0, length]: geometric from ``scale`` near 0, width <= max_width."""
    scale = min(scale, max_width, length)
    pts = [0.0]
    w = scale / 4
    while pts[-1] < length:
        pts.append(min(pts[-1] + w, length))
        w = min(2 * w, max_width)
    return np.asarray(pts)


def _head(r, beta, power, scaled):
    """int_0^pi k^power sin(kr) e^{beta k^2} dk, times e^{-beta pi^2} if ``scaled``.

    Computed in v = pi - k so the exponential is e^{-beta (2 pi v - v^2)},
    which peaks at v = 0 with width ~ 1/(2 pi beta).
    """
    r_max = float(np.max(np.abs(r))) if r.size else 0.0
    width = 1.0 / (2 * math.pi * beta) if beta > 0 else math.pi
    breaks = _graded_breaks(math.pi, width, 2.0 / (1.0 + r_max))
    rule = specfun.panel_rule(breaks, _ORDER)
    v = rule.nodes
    k = math.pi - v
    expo = -beta * (2 * math.pi * v - v * v)
    if not scaled:
        expo = expo + beta * math.pi**2
    g = rule.weights * k**power * np.exp(expo)
    out = np.empty(r.shape)
    for lo in range(0, r.size, _R_CHUNK):
        rr = r.ravel()[lo:lo + _R_CHUNK]
        out.ravel()[lo:lo + _R_CHUNK] = np.sin(np.outer(rr, k)) @ g
    return out


def _tail_direct(r, beta, power):
    """e^{beta pi^2} int_pi^inf k^power sin(kr) e^{-beta k^2} dk by quadrature in u = k - pi."""
    r_max = float(np.max(np.abs(r))) if r.size else 0.0
    # e^{-beta (2 pi u + u^2)} < 1e-18 beyond u_max
    u_max = -math.pi + math.sqrt(math.pi**2 + 41.5 / beta)
    width = 1.0 / (2 * math.pi * beta)
    breaks = _graded_breaks(u_max, width, 2.0 / (1.0 + r_max))
    rule = specfun.panel_rule(breaks, _ORDER)
    u = rule.nodes
    k = math.pi + u
    g = rule.weights * k**power * np.exp(-beta * (2 * math.pi * u + u * u))
    out = np.empty(r.shape)
    for lo in range(0, r.size, _R_CHUNK):
        rr = r.ravel()[lo:lo + _R_CHUNK]
        out.ravel()[lo:lo + _R_CHUNK] = np.sin(np.outer(rr, k)) @ g
    return out


def _check_lambda(lam):
    if lam < 0:
        raise DomainError(f"lambda={lam} must be >= 0")
    if lam > LAMBDA_MAX:
        raise LambdaOverflowError(
            f"lambda={lam} exceeds the overflow guard lambda_max={LAMBDA_MAX} "
            f"(e^(2 lambda^2 pi^2) overflows); use the unitary limit instead")


def _scaled_a(r, lam, route):
    """A e^{-beta pi^2} with beta = 2 lambda^2."""
    r = np.asarray(r, dtype=float)
    power = 1 if _route(route) is Route.OE_UE else -1
    return -_head(r, 2.0 * lam * lam, power, scaled=True) / math.pi


def _scaled_b(r, lam, route):
    """B e^{beta pi^2} with beta = 2 lambda^2."""
    r = np.asarray(r, dtype=float)
    route = _route(route)
    beta = 2.0 * lam * lam
    if route is Route.OE_UE:
        if beta >= BETA_SPLIT:
            return -_tail_direct(r, beta, -1) / math.pi
        if beta == 0:
            sign = np.sign(r)
            return -(0.5 * math.pi * sign - sign * specfun.sine_integral(math.pi * np.abs(r))) / math.pi
        full = 0.5 * math.pi * special.erf(r / (2 * math.sqrt(beta)))
        return -(full - _head_gauss(r, beta, -1)) / math.pi * math.exp(beta * math.pi**2)
    if beta == 0:
        raise UnsupportedError(
            "SE->UE B(r; 0) is a distribution (divergent integral); evaluate at lambda > 0 "
            "and take the limit")
    if beta >= BETA_SPLIT:
        return -_tail_direct(r, beta, 1) / math.pi
    full = math.sqrt(math.pi) * r / (4 * beta**1.5) * np.exp(-r * r / (4 * beta))
    return -(full - _head_gauss(r, beta, 1)) / math.pi * math.exp(beta * math.pi**2)


def _scaled_ab(r, lam, route):
    return _scaled_a(r, lam, route), _scaled_b(r, lam, route)


def _head_gauss(r, beta, power):
    """int_0^pi k^power sin(kr) e^{-beta k^2} dk (smooth; uniform panels)."""
    r_max = float(np.max(np.abs(r))) if r.size else 0.0
    n_pan = max(2, int(math.ceil(math.pi * (1 + r_max) / 2)))
    rule = specfun.panel_rule(np.linspace(0, math.pi, n_pan + 1), _ORDER)
    k = rule.nodes
    g = rule.weights * k**power * np.exp(-beta * k * k)
    out = np.empty(r.shape)
    for lo in range(0, r.size, _R_CHUNK):
        rr = r.ravel()[lo:lo + _R_CHUNK]
        out.ravel()[lo:lo + _R_CHUNK] = np.sin(np.outer(rr, k)) @ g
    return out


def kernel_A(r, lam, route=Route.OE_UE):
    """A(r; lambda), vectorised over r."""
    _check_lambda(lam)
    a = _scaled_a(r, lam, route)
    return (a * math.exp(2 * lam * lam * math.pi**2))[()]


def kernel_B(r, lam, route=Route.OE_UE):
    """B(r; lambda), vectorised over r."""
    _check_lambda(lam)
    b = _scaled_b(r, lam, route)
    return (b * math.exp(-2 * lam * lam * math.pi**2))[()]


def _se_regular_y2(r):
    """Regular part of the SE->UE cluster function at lambda = 0.

    Kramers partners sit at zero separation, so the full cluster function is
    this minus delta(r). The regular part is the symplectic cluster function
    at half the separation: S^2 - (x cos x - sin x) Si(x) / x^2 with x = pi r.
    """
    x = math.pi * np.abs(np.asarray(r, dtype=float))
    small = x < 1e-3
    xs = np.where(small, 1.0, x)
    d = np.where(small, -x / 3 + x**3 / 30, (xs * np.cos(xs) - np.sin(xs)) / xs**2)
    return sine_kernel(r) ** 2 - d * specfun.sine_integral(x)


def cluster_Y2(r, lam, route=Route.OE_UE):
    """Two-level cluster function Y2 = S^2 - A B.

    For SE->UE at lambda = 0 only the regular part is returned; see
    :attr:`UniversalKernel.singular_weight`.
    """
    return UniversalKernel(route, lam).Y2(r)


@dataclass(frozen=True)
class UniversalKernel:
    """sigma(r; lambda) for one route.

    With ``saturate=True`` a lambda above ``lambda_max`` is clamped to the
    unitary limit (A B = 0) and :attr:`saturated` reports it.
    """

    route: Route = Route.OE_UE
    lam: float = 0.0
    quad_tol: float = 1e-8
    lambda_max: float = LAMBDA_MAX
    saturate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "route", _route(self.route))
        if self.lam < 0:
            raise DomainError("lambda must be >= 0")
        if self.lam > self.lambda_max and not self.saturate:
            _check_lambda(self.lam)

    @property
    def saturated(self):
        return self.lam > self.lambda_max

    @property
    def singular_weight(self):
        """Weight w of a w * delta(r) term in Y2 that :meth:`Y2` leaves out.

        -1 for SE->UE at lambda = 0 (degenerate Kramers partners), else 0.
        """
        return -1.0 if self.route is Route.SE_UE and self.lam == 0 else 0.0

    def S(self, r):
        return sine_kernel(r)

    def scaled_AB(self, r):
        r = np.asarray(r, dtype=float)
        if self.saturated:
            return np.zeros(r.shape), np.zeros(r.shape)
        return _scaled_ab(r, self.lam, self.route)

    def A(self, r):
        if self.saturated:
            return np.full(np.shape(r), np.inf)
        return kernel_A(r, self.lam, self.route)

    def B(self, r):
        if self.saturated:
            return np.zeros(np.shape(r))
        return kernel_B(r, self.lam, self.route)

    def Y2(self, r):
        if self.singular_weight:
            return _se_regular_y2(r)[()]
        a, b = self.scaled_AB(r)
        return (sine_kernel(r) ** 2 - a * b)[()]

    def number_variance(self, L, method="adaptive"):
        return number_variance(L, self.lam, self.route, method=method, kernel=self)

    def Rn(self, rs):
        return universal_Rn(rs, self.lam, self.route, kernel=self)


def _spike_breaks(L, lam, route):
    """Panel breaks on [0, L], refined near 0 for the SE near-delta at small lambda."""
    pts = [0.0]
    if _route(route) is Route.SE_UE and lam > 0:
        w = 2 * math.sqrt(2.0) * lam      # e^{-r^2/(4 beta)} width
        pts += [c * w for c in (0.5, 1, 2, 3, 4.5, 6.5, 9) if c * w < min(1.0, L)]
    pts += list(np.arange(1.0, L, 1.0))
    pts.append(L)
    return np.unique(pts)


def number_variance(L, lam, route=Route.OE_UE, method="adaptive", tol=1e-9, kernel=None):
    """Sigma^2(L) = L - 2 int_0^L (L - r) Y2(r; lambda) dr.

    A singular w delta(r) part of Y2 contributes -w L.

    ``method="adaptive"`` uses adaptive Gauss-Kronrod on each unit interval,
    ``"panel"`` a fixed composite Gauss-Legendre rule (vectorised, much
    faster; used for grids).
    """
    kern = kernel or UniversalKernel(route, lam)
    L = float(L)
    if not 0 < L <= 50:
        raise DomainError(f"number_variance needs 0 < L <= 50, got {L}")
    breaks = _spike_breaks(L, lam, route)
    if method == "panel":
        rule = specfun.panel_rule(breaks, 24)
        r = rule.nodes
        return L - 2 * float(rule.weights @ ((L - r) * kern.Y2(r))) - kern.singular_weight * L
    if method != "adaptive":
        raise ValueError(f"unknown method {method!r}")
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        val, _ = specfun.adaptive_quad(lambda r: (L - r) * float(kern.Y2(r)), lo, hi, tol=tol)
        total += val
    return L - 2 * total - kern.singular_weight * L


def universal_Rn(rs, lam, route=Route.OE_UE, kernel=None):
    """Unfolded n-level correlation Qdet[sigma(r_j - r_k; lambda)], n <= 6."""
    kern = kernel or UniversalKernel(route, lam)
    rs = np.atleast_1d(np.asarray(rs, dtype=float))
    n = len(rs)
    if n > 6:
        raise DomainError("universal_Rn supports n <= 6")
    if n == 1:
        return 1.0
    d = rs[:, None] - rs[None, :]
    if np.abs(d[np.triu_indices(n, 1)]).min() < 1e-12:
        from .errors import DegenerateInputError
        raise DegenerateInputError("universal_Rn needs distinct points")
    a, b = kern.scaled_AB(d)
    # diagonal: A(0) = B(0) = 0 exactly
    np.fill_diagonal(a, 0.0)
    np.fill_diagonal(b, 0.0)
    s = sine_kernel(d)
    return pfaffian(quaternion_block_matrix(s, a, b))


def lambda_map(tau, x, r1, family=Family.LAGUERRE):
    """Rescaled transition parameter lambda = sqrt(-tau f(x)) R_1(x).

    f(x) is the coefficient of d^2/dx^2 in the one-body Hamiltonian:
    -1/2 (Gaussian), -x/2 (Laguerre), -(1 - x^2) (Jacobi).
    """
    family = Family(family)
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if r1 <= 0:
        raise DomainError("level density r1 must be positive")
    if family is Family.GAUSSIAN:
        f = -0.5
    elif family is Family.LAGUERRE:
        if x < 0:
            raise DomainError(f"Laguerre lambda needs x >= 0, got {x}")
        f = -0.5 * x
    else:
        if abs(x) >= 1:
            raise DomainError(f"Jacobi lambda needs |x| < 1, got {x}")
        f = -(1 - x * x)
    return math.sqrt(-tau * f) * r1


@dataclass(frozen=True)
class TransportSpec:
    n1: int
    n2: int
    tau: float = 0.0

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise DomainError("channel numbers must be >= 1")
        if self.tau < 0:
            raise DomainError("tau must be >= 0")

    @property
    def b(self):
        """Jacobi exponent b with 2b + 1 = |N1 - N2|."""
        return (abs(self.n1 - self.n2) - 1) / 2

    @property
    def N(self):
        return min(self.n1, self.n2)


@dataclass(frozen=True)
class ConductanceVariance:
    value: float
    at_tau0: float
    at_tau_inf: float
    large_channel_regime: bool


def conductance_variance(spec: TransportSpec) -> ConductanceVariance:
    """Large-channel conductance variance along the crossover.

    var G = (1 + e^{-2 (N1 + N2) tau}) N1^2 N2^2 / (N1 + N2)^4.
    ``large_channel_regime`` is False when min(N1, N2) < 10.
    """
    n1, n2 = spec.n1, spec.n2
    base = n1**2 * n2**2 / (n1 + n2) ** 4
    value = (1 + math.exp(-2 * (n1 + n2) * spec.tau)) * base
    return ConductanceVariance(value, 2 * base, base, min(n1, n2) >= 10)


def transmission_to_jacobi(t):
    """x = 2 T - 1 for transmission eigenvalues T in [0, 1]."""
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("transmission eigenvalues must lie in [0, 1]")
    return (2 * t - 1)[()]


def jacobi_to_transmission(x):
    """Inverse of :func:`transmission_to_jacobi`."""
    x = np.asarray(x, dtype=float)
    if np.any((x < -1) | (x > 1)):
        raise DomainError("Jacobi variables must lie in [-1, 1]")
    return ((x + 1) / 2)[()]
