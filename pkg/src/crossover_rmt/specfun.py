"""Special functions and quadrature primitives.

Everything here is a pure function of its arguments. Laguerre quantities use
the standard normalisation

    h_j = integral t^nu e^{-t} L_j^{(nu)}(t)^2 dt = Gamma(j + nu + 1) / Gamma(j + 1)

and the *normalised Laguerre functions*

    ell_j(t) = t^{nu/2} e^{-t/2} L_j^{(nu)}(t) / sqrt(h_j),

which are orthonormal on (0, inf) and stay O(1) for large j, so they are the
form used internally whenever long expansions are summed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureRule",
    "adaptive_quad",
    "alpha_norm",
    "gauss_laguerre",
    "gauss_legendre",
    "iter_laguerre_blocks",
    "iter_laguerre_functions",
    "laguerre_functions",
    "laguerre_poly",
    "log_gamma",
    "panel_rule",
    "sine_integral",
]

SPECFUN_TOL = 1e-10
QUAD_TOL = 1e-8

# rescale threshold for the log-scaled Laguerre function recurrence
_BIG = 1e100
_FAST_T_MAX = 1000.0


def laguerre_poly(j, nu, x):
    """Associated Laguerre polynomial L_j^{(nu)}(x) by forward recurrence.

    ``j = -1`` returns zeros (L_{-1} = 0), which keeps index arithmetic like
    ``L_{2m-1}`` at ``m = 0`` well defined.

    Parameters
    ----------
    j : int
        Degree, ``j >= -1``.
    nu : float
        Parameter, ``nu > -1``.
    x : array_like
        Evaluation points.

    Returns
    -------
    numpy.ndarray or float
    """
    if nu <= -1:
        raise DomainError(f"Laguerre parameter nu={nu} must exceed -1")
    j = int(j)
    if j < -1:
        raise DomainError(f"Laguerre degree j={j} must be >= -1")
    x = np.asarray(x, dtype=float)
    if j == -1:
        return np.zeros_like(x)[()]
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(j):
        # (k+1) L_{k+1} = (2k + nu + 1 - x) L_k - (k + nu) L_{k-1}
        prev, cur = cur, ((2 * k + nu + 1 - x) * cur - (k + nu) * prev) / (k + 1)
    return cur[()]


def log_gamma(x):
    """Natural log of Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("log_gamma requires x > 0")
    return special.gammaln(x)[()]


def alpha_norm(j, a):
    """alpha_j = sqrt(Gamma(j + 2a + 2) / Gamma(j + 1)).

    This is the square root of the norm of L_j^{(2a+1)} against
    t^{2a+1} e^{-t}. Computed from log-gamma differences so it does not
    overflow for large ``j``.
    """
    if a <= -1:
        raise DomainError(f"weight exponent a={a} must exceed -1")
    j = np.asarray(j)
    if np.any(j < 0):
        raise DomainError("alpha_norm needs j >= 0")
    return np.exp(0.5 * (special.gammaln(j + 2 * a + 2) - special.gammaln(j + 1)))[()]


def iter_laguerre_functions(nu, t) -> Iterator[np.ndarray]:
    """Yield ell_0(t), ell_1(t), ... indefinitely.

    The recurrence for the normalised polynomials p_k = L_k / sqrt(h_k),

        sqrt((k+1)(k+nu+1)) p_{k+1} = (2k+nu+1-t) p_k - sqrt(k(k+nu)) p_{k-1},

    is run on a mantissa with a per-point log scale so nothing over- or
    underflows even where e^{-t/2} alone would.
    """
    if nu <= -1:
        raise DomainError(f"Laguerre parameter nu={nu} must exceed -1")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("Laguerre functions are defined for t >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        log0 = 0.5 * special.xlogy(nu, t) - 0.5 * t - 0.5 * special.gammaln(nu + 1)
    if nu < 0:
        log0 = np.where(t == 0, np.inf, log0)
    # t = 0: ell_0 is 0 for nu > 0, 1/sqrt(Gamma(1)) for nu = 0, inf for nu < 0
    scale = np.where(np.isfinite(log0), log0, 0.0)
    factor = np.exp(scale)
    prev = np.zeros_like(t)
    cur = np.where(np.isfinite(log0), 1.0, np.exp(log0))
    k = 0
    while True:
        yield cur * factor
        nxt = (2 * k + nu + 1 - t) * cur
        nxt -= math.sqrt(k * (k + nu)) * prev
        nxt /= math.sqrt((k + 1) * (k + nu + 1))
        prev, cur = cur, nxt
        k += 1
        # growth per step is at most ~ (t + 2k) / k, so checking every 4 steps is safe
        if k % 4 == 0:
            big = np.abs(cur) > _BIG
            if big.any():
                prev = np.where(big, prev / _BIG, prev)
                cur = np.where(big, cur / _BIG, cur)
                scale = np.where(big, scale + math.log(_BIG), scale)
                factor = np.exp(scale)


def iter_laguerre_blocks(nu, t, block=1024) -> Iterator[np.ndarray]:
    """Yield consecutive blocks of rows ell_k(t), each of shape (block, len(t)).

    Whole-row array recurrence; requires 0 < t <= 1000 so that the unscaled
    polynomials (|p_k| <~ e^{t/2}) and ell_0 stay within double range.
    """
    if nu <= -1:
        raise DomainError(f"Laguerre parameter nu={nu} must exceed -1")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.size and (t.max() > _FAST_T_MAX or t.min() <= 0):
        raise DomainError(f"blocked Laguerre recurrence needs 0 < t <= {_FAST_T_MAX:g}")
    weight = np.exp(0.5 * nu * np.log(t) - 0.5 * t - 0.5 * special.gammaln(nu + 1))
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    k0 = 0
    while True:
        k = np.arange(k0, k0 + block, dtype=float)
        denom = np.sqrt((k + 1) * (k + nu + 1))
        c_lin = (2 * k + nu + 1) / denom
        c_t = 1.0 / denom
        c_prev = np.sqrt(k * (k + nu)) / denom
        out = np.empty((block, t.size))
        for j in range(block):
            out[j] = cur
            nxt = np.multiply(t, -c_t[j])
            nxt += c_lin[j]
            nxt *= cur
            nxt -= c_prev[j] * prev
            prev, cur = cur, nxt
        out *= weight
        yield out
        k0 += block


def laguerre_functions(kmax, nu, t):
    """Table of ell_k(t) for k = 0..kmax, shape (kmax + 1,) + shape(t).

    For 0 < t <= 1000 the table is filled by whole-row recurrence; anything
    else goes through the log-scaled iterator.
    """
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    if flat.size == 0:
        return np.empty((kmax + 1,) + t.shape)
    if flat.max() > _FAST_T_MAX or flat.min() <= 0:
        out = np.empty((kmax + 1, flat.size))
        it = iter_laguerre_functions(nu, flat)
        for k in range(kmax + 1):
            out[k] = next(it)
        return out.reshape((kmax + 1,) + t.shape)
    out = next(iter_laguerre_blocks(nu, flat, kmax + 1))
    return out.reshape((kmax + 1,) + t.shape)


def sine_integral(x):
    """Si(x) = integral_0^x sin(t)/t dt for x >= 0.

    Delegates to the Cephes ``sici`` routine (series below 4, auxiliary
    f/g rational approximations above), accurate to ~1e-15.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("sine_integral is defined here for x >= 0")
    return special.sici(x)[0][()]


@dataclass(frozen=True)
class QuadratureRule:
    """A fixed interpolatory rule: integral f w ~ sum(weights * f(nodes)).

    ``kind`` is ``"legendre"`` (weight 1 on [lo, hi]) or ``"laguerre"``
    (weight t^nu e^{-t} on [0, inf)).
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    nu: float = 0.0

    def __call__(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self):
        return len(self.nodes)


def gauss_legendre(n, lo=-1.0, hi=1.0) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped to [lo, hi]."""
    x, w = special.roots_legendre(n)
    half = 0.5 * (hi - lo)
    return QuadratureRule(lo + half * (x + 1.0), half * w, "legendre")


def gauss_laguerre(n, nu=0.0) -> QuadratureRule:
    """n-point generalised Gauss-Laguerre rule for the weight t^nu e^{-t}."""
    if nu <= -1:
        raise DomainError(f"Laguerre parameter nu={nu} must exceed -1")
    x, w = special.roots_genlaguerre(n, nu)
    return QuadratureRule(x, w, "laguerre", float(nu))


def panel_rule(breaks, order=20) -> QuadratureRule:
    """Composite Gauss-Legendre rule over consecutive intervals of ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = special.roots_legendre(order)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x + 1.0)).ravel()
    weights = (half * w).ravel()
    return QuadratureRule(nodes, weights, "legendre")


def adaptive_quad(f, lo, hi, tol=QUAD_TOL, limit=200, points=None):
    """Adaptive Gauss-Kronrod integration (QUADPACK) of a scalar function.

    ``hi`` may be ``numpy.inf``; QUADPACK then maps the half line onto
    (0, 1]. Returns ``(value, error_estimate)``.

    Raises
    ------
    ConvergenceError
        If the requested tolerance was not met; ``estimate`` and ``error``
        carry the best result available.
    """
    import warnings

    kwargs = dict(epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    if points is not None and np.isfinite(hi):
        kwargs["points"] = points
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, lo, hi, **kwargs)
    value, err, info = out[0], out[1], out[2]
    ier = 0 if len(out) == 3 else 1
    if ier or err > max(tol, tol * abs(value)):
        raise ConvergenceError(
            f"adaptive_quad did not reach tol={tol:g} on [{lo}, {hi}] "
            f"(estimate {value:.12g}, error {err:.3g})",
            estimate=value,
            error=err,
        )
    return value, err
