"""Finite-N kernels, Pfaffians and n-level correlation functions.

R_n is the quaternion determinant of the self-dual 2x2 blocks

    sigma(x, y) = [[S_N(x, y), A_N(x, y)],
                   [B_N(x, y), S_N(y, x)]],

evaluated as Pf(Z sigma) with Z = blockdiag([[0, 1], [-1, 0]]). For n = 2
this gives R_2 = S(x,x) S(y,y) - S(x,y) S(y,x) + A(x,y) B(x,y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre
from scipy import special

from . import specfun
from .errors import DegenerateInputError, DomainError, UnsupportedError
from .skewpoly import EnsembleSpec, Family, Route, SkewFunctionSet

__all__ = [
    "AntisymmetricMatrix",
    "KernelEvaluation",
    "N2JpdOracle",
    "TAU_MIN",
    "correlation_Rn",
    "kernel_eval",
    "kernel_matrices",
    "level_density",
    "lue_christoffel_darboux",
    "pfaffian",
    "quaternion_block_matrix",
]

TAU_MIN = 1e-3


@dataclass(frozen=True)
class KernelEvaluation:
    s_xy: float
    s_yx: float
    a_xy: float
    b_xy: float


class AntisymmetricMatrix:
    """Even-dimensional antisymmetric matrix built from its strict upper triangle."""

    def __init__(self, upper):
        upper = np.asarray(upper, dtype=float)
        n = upper.shape[0]
        if upper.shape != (n, n):
            raise ValueError("expected a square array")
        if n % 2:
            raise ValueError(f"antisymmetric matrix must have even dimension, got {n}")
        m = np.triu(upper, 1)
        self.array = m - m.T

    @property
    def dimension(self):
        return self.array.shape[0]


def pfaffian(m):
    """Pfaffian of an antisymmetric matrix by skew Gaussian elimination.

    Reduces M to a tridiagonal skew form M = L T L^T with partial pivoting
    (Parlett-Reid), then Pf(M) = prod of T[2k, 2k+1] times the pivot signs.
    O(n^3). The sign convention is Pf([[0, c], [-c, 0]]) = c.
    """
    if isinstance(m, AntisymmetricMatrix):
        m = m.array
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("pfaffian needs a square matrix")
    if n % 2:
        raise ValueError(f"pfaffian needs even dimension, got {n}")
    if n == 0:
        return 1.0
    pf = 1.0
    for k in range(0, n - 1, 2):
        p = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if p != k + 1:
            a[[k + 1, p], :] = a[[p, k + 1], :]
            a[:, [k + 1, p]] = a[:, [p, k + 1]]
            pf = -pf
        piv = a[k, k + 1]
        if piv == 0.0:
            return 0.0
        pf *= piv
        if k + 2 < n:
            tau = a[k, k + 2:] / piv
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


def quaternion_block_matrix(s, a, b):
    """2n x 2n antisymmetric matrix Z sigma from n x n arrays of S, A, B.

    ``s[i, j] = S(x_i, x_j)`` etc. Block (i, j) is
    [[B(x_i,x_j), S(x_j,x_i)], [-S(x_i,x_j), -A(x_i,x_j)]].
    """
    n = s.shape[0]
    m = np.empty((2 * n, 2 * n))
    m[0::2, 0::2] = b
    m[0::2, 1::2] = s.T
    m[1::2, 0::2] = -s
    m[1::2, 1::2] = -a
    return m


def kernel_matrices(points, fs: SkewFunctionSet, with_b=True, tau_min=TAU_MIN):
    """S, A, B kernel matrices over ``points`` (B is None if not requested)."""
    x = np.atleast_1d(np.asarray(points, dtype=float))
    half = fs.spec.N // 2
    tab = fs.table(x, fs.spec.N - 1)
    ev, od = slice(0, 2 * half, 2), slice(1, 2 * half, 2)
    phi_e, phi_o = tab.phi[ev], tab.phi[od]
    psi_e, psi_o = tab.psi[ev], tab.psi[od]
    s = phi_e.T @ psi_o - phi_o.T @ psi_e
    a = phi_o.T @ phi_e - phi_e.T @ phi_o
    b = None
    if with_b:
        if fs.tau < tau_min:
            raise UnsupportedError(
                f"B_N needs tau >= {tau_min:g} (series diverges at tau = 0); got tau={fs.tau:g}")
        b = fs.b_tail(x)
    return s, a, b


def kernel_eval(x, y, fs: SkewFunctionSet, tau_min=TAU_MIN) -> KernelEvaluation:
    s, a, b = kernel_matrices([x, y], fs, tau_min=tau_min)
    return KernelEvaluation(s[0, 1], s[1, 0], a[0, 1], b[0, 1])


def correlation_Rn(points, fs: SkewFunctionSet, tau_min=TAU_MIN):
    """n-level correlation function R_n(x_1, ..., x_n; tau)."""
    x = np.atleast_1d(np.asarray(points, dtype=float))
    n = len(x)
    if not 1 <= n <= fs.spec.N:
        raise DomainError(f"need 1 <= n <= N, got n={n}")
    if n == 1:
        return float(level_density(x, fs)[0])
    gaps = np.abs(x[:, None] - x[None, :])[np.triu_indices(n, 1)]
    if gaps.min() < 1e-12:
        raise DegenerateInputError("correlation_Rn needs distinct points")
    s, a, b = kernel_matrices(x, fs, tau_min=tau_min)
    return pfaffian(quaternion_block_matrix(s, a, b))


def level_density(x, fs: SkewFunctionSet):
    """R_1(x; tau) = S_N(x, x), vectorised over ``x``."""
    x = np.asarray(x, dtype=float)
    tab = fs.table(x.ravel(), fs.spec.N - 1)
    phi, psi = tab.phi, tab.psi
    r1 = (phi[0::2] * psi[1::2]).sum(0) - (phi[1::2] * psi[0::2]).sum(0)
    return r1.reshape(x.shape)


def lue_christoffel_darboux(x, y, N, a):
    """Unitary Laguerre kernel sum_{k<N} u_k(x) u_k(y) for weight x^{2a+1} e^{-2x}.

    Built directly from scipy's Laguerre polynomials and log-gamma norms,
    independently of the recurrences in :mod:`specfun`.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nu = 2 * a + 1
    total = 0.0
    for k in range(N):
        lognorm = 0.5 * (special.gammaln(k + 1) - special.gammaln(k + nu + 1))
        def u(z):
            return np.exp(lognorm + (a + 1) * math.log(2) + (a + 0.5) * np.log(z) - z) * \
                special.eval_genlaguerre(k, nu, 2 * z)
        total = total + u(x) * u(y)
    return total


def _hille_hardy(x, z, tau, a):
    """Heat kernel sum_k e^{-k tau} u_k(x) u_k(z) in closed form.

    Hille-Hardy formula with t = 2x, s = 2z, rho = e^{-tau}:
    sum rho^k ell_k(t) ell_k(s) = rho^{-nu/2} / (1 - rho)
        * exp(-(t + s)(1 + rho) / (2(1 - rho))) * I_nu(2 sqrt(t s rho) / (1 - rho)).
    """
    nu = 2 * a + 1
    rho = math.exp(-tau)
    t = 2 * np.asarray(x, dtype=float)[:, None]
    s = 2 * np.asarray(z, dtype=float)[None, :]
    arg = 2 * np.sqrt(t * s * rho) / (1 - rho)
    expo = -(t + s) * (1 + rho) / (2 * (1 - rho)) + arg
    return 2.0 * rho ** (-nu / 2) / (1 - rho) * special.ive(nu, arg) * np.exp(expo)


def _cumulative_matrix(breaks, order):
    """Matrix C with (C f)_i ~ integral_{breaks[0]}^{node_i} f over composite GL nodes."""
    xg, wg = special.roots_legendre(order)
    # Lagrange-basis antiderivatives on [-1, 1]
    vander = legendre.legvander(xg, order - 1)
    inv = np.linalg.inv(vander)
    ints = np.empty((order, order))
    for mdeg in range(order):
        c = np.zeros(order)
        c[mdeg] = 1.0
        ints[:, mdeg] = legendre.legval(xg, legendre.legint(c, lbnd=-1))
    local = ints @ inv
    npan = len(breaks) - 1
    size = npan * order
    cmat = np.zeros((size, size))
    for p in range(npan):
        half = 0.5 * (breaks[p + 1] - breaks[p])
        rows = slice(p * order, (p + 1) * order)
        cmat[rows, p * order:(p + 1) * order] = half * local
        if p:
            # full integrals over earlier panels
            for q in range(p):
                hq = 0.5 * (breaks[q + 1] - breaks[q])
                cmat[rows, q * order:(q + 1) * order] = hq * wg
    return cmat


class N2JpdOracle:
    """Brute-force R_1, R_2 for N = 2 from the crossover jpd.

    P(x1, x2) ~ (x1 - x2) G(x1, x2) w(x1) w(x2) with
    G = O_x O_y eps(x - y), where each O is applied through the closed-form
    heat kernel of the one-body Hamiltonian and the eps-integral is done by
    spectral cumulative quadrature. Normalisation is fixed numerically.
    Shares no code with the skew-orthogonal construction.
    """

    def __init__(self, spec: EnsembleSpec, x_max=70.0, order=16):
        if spec.N != 2 or spec.family is not Family.LAGUERRE or spec.route is not Route.OE_UE:
            raise UnsupportedError("the jpd oracle covers N=2 Laguerre OE->UE only")
        self.spec = spec
        # graded panels near the hard edge, unit panels in the bulk
        near = np.geomspace(1e-4, 1.0, 12)
        breaks = np.concatenate([[0.0], near, np.arange(2.0, x_max + 1e-9, 1.0)])
        self.breaks = breaks
        rule = specfun.panel_rule(breaks, order)
        self.nodes, self.weights = rule.nodes, rule.weights
        self.cmat = _cumulative_matrix(breaks, order)
        self.norm = 1.0
        xs = self.nodes
        w = spec.weight(xs)
        if spec.tau == 0:
            # (1/2) |x - y| has a kink on the diagonal: integrate y < x cumulatively
            inner = (self.cmat * (xs[:, None] - xs[None, :])) @ w
            self.norm = float(self.weights @ (w * inner))
        else:
            g = self.G(xs, xs)
            dens = (xs[:, None] - xs[None, :]) * g * np.outer(w, w)
            self.norm = float(self.weights @ dens @ self.weights)

    def _v(self, x):
        z = self.nodes
        return _hille_hardy(x, z, self.spec.tau, self.spec.a) / np.sqrt(z)[None, :]

    def G(self, x, y):
        """G^(tau)(x_i, y_j) as a matrix; at tau = 0 this is eps(x - y)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if self.spec.tau == 0:
            return 0.5 * np.sign(x[:, None] - y[None, :])
        vx, vy = self._v(x), self._v(y)
        hy = vy @ self.cmat.T
        htot = vy @ self.weights
        inner = (hy - 0.5 * htot[:, None]) * self.weights[None, :]
        return np.sqrt(np.outer(x, y)) * (vx @ inner.T)

    def density(self, x1, x2):
        """Normalised jpd P(x1, x2)."""
        w = self.spec.weight
        g = self.G([x1], [x2])[0, 0]
        return float((x1 - x2) * g * w(x1) * w(x2) / self.norm)

    def R2(self, x1, x2):
        return 2.0 * self.density(x1, x2)

    def R1(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = self.spec.weight
        z = self.nodes
        g = self.G(x, z)
        p = (x[:, None] - z[None, :]) * g * np.outer(w(x), w(z)) / self.norm
        return 2.0 * (p @ self.weights)
