"""Monte-Carlo sampling of crossover Wishart ensembles and two-point estimators.

Random numbers
--------------
Per-sample seeds are the 64-bit words of ``SeedSequence(master).generate_state``
(:func:`derive_seeds`). Each sample draws from ``Generator(PCG64(seed))`` with
numpy's ziggurat normal sampler, so an eigenvalue list is a pure function of
(shape, tau, seed) for a fixed numpy major version (:data:`RNG_DESCRIPTION`).
"""

from __future__ import annotations

import csv
import gzip
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.interpolate import PchipInterpolator

from . import __version__, specfun
from .errors import DegenerateInputError, DomainError
from .skewpoly import EnsembleSpec, Family, Route
from .universal import UniversalKernel, lambda_map

__all__ = [
    "RNG_DESCRIPTION",
    "ComparisonReport",
    "SpectralSample",
    "Staircase",
    "TwoPointEstimate",
    "UnfoldedEnsemble",
    "UnfoldedSpectrum",
    "compare_two_point",
    "crossover_quaternion_matrix",
    "crossover_wishart_matrix",
    "derive_seeds",
    "estimate_two_point",
    "hermitian_eigenvalues",
    "kramers_splitting",
    "ks_distance",
    "load_samples",
    "local_lambdas",
    "predicted_lambda",
    "sample_crossover_quaternion",
    "sample_crossover_wishart",
    "sample_ensemble",
    "save_samples",
    "spacings",
    "surmise_cdf",
    "surmise_pdf",
    "tau_for_lambda",
    "unfold",
]

RNG_DESCRIPTION = f"SeedSequence->PCG64, ziggurat normals, numpy {np.__version__.split('.')[0]}.x"


def derive_seeds(master_seed, n):
    """n per-sample 64-bit seeds split deterministically from ``master_seed``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return [int(s) for s in np.random.SeedSequence(int(master_seed)).generate_state(n, np.uint64)]


def _generator(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class SpectralSample:
    eigenvalues: np.ndarray
    seed: int
    spec: EnsembleSpec

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        want = self.spec.N * (2 if self.spec.route is Route.SE_UE else 1)
        if ev.shape != (want,):
            raise DomainError(f"expected {want} eigenvalues, got shape {ev.shape}")
        if np.any(np.diff(ev) < 0):
            raise DomainError("eigenvalues must be ascending")
        if ev.size and ev[0] < -1e-10 * max(1.0, ev[-1]):
            raise DomainError(f"negative eigenvalue {ev[0]:g} in a Wishart spectrum")
        object.__setattr__(self, "eigenvalues", ev)


def hermitian_eigenvalues(h, tol=1e-12):
    """Ascending eigenvalues of a self-adjoint matrix (LAPACK ``heevd``/``syevd``)."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.abs(h).max(initial=0.0)))
    if np.abs(h - h.conj().T).max(initial=0.0) > tol * scale:
        raise DomainError("matrix is not self-adjoint")
    return np.linalg.eigvalsh(h)


def _check_shape(nprime, n, tau):
    if int(n) != n or n < 1:
        raise DomainError(f"n={n} must be a positive integer")
    if int(nprime) != nprime or nprime < n:
        raise DomainError(f"nprime={nprime} must be an integer >= n={n}")
    if not tau >= 0:
        raise DomainError(f"tau={tau} must be >= 0")


def _split_variances(tau):
    damp = math.exp(-tau)
    return (1 + damp) / 4, (1 - damp) / 4


def crossover_wishart_matrix(nprime, n, tau, seed):
    """A (nprime x n): Re/Im entries Gaussian with variances (1 +/- e^{-tau})/4."""
    _check_shape(nprime, n, tau)
    v_re, v_im = _split_variances(tau)
    rng = _generator(seed)
    a = math.sqrt(v_re) * rng.standard_normal((nprime, n))
    if v_im > 0:
        a = a + 1j * math.sqrt(v_im) * rng.standard_normal((nprime, n))
    return a


def sample_crossover_wishart(nprime, n, tau, seed) -> SpectralSample:
    """Eigenvalues of A^dagger A for A from :func:`crossover_wishart_matrix`."""
    a = crossover_wishart_matrix(nprime, n, tau, seed)
    ev = hermitian_eigenvalues(a.conj().T @ a)
    return SpectralSample(ev, int(seed), EnsembleSpec.wishart(nprime, n, tau, Route.OE_UE))


def _quaternion_embed(q):
    """(4, p, m) quaternion components -> (2p, 2m) complex matrix."""
    q0, q1, q2, q3 = q
    out = np.empty((2 * q0.shape[0], 2 * q0.shape[1]), dtype=complex)
    out[0::2, 0::2] = q0 + 1j * q1
    out[0::2, 1::2] = q2 + 1j * q3
    out[1::2, 0::2] = -q2 + 1j * q3
    out[1::2, 1::2] = q0 - 1j * q1
    return out


def crossover_quaternion_matrix(nprime, n, tau, seed):
    """A = Q1 + i Q2 as a 2 nprime x 2 n complex matrix.

    Q1, Q2 are quaternion-real nprime x n matrices whose four components have
    variance (1 + e^{-tau})/4 and (1 - e^{-tau})/4 respectively. At tau = 0, A
    is quaternion real (Kramers-degenerate A^dagger A); as tau grows the
    entries of A become i.i.d. complex Gaussians.
    """
    _check_shape(nprime, n, tau)
    v1, v2 = _split_variances(tau)
    rng = _generator(seed)
    a = _quaternion_embed(math.sqrt(v1) * rng.standard_normal((4, nprime, n)))
    if v2 > 0:
        a = a + 1j * _quaternion_embed(math.sqrt(v2) * rng.standard_normal((4, nprime, n)))
    return a


def sample_crossover_quaternion(nprime, n, tau, seed) -> SpectralSample:
    """The 2n eigenvalues of A^dagger A for A from :func:`crossover_quaternion_matrix`."""
    a = crossover_quaternion_matrix(nprime, n, tau, seed)
    ev = hermitian_eigenvalues(a.conj().T @ a)
    return SpectralSample(ev, int(seed), EnsembleSpec.wishart(nprime, n, tau, Route.SE_UE))


def sample_ensemble(nprime, n, tau, samples, seed, route=Route.OE_UE, workers=1):
    """``samples`` independent spectra; output does not depend on ``workers``."""
    if int(samples) != samples or samples < 1:
        raise DomainError(f"samples={samples} must be a positive integer")
    route = Route(route)
    _check_shape(nprime, n, tau)
    draw = sample_crossover_wishart if route is Route.OE_UE else sample_crossover_quaternion
    seeds = derive_seeds(seed, samples)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda s: draw(nprime, n, tau, s), seeds))
    return [draw(nprime, n, tau, s) for s in seeds]


def kramers_splitting(sample: SpectralSample):
    """Largest relative gap inside consecutive eigenvalue pairs (0, 1), (2, 3), ..."""
    ev = sample.eigenvalues
    if ev.size % 2:
        raise DomainError("Kramers pairing needs an even number of eigenvalues")
    return float(np.max(ev[1::2] - ev[0::2]) / max(abs(ev[-1]), np.finfo(float).tiny))


# -- unfolding ---------------------------------------------------------------

class Staircase:
    """Ensemble-averaged counting function N(x), smoothed by monotone PCHIP.

    Knots sit at pooled-eigenvalue quantiles, so every knot interval holds the
    same number of pooled levels.
    """

    def __init__(self, pooled, n_samples, knots):
        pooled = np.sort(np.asarray(pooled, dtype=float))
        total = pooled.size
        idx = np.unique(np.linspace(0, total - 1, knots).round().astype(int))
        xs = pooled[idx]
        ys = (idx + 0.5) / n_samples
        keep = np.concatenate([[True], np.diff(xs) > 0])
        xs, ys = xs[keep], ys[keep]
        self.levels_per_sample = total / n_samples
        self.lo, self.hi = xs[0], xs[-1]
        self._f = PchipInterpolator(xs, ys, extrapolate=True)
        self._inv = PchipInterpolator(ys, xs, extrapolate=True)

    def __call__(self, x):
        return self._f(x)

    def density(self, x, span=2.0):
        """Empirical R_1(x) as a central count difference over +-``span`` levels.

        The raw PCHIP slope follows knot-scale noise; differencing over a few
        mean spacings averages it out.
        """
        x = np.asarray(x, dtype=float)
        if np.any((x < self.lo) | (x > self.hi)):
            raise DomainError("density requested outside the sampled support")
        u = self._f(x)
        lo = np.maximum(u - span, self._f(self.lo))
        hi = np.minimum(u + span, self._f(self.hi))
        return ((hi - lo) / (self._inv(hi) - self._inv(lo)))[()]

    def inverse(self, u):
        return self._inv(u)


@dataclass(frozen=True)
class UnfoldedSpectrum:
    levels: np.ndarray
    window: float
    bounds: tuple


@dataclass(frozen=True)
class UnfoldedEnsemble:
    """Unfolded bulk spectra plus the staircase and route they came from."""

    spectra: tuple
    staircase: Staircase
    window: float
    bounds: tuple
    spec: EnsembleSpec

    def __iter__(self):
        return iter(self.spectra)

    def __len__(self):
        return len(self.spectra)

    def __getitem__(self, i):
        return self.spectra[i]

    @property
    def length(self):
        return self.bounds[1] - self.bounds[0]

    def bulk_center(self):
        """x at which the staircase passes half the level count."""
        return float(self.staircase.inverse(0.5 * self.staircase.levels_per_sample))


def unfold(samples, bulk_window=0.6, knots=None, min_samples=20) -> UnfoldedEnsemble:
    """Map each eigenvalue through the averaged staircase; keep the central bulk.

    Raises
    ------
    DegenerateInputError
        With fewer than ``min_samples`` spectra, or if samples mix specs.
    """
    samples = list(samples)
    if len(samples) < min_samples:
        raise DegenerateInputError(
            f"unfolding needs >= {min_samples} samples for a stable staircase, got {len(samples)}")
    if not 0 < bulk_window <= 1:
        raise DomainError("bulk_window must lie in (0, 1]")
    spec = samples[0].spec
    if any(s.spec != spec for s in samples):
        raise DegenerateInputError("samples passed to unfold do not share one spec")
    pooled = np.concatenate([s.eigenvalues for s in samples])
    m = pooled.size // len(samples)
    if knots is None:
        # ~4 knots per mean spacing, but >= 100 pooled levels per knot interval
        knots = int(min(4 * m, pooled.size // 100)) + 1
    stair = Staircase(pooled, len(samples), max(knots, 8))
    lo, hi = 0.5 * m * (1 - bulk_window), 0.5 * m * (1 + bulk_window)
    out = []
    for s in samples:
        u = stair(s.eigenvalues)
        out.append(UnfoldedSpectrum(u[(u >= lo) & (u <= hi)], bulk_window, (lo, hi)))
    return UnfoldedEnsemble(tuple(out), stair, bulk_window, (lo, hi), spec)


# -- estimators --------------------------------------------------------------

@dataclass(frozen=True)
class TwoPointEstimate:
    """Empirical two-point statistics; each table has columns (x, estimate, standard error).

    Y2 bins with no pairs have NaN estimate and error and are listed in
    ``empty_bins``; unpopulated spacing bins have density 0 and NaN error and
    are listed in ``empty_spacing_bins``.
    """

    y2_bins: np.ndarray
    sigma2: np.ndarray
    spacing_hist: np.ndarray
    n_samples: int
    r_edges: np.ndarray
    s_edges: np.ndarray
    empty_bins: tuple = ()
    empty_spacing_bins: tuple = ()

    def to_dict(self):
        def rows(t, keys):
            return [dict(zip(keys, (None if math.isnan(v) else float(v) for v in row))) for row in t]
        return {
            "n_samples": self.n_samples,
            "r_edges": [float(v) for v in self.r_edges],
            "s_edges": [float(v) for v in self.s_edges],
            "y2": rows(self.y2_bins, ("r", "y2", "se")),
            "sigma2": rows(self.sigma2, ("L", "sigma2", "se")),
            "spacing": rows(self.spacing_hist, ("s", "density", "se")),
            "empty_bins": list(self.empty_bins),
            "empty_spacing_bins": list(self.empty_spacing_bins),
        }

    @classmethod
    def from_dict(cls, d):
        def table(rows, keys):
            return np.array([[np.nan if r[k] is None else r[k] for k in keys] for r in rows], float)
        return cls(table(d["y2"], ("r", "y2", "se")), table(d["sigma2"], ("L", "sigma2", "se")),
                   table(d["spacing"], ("s", "density", "se")), int(d["n_samples"]),
                   np.asarray(d["r_edges"]), np.asarray(d["s_edges"]), tuple(d["empty_bins"]),
                   tuple(d.get("empty_spacing_bins", ())))


def _jackknife(block_sums, statistic):
    """Delete-one-block jackknife of ``statistic`` over additive block sums."""
    total = block_sums.sum(0)
    full = statistic(total)
    g = block_sums.shape[0]
    reps = np.array([statistic(total - b) for b in block_sums])
    se = np.sqrt((g - 1) / g * ((reps - reps.mean(0)) ** 2).sum(0))
    return full, se


def estimate_two_point(unfolded: UnfoldedEnsemble, r_bins=None, L_grid=(1, 2, 3, 4, 5),
                       s_bins=None, n_blocks=50, window_step=0.25) -> TwoPointEstimate:
    """Pair-count Y2, window-count Sigma^2 and spacing histogram with jackknife errors."""
    r_edges = np.round(np.arange(0, 3.0 + 1e-9, 0.1), 12) if r_bins is None else np.asarray(r_bins, float)
    s_edges = np.round(np.arange(0, 5.0 + 1e-9, 0.1), 12) if s_bins is None else np.asarray(s_bins, float)
    L_grid = np.asarray(L_grid, dtype=float)
    lo, hi = unfolded.bounds
    width = hi - lo
    if r_edges[-1] >= width or L_grid.max() >= width:
        raise DomainError(f"r and L grids must stay below the window length {width:g}")
    ns = len(unfolded)
    nb = len(r_edges) - 1
    nL = len(L_grid)
    nsb = len(s_edges) - 1
    starts = [np.arange(lo, hi - L + 1e-12, window_step) for L in L_grid]
    # per-sample additive statistics: pair counts | (windows, sum n, sum n^2) per L | spacing counts
    per = np.zeros((ns, nb + 3 * nL + nsb + 1))
    rmax = r_edges[-1]
    for i, spec in enumerate(unfolded):
        u = spec.levels
        row = per[i]
        k = 1
        while k < u.size:
            d = u[k:] - u[:-k]
            d = d[d < rmax]
            if d.size == 0:
                break
            row[:nb] += np.histogram(d, r_edges)[0]
            k += 1
        for j, (L, st) in enumerate(zip(L_grid, starts)):
            cnt = np.searchsorted(u, st + L, "left") - np.searchsorted(u, st, "left")
            row[nb + 3 * j:nb + 3 * j + 3] = (cnt.size, cnt.sum(), (cnt.astype(float) ** 2).sum())
        sp = np.diff(u)
        row[nb + 3 * nL:nb + 3 * nL + nsb] = np.histogram(sp, s_edges)[0]
        row[-1] = sp.size
    g = min(n_blocks, ns)
    blocks = np.array([b.sum(0) for b in np.array_split(per, g)])
    # expected unordered pairs at separation r inside a window of length W: (W - r) dr
    norm = width * np.diff(r_edges) - 0.5 * np.diff(r_edges**2)

    def y2(t, n):
        return 1.0 - t[:nb] / (n * norm)

    def sig2(t):
        out = np.empty(nL)
        for j in range(nL):
            c, s1, s2 = t[nb + 3 * j:nb + 3 * j + 3]
            out[j] = s2 / c - (s1 / c) ** 2
        return out

    def spacing(t):
        return t[nb + 3 * nL:nb + 3 * nL + nsb] / (t[-1] * np.diff(s_edges))

    sizes = np.array([len(b) for b in np.array_split(per, g)], dtype=float)
    aug = np.column_stack([blocks, sizes])
    y2_v, y2_se = _jackknife(aug, lambda t: y2(t[:-1], t[-1]))
    s2_v, s2_se = _jackknife(blocks, sig2)
    sp_v, sp_se = _jackknife(blocks, spacing)
    counts = blocks.sum(0)[:nb]
    empty = tuple(int(b) for b in np.flatnonzero(counts == 0))
    y2_v = np.where(counts == 0, np.nan, y2_v)
    y2_se = np.where(counts == 0, np.nan, y2_se)
    sp_counts = blocks.sum(0)[nb + 3 * nL:nb + 3 * nL + nsb]
    empty_sp = tuple(int(b) for b in np.flatnonzero(sp_counts == 0))
    sp_se = np.where(sp_counts == 0, np.nan, sp_se)
    rc = 0.5 * (r_edges[1:] + r_edges[:-1])
    sc = 0.5 * (s_edges[1:] + s_edges[:-1])
    return TwoPointEstimate(np.column_stack([rc, y2_v, y2_se]), np.column_stack([L_grid, s2_v, s2_se]),
                            np.column_stack([sc, sp_v, sp_se]), ns, r_edges, s_edges, empty, empty_sp)


# -- lambda targeting ----------------------------------------------------------

def _check_support(spec, x0):
    if x0 <= 0:
        raise DomainError(f"x0={x0} lies outside the Laguerre support (0, inf)")
    if spec.nprime is not None:
        scale = 1.0 if spec.route is Route.SE_UE else 0.5
        mult = 2 if spec.route is Route.SE_UE else 1
        edge = scale * (math.sqrt(mult * spec.nprime) + math.sqrt(mult * spec.N)) ** 2
        if x0 >= edge:
            raise DomainError(f"x0={x0} lies beyond the spectral edge {edge:g}")


def predicted_lambda(spec: EnsembleSpec, x0, density_estimate):
    """lambda = sqrt(tau x0 / 2) R_1(x0) at a Laguerre bulk point."""
    _check_support(spec, x0)
    return lambda_map(spec.tau, x0, density_estimate, Family.LAGUERRE)


def tau_for_lambda(lam, x0, density_estimate):
    """tau giving ``lam`` at x0 for the Laguerre family (inverse of :func:`predicted_lambda`)."""
    if lam < 0 or x0 <= 0 or density_estimate <= 0:
        raise DomainError("need lam >= 0, x0 > 0 and a positive density")
    return 2.0 * (lam / density_estimate) ** 2 / x0


# -- spacing references --------------------------------------------------------

def surmise_pdf(s, beta):
    """Wigner surmise p(s) for beta = 1 or 2; ``beta=0`` gives Poisson e^{-s}."""
    s = np.asarray(s, dtype=float)
    if beta == 0:
        return np.exp(-s)
    if beta == 1:
        return 0.5 * math.pi * s * np.exp(-0.25 * math.pi * s * s)
    if beta == 2:
        return 32 / math.pi**2 * s * s * np.exp(-4 * s * s / math.pi)
    raise DomainError(f"surmise available for beta in (0, 1, 2), got {beta}")


def surmise_cdf(s, beta):
    s = np.asarray(s, dtype=float)
    if beta == 0:
        return -np.expm1(-s)
    if beta == 1:
        return -np.expm1(-0.25 * math.pi * s * s)
    if beta == 2:
        return special.erf(2 * s / math.sqrt(math.pi)) - 4 * s / math.pi * np.exp(-4 * s * s / math.pi)
    raise DomainError(f"surmise available for beta in (0, 1, 2), got {beta}")


def ks_distance(values, cdf):
    """Kolmogorov-Smirnov distance between the empirical CDF of ``values`` and ``cdf``."""
    v = np.sort(np.asarray(values, dtype=float))
    n = v.size
    if n == 0:
        raise DegenerateInputError("no values for a KS distance")
    f = cdf(v)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def spacings(unfolded: UnfoldedEnsemble):
    """All nearest-neighbour spacings inside the bulk window."""
    return np.concatenate([np.diff(s.levels) for s in unfolded])


# -- analytic comparison -------------------------------------------------------

@dataclass(frozen=True)
class ComparisonReport:
    """Per-bin empirical vs analytic values; rows are (kind, x, empirical, se, analytic, z)."""

    rows: list
    lambdas: np.ndarray
    fraction_within: float
    threshold: float = 3.0

    def z(self, kind=None):
        return np.array([r[5] for r in self.rows if kind is None or r[0] == kind])


def local_lambdas(unfolded: UnfoldedEnsemble, tau, points=24):
    """lambda(x(u)) at ``points`` evenly spaced unfolded positions across the window."""
    lo, hi = unfolded.bounds
    u = lo + (np.arange(points) + 0.5) * (hi - lo) / points
    x = unfolded.staircase.inverse(u)
    dens = unfolded.staircase.density(x)
    return np.array([predicted_lambda(unfolded.spec.with_tau(tau), xi, di)
                     for xi, di in zip(x, dens)])


def analytic_two_point(lambdas, route, r_edges, L_grid, nodes=8):
    """Window-averaged analytic Y2 bin means and Sigma^2(L) over a set of local lambdas.

    Each local value uses the saturated (unitary) kernel above the overflow guard.
    """
    rule = specfun.gauss_legendre(nodes)
    lo, hi = r_edges[:-1, None], r_edges[1:, None]
    r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes
    w = 0.5 * rule.weights
    y2 = np.zeros(len(r_edges) - 1)
    s2 = np.zeros(len(L_grid))
    for lam in lambdas:
        kern = UniversalKernel(route, float(lam), saturate=True)
        y2 += kern.Y2(r) @ w
        s2 += np.array([kern.number_variance(L, method="panel") for L in L_grid])
    return y2 / len(lambdas), s2 / len(lambdas)


def compare_two_point(est: TwoPointEstimate, lambdas, route=Route.OE_UE, threshold=3.0):
    """z-scores of an estimate against the lambda-averaged analytic curves."""
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    y2_a, s2_a = analytic_two_point(lambdas, Route(route), est.r_edges, est.sigma2[:, 0])
    rows = []
    for (r, v, se), a in zip(est.y2_bins, y2_a):
        rows.append(("y2", float(r), float(v), float(se), float(a), float((v - a) / se)))
    for (L, v, se), a in zip(est.sigma2, s2_a):
        rows.append(("sigma2", float(L), float(v), float(se), float(a), float((v - a) / se)))
    z = np.array([r[5] for r in rows])
    frac = float(np.mean(np.abs(z[np.isfinite(z)]) <= threshold))
    return ComparisonReport(rows, lambdas, frac, threshold)


# -- archives ------------------------------------------------------------------

def save_samples(path, samples, extra=None):
    """Write spectra as gzip CSV (seed, eigenvalues...) under a ``#``-JSON header line."""
    samples = list(samples)
    if not samples:
        raise DegenerateInputError("nothing to save")
    spec = samples[0].spec
    meta = {
        "version": __version__,
        "rng": RNG_DESCRIPTION,
        "spec": {"N": spec.N, "nprime": spec.nprime, "tau": spec.tau, "route": spec.route.value},
    }
    if extra:
        meta.update(extra)
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed"] + [f"x{i}" for i in range(samples[0].eigenvalues.size)])
    for s in samples:
        writer.writerow([s.seed] + [repr(float(v)) for v in s.eigenvalues])
    with gzip.open(path, "wt", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def load_samples(path):
    """Inverse of :func:`save_samples`; returns (samples, metadata)."""
    with gzip.open(path, "rt", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise DomainError(f"{path} has no metadata header")
        meta = json.loads(first[2:])
        reader = csv.reader(fh)
        next(reader)
        sp = meta["spec"]
        spec = EnsembleSpec.wishart(sp["nprime"], sp["N"], sp["tau"], sp["route"])
        samples = [SpectralSample(np.array([float(v) for v in row[1:]]), int(row[0]), spec)
                   for row in reader]
    return samples, meta
