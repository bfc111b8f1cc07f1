"""Independent validation tools.

A grid simulator draws whole posterior distribution functions by chaining
Beta hazard increments over a refined time grid (exact when the posterior
mean is discrete, convergent under refinement otherwise); a closed-form
Laplace functional covers discrete priors; and an exact two-sample
Kolmogorov-Smirnov statistic compares sample distributions.  None of these
share code with the bootstrap path they are used to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from .bootstrap import WeightedDistribution
from .distributions import PriorSpec
from .errors import (DegenerateConfigurationError, NumericDomainError,
                     UnsupportedConfigurationError)
from .functionals import FunctionalSpec, evaluate
from .numerics import ORACLE_STREAM_BASE, RngLike, RngStream, as_generator, beta_sample
from .posterior import PosteriorRep

_EXHAUSTED = 1e-15
DEFAULT_MESH_POINTS = 2_000


@dataclass
class GridPosteriorDraw:
    """One simulated posterior distribution function, tabulated on a grid."""

    grid: np.ndarray
    survival: np.ndarray

    def cdf_values(self) -> np.ndarray:
        return 1.0 - self.survival

    def to_weighted(self, tail_time: float | None = None) -> WeightedDistribution:
        """Weighted distribution with the beyond-grid mass lumped at ``tail_time``.

        Only valid for functionals whose integrands are constant past the grid.
        """
        if tail_time is None:
            tail_time = float(self.grid[-1]) + 1.0
        if tail_time <= self.grid[-1]:
            raise NumericDomainError("tail_time must exceed the grid horizon")
        jumps = np.diff(np.concatenate(([1.0], self.survival)))
        weights = np.concatenate((-jumps, [self.survival[-1]]))
        support = np.concatenate((self.grid, [tail_time]))
        weights = np.clip(weights, 0.0, None)
        weights /= weights.sum()
        return WeightedDistribution(support, weights)


class GridPosteriorSampler:
    """Repeated grid draws from one posterior, with the Beta parameters precomputed.

    The grid is the union of the posterior atoms and a uniform mesh on
    (0, horizon]; per cell the hazard increment is
    Beta(c*(t) dF*(t), c*(t) (1 - F*(t))), drawn independently.
    """

    def __init__(self, post: PosteriorRep, horizon: float,
                 grid_width: float | None = None,
                 mesh_points: int = DEFAULT_MESH_POINTS):
        if horizon <= 0:
            raise NumericDomainError(f"horizon must be positive, got {horizon}")
        if grid_width is None:
            grid_width = horizon / mesh_points
        if grid_width <= 0:
            raise NumericDomainError(f"grid width must be positive, got {grid_width}")
        mesh = np.arange(grid_width, horizon + 0.5 * grid_width, grid_width)
        mesh[-1] = horizon
        atoms = post.atom_times[(post.atom_times > 0) & (post.atom_times <= horizon)]
        grid = np.union1d(mesh, atoms)
        cdf = np.atleast_1d(post.cdf(grid))
        if 1.0 - cdf[-1] <= _EXHAUSTED:
            raise DegenerateConfigurationError(
                f"posterior mass is exhausted before the horizon {horizon}")
        increments = np.diff(np.concatenate(([0.0], cdf)))
        increments = np.clip(increments, 0.0, None)
        c_star = np.atleast_1d(post.c_star(grid))
        self.post = post
        self.horizon = float(horizon)
        self.grid = grid
        self._alpha = c_star * increments
        self._beta = c_star * (1.0 - cdf)
        self._flat = self._alpha <= 0  # cells with no posterior mass never jump

    def draw(self, rng: RngLike) -> GridPosteriorDraw:
        gen = as_generator(rng)
        v = np.empty(self.grid.shape)
        live = ~self._flat
        v[self._flat] = 0.0
        v[live] = np.atleast_1d(beta_sample(self._alpha[live], self._beta[live], gen))
        return GridPosteriorDraw(self.grid, np.cumprod(1.0 - v))

    def functional_sample(self, phi: FunctionalSpec, n_draws: int,
                          rng: RngStream = RngStream(0)) -> np.ndarray:
        """n_draws independent functional values, draw i on its own stream.

        The integrands must not distinguish points beyond the horizon.
        """
        tail = self.horizon + 1.0
        out = np.empty(n_draws)
        for i in range(n_draws):
            g = self.draw(rng.shifted(ORACLE_STREAM_BASE + i)).to_weighted(tail)
            out[i] = evaluate(phi, g)
        return out


def grid_posterior_draw(post: PosteriorRep, grid_width: float, horizon: float,
                        rng: RngLike) -> GridPosteriorDraw:
    """Single grid draw; see :class:`GridPosteriorSampler` for repeated use."""
    return GridPosteriorSampler(post, horizon, grid_width=grid_width).draw(rng)


# --- Laplace functional for discrete priors ----------------------------------

def _h_on_atoms(prior: PriorSpec, h) -> np.ndarray:
    atoms = prior.F.atoms
    values = np.asarray([h(a) for a in atoms] if callable(h) else h, dtype=float)
    if values.shape != atoms.shape:
        raise NumericDomainError("h must provide one value per prior atom")
    if np.any(values < 0):
        raise NumericDomainError("h must be nonnegative")
    return values


def laplace_discrete(prior: PriorSpec, h) -> float:
    """E[exp(-Zh)] for Z the cumulative log-survival process under a discrete prior.

    ``h`` gives nonnegative values on the prior atoms (array or callable).
    Independence of the per-atom Beta jumps gives the product of moments
    E[(1-U)^h] = B(alpha, beta+h) / B(alpha, beta); the final atom has
    beta = 0, hence U = 1 and the product vanishes unless h is zero there.
    """
    if prior.F.is_continuous:
        raise UnsupportedConfigurationError("laplace_discrete requires a discrete centering")
    hv = _h_on_atoms(prior, h)
    atoms, masses = prior.F.atoms, prior.F.masses
    if hv[-1] > 0:
        return 0.0
    c = np.atleast_1d(prior.c(atoms))
    alpha = c * masses
    beta = c * (1.0 - np.cumsum(masses))
    log_factors = betaln(alpha[:-1], beta[:-1] + hv[:-1]) - betaln(alpha[:-1], beta[:-1])
    return float(np.exp(np.sum(log_factors)))


def laplace_discrete_mc(prior: PriorSpec, h, n_draws: int, rng: RngLike) -> tuple:
    """Monte Carlo estimate of the same Laplace functional: ``(mean, se)``."""
    if prior.F.is_continuous:
        raise UnsupportedConfigurationError("laplace_discrete_mc requires a discrete centering")
    hv = _h_on_atoms(prior, h)
    atoms, masses = prior.F.atoms, prior.F.masses
    gen = as_generator(rng)
    c = np.atleast_1d(prior.c(atoms))
    alpha = c * masses
    beta = c * (1.0 - np.cumsum(masses))
    u = np.empty((n_draws, atoms.size))
    u[:, :-1] = gen.beta(alpha[:-1], beta[:-1], size=(n_draws, atoms.size - 1)) \
        if atoms.size > 1 else 0.0
    u[:, -1] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.prod(np.where(hv > 0, (1.0 - u) ** hv, 1.0), axis=1)
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / np.sqrt(n_draws)) if n_draws > 1 else np.inf
    return mean, se


# --- exact two-sample Kolmogorov-Smirnov statistic ----------------------------

def sup_distance_to_km(post: PosteriorRep, km, lo: float, hi: float) -> float:
    """Exact sup of |F*(x) - KM(x)| over [lo, hi].

    Both functions are right-continuous and monotone between observation
    times, so the supremum is attained at an observation time, at one of its
    left limits, or at an interval endpoint.
    """
    if hi <= lo:
        raise NumericDomainError(f"empty interval [{lo}, {hi}]")
    times = post.dataset.times
    inner = times[(times > lo) & (times <= hi)]
    points = np.unique(np.concatenate((inner, [max(lo, 0.0), hi])))
    at = np.abs(np.atleast_1d(post.cdf(points)) - np.atleast_1d(km.cdf(points)))
    left_pts = np.unique(np.concatenate((inner, [hi])))
    at_left = np.abs(np.atleast_1d(post.cdf_left(left_pts))
                     - np.atleast_1d(km.cdf_left(left_pts)))
    return float(max(at.max(), at_left.max()))


def ks_two_sample(a, b) -> float:
    """Sup distance between the empirical CDFs of two samples, computed exactly."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise NumericDomainError("ks_two_sample requires nonempty samples")
    merged = np.concatenate((a, b))
    cdf_a = np.searchsorted(a, merged, side="right") / a.size
    cdf_b = np.searchsorted(b, merged, side="right") / b.size
    return float(np.abs(cdf_a - cdf_b).max())


def ks_one_sample(sample, cdf, cdf_left=None) -> float:
    """Sup distance between a sample's empirical CDF and a reference CDF.

    Handles atoms correctly: at every distinct sample value both the
    right value and the left limit of the two step functions are compared
    (``cdf_left`` defaults to ``cdf`` for continuous references).
    """
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise NumericDomainError("ks_one_sample requires a nonempty sample")
    values, counts = np.unique(x, return_counts=True)
    cum = np.cumsum(counts)
    ref_right = np.atleast_1d(cdf(values))
    ref_left = np.atleast_1d((cdf_left or cdf)(values))
    d_right = np.abs(cum / x.size - ref_right).max()
    d_left = np.abs((cum - counts) / x.size - ref_left).max()
    return float(max(d_right, d_left))
