"""Bayesian bootstrap sampling of posterior functionals.

One replicate: draw m points from the posterior mean F*, attach
stick-breaking Beta weights governed by the posterior precision c*, and
evaluate the functional on the resulting weighted distribution.  Replicate b
always consumes RNG stream ``base + b`` (two-sample runs interleave streams
``base + 2b`` and ``base + 2b + 1``), so output is independent of batching.

The classical special cases are thin wrappers: uniform-Dirichlet resampling
for complete data, the vanishing-precision limit for censored data, and the
proper Dirichlet-process bootstrap for a constant precision ``k``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .data import SurvivalDataset
from .distributions import (CenteringDistribution, ConstantPrecision, PriorSpec,
                            exp_with_median)
from .errors import (DegenerateConfigurationWarning, EvaluationError,
                     NumericDomainError, UnsupportedConfigurationError)
from .functionals import FunctionalSpec, evaluate
from .numerics import RngStream, beta_sample
from .posterior import PosteriorRep, compute_posterior
from .sampler import draw_support_batch

DEFAULT_M = 1_000
DEFAULT_DRAWS = 10_000
VANISHING_PRECISION = 1e-8
_WEIGHT_TOL = 1e-12
_MAX_FAILED_FRACTION = 1e-3
_CHUNK = 256


class WeightedDistribution:
    """Discrete distribution: sorted distinct support with unit-sum weights."""

    def __init__(self, support, weights):
        support = np.asarray(support, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if support.shape != weights.shape or support.ndim != 1 or support.size == 0:
            raise NumericDomainError("support and weights must be matching nonempty vectors")
        if np.any(np.diff(support) <= 0):
            raise NumericDomainError("support must be strictly increasing")
        if np.any(weights < 0):
            raise NumericDomainError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > _WEIGHT_TOL:
            raise NumericDomainError(f"weights must sum to 1, got {weights.sum()!r}")
        self.support = support
        self.weights = weights

    def __repr__(self):
        return f"WeightedDistribution(d={self.support.size})"

    @classmethod
    def from_values(cls, values, weights=None) -> "WeightedDistribution":
        """Merge duplicate values, summing their weights (uniform by default)."""
        values = np.asarray(values, dtype=float)
        if weights is None:
            weights = np.full(values.shape, 1.0 / values.size)
        support, inverse = np.unique(values, return_inverse=True)
        merged = np.bincount(inverse, weights=np.asarray(weights, dtype=float))
        return cls(support, merged)

    def integrate(self, h: Callable) -> float:
        """Weight-sum of h over the support."""
        return float(np.dot(np.asarray(h(self.support), dtype=float), self.weights))

    def cdf(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.support, xs, side="right")
        vals = np.concatenate(([0.0], np.cumsum(self.weights)))[idx]
        return float(vals[0]) if np.ndim(x) == 0 else vals


@dataclass
class SampleResult:
    """Functional samples plus the count of draws excluded as non-evaluable."""

    values: np.ndarray
    excluded: int = 0

    def __len__(self):
        return self.values.size


def _stick_break(support: np.ndarray, counts: np.ndarray, c_values: np.ndarray,
                 m: int, gen: np.random.Generator) -> np.ndarray:
    """Stick-breaking weights for one replicate.

    alpha_i = c*(X_i) dF_m(X_i), beta_i = c*(X_i) (1 - F_m(X_i)); the final
    stick is forced to 1 exactly (its beta parameter is zero), so the weights
    always telescope to unit mass.
    """
    d = support.size
    if d == 1:
        return np.ones(1)
    mult = counts / m
    surv = (m - np.cumsum(counts)) / m
    alpha = c_values * mult[:-1]
    beta = c_values * surv[:-1]
    u = np.atleast_1d(beta_sample(alpha, beta, gen))
    u = np.concatenate((u, [1.0]))
    return u * np.concatenate(([1.0], np.cumprod(1.0 - u[:-1])))


def bsb_draw(post: PosteriorRep, m: int, rng: RngStream) -> WeightedDistribution:
    """One weighted-distribution draw approximating the posterior law of G."""
    if m < 1:
        raise NumericDomainError(f"m must be at least 1, got {m}")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    x = draw_support_batch(post, gen, m)
    support, counts = np.unique(x, return_counts=True)
    c_values = np.atleast_1d(post.c_star(support[:-1])) if support.size > 1 else np.empty(0)
    z = _stick_break(support, counts, c_values, m, gen)
    return WeightedDistribution(support, z)


def _finish_replicates(post: PosteriorRep, x_rows: np.ndarray, m: int,
                       gens: Sequence[np.random.Generator]) -> list:
    """Turn a block of support draws into weighted distributions.

    The posterior precision is evaluated in one concatenated call per block;
    the Beta draws still come from each replicate's own generator.
    """
    uniq = [np.unique(row, return_counts=True) for row in x_rows]
    heads = [s[:-1] for s, _ in uniq]
    lengths = [h.size for h in heads]
    if sum(lengths) > 0:
        all_c = np.atleast_1d(post.c_star(np.concatenate(heads)))
        c_split = np.split(all_c, np.cumsum(lengths)[:-1])
    else:
        c_split = [np.empty(0)] * len(uniq)
    out = []
    for (support, counts), c_values, gen in zip(uniq, c_split, gens):
        z = _stick_break(support, counts, c_values, m, gen)
        out.append(WeightedDistribution(support, z))
    return out


def _functional_loop(draw_block: Callable, eval_one: Callable, B: int,
                     label: str) -> SampleResult:
    values = []
    excluded = 0
    for start in range(0, B, _CHUNK):
        stop = min(start + _CHUNK, B)
        for g in draw_block(start, stop):
            try:
                values.append(eval_one(g))
            except EvaluationError:
                excluded += 1
    if excluded > _MAX_FAILED_FRACTION * B:
        raise EvaluationError(
            f"{label}: {excluded} of {B} draws failed evaluation "
            f"(more than {_MAX_FAILED_FRACTION:.1%})")
    return SampleResult(np.asarray(values), excluded)


def bsb_functional_sample(post: PosteriorRep, phi: FunctionalSpec, m: int = DEFAULT_M,
                          B: int = DEFAULT_DRAWS, rng: RngStream = RngStream(0)) -> SampleResult:
    """B independent bootstrap samples of a one-sample functional."""
    if phi.arity != 1:
        raise EvaluationError(f"{phi.name} is two-sample; use two_sample_bsb")
    if m < 1 or B < 1:
        raise NumericDomainError("m and B must be at least 1")

    def draw_block(start, stop):
        gens = [rng.shifted(b).generator() for b in range(start, stop)]
        rows = np.stack([draw_support_batch(post, g, m) for g in gens])
        return _finish_replicates(post, rows, m, gens)

    return _functional_loop(draw_block, lambda g: evaluate(phi, g), B, phi.name)


def two_sample_bsb(post1: PosteriorRep, post2: PosteriorRep, phi: FunctionalSpec,
                   m: int = DEFAULT_M, B: int = DEFAULT_DRAWS,
                   rng: RngStream = RngStream(0)) -> SampleResult:
    """B bootstrap samples of a two-sample functional from independent groups.

    Group draws use disjoint interleaved stream ranges so the two weighted
    distributions in a replicate are independent.
    """
    if phi.arity != 2:
        raise EvaluationError(f"{phi.name} is one-sample; use bsb_functional_sample")
    if m < 1 or B < 1:
        raise NumericDomainError("m and B must be at least 1")

    def draw_block(start, stop):
        gens1 = [rng.shifted(2 * b).generator() for b in range(start, stop)]
        gens2 = [rng.shifted(2 * b + 1).generator() for b in range(start, stop)]
        rows1 = np.stack([draw_support_batch(post1, g, m) for g in gens1])
        rows2 = np.stack([draw_support_batch(post2, g, m) for g in gens2])
        return zip(_finish_replicates(post1, rows1, m, gens1),
                   _finish_replicates(post2, rows2, m, gens2))

    return _functional_loop(draw_block, lambda pair: evaluate(phi, pair[0], pair[1]),
                            B, phi.name)


def rubin_bootstrap(dataset: SurvivalDataset, B: int, phi: FunctionalSpec,
                    rng: RngStream = RngStream(0)) -> SampleResult:
    """Uniform-Dirichlet reweighting of complete (uncensored) observations."""
    if dataset.n == 0:
        raise UnsupportedConfigurationError("rubin_bootstrap needs at least one observation")
    if not dataset.events.all():
        raise UnsupportedConfigurationError(
            "rubin_bootstrap requires uncensored data; use lo_bootstrap for censored data")
    values = dataset.times
    ones = np.ones(dataset.n)

    def draw_block(start, stop):
        out = []
        for b in range(start, stop):
            w = rng.shifted(b).generator().dirichlet(ones)
            out.append(WeightedDistribution.from_values(values, w))
        return out

    return _functional_loop(draw_block, lambda g: evaluate(phi, g), B, phi.name)


def lo_bootstrap(dataset: SurvivalDataset, B: int, phi: FunctionalSpec,
                 m: int = DEFAULT_M, rng: RngStream = RngStream(0),
                 centering: CenteringDistribution | None = None) -> SampleResult:
    """Censored-data bootstrap as the vanishing-precision limit.

    Runs the beta-Stacy bootstrap with ``c == 1e-8``: the posterior mean then
    coincides with the Kaplan-Meier estimate to within that precision.  The
    centering distribution only matters for mass the estimate leaves beyond
    the data (it defaults to an exponential matched to the median observation).
    """
    if dataset.n == 0:
        raise UnsupportedConfigurationError("lo_bootstrap needs a nonempty dataset")
    if not dataset.events.any():
        warnings.warn("every observation is censored: bootstrap draws beyond the data "
                      "come entirely from the centering tail", DegenerateConfigurationWarning,
                      stacklevel=2)
    if centering is None:
        centering = exp_with_median(float(np.median(dataset.times)))
    prior = PriorSpec(ConstantPrecision(VANISHING_PRECISION), centering)
    post = compute_posterior(prior, dataset)
    return bsb_functional_sample(post, phi, m=m, B=B, rng=rng)


def proper_bayesian_bootstrap(k: float, centering: CenteringDistribution,
                              dataset: SurvivalDataset, B: int, phi: FunctionalSpec,
                              m: int = DEFAULT_M,
                              rng: RngStream = RngStream(0)) -> SampleResult:
    """Dirichlet-process bootstrap with prior mass ``k`` on ``centering``.

    Complete data only; the posterior process is Dirichlet with total mass
    ``k + n`` centered on the prior/empirical mixture.
    """
    if not k > 0:
        raise NumericDomainError(f"k must be positive, got {k}")
    if dataset.n and not dataset.events.all():
        raise UnsupportedConfigurationError(
            "proper_bayesian_bootstrap requires uncensored data")
    prior = PriorSpec(ConstantPrecision(k), centering)
    post = compute_posterior(prior, dataset)
    return bsb_functional_sample(post, phi, m=m, B=B, rng=rng)
