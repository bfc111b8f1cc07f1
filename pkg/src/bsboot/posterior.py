"""Exact posterior of the beta-Stacy process under right-censored data.

Given a prior ``(c, F)`` and a dataset, the posterior is again beta-Stacy
with updated pair ``(c*, F*)``.  The posterior mean ``F*`` decomposes into

* a discrete part ``F*_d`` with atoms wherever the prior has an atom or an
  uncensored event occurred, built from discrete hazards
  ``h = (c dF + dN) / (c S(t-) + M)``; and
* a continuous part ``F*_c = 1 - exp(-H)``, where ``H`` integrates the
  continuous prior hazard damped by the at-risk count,
  ``H(x) = int_0^x c f / (c (1 - F) + M)``.

``M(t)`` is piecewise constant between observation times, so the integrand
is smooth on segments delimited by observation times (and precision
breakpoints); each segment is handled with fixed-order Gauss-Legendre
quadrature and the cumulative integral is cached at segment ends.  Beyond
the largest observation the at-risk count vanishes and ``H`` continues with
the prior hazard in closed form.

The posterior precision follows from conjugacy of the jump law: at every x,

    c*(x) = (c(x) (1 - F(x-)) + M(x)) / (1 - F*(x-)),

which makes the posterior jump at an atom Beta(c dF + dN, c S + M - dN) and
reduces to ``c* = k + n`` in the uncensored Dirichlet-process case.
"""

from __future__ import annotations

import numpy as np

from .data import SurvivalDataset
from .distributions import PriorSpec
from .errors import DegenerateConfigurationError
from .numerics import _GL_W, _GL_X, gauss_legendre


class PosteriorRep:
    """Computed posterior: atom table, segment table, and evaluators.

    Instances are immutable after construction and safe for concurrent reads.
    Use :func:`compute_posterior` to build one.
    """

    def __init__(self, prior: PriorSpec, dataset: SurvivalDataset):
        self.prior = prior
        self.dataset = dataset
        F, c = prior.F, prior.c
        self.is_discrete_prior = not F.is_continuous

        event_times, event_counts = dataset.event_table()
        if self.is_discrete_prior:
            atom_times = np.union1d(F.atoms, event_times)
        else:
            atom_times = event_times
        if atom_times.size:
            c_at = np.atleast_1d(c(atom_times)).astype(float)
            s_left = np.atleast_1d(F.cdf_left(atom_times))
            s_left = 1.0 - s_left
            if self.is_discrete_prior:
                d_f = np.atleast_1d(F.cdf(atom_times)) - np.atleast_1d(F.cdf_left(atom_times))
            else:
                d_f = np.zeros_like(atom_times)
            d_n = dataset.num_events_at(atom_times)
            denom = c_at * s_left + dataset.at_risk(atom_times)
            hazards = (c_at * d_f + d_n) / denom
            hazards = np.clip(hazards, 0.0, 1.0)
        else:
            hazards = np.empty(0)
        self.atom_times = atom_times
        self.atom_hazards = hazards
        surv_after = np.cumprod(1.0 - hazards) if hazards.size else np.empty(0)
        self._atom_surv = np.concatenate(([1.0], surv_after))
        self.atom_masses = self._atom_surv[:-1] * hazards

        # Segment table for the continuous hazard integral.
        self.y_max = float(dataset.times[-1]) if dataset.n else 0.0
        if not self.is_discrete_prior and self.y_max > 0:
            splits = np.unique(dataset.times)
            breaks = np.asarray(c.breakpoints, dtype=float)
            if breaks.size:
                splits = np.union1d(splits, breaks[(breaks > 0) & (breaks < self.y_max)])
            bounds = np.concatenate(([0.0], splits))
        else:
            bounds = np.array([0.0])
        self.segment_bounds = bounds
        # At-risk count on the open segment (bounds[k], bounds[k+1]).
        self.segment_at_risk = (dataset.n
                                - np.searchsorted(dataset.times, bounds[:-1], side="right")
                                ).astype(float)
        self._segment_c = np.atleast_1d(c(0.5 * (bounds[:-1] + bounds[1:]))) \
            if bounds.size > 1 else np.empty(0)
        self._bound_survival = np.atleast_1d(F.survival(bounds)) if F.is_continuous \
            else np.ones_like(bounds)

        if self.is_discrete_prior:
            self.h_cache = np.zeros(1)
        else:
            increments = [
                gauss_legendre(self._integrand_factory(m), a, b)
                for a, b, m in zip(bounds[:-1], bounds[1:], self.segment_at_risk)
            ]
            self.h_cache = np.concatenate(([0.0], np.cumsum(increments)))
        self.h_end = float(self.h_cache[-1])

    def _integrand_factory(self, at_risk: float):
        F, c = self.prior.F, self.prior.c
        def integrand(t):
            ct = c(t)
            return ct * F.pdf(t) / (ct * F.survival(t) + at_risk)
        return integrand

    # -- discrete part -------------------------------------------------------

    def cdf_discrete(self, x):
        """F*_d(x): one minus the product of (1 - h) over atoms at or before x."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.atom_times, xs, side="right")
        out = 1.0 - self._atom_surv[idx]
        return float(out[0]) if np.ndim(x) == 0 else out

    def cdf_discrete_left(self, x):
        """F*_d(x-): the atom at x itself excluded."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.atom_times, xs, side="left")
        out = 1.0 - self._atom_surv[idx]
        return float(out[0]) if np.ndim(x) == 0 else out

    # -- continuous part ------------------------------------------------------

    def cumulative_hazard_continuous(self, x):
        """H(x): cached at segment ends, partial quadrature inside a segment,
        closed form from the prior hazard beyond the data."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(xs.shape)
        if self.is_discrete_prior:
            return float(out[0]) if np.ndim(x) == 0 else out
        F = self.prior.F
        inside = (xs > 0) & (xs <= self.y_max)
        if np.any(inside):
            xi = xs[inside]
            k = np.searchsorted(self.segment_bounds, xi, side="left")
            exact = self.segment_bounds[k] == xi  # segment ends carry the cached value
            vals = self.h_cache[k].copy()
            if np.any(~exact):
                ki = k[~exact]
                vals[~exact] = self.h_cache[ki - 1] + self._partial_segment(
                    self.segment_bounds[ki - 1], xi[~exact], self.segment_at_risk[ki - 1])
            out[inside] = vals
        beyond = xs > self.y_max
        if np.any(beyond):
            xb = xs[beyond]
            out[beyond] = self.h_end + (np.atleast_1d(F.cumulative_hazard(xb))
                                        - F.cumulative_hazard(self.y_max))
        return float(out[0]) if np.ndim(x) == 0 else out

    def _partial_segment(self, a: np.ndarray, x: np.ndarray, at_risk: np.ndarray) -> np.ndarray:
        """Gauss-Legendre integral of the posterior hazard over [a, x], elementwise."""
        F, c = self.prior.F, self.prior.c
        half = 0.5 * (x - a)
        mid = 0.5 * (x + a)
        t = mid[None, :] + half[None, :] * _GL_X[:, None]
        ct = c(t)
        g = ct * F.pdf(t) / (ct * F.survival(t) + at_risk[None, :])
        return half * np.einsum("i,ij->j", _GL_W, g)

    def cdf_continuous(self, x):
        """F*_c(x) = 1 - exp(-H(x)); identically zero under a discrete prior."""
        h = self.cumulative_hazard_continuous(x)
        return -np.expm1(-h) if np.ndim(h) else float(-np.expm1(-h))

    # -- combined -------------------------------------------------------------

    def cdf(self, x):
        """Posterior mean F*(x) = 1 - (1 - F*_d(x)) (1 - F*_c(x))."""
        fd = self.cdf_discrete(x)
        fc = self.cdf_continuous(x)
        return 1.0 - (1.0 - fd) * (1.0 - fc)

    def cdf_left(self, x):
        """Left limit F*(x-); only the discrete part can jump."""
        fd = self.cdf_discrete_left(x)
        fc = self.cdf_continuous(x)
        return 1.0 - (1.0 - fd) * (1.0 - fc)

    def survival(self, x):
        return 1.0 - self.cdf(x)

    def c_star(self, x):
        """Posterior precision c*(x) = (c(x)(1 - F(x-)) + M(x)) / (1 - F*(x-))."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xs <= 0):
            raise DegenerateConfigurationError("c* is defined for x > 0 only")
        prior_surv_left = 1.0 - np.atleast_1d(self.prior.F.cdf_left(xs))
        at_risk = self.dataset.at_risk(xs)
        denom = 1.0 - np.atleast_1d(self.cdf_left(xs))
        if np.any(denom <= 0):
            bad = xs[np.atleast_1d(denom <= 0)]
            raise DegenerateConfigurationError(
                f"posterior mass exhausted at x={bad.min()}: c* undefined")
        c_at = np.atleast_1d(self.prior.c(xs))
        out = (c_at * prior_surv_left + at_risk) / denom
        return float(out[0]) if np.ndim(x) == 0 else out


def compute_posterior(prior: PriorSpec, dataset: SurvivalDataset) -> PosteriorRep:
    """Conjugate update of the prior ``(c, F)`` given the dataset.

    An empty dataset returns the prior itself: F* == F and c* == c.
    """
    return PosteriorRep(prior, dataset)
