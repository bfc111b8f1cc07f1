"""Drawing from the posterior mean distribution F*.

With a continuous prior, F* splits into a discrete part (atoms at the
uncensored event times) and a continuous part.  A draw is the minimum of
independent draws from the two parts: the discrete component by inverse
transform over the atom masses (infinite when the leftover mass wins), the
continuous component by solving ``H(x) = -log(1 - U)`` for the cumulative
posterior hazard ``H``.  Inside the data range the root is bracketed and
bisected on the cached monotone ``H``; beyond the largest observation the
at-risk count is zero and the equation inverts in closed form through the
prior hazard.

With a discrete prior, F* is purely atomic and a single inverse transform
over its atom table suffices.

Batch variants vectorize the same maps for use in bootstrap hot loops; given
the same uniforms they reproduce the scalar paths to root-finding tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedConfigurationError
from .numerics import RngLike, as_generator, bisect
from .posterior import PosteriorRep

_TINY_TIME = np.finfo(float).tiny


@dataclass(frozen=True)
class FStarDraw:
    """One component draw: its value (may be +inf for the discrete part) and origin."""

    value: float
    source: str  # "atom", "continuous", or "tail"


def _require_continuous(post: PosteriorRep) -> None:
    if post.is_discrete_prior:
        raise UnsupportedConfigurationError(
            "this sampler requires a continuous centering distribution; "
            "use sample_fstar_discrete_prior instead")


def sample_discrete(post: PosteriorRep, rng: RngLike) -> FStarDraw:
    """Draw from F*_d: an event-time atom with its posterior mass, else +inf."""
    _require_continuous(post)
    gen = as_generator(rng)
    value = float(discrete_component_batch(post, np.array([gen.random()]))[0])
    return FStarDraw(value, "atom")


def sample_continuous(post: PosteriorRep, rng: RngLike) -> FStarDraw:
    """Draw from F*_c by inverse transform on the cumulative hazard.

    The root of ``H(x) = -log(1-U)`` is bisected on [0, y_max]; targets past
    ``H(y_max)`` fall in the closed-form tail where only the prior hazard acts.
    """
    _require_continuous(post)
    gen = as_generator(rng)
    u = gen.random()
    r = -math.log1p(-u)
    if r <= 0.0:
        return FStarDraw(_TINY_TIME, "continuous")
    if r > post.h_end:
        return FStarDraw(_tail_value(post, np.array([r]))[0], "tail")
    x = bisect(post.cumulative_hazard_continuous, r, 0.0, post.y_max)
    return FStarDraw(max(x, _TINY_TIME), "continuous")


def sample_fstar(post: PosteriorRep, rng: RngLike) -> float:
    """One draw from F*: the minimum of the discrete and continuous components."""
    gen = as_generator(rng)
    x_d = sample_discrete(post, gen).value
    x_c = sample_continuous(post, gen).value
    return min(x_d, x_c)


def sample_fstar_discrete_prior(post: PosteriorRep, rng: RngLike) -> float:
    """Inverse-transform draw over the full posterior atom table (discrete prior).

    Returns +inf on the residual mass, which is zero unless observations
    extend past the prior's support.
    """
    if not post.is_discrete_prior:
        raise UnsupportedConfigurationError(
            "sample_fstar_discrete_prior requires a discrete centering distribution")
    gen = as_generator(rng)
    return float(discrete_component_batch(post, np.array([gen.random()]))[0])


# --- vectorized paths --------------------------------------------------------

def discrete_component_batch(post: PosteriorRep, u: np.ndarray) -> np.ndarray:
    """Map uniforms to atoms of F*_d (or +inf past the total atom mass)."""
    masses = post.atom_masses
    if masses.size == 0:
        return np.full(u.shape, np.inf)
    cum = np.cumsum(masses)
    idx = np.searchsorted(cum, u, side="right")
    inside = idx < cum.size
    out = np.full(u.shape, np.inf)
    out[inside] = post.atom_times[idx[inside]]
    # guard against cumulative rounding when the atom table is exhaustive
    if cum[-1] >= 1.0:
        out[~inside] = post.atom_times[-1]
    return out


def invert_continuous_batch(post: PosteriorRep, r: np.ndarray) -> np.ndarray:
    """Solve H(x) = r elementwise.

    Within a data segment the precision and at-risk count are constant, so the
    hazard integral inverts in closed form through the prior survival; past the
    data it inverts through the prior cumulative hazard.  Agrees with the
    scalar bisection path to its tolerance.
    """
    _require_continuous(post)
    F = post.prior.F
    out = np.empty(r.shape)
    tail = r > post.h_end
    zero = r <= 0.0
    inner = ~tail & ~zero
    out[zero] = _TINY_TIME
    if np.any(tail):
        out[tail] = _tail_value(post, r[tail])
    if np.any(inner):
        ri = r[inner]
        k = np.clip(np.searchsorted(post.h_cache, ri, side="left"), 1, None)
        seg = k - 1
        c_seg = post._segment_c[seg]
        m_seg = post.segment_at_risk[seg]
        s_a = post._bound_survival[seg]
        delta = ri - post.h_cache[seg]
        # survival of F at the root: S_a exp(-delta) + (M/c) expm1(-delta), clamped to the segment
        s_x = s_a * np.exp(-delta) + (m_seg / c_seg) * np.expm1(-delta)
        s_x = np.clip(s_x, post._bound_survival[k], s_a)
        x = np.atleast_1d(F.inverse_cumulative_hazard(-np.log(s_x)))
        out[inner] = np.clip(x, post.segment_bounds[seg], post.segment_bounds[k])
    return np.maximum(out, _TINY_TIME)


def _tail_value(post: PosteriorRep, r: np.ndarray) -> np.ndarray:
    F = post.prior.F
    target = (r - post.h_end) + F.cumulative_hazard(post.y_max)
    return np.atleast_1d(F.inverse_cumulative_hazard(target))


def sample_fstar_batch(post: PosteriorRep, u_disc: np.ndarray,
                       u_cont: np.ndarray) -> np.ndarray:
    """Vectorized F* draws from paired uniforms (continuous priors)."""
    _require_continuous(post)
    x_d = discrete_component_batch(post, u_disc)
    with np.errstate(divide="ignore"):
        r = -np.log1p(-u_cont)
    x_c = invert_continuous_batch(post, r)
    return np.minimum(x_d, x_c)


def draw_support_batch(post: PosteriorRep, gen: np.random.Generator, m: int) -> np.ndarray:
    """m draws from F* using the canonical per-replicate uniform layout.

    Continuous priors consume two blocks of m uniforms (discrete component
    first); discrete priors consume one block.
    """
    if post.is_discrete_prior:
        return discrete_component_batch(post, gen.random(m))
    u_disc = gen.random(m)
    u_cont = gen.random(m)
    return sample_fstar_batch(post, u_disc, u_cont)
