"""Deterministic quadrature, root finding, and reproducible random streams.

Every stochastic routine in the package draws from an :class:`RngStream`,
which maps a ``(seed, stream)`` pair to an independent generator.  Units of
work (bootstrap replicates, oracle draws) each own one stream, so results
are bit-identical regardless of batching or execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import BracketingError, NumericDomainError

GAUSS_LEGENDRE_NODES = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GAUSS_LEGENDRE_NODES)

# Stream-index lanes.  Bootstrap replicate b uses stream ``base + b`` (two-sample
# runs interleave ``base + 2b`` / ``base + 2b + 1``); grid-oracle draw i uses
# ``ORACLE_STREAM_BASE + i`` so the two never collide for any draw count below 2**30.
ORACLE_STREAM_BASE = 1 << 30

DEFAULT_BISECT_TOL = 1e-10


@dataclass(frozen=True)
class RngStream:
    """Addressable random stream: ``(seed, stream)`` fully determines the output."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def shifted(self, offset: int) -> "RngStream":
        return RngStream(self.seed, self.stream + offset)


RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Accept either a stream (fresh generator) or an already-running generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                   nodes: int = GAUSS_LEGENDRE_NODES) -> float:
    """Fixed-order Gauss-Legendre estimate of the integral of ``f`` over [a, b].

    ``f`` must accept an ndarray of abscissae and return finite values.
    """
    if not (a <= b):
        raise NumericDomainError(f"integration bounds out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    if nodes == GAUSS_LEGENDRE_NODES:
        x, w = _GL_X, _GL_W
    else:
        x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(f(mid + half * x), dtype=float)
    if not np.all(np.isfinite(y)):
        raise NumericDomainError(f"integrand not finite on [{a}, {b}]")
    return float(half * np.dot(w, y))


def bisect(g: Callable[[float], float], target: float, lo: float, hi: float,
           tol: float = DEFAULT_BISECT_TOL) -> float:
    """Solve ``g(x) = target`` for nondecreasing ``g`` on the bracket [lo, hi].

    The bracket is shrunk until its width is at most ``tol * max(1, hi)``;
    the midpoint of the final bracket is returned.
    """
    if not (lo <= hi):
        raise BracketingError(f"empty bracket [{lo}, {hi}]")
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo <= target <= g_hi):
        raise BracketingError(
            f"target {target} not bracketed: g({lo})={g_lo}, g({hi})={g_hi}")
    width_goal = tol * max(1.0, hi)
    while hi - lo > width_goal:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket at float resolution
            break
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def beta_sample(alpha, beta, rng: RngLike):
    """Beta(alpha, beta) variates with the convention Beta(alpha, 0) == 1.

    Accepts scalars or arrays (broadcast elementwise).  ``alpha`` must be
    strictly positive, ``beta`` nonnegative.
    """
    gen = as_generator(rng)
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if np.any(a <= 0):
        raise NumericDomainError("beta_sample requires alpha > 0")
    if np.any(b < 0):
        raise NumericDomainError("beta_sample requires beta >= 0")
    a, b = np.broadcast_arrays(a, b)
    degenerate = b == 0
    # numpy rejects b == 0; substitute a dummy and overwrite with the exact limit.
    b_safe = np.where(degenerate, 1.0, b)
    out = gen.beta(a, b_safe)
    out = np.where(degenerate, 1.0, out)
    if out.ndim == 0:
        return float(out)
    return out
