"""Centering distributions and precision functions for the process prior.

A prior is a pair ``(c, F)``: a precision function ``c(x)`` controlling
dispersion and a proper centering distribution ``F`` (the prior mean).
Three centering kinds are supported: exponential, Weibull, and finitely
supported discrete.  Precision functions are constant or piecewise constant.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import IngestionError, NumericDomainError

_MASS_TOL = 1e-12


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr), scalar


def _maybe_scalar(arr: np.ndarray, scalar: bool):
    return float(arr[0]) if scalar else arr


@dataclass(frozen=True)
class Exponential:
    """Exponential centering distribution with the given rate."""

    rate: float
    kind: str = field(default="exponential", init=False, repr=False)
    is_continuous = True

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise NumericDomainError(f"exponential rate must be positive, got {self.rate}")

    def cdf(self, x):
        xs, scalar = _as_array(x)
        out = np.where(xs > 0, -np.expm1(-self.rate * np.maximum(xs, 0.0)), 0.0)
        return _maybe_scalar(out, scalar)

    cdf_left = cdf  # continuous: no atoms

    def survival(self, x):
        xs, scalar = _as_array(x)
        out = np.where(xs > 0, np.exp(-self.rate * np.maximum(xs, 0.0)), 1.0)
        return _maybe_scalar(out, scalar)

    def pdf(self, x):
        xs, scalar = _as_array(x)
        out = np.where(xs > 0, self.rate * np.exp(-self.rate * np.maximum(xs, 0.0)), 0.0)
        return _maybe_scalar(out, scalar)

    def cumulative_hazard(self, x):
        xs, scalar = _as_array(x)
        return _maybe_scalar(self.rate * np.maximum(xs, 0.0), scalar)

    def inverse_cumulative_hazard(self, h):
        hs, scalar = _as_array(h)
        return _maybe_scalar(hs / self.rate, scalar)

    def quantile(self, p):
        ps, scalar = _as_array(p)
        _check_probability(ps)
        return _maybe_scalar(-np.log1p(-ps) / self.rate, scalar)


@dataclass(frozen=True)
class Weibull:
    """Weibull centering distribution.

    Shapes well below 1 concentrate density at the origin, which degrades the
    fixed-order quadrature used downstream; shape >= 1 is recommended.
    """

    shape: float
    scale: float
    kind: str = field(default="weibull", init=False, repr=False)
    is_continuous = True

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise NumericDomainError(
                f"weibull shape/scale must be positive, got {self.shape}, {self.scale}")

    def _z(self, xs):
        return (np.maximum(xs, 0.0) / self.scale) ** self.shape

    def cdf(self, x):
        xs, scalar = _as_array(x)
        out = np.where(xs > 0, -np.expm1(-self._z(xs)), 0.0)
        return _maybe_scalar(out, scalar)

    cdf_left = cdf

    def survival(self, x):
        xs, scalar = _as_array(x)
        out = np.where(xs > 0, np.exp(-self._z(xs)), 1.0)
        return _maybe_scalar(out, scalar)

    def pdf(self, x):
        xs, scalar = _as_array(x)
        pos = xs > 0
        z = np.where(pos, np.maximum(xs, np.finfo(float).tiny) / self.scale, 1.0)
        dens = (self.shape / self.scale) * z ** (self.shape - 1.0) * np.exp(-z ** self.shape)
        out = np.where(pos, dens, 0.0)
        return _maybe_scalar(out, scalar)

    def cumulative_hazard(self, x):
        xs, scalar = _as_array(x)
        return _maybe_scalar(self._z(xs), scalar)

    def inverse_cumulative_hazard(self, h):
        hs, scalar = _as_array(h)
        return _maybe_scalar(self.scale * np.maximum(hs, 0.0) ** (1.0 / self.shape), scalar)

    def quantile(self, p):
        ps, scalar = _as_array(p)
        _check_probability(ps)
        return _maybe_scalar(self.scale * (-np.log1p(-ps)) ** (1.0 / self.shape), scalar)


class Discrete:
    """Proper discrete centering distribution on finitely many atoms."""

    kind = "discrete"
    is_continuous = False

    def __init__(self, atoms, masses):
        atoms = np.asarray(atoms, dtype=float)
        masses = np.asarray(masses, dtype=float)
        if atoms.ndim != 1 or atoms.shape != masses.shape or atoms.size == 0:
            raise NumericDomainError("discrete atoms/masses must be matching nonempty vectors")
        order = np.argsort(atoms, kind="stable")
        atoms, masses = atoms[order], masses[order]
        if np.any(np.diff(atoms) <= 0):
            raise NumericDomainError("discrete atoms must be distinct")
        if np.any(atoms <= 0) or not np.all(np.isfinite(atoms)):
            raise NumericDomainError("discrete atoms must be positive and finite")
        if np.any(masses <= 0):
            raise NumericDomainError("discrete masses must be positive")
        total = masses.sum()
        if abs(total - 1.0) > _MASS_TOL:
            raise NumericDomainError(
                f"discrete masses must sum to 1 within {_MASS_TOL}, got {total!r}")
        self.atoms = atoms
        self.masses = masses / total  # exact unit mass
        self._cum = np.cumsum(self.masses)
        self._cum[-1] = 1.0

    def __repr__(self):
        pairs = ", ".join(f"({a:g}, {p:g})" for a, p in zip(self.atoms, self.masses))
        return f"Discrete([{pairs}])"

    def cdf(self, x):
        xs, scalar = _as_array(x)
        idx = np.searchsorted(self.atoms, xs, side="right")
        out = np.where(idx > 0, np.concatenate(([0.0], self._cum))[idx], 0.0)
        return _maybe_scalar(out, scalar)

    def cdf_left(self, x):
        """F(x-): mass strictly below x."""
        xs, scalar = _as_array(x)
        idx = np.searchsorted(self.atoms, xs, side="left")
        out = np.concatenate(([0.0], self._cum))[idx]
        return _maybe_scalar(out, scalar)

    def survival(self, x):
        xs, scalar = _as_array(x)
        out = 1.0 - np.atleast_1d(self.cdf(xs))
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        ps, scalar = _as_array(p)
        _check_probability(ps)
        idx = np.searchsorted(self._cum, ps, side="left")
        out = np.where(ps == 0.0, 0.0, self.atoms[np.minimum(idx, len(self.atoms) - 1)])
        return _maybe_scalar(out, scalar)


CenteringDistribution = Union[Exponential, Weibull, Discrete]


def _check_probability(ps: np.ndarray) -> None:
    if np.any((ps < 0) | (ps >= 1)):
        raise NumericDomainError("probability must lie in [0, 1)")


def exp_with_median(median: float) -> Exponential:
    """Exponential distribution whose median equals ``median``."""
    if not (median > 0 and math.isfinite(median)):
        raise NumericDomainError(f"median must be positive, got {median}")
    return Exponential(rate=math.log(2.0) / median)


def quantile(dist: CenteringDistribution, p: float):
    """Smallest x >= 0 with cdf(x) >= p, for p in [0, 1)."""
    return dist.quantile(p)


@dataclass(frozen=True)
class ConstantPrecision:
    """Precision function c(x) == value for all x > 0."""

    value: float

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise NumericDomainError(f"precision must be positive, got {self.value}")

    @property
    def bounds(self) -> tuple:
        return (self.value, self.value)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.empty(0)

    def __call__(self, x):
        xs, scalar = _as_array(x)
        return _maybe_scalar(np.full(xs.shape, self.value), scalar)


class PiecewiseConstantPrecision:
    """Right-continuous step precision: values[i] on [breakpoints[i-1], breakpoints[i])."""

    def __init__(self, breakpoints, values):
        breakpoints = np.asarray(breakpoints, dtype=float)
        values = np.asarray(values, dtype=float)
        if breakpoints.ndim != 1 or values.ndim != 1 or values.size != breakpoints.size + 1:
            raise NumericDomainError(
                "piecewise precision needs k breakpoints and k+1 values")
        if breakpoints.size and (np.any(np.diff(breakpoints) <= 0) or np.any(breakpoints <= 0)):
            raise NumericDomainError("breakpoints must be positive and strictly increasing")
        if np.any(values <= 0) or not np.all(np.isfinite(values)):
            raise NumericDomainError("precision values must be positive and finite")
        self._breaks = breakpoints
        self._values = values

    @property
    def bounds(self) -> tuple:
        return (float(self._values.min()), float(self._values.max()))

    @property
    def breakpoints(self) -> np.ndarray:
        return self._breaks

    def __repr__(self):
        return f"PiecewiseConstantPrecision({self._breaks.tolist()}, {self._values.tolist()})"

    def __call__(self, x):
        xs, scalar = _as_array(x)
        idx = np.searchsorted(self._breaks, xs, side="right")
        return _maybe_scalar(self._values[idx], scalar)


PrecisionFunction = Union[ConstantPrecision, PiecewiseConstantPrecision]


@dataclass(frozen=True)
class PriorSpec:
    """Process prior: precision function plus centering distribution."""

    c: PrecisionFunction
    F: CenteringDistribution


# --- textual syntax used by the command line -------------------------------

def parse_centering(text: str) -> CenteringDistribution:
    """Parse ``exp:median=10``, ``weibull:shape=..,scale=..``, or ``discrete:file=..``."""
    head, _, args = text.partition(":")
    params = _parse_kv(args)
    try:
        if head == "exp":
            if "median" in params:
                return exp_with_median(float(params["median"]))
            return Exponential(rate=float(params["rate"]))
        if head == "weibull":
            return Weibull(shape=float(params["shape"]), scale=float(params["scale"]))
        if head == "discrete":
            return _discrete_from_file(params["file"])
    except KeyError as exc:
        raise IngestionError(f"centering spec {text!r} missing parameter {exc}") from None
    raise IngestionError(f"unknown centering kind {head!r} in {text!r}")


def parse_precision(text: str) -> PrecisionFunction:
    """Parse ``const:1`` or ``piecewise:file=...``."""
    head, _, args = text.partition(":")
    if head == "const":
        try:
            return ConstantPrecision(float(args))
        except ValueError:
            raise IngestionError(f"bad constant precision {text!r}") from None
    if head == "piecewise":
        params = _parse_kv(args)
        if "file" not in params:
            raise IngestionError(f"piecewise precision spec {text!r} needs file=...")
        return _piecewise_from_file(params["file"])
    raise IngestionError(f"unknown precision kind {head!r} in {text!r}")


def _parse_kv(args: str) -> dict:
    out = {}
    for part in filter(None, args.split(",")):
        key, sep, value = part.partition("=")
        if not sep:
            raise IngestionError(f"expected key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def _discrete_from_file(path: str) -> Discrete:
    atoms, masses = [], []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if i == 1 and not _is_number(row[0]):
                continue  # header
            try:
                atoms.append(float(row[0]))
                masses.append(float(row[1]))
            except (IndexError, ValueError):
                raise IngestionError(f"{path}: bad atom row {i}: {row!r}") from None
    return Discrete(atoms, masses)


def _piecewise_from_file(path: str) -> PiecewiseConstantPrecision:
    """Rows ``end,value``: segment up to ``end`` (exclusive) has that value; last end must be inf."""
    ends, values = [], []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if i == 1 and not _is_number(row[0]):
                continue
            try:
                ends.append(float(row[0]))
                values.append(float(row[1]))
            except (IndexError, ValueError):
                raise IngestionError(f"{path}: bad precision row {i}: {row!r}") from None
    if not ends or not math.isinf(ends[-1]):
        raise IngestionError(f"{path}: last precision segment must end at inf")
    return PiecewiseConstantPrecision(ends[:-1], values)


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False
