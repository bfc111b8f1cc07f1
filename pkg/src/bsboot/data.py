"""Right-censored survival datasets, CSV ingestion, and counting processes."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IngestionError, NumericDomainError


@dataclass(frozen=True)
class Observation:
    """One follow-up record: time on study, event indicator, group label.

    ``event`` is True for an observed death/failure, False for right-censoring.
    """

    time: float
    event: bool
    group: int = 0


class SurvivalDataset:
    """Immutable collection of observations, sorted by time with events before censorings at ties."""

    def __init__(self, observations: Iterable[Observation] = ()):
        obs = tuple(observations)
        times = np.array([o.time for o in obs], dtype=float)
        events = np.array([o.event for o in obs], dtype=bool)
        groups = np.array([o.group for o in obs], dtype=int)
        if times.size:
            if not np.all(np.isfinite(times)) or np.any(times <= 0):
                raise NumericDomainError("observation times must be positive and finite")
            if np.any(groups < 0):
                raise NumericDomainError("group labels must be nonnegative")
            order = np.lexsort((~events, times))  # time ascending, events first at ties
            times, events, groups = times[order], events[order], groups[order]
        self._times = times
        self._events = events
        self._groups = groups
        self._times.setflags(write=False)
        self._events.setflags(write=False)
        self._groups.setflags(write=False)

    @classmethod
    def from_arrays(cls, times: Sequence[float], events: Sequence[bool],
                    groups: Sequence[int] | None = None) -> "SurvivalDataset":
        times = np.asarray(times, dtype=float)
        events = np.asarray(events, dtype=bool)
        if groups is None:
            groups = np.zeros(times.shape, dtype=int)
        return cls(Observation(float(t), bool(e), int(g))
                   for t, e, g in zip(times, events, groups))

    @property
    def n(self) -> int:
        return int(self._times.size)

    def __len__(self) -> int:
        return self.n

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def events(self) -> np.ndarray:
        return self._events

    @property
    def groups(self) -> np.ndarray:
        return self._groups

    @property
    def observations(self) -> tuple:
        return tuple(Observation(float(t), bool(e), int(g))
                     for t, e, g in zip(self._times, self._events, self._groups))

    def __repr__(self):
        ev = int(self._events.sum())
        return f"SurvivalDataset(n={self.n}, events={ev})"

    def subset(self, group: int) -> "SurvivalDataset":
        """Observations belonging to one group, as a standalone dataset."""
        mask = self._groups == group
        return SurvivalDataset.from_arrays(
            self._times[mask], self._events[mask], self._groups[mask])

    def group_labels(self) -> np.ndarray:
        return np.unique(self._groups) if self.n else np.empty(0, dtype=int)

    def event_table(self) -> tuple:
        """Distinct event times with their multiplicities ``(times, counts)``."""
        ev = self._times[self._events]
        if ev.size == 0:
            return np.empty(0), np.empty(0, dtype=int)
        return np.unique(ev, return_counts=True)

    def num_events_at(self, x) -> np.ndarray:
        """dN(x): number of uncensored observations exactly at x (vectorized)."""
        t, c = self.event_table()
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(xs.shape, dtype=int)
        if t.size:
            idx = np.searchsorted(t, xs)
            hit = (idx < t.size) & (t[np.minimum(idx, t.size - 1)] == xs)
            out[hit] = c[idx[hit]]
        return out

    def at_risk(self, x) -> np.ndarray:
        """M(x): number of observations with time >= x (vectorized)."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        return self.n - np.searchsorted(self._times, xs, side="left")


def counting(dataset: SurvivalDataset, x: float) -> tuple:
    """Counting processes at x: (N, M) with N = uncensored events <= x, M = at risk at x."""
    if x < 0:
        raise NumericDomainError(f"counting requires x >= 0, got {x}")
    ev = dataset.times[dataset.events]
    n_events = int(np.searchsorted(ev, x, side="right"))
    at_risk = int(dataset.n - np.searchsorted(dataset.times, x, side="left"))
    return n_events, at_risk


class KaplanMeierEstimate:
    """Product-limit estimate of the distribution function, as a right-continuous step function."""

    def __init__(self, dataset: SurvivalDataset):
        if dataset.n == 0:
            raise NumericDomainError("Kaplan-Meier estimate needs a nonempty dataset")
        times, deaths = dataset.event_table()
        at_risk = dataset.at_risk(times) if times.size else np.empty(0)
        with np.errstate(invalid="ignore"):
            factors = 1.0 - deaths / at_risk
        surv = np.cumprod(factors)
        self.event_times = times
        self.cdf_values = 1.0 - surv
        self._largest_observation = float(dataset.times[-1])

    def cdf(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.event_times, xs, side="right")
        vals = np.concatenate(([0.0], self.cdf_values))[idx]
        return float(vals[0]) if np.ndim(x) == 0 else vals

    __call__ = cdf

    def cdf_left(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.event_times, xs, side="left")
        vals = np.concatenate(([0.0], self.cdf_values))[idx]
        return float(vals[0]) if np.ndim(x) == 0 else vals

    def survival(self, x):
        return 1.0 - self.cdf(x)


def kaplan_meier(dataset: SurvivalDataset) -> KaplanMeierEstimate:
    """Kaplan-Meier estimate of the distribution function of ``dataset``."""
    return KaplanMeierEstimate(dataset)


def load_csv(path, time_unit: float = 1.0, event_codes: Iterable[int] = (1,),
             censor_codes: Iterable[int] = (0,), group_column: str = "group") -> SurvivalDataset:
    """Read a ``time,status[,group]`` CSV into a dataset.

    Times are multiplied by ``time_unit`` (e.g. 1/365.25 to convert days to
    years).  Status codes listed in ``event_codes`` map to events, those in
    ``censor_codes`` to censorings; anything else is an error.  Blank lines
    are ignored.
    """
    event_codes = {int(c) for c in event_codes}
    censor_codes = {int(c) for c in censor_codes}
    if event_codes & censor_codes:
        raise IngestionError("event and censor status codes overlap")
    observations = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = None
        for line_no, row in enumerate(reader, start=1):
            if not row or not "".join(row).strip():
                continue
            if header is None:
                header = [h.strip().lower() for h in row]
                missing = {"time", "status"} - set(header)
                if missing:
                    raise IngestionError(
                        f"{path}: missing required column(s) {sorted(missing)}")
                t_col = header.index("time")
                s_col = header.index("status")
                g_col = header.index(group_column) if group_column in header else None
                continue
            try:
                raw_time = float(row[t_col])
                status = int(row[s_col])
                group = int(row[g_col]) if g_col is not None else 0
            except (IndexError, ValueError):
                raise IngestionError(f"{path}: unparseable row {line_no}: {row!r}") from None
            time = raw_time * time_unit
            if not time > 0:
                raise IngestionError(f"{path}: non-positive time at row {line_no}: {raw_time!r}")
            if status in event_codes:
                event = True
            elif status in censor_codes:
                event = False
            else:
                raise IngestionError(
                    f"{path}: row {line_no} has status {status}, expected one of "
                    f"{sorted(event_codes | censor_codes)}")
            observations.append(Observation(time, event, group))
    if header is None:
        raise IngestionError(f"{path}: empty file")
    return SurvivalDataset(observations)
