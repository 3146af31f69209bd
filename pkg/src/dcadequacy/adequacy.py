"""Loss-of-load expectation and the maximum admissible flat datacenter load."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Mapping

import numpy as np

from .timeseries import TimeSeries

LIMIT_TOLERANCE_MW = 1.0


@dataclass(frozen=True, eq=False)
class AdequacyInputs:
    """Everything one adequacy year needs: non-DC load, renewables, firm MW."""

    nondc_load: TimeSeries
    wind: TimeSeries
    solar: TimeSeries
    firm_mw: float
    interval_minutes: int
    lole_standard_hours: float

    def __post_init__(self):
        for s in (self.wind, self.solar):
            if not self.nondc_load.aligned_with(s):
                raise ValueError("misaligned series: load, wind and solar must share year and length")
        if self.nondc_load.interval_minutes != self.interval_minutes:
            raise ValueError("misaligned series: interval_minutes disagrees with the series")
        if not self.firm_mw >= 0:
            raise ValueError("firm_mw must be >= 0")
        if not self.lole_standard_hours > 0:
            raise ValueError("lole_standard_hours must be > 0")

    @cached_property
    def supply(self) -> np.ndarray:
        return self.wind.values + self.solar.values + self.firm_mw

    @property
    def hours_in_year(self) -> float:
        return self.nondc_load.hours

    @property
    def interval_hours(self) -> float:
        return self.interval_minutes / 60

    def __len__(self) -> int:
        return len(self.nondc_load)


@dataclass(frozen=True, eq=False)
class AdequacyResult:
    lole_hours: float
    shortage_flags: np.ndarray
    deficit_mw: np.ndarray

    @property
    def shortage_intervals(self) -> int:
        return int(np.count_nonzero(self.shortage_flags))

    def passes(self, standard_hours: float) -> bool:
        return self.lole_hours <= standard_hours


@dataclass(frozen=True)
class LimitResult:
    """A capacity limit found by bisection.

    ``mw`` is the largest load found feasible; the true supremum lies in
    ``[mw, mw + tolerance]`` unless one of the flags is set.
    """

    mw: float
    infeasible_at_zero: bool = False
    upper_bound_binding: bool = False

    def __float__(self) -> float:
        return float(self.mw)


def shortage_indicator(load_mw: float, renew_mw: float, firm_mw: float) -> bool:
    # strict: an exact balance is not a shortage
    return load_mw > renew_mw + firm_mw


def lole_hours(shortage_flags: np.ndarray, interval_minutes: int) -> float:
    return int(np.count_nonzero(shortage_flags)) * interval_minutes / 60


def assess(inputs: AdequacyInputs, dc_load_mw: float) -> AdequacyResult:
    """Shortage per interval and annual LOLE with a flat DC block on top of non-DC load."""
    if not dc_load_mw >= 0:
        raise ValueError("dc_load_mw must be >= 0")
    load = inputs.nondc_load.values + dc_load_mw
    supply = inputs.supply
    flags = load > supply
    deficit = np.where(flags, load - supply, 0.0)
    return AdequacyResult(lole_hours(flags, inputs.interval_minutes), flags, deficit)


def bisect_max(feasible: Callable[[float], bool], upper: float,
               tol: float = LIMIT_TOLERANCE_MW) -> LimitResult:
    """Largest x in [0, upper] with ``feasible(x)`` for a monotone predicate.

    ``feasible`` must be True on an initial segment of [0, upper] and False
    after it.
    """
    if not feasible(0.0):
        return LimitResult(0.0, infeasible_at_zero=True)
    if math.isinf(upper) or feasible(upper):
        return LimitResult(upper, upper_bound_binding=True)
    lo, hi = 0.0, float(upper)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return LimitResult(lo)


def supply_headroom_bound(inputs: AdequacyInputs) -> float:
    """A load level at which every interval is short: firm + peak renewables + 1 MW."""
    renew = inputs.wind.values + inputs.solar.values
    return inputs.firm_mw + float(renew.max(initial=0.0)) + 1.0


def dc_limit(inputs: AdequacyInputs) -> LimitResult:
    """Largest flat DC load keeping LOLE within the standard, to 1 MW."""
    upper = supply_headroom_bound(inputs) + float(inputs.nondc_load.values.max(initial=0.0))
    standard = inputs.lole_standard_hours
    return bisect_max(lambda dc: assess(inputs, dc).lole_hours <= standard, upper)


def committed_limits(annual_limits: Mapping[int, float]) -> Dict[int, float]:
    """Forward minimum: capacity admitted in a year must stay supportable in every later year."""
    if not annual_limits:
        raise ValueError("committed_limits needs at least one year")
    years = sorted(annual_limits)
    if years != list(range(years[0], years[-1] + 1)):
        raise ValueError(f"years must be contiguous, got {years}")
    committed: Dict[int, float] = {}
    running = math.inf
    for y in reversed(years):
        value = annual_limits[y]
        # nan marks a failed cell; it poisons every earlier year
        running = value if math.isnan(value) or value < running else running
        committed[y] = running
    return {y: committed[y] for y in years}
