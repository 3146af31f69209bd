"""New-datacenter connections with a reduced power guarantee.

A new datacenter of capacity N under guaranteed fraction g adds ``g * N`` of
firm load and ``(1 - g) * N`` of flexible load.  Flexible load is shed first
whenever load exceeds supply; shedding does not count towards grid LOLE but
each interval with any shedding counts as a datacenter outage.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .adequacy import (AdequacyInputs, LimitResult, bisect_max, lole_hours,
                       supply_headroom_bound)

DEFAULT_OUTAGE_CAP = 0.01


@dataclass(frozen=True)
class QosScheme:
    guaranteed_fraction: float
    outage_cap_fraction: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.guaranteed_fraction <= 1.0:
            raise ValueError("guaranteed_fraction must lie in [0, 1]")
        cap = self.outage_cap_fraction
        if cap is not None and not 0.0 <= cap <= 1.0:
            raise ValueError("outage_cap_fraction must lie in [0, 1]")

    @property
    def label(self) -> str:
        """Canonical scheme string; ``parse_qos(s.label) == s``."""
        g, cap = self.guaranteed_fraction, self.outage_cap_fraction
        if g == 1.0 and cap is None:
            return "reliable"
        head = "flex" if g == 0.0 else f"partial:{g:g}"
        if cap is None:
            return head if g != 0.0 else "flex:nocap"
        return f"{head}:cap={cap:g}"


RELIABLE = QosScheme(1.0)
PARTIAL_80 = QosScheme(0.8)
FLEX = QosScheme(0.0, DEFAULT_OUTAGE_CAP)


def parse_qos(text: str) -> QosScheme:
    """Parse one scheme: ``reliable``, ``partial:0.8``, ``flex``, ``flex:cap=0.01``.

    Any scheme may carry ``:cap=C``.  Bare ``flex`` uses the 1% cap;
    ``flex:nocap`` drops it.
    """
    parts = [p.strip() for p in text.strip().split(":")]
    kind, args = parts[0].lower(), parts[1:]
    cap: Optional[float] = None
    fraction: Optional[float] = None
    nocap = False
    try:
        for arg in args:
            if arg.startswith("cap="):
                cap = float(arg[4:])
            elif arg == "nocap":
                nocap = True
            else:
                fraction = float(arg)
    except ValueError:
        raise ValueError(f"bad QoS scheme {text!r}") from None
    if kind == "reliable":
        if fraction is not None:
            raise ValueError(f"bad QoS scheme {text!r}: reliable takes no fraction")
        return QosScheme(1.0, cap)
    if kind == "partial":
        if fraction is None:
            raise ValueError(f"bad QoS scheme {text!r}: partial needs a fraction, e.g. partial:0.8")
        return QosScheme(fraction, cap)
    if kind == "flex":
        if fraction is not None:
            raise ValueError(f"bad QoS scheme {text!r}: flex takes no fraction")
        if cap is None and not nocap:
            cap = DEFAULT_OUTAGE_CAP
        return QosScheme(0.0, cap)
    raise ValueError(f"unknown QoS scheme {kind!r} in {text!r}")


def parse_qos_list(text: str) -> List[QosScheme]:
    return [parse_qos(s) for s in text.split(",") if s.strip()]


@dataclass(frozen=True, eq=False)
class DispatchResult:
    shed_mw: np.ndarray
    grid_shortage_flags: np.ndarray
    grid_lole_hours: float
    outage_hours: float
    shed_energy_mwh: float
    flexible_mw: float

    @property
    def outage_flags(self) -> np.ndarray:
        return self.shed_mw > 0


def dispatch(inputs: AdequacyInputs, existing_dc_mw: float, new_dc_mw: float,
             qos: QosScheme) -> DispatchResult:
    if not (existing_dc_mw >= 0 and new_dc_mw >= 0):
        raise ValueError("datacenter capacities must be >= 0")
    g = qos.guaranteed_fraction
    firm_load = inputs.nondc_load.values + existing_dc_mw + g * new_dc_mw
    flexible = (1.0 - g) * new_dc_mw
    supply = inputs.supply
    shed = np.clip(firm_load + flexible - supply, 0.0, flexible)
    grid_flags = firm_load > supply
    h = inputs.interval_hours
    return DispatchResult(
        shed_mw=shed,
        grid_shortage_flags=grid_flags,
        grid_lole_hours=lole_hours(grid_flags, inputs.interval_minutes),
        outage_hours=int(np.count_nonzero(shed > 0)) * h,
        shed_energy_mwh=float(shed.sum()) * h,
        flexible_mw=flexible,
    )


def outage_rate(result: DispatchResult, inputs: AdequacyInputs) -> float:
    """Fraction of the year's time with any datacenter load shed."""
    return result.outage_hours / inputs.hours_in_year


def energy_availability(result: DispatchResult, inputs: AdequacyInputs) -> float:
    """Share of the flexible DC energy actually delivered (1.0 when nothing is flexible)."""
    requested = result.flexible_mw * inputs.hours_in_year
    if requested == 0:
        return 1.0
    return 1.0 - result.shed_energy_mwh / requested


def daily_outage_fractions(result: DispatchResult, inputs: AdequacyInputs) -> np.ndarray:
    per_day = inputs.nondc_load.intervals_per_day
    flags = result.outage_flags.reshape(-1, per_day)
    return flags.sum(axis=1) / per_day


def qos_limit(inputs: AdequacyInputs, existing_dc_mw: float, qos: QosScheme) -> LimitResult:
    """Largest new DC capacity keeping grid LOLE and (if capped) the outage rate in bounds.

    Both constraints are monotone in the new capacity, so plain bisection to
    1 MW applies.  Without an outage cap a fully flexible connection never
    stresses the grid and the limit is unbounded (``inf``).
    """
    g = qos.guaranteed_fraction
    cap = qos.outage_cap_fraction
    standard = inputs.lole_standard_hours

    def feasible(new_mw: float) -> bool:
        r = dispatch(inputs, existing_dc_mw, new_mw, qos)
        if r.grid_lole_hours > standard:
            return False
        return cap is None or outage_rate(r, inputs) <= cap

    headroom = supply_headroom_bound(inputs)
    if g > 0:
        upper = headroom / g
    elif cap is not None:
        upper = headroom
    else:
        upper = math.inf
    return bisect_max(feasible, upper)
