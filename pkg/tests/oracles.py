"""Brute-force reference answers computed straight from the raw arrays.

Nothing here calls ``assess``, ``dispatch`` or any bisection routine; limits
are found by checking every whole megawatt.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from dcadequacy.adequacy import AdequacyInputs


def margins(inputs: AdequacyInputs) -> np.ndarray:
    """Supply minus non-DC load per interval."""
    supply = inputs.wind.values + inputs.solar.values + inputs.firm_mw
    return supply - inputs.nondc_load.values


def scan_lole(inputs: AdequacyInputs, dc_mw: float) -> float:
    load = inputs.nondc_load.values + dc_mw
    supply = inputs.wind.values + inputs.solar.values + inputs.firm_mw
    short = sum(1 for a, b in zip(load, supply) if a > b)
    return short * inputs.interval_minutes / 60


def scan_dc_limit(inputs: AdequacyInputs, stop_mw: float) -> int:
    """Largest whole MW in [0, stop] meeting the standard; -1 if none."""
    m = np.sort(margins(inputs))
    hours = inputs.interval_minutes / 60
    dc = np.arange(int(math.ceil(stop_mw)) + 1, dtype=float)
    # intervals with nondc + dc > supply, i.e. margin < dc
    lole = np.searchsorted(m, dc, side="left") * hours
    ok = np.flatnonzero(lole <= inputs.lole_standard_hours)
    return int(ok[-1]) if ok.size else -1


def scan_qos_limit(inputs: AdequacyInputs, existing_mw: float, g: float,
                   cap: Optional[float], stop_mw: float) -> int:
    """Whole-MW scan of the new-capacity limit under guaranteed fraction ``g``."""
    m = np.sort(margins(inputs))
    hours = inputs.interval_minutes / 60
    year_hours = len(m) * hours
    n = np.arange(int(math.ceil(stop_mw)) + 1, dtype=float)
    grid = np.searchsorted(m, existing_mw + g * n, side="left") * hours
    # shedding needs total load above supply and some flexible load to shed
    outage = np.searchsorted(m, existing_mw + n, side="left") * hours
    outage = np.where((n > 0) & (g < 1), outage, 0.0)
    ok = grid <= inputs.lole_standard_hours
    if cap is not None:
        ok &= outage / year_hours <= cap
    idx = np.flatnonzero(ok)
    return int(idx[-1]) if idx.size else -1
