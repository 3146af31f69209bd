"""Per-year resource plans, de-rated firm capacity and the per-year adequacy bundle."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from .adequacy import AdequacyInputs
from .demand import DemandModelConfig
from .timeseries import BaseYearTraces, scale_nondc_load, scale_renewables

# conventional / storage availability factors used by the bundled fixtures
DERATING_TABLE = {
    "eirgrid": (0.75, 0.73),
    "dominion": (0.915, 0.73),
    "caiso": (0.915, 0.73),
    "ercot": (0.89, 0.73),
    "spp": (0.894, 0.73),
}


@dataclass(frozen=True)
class DeratingFactors:
    conventional: float = 1.0
    storage: float = 1.0

    def __post_init__(self):
        for name in ("conventional", "storage"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"derating.{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class YearResources:
    """Nameplate capacities for one planning year.

    ``other_mw`` (imports, demand-side resources ...) is taken as already
    de-rated, as grid reports publish it.
    """

    year: int
    conventional_mw: float = 0.0
    wind_mw: float = 0.0
    solar_mw: float = 0.0
    storage_mw: float = 0.0
    other_mw: float = 0.0
    derating: DeratingFactors = field(default_factory=DeratingFactors)

    def __post_init__(self):
        for name in ("conventional_mw", "wind_mw", "solar_mw", "storage_mw", "other_mw"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0 in plan year {self.year}")


def firm_capacity(r: YearResources) -> float:
    """Firm MW: de-rated conventional and storage plus other. Renewables enter per interval."""
    return (r.conventional_mw * r.derating.conventional
            + r.storage_mw * r.derating.storage
            + r.other_mw)


@dataclass(frozen=True, eq=False)
class GridScenario:
    name: str
    lole_standard_hours: float
    interval_minutes: int
    base: BaseYearTraces
    plans: Mapping[int, YearResources]
    dc_base_mw: float
    nondc_growth: Mapping[int, float]
    demand: Optional[DemandModelConfig] = None
    notes: Tuple[str, ...] = ()
    illustrative: bool = False

    def __post_init__(self):
        if not self.lole_standard_hours > 0:
            raise ValueError("lole_standard_hours must be > 0")
        if self.interval_minutes != self.base.interval_minutes:
            raise ValueError(
                f"scenario interval {self.interval_minutes} min does not match "
                f"trace interval {self.base.interval_minutes} min"
            )
        if not self.plans:
            raise ValueError("scenario has no plan years")
        years = sorted(self.plans)
        if years != list(range(years[0], years[-1] + 1)):
            raise ValueError(f"plan years must be contiguous, got {years}")
        for y, plan in self.plans.items():
            if plan.year != y:
                raise ValueError(f"plan keyed {y} describes year {plan.year}")
        missing = [y for y in years if y not in self.nondc_growth]
        if missing:
            raise ValueError(f"no nondc_growth entry for plan year(s) {missing}")
        if self.dc_base_mw < 0:
            raise ValueError("dc_base_mw must be >= 0")

    @property
    def years(self) -> range:
        years = sorted(self.plans)
        return range(years[0], years[-1] + 1)


def year_inputs(s: GridScenario, year: int) -> AdequacyInputs:
    if year not in s.plans:
        raise KeyError(f"year not in plan: {year} (plan covers {s.years.start}..{s.years.stop - 1})")
    plan = s.plans[year]
    base = s.base
    return AdequacyInputs(
        nondc_load=scale_nondc_load(base, s.nondc_growth[year]),
        wind=scale_renewables(base.wind_gen, base.wind_cap_base, plan.wind_mw),
        solar=scale_renewables(base.solar_gen, base.solar_cap_base, plan.solar_mw),
        firm_mw=firm_capacity(plan),
        interval_minutes=s.interval_minutes,
        lole_standard_hours=s.lole_standard_hours,
    )


def all_year_inputs(s: GridScenario) -> Dict[int, AdequacyInputs]:
    return {y: year_inputs(s, y) for y in s.years}
