"""Orchestration of per-year, per-scheme limit runs and their tabular output.

Tables are CSV (or JSON records) with fixed formatting: MW to 2 decimals,
percentages to 1 decimal, daily outage fractions to 6 decimals.  Row order
depends only on the inputs, never on how cells were scheduled.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .adequacy import LimitResult, assess, committed_limits
from .demand import DemandProjection, cloud_baseline, project
from .grid_model import GridScenario, year_inputs
from .qos import (QosScheme, daily_outage_fractions, dispatch, energy_availability,
                  outage_rate, parse_qos, qos_limit)

LIMITS_COLUMNS = ("scenario", "year", "qos", "annual_limit_mw", "committed_limit_mw",
                  "demand_mw", "surplus_mw", "flags")
DAILY_COLUMNS = ("scenario", "year", "qos", "date", "outage_fraction")
DEMAND_COLUMNS = ("scenario", "year", "model", "demand_mw", "cloud_only_mw")
ASSESS_COLUMNS = ("scenario", "year", "dc_mw", "lole_hours", "standard_hours", "passes")


def fmt_mw(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def fmt_pct(fraction: float) -> str:
    s = f"{100 * fraction:.1f}"
    return "0.0" if s == "-0.0" else s


def _round_mw(x: float) -> Optional[float]:
    return None if math.isnan(x) else (x if math.isinf(x) else round(x, 2))


@dataclass(frozen=True)
class RunManifest:
    scenarios: Tuple[str, ...]
    command: str
    overrides: Tuple[str, ...]
    input_digest: str
    tool_version: str = __version__

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "overrides": list(self.overrides),
            "scenarios": list(self.scenarios),
            "tool_version": self.tool_version,
        }


@dataclass(frozen=True)
class LimitRow:
    scenario: str
    year: int
    qos: str
    annual_limit_mw: float
    committed_limit_mw: float
    demand_mw: float
    surplus_mw: float
    flags: str = ""

    def as_record(self) -> Dict[str, str]:
        return {
            "scenario": self.scenario,
            "year": str(self.year),
            "qos": self.qos,
            "annual_limit_mw": fmt_mw(self.annual_limit_mw),
            "committed_limit_mw": fmt_mw(self.committed_limit_mw),
            "demand_mw": fmt_mw(self.demand_mw),
            "surplus_mw": fmt_mw(self.surplus_mw),
            "flags": self.flags,
        }


@dataclass(frozen=True, eq=False)
class OutageReport:
    scenario: str
    year: int
    qos: str
    new_dc_mw: float
    dates: Tuple[str, ...]
    daily_fractions: np.ndarray
    outage_hours: float
    outage_rate: float
    energy_availability: float
    shed_energy_mwh: float
    grid_lole_hours: float

    @property
    def time_availability(self) -> float:
        return 1.0 - self.outage_rate

    def summary(self) -> dict:
        return {
            "year": self.year,
            "qos": self.qos,
            "new_dc_mw": _round_mw(self.new_dc_mw),
            "outage_hours": round(self.outage_hours, 2),
            "outage_rate_pct": float(fmt_pct(self.outage_rate)),
            "availability_time_pct": float(fmt_pct(self.time_availability)),
            "availability_energy_pct": float(fmt_pct(self.energy_availability)),
            "shed_energy_mwh": round(self.shed_energy_mwh, 2),
            "grid_lole_hours": round(self.grid_lole_hours, 2),
            "outage_days": int(np.count_nonzero(self.daily_fractions)),
        }

    def records(self) -> List[Dict[str, str]]:
        return [{"scenario": self.scenario, "year": str(self.year), "qos": self.qos,
                 "date": d, "outage_fraction": f"{f:.6f}"}
                for d, f in zip(self.dates, self.daily_fractions)]


@dataclass(eq=False)
class ReportBundle:
    scenario: str
    rows: List[LimitRow]
    demand: DemandProjection
    outages: List[OutageReport]
    lole_standard_hours: float
    notes: Tuple[str, ...] = ()
    failures: List[Tuple[str, int, str]] = field(default_factory=list)

    def first_shortage_year(self, qos: str) -> Optional[int]:
        for row in self.rows:
            if row.qos == qos and row.surplus_mw < 0:
                return row.year
        return None

    def summary(self) -> dict:
        schemes = list(dict.fromkeys(r.qos for r in self.rows))
        return {
            "scenario": self.scenario,
            "lole_standard_hours": self.lole_standard_hours,
            "demand_model": self.demand.model,
            "first_shortage_year": {q: self.first_shortage_year(q) for q in schemes},
            "outage": {o.qos: o.summary() for o in self.outages},
            "notes": list(self.notes),
            "failures": [{"scenario": s, "year": y, "error": e} for s, y, e in self.failures],
        }


def _years(scenario: GridScenario, years: Optional[Sequence[int]]) -> List[int]:
    if years is None:
        # skip the base year: it is the trace year, not a planning year
        ys = [y for y in scenario.years if y != scenario.base.year] or list(scenario.years)
    else:
        ys = list(years)
        missing = [y for y in ys if y not in scenario.plans]
        if missing:
            raise KeyError(f"year not in plan: {missing} for scenario {scenario.name}")
    if ys != list(range(ys[0], ys[-1] + 1)):
        raise ValueError("report years must be contiguous")
    return ys


def _demand(scenario: GridScenario, years: Sequence[int], model: Optional[str]) -> DemandProjection:
    if scenario.demand is None:
        raise ValueError(f"scenario {scenario.name} has no demand section")
    return project(scenario.demand, years, model)


def run_outage_report(scenario: GridScenario, year: int, new_dc_mw: float,
                      qos: QosScheme) -> OutageReport:
    inputs = year_inputs(scenario, year)
    result = dispatch(inputs, scenario.dc_base_mw, new_dc_mw, qos)
    days = inputs.nondc_load.timestamps()[:: inputs.nondc_load.intervals_per_day]
    return OutageReport(
        scenario=scenario.name,
        year=year,
        qos=qos.label,
        new_dc_mw=new_dc_mw,
        dates=tuple(str(d.astype("datetime64[D]")) for d in days),
        daily_fractions=daily_outage_fractions(result, inputs),
        outage_hours=result.outage_hours,
        outage_rate=outage_rate(result, inputs),
        energy_availability=energy_availability(result, inputs),
        shed_energy_mwh=result.shed_energy_mwh,
        grid_lole_hours=result.grid_lole_hours,
    )


def run_limits(scenario: GridScenario, qos_list: Sequence[QosScheme],
               years: Optional[Sequence[int]] = None, model: Optional[str] = None,
               jobs: int = 1, outage_year: Optional[int] = None) -> ReportBundle:
    """Annual and committed limits per scheme, demand, surplus and final-year outages.

    Outages are simulated for ``outage_year`` (default: last year) with the new
    capacity needed to meet that year's demand on top of existing DC.
    """
    years = _years(scenario, years)
    demand = _demand(scenario, years, model)
    existing = scenario.dc_base_mw
    cells = [(y, q) for q in qos_list for y in years]

    def compute(cell) -> Tuple[Optional[LimitResult], Optional[str]]:
        y, q = cell
        try:
            return qos_limit(year_inputs(scenario, y), existing, q), None
        except Exception as exc:  # reported per cell, see failures
            return None, f"{type(exc).__name__}: {exc}"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(compute, cells))
    else:
        results = [compute(c) for c in cells]
    by_cell = dict(zip(cells, results))

    rows: List[LimitRow] = []
    failures: List[Tuple[str, int, str]] = []
    for q in qos_list:
        annual: Dict[int, float] = {}
        flags: Dict[int, str] = {}
        for y in years:
            limit, err = by_cell[(y, q)]
            if limit is None:
                annual[y], flags[y] = math.nan, "failed"
                failures.append((scenario.name, y, f"{q.label}: {err}"))
                continue
            annual[y] = limit.mw
            flags[y] = ("infeasible_at_zero" if limit.infeasible_at_zero
                        else "upper_bound_binding" if limit.upper_bound_binding else "")
        committed = committed_limits(annual)
        for y in years:
            surplus = committed[y] + existing - demand[y]
            rows.append(LimitRow(scenario.name, y, q.label, annual[y], committed[y],
                                 demand[y], surplus, flags[y]))

    year = years[-1] if outage_year is None else outage_year
    new_dc = max(demand[year] - existing, 0.0) if year in demand.demand_mw else 0.0
    outages = []
    for q in qos_list:
        try:
            outages.append(run_outage_report(scenario, year, new_dc, q))
        except Exception as exc:
            failures.append((scenario.name, year, f"{q.label} outage: {type(exc).__name__}: {exc}"))
    return ReportBundle(scenario.name, rows, demand, outages, scenario.lole_standard_hours,
                        scenario.notes, failures)


def run_assess(scenario: GridScenario, dc_mw: float, years: Optional[Sequence[int]] = None):
    out = []
    for y in _years(scenario, years):
        inputs = year_inputs(scenario, y)
        lole = assess(inputs, dc_mw).lole_hours
        out.append({"scenario": scenario.name, "year": str(y), "dc_mw": fmt_mw(dc_mw),
                    "lole_hours": fmt_mw(lole),
                    "standard_hours": fmt_mw(inputs.lole_standard_hours),
                    "passes": "true" if lole <= inputs.lole_standard_hours else "false"})
    return out


def demand_records(scenario: GridScenario, years: Optional[Sequence[int]] = None,
                   model: Optional[str] = None) -> List[Dict[str, str]]:
    years = _years(scenario, years)
    proj = _demand(scenario, years, model)
    cloud = cloud_baseline(scenario.demand, years)
    return [{"scenario": scenario.name, "year": str(y), "model": proj.model,
             "demand_mw": fmt_mw(proj[y]), "cloud_only_mw": fmt_mw(cloud[y])} for y in years]


# ---- serialization ------------------------------------------------------------------

def write_table(records: Iterable[Dict[str, str]], columns: Sequence[str], stream, fmt: str = "csv") -> None:
    records = list(records)
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
    elif fmt == "json":
        stream.write(json.dumps([{c: r[c] for c in columns} for r in records], indent=2) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_limits_csv(stream) -> List[LimitRow]:
    """Parse a limits table written by :func:`write_table`; validates header and types."""
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != LIMITS_COLUMNS:
        raise ValueError(f"limits table header must be {','.join(LIMITS_COLUMNS)}")
    rows = []
    for rec in reader:
        rows.append(LimitRow(rec["scenario"], int(rec["year"]), parse_qos(rec["qos"]).label,
                             float(rec["annual_limit_mw"]), float(rec["committed_limit_mw"]),
                             float(rec["demand_mw"]), float(rec["surplus_mw"]), rec["flags"]))
    return rows


def read_daily_csv(stream) -> List[Tuple[str, int, str, str, float]]:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != DAILY_COLUMNS:
        raise ValueError(f"daily outage table header must be {','.join(DAILY_COLUMNS)}")
    out = []
    for rec in reader:
        frac = float(rec["outage_fraction"])
        if not 0.0 <= frac <= 1.0:
            raise ValueError(f"outage fraction out of range: {frac}")
        np.datetime64(rec["date"], "D")
        out.append((rec["scenario"], int(rec["year"]), parse_qos(rec["qos"]).label, rec["date"], frac))
    return out


def write_bundles(bundles: Sequence[ReportBundle], manifest: RunManifest, out_dir: Path,
                  fmt: str = "csv") -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "csv" if fmt == "csv" else "json"
    written = []

    def emit(name, records, columns):
        path = out_dir / f"{name}.{ext}"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_table(records, columns, fh, fmt)
        written.append(path)

    emit("limits", [r.as_record() for b in bundles for r in b.rows], LIMITS_COLUMNS)
    emit("daily_outage", [rec for b in bundles for o in b.outages for rec in o.records()], DAILY_COLUMNS)
    summary = {"scenarios": [b.summary() for b in bundles]}
    for name, doc in (("summary", summary), ("manifest", manifest.as_dict())):
        path = out_dir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
    return written
