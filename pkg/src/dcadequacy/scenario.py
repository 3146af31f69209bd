"""Scenario documents: JSON files with ``grid``, ``derating``, ``plans``, ``traces``
and ``demand`` sections.  See ``docs/scenario_schema.md``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Tuple

from .demand import DemandModelConfig, RevenueChainParams
from .grid_model import DeratingFactors, GridScenario, YearResources
from .synthetic import SyntheticTraceConfig, generate
from .timeseries import BaseYearTraces, parse_trace

BUNDLED = ("eirgrid", "dominion", "caiso", "ercot", "spp")

_GRID_KEYS = {"name", "lole_standard_hours", "interval_minutes", "dc_base_mw",
              "illustrative", "notes"}
_PLAN_KEYS = {"year", "conventional_mw", "wind_mw", "solar_mw", "storage_mw",
              "other_mw", "nondc_growth"}
_TRACE_KEYS = {"csv", "synthetic", "wind_cap_base_mw", "solar_cap_base_mw"}
_DEMAND_KEYS = {"model", "base_capacity_mw", "base_year", "cloud_cagr",
                "cloud_cagr_global_avg", "ai_cagr_increment_global",
                "linear_quarterly_revenue_growth", "linear_anchor_quarters", "chain"}


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LoadedScenario:
    scenario: GridScenario
    doc: dict
    source: str
    digest: str


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("dcadequacy") / "scenarios" / f"{name}.json"))


def resolve(name_or_path: str) -> Path:
    if name_or_path.lower() in BUNDLED:
        return bundled_path(name_or_path.lower())
    path = Path(name_or_path)
    if not path.is_file():
        raise ScenarioError(f"scenario file not found: {name_or_path}")
    return path


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(doc: dict, assignment: str) -> None:
    """Apply ``dotted.path=value`` in place.

    Path segments index dicts by key; inside ``plans`` a segment selects the
    entry with that ``year``.  Values are read as JSON when possible, else as
    plain strings.
    """
    if "=" not in assignment:
        raise ScenarioError(f"override {assignment!r} is not of the form key=value")
    path, raw = assignment.split("=", 1)
    keys = [k for k in path.strip().split(".") if k]
    if not keys:
        raise ScenarioError(f"override {assignment!r} has an empty key")
    node: Any = doc
    for i, key in enumerate(keys[:-1]):
        if isinstance(node, list):
            matches = [e for e in node if isinstance(e, dict) and str(e.get("year")) == key]
            if not matches:
                raise ScenarioError(f"override {path!r}: no entry with year {key}")
            node = matches[0]
        elif isinstance(node, dict):
            if key not in node:
                raise ScenarioError(f"override {path!r}: unknown key {'.'.join(keys[:i + 1])!r}")
            node = node[key]
        else:
            raise ScenarioError(f"override {path!r}: cannot descend into {key!r}")
    if not isinstance(node, dict):
        raise ScenarioError(f"override {path!r}: target is not a mapping")
    node[keys[-1]] = _parse_value(raw.strip())


def _check_keys(section: str, d: Any, allowed: set) -> dict:
    if not isinstance(d, dict):
        raise ScenarioError(f"section {section!r} must be a mapping")
    unknown = set(d) - allowed
    if unknown:
        raise ScenarioError(f"unknown key(s) in {section!r}: {sorted(unknown)}")
    return d


def _demand_config(d: dict) -> DemandModelConfig:
    d = dict(_check_keys("demand", d, _DEMAND_KEYS))
    chain = RevenueChainParams(**d.pop("chain", {}))
    if "linear_anchor_quarters" in d:
        d["linear_anchor_quarters"] = tuple(tuple(a) for a in d["linear_anchor_quarters"])
    if d.get("model") == "exp":
        d["model"] = "exponential"
    return DemandModelConfig(chain=chain, **d)


def _load_traces(t: dict, grid: dict, base_dir: Path) -> Tuple[BaseYearTraces, bytes]:
    t = _check_keys("traces", t, _TRACE_KEYS)
    if ("csv" in t) == ("synthetic" in t):
        raise ScenarioError("traces needs exactly one of 'csv' or 'synthetic'")
    if "csv" in t:
        path = Path(t["csv"])
        if not path.is_absolute():
            path = base_dir / path
        data = path.read_bytes()
        traces = parse_trace(data, dc_load_base=grid["dc_base_mw"],
                             wind_cap_base=t.get("wind_cap_base_mw"),
                             solar_cap_base=t.get("solar_cap_base_mw"))
        return traces, data
    syn = dict(t["synthetic"])
    syn.setdefault("interval_minutes", grid["interval_minutes"])
    syn.setdefault("dc_load_mw", grid["dc_base_mw"])
    return generate(SyntheticTraceConfig.from_dict(syn)), b""


def build_scenario(doc: dict, base_dir: Path = Path(".")) -> Tuple[GridScenario, bytes]:
    """Build a :class:`GridScenario` from a parsed document; also returns raw trace bytes."""
    for section in ("grid", "derating", "plans", "traces"):
        if section not in doc:
            raise ScenarioError(f"scenario is missing section {section!r}")
    unknown = set(doc) - {"grid", "derating", "plans", "traces", "demand"}
    if unknown:
        raise ScenarioError(f"unknown section(s): {sorted(unknown)}")
    grid = _check_keys("grid", doc["grid"], _GRID_KEYS)
    grid = {"lole_standard_hours": 8.0, "interval_minutes": 60, **grid}
    derating = DeratingFactors(**_check_keys("derating", doc["derating"], {"conventional", "storage"}))

    plans, growth = {}, {}
    for entry in doc["plans"]:
        entry = dict(_check_keys("plans[]", entry, _PLAN_KEYS))
        year = int(entry.pop("year"))
        if year in plans:
            raise ScenarioError(f"duplicate plan year {year}")
        if "nondc_growth" not in entry:
            raise ScenarioError(f"plan year {year} has no nondc_growth")
        growth[year] = float(entry.pop("nondc_growth"))
        plans[year] = YearResources(year=year, derating=derating, **entry)

    traces, trace_bytes = _load_traces(doc["traces"], grid, base_dir)
    demand = _demand_config(doc["demand"]) if "demand" in doc else None
    scenario = GridScenario(
        name=str(grid["name"]),
        lole_standard_hours=float(grid["lole_standard_hours"]),
        interval_minutes=int(grid["interval_minutes"]),
        base=traces,
        plans=plans,
        dc_base_mw=float(grid["dc_base_mw"]),
        nondc_growth=growth,
        demand=demand,
        notes=tuple(grid.get("notes", ())),
        illustrative=bool(grid.get("illustrative", False)),
    )
    return scenario, trace_bytes


def load_scenario(name_or_path: str, overrides: Iterable[str] = ()) -> LoadedScenario:
    path = resolve(name_or_path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from None
    for assignment in overrides:
        apply_override(doc, assignment)
    try:
        scenario, trace_bytes = build_scenario(doc, path.parent)
    except (TypeError, KeyError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise ScenarioError(f"{path}: {exc}") from None
        raise ScenarioError(f"{path}: {type(exc).__name__}: {exc}") from None
    digest = hashlib.sha256()
    digest.update(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode())
    digest.update(trace_bytes)
    return LoadedScenario(scenario, doc, str(path), digest.hexdigest())

