"""Command line entry point: ``dcadequacy {assess,limit,project,outage,report}``."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .demand import project
from .qos import FLEX, parse_qos, parse_qos_list
from .report import (ASSESS_COLUMNS, DAILY_COLUMNS, DEMAND_COLUMNS, LIMITS_COLUMNS,
                     RunManifest, demand_records, run_assess, run_limits,
                     run_outage_report, write_bundles, write_table)
from .scenario import ScenarioError, load_scenario

DEFAULT_QOS = "reliable,partial:0.8,flex:cap=0.01"


def parse_years(text: str) -> List[int]:
    """``2023..2028`` (inclusive) or a single year."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            a, b = int(a), int(b)
            if b < a:
                raise ValueError
            return list(range(a, b + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad year range {text!r}; use e.g. 2023..2028") from None


def _qos_list(text: str):
    try:
        return parse_qos_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _qos(text: str):
    try:
        return parse_qos(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", action="append", required=True,
                        help="scenario file, or a bundled name (eirgrid, dominion, caiso, ercot, spp); repeatable")
    common.add_argument("--years", type=parse_years, help="inclusive range a..b (default: all plan years after the trace year)")
    common.add_argument("--override", action="append", default=[], metavar="K=V",
                        help="set a scenario value by dotted path, e.g. derating.storage=0")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, help="output directory (default: tables to stdout)")

    p = argparse.ArgumentParser(prog="dcadequacy", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("assess", parents=[common], help="LOLE for a given flat DC load")
    a.add_argument("--dc-mw", type=float, required=True)

    lim = sub.add_parser("limit", parents=[common], help="capacity limits across QoS schemes")
    lim.add_argument("--qos", type=_qos_list, default=_qos_list(DEFAULT_QOS))
    lim.add_argument("--model", choices=("exp", "linear"))
    lim.add_argument("--jobs", type=int, default=1)

    pr = sub.add_parser("project", parents=[common], help="datacenter demand projection")
    pr.add_argument("--model", choices=("exp", "linear"))

    o = sub.add_parser("outage", parents=[common], help="daily outage fractions for one year")
    o.add_argument("--year", type=int, required=True)
    o.add_argument("--new-dc-mw", type=float,
                   help="new DC capacity (default: demand in --year minus existing DC)")
    o.add_argument("--qos", type=_qos, default=FLEX)
    o.add_argument("--model", choices=("exp", "linear"))

    r = sub.add_parser("report", parents=[common], help="full bundle: limits, outages, summary, manifest")
    r.add_argument("--qos", type=_qos_list, default=_qos_list(DEFAULT_QOS))
    r.add_argument("--model", choices=("exp", "linear"))
    r.add_argument("--jobs", type=int, default=1)
    return p


def _emit(records, columns, args, name):
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / f"{name}.{args.format}"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_table(records, columns, fh, args.format)
    else:
        write_table(records, columns, sys.stdout, args.format)


def _model(args) -> Optional[str]:
    m = getattr(args, "model", None)
    return {"exp": "exponential"}.get(m, m)


def _demand_in_year(scenario, year: int, model: Optional[str]) -> float:
    if scenario.demand is None:
        raise ValueError(f"scenario {scenario.name} has no demand section; pass --new-dc-mw")
    return project(scenario.demand, [year], model)[year]


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        loaded = [load_scenario(s, args.override) for s in args.scenario]
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    failures = []
    try:
        if args.command == "assess":
            recs = [r for ls in loaded for r in run_assess(ls.scenario, args.dc_mw, args.years)]
            _emit(recs, ASSESS_COLUMNS, args, "assess")
        elif args.command == "project":
            recs = [r for ls in loaded for r in demand_records(ls.scenario, args.years, _model(args))]
            _emit(recs, DEMAND_COLUMNS, args, "demand")
        elif args.command == "limit":
            bundles = [run_limits(ls.scenario, args.qos, args.years, _model(args), args.jobs)
                       for ls in loaded]
            failures = [f for b in bundles for f in b.failures]
            _emit([r.as_record() for b in bundles for r in b.rows], LIMITS_COLUMNS, args, "limits")
        elif args.command == "outage":
            reports = []
            for ls in loaded:
                s = ls.scenario
                new_dc = args.new_dc_mw
                if new_dc is None:
                    demand = _demand_in_year(s, args.year, _model(args))
                    new_dc = max(demand - s.dc_base_mw, 0.0)
                reports.append(run_outage_report(s, args.year, new_dc, args.qos))
            _emit([rec for o in reports for rec in o.records()], DAILY_COLUMNS, args, "daily_outage")
            summary = json.dumps([dict(scenario=o.scenario, **o.summary()) for o in reports],
                                 indent=2, sort_keys=True)
            if args.out:
                (args.out / "outage_summary.json").write_text(summary + "\n", encoding="utf-8")
            else:
                print(summary, file=sys.stderr)
        elif args.command == "report":
            if args.out is None:
                print("error: report needs --out", file=sys.stderr)
                return 2
            bundles = [run_limits(ls.scenario, args.qos, args.years, _model(args), args.jobs)
                       for ls in loaded]
            failures = [f for b in bundles for f in b.failures]
            digest = hashlib.sha256("".join(ls.digest for ls in loaded).encode()).hexdigest()
            manifest = RunManifest(tuple(args.scenario), "report", tuple(args.override), digest)
            write_bundles(bundles, manifest, args.out, args.format)
    except (KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1

    for scenario, year, err in failures:
        print(f"failed: scenario={scenario} year={year}: {err}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
