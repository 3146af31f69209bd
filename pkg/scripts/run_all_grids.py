"""Limits for the five bundled grids, with a one-line verdict per grid.

    python3 scripts/run_all_grids.py                 # hourly traces, exponential demand
    python3 scripts/run_all_grids.py --interval 15 --model linear --out results/
"""
import argparse
import time

from dcadequacy.qos import parse_qos_list
from dcadequacy.report import RunManifest, run_limits, write_bundles
from dcadequacy.scenario import BUNDLED, load_scenario

SCHEMES = "reliable,partial:0.8,flex:cap=0.01"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--interval", type=int, help="trace interval in minutes (default: per scenario)")
    ap.add_argument("--model", choices=("exponential", "linear"))
    ap.add_argument("--override", action="append", default=[])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", help="also write the report bundle here")
    args = ap.parse_args(argv)

    overrides = list(args.override)
    if args.interval:
        overrides.append(f"grid.interval_minutes={args.interval}")
    schemes = parse_qos_list(SCHEMES)

    t0 = time.perf_counter()
    loaded = [load_scenario(name, overrides) for name in BUNDLED]
    bundles = [run_limits(ls.scenario, schemes, model=args.model, jobs=args.jobs) for ls in loaded]

    print(f"{'grid':<10}{'scheme':<16}{'limit/demand in last year':>27}  first shortage")
    for ls, b in zip(loaded, bundles):
        last = b.rows[-1].year
        for q in schemes:
            row = next(r for r in b.rows if r.qos == q.label and r.year == last)
            coverage = (row.committed_limit_mw + ls.scenario.dc_base_mw) / row.demand_mw
            first = b.first_shortage_year(q.label)
            print(f"{b.scenario:<10}{q.label:<16}{coverage:>26.0%}   {first or '-'}")
    print(f"({time.perf_counter() - t0:.1f} s)")

    if args.out:
        manifest = RunManifest(BUNDLED, "run_all_grids", tuple(overrides),
                               "".join(ls.digest[:8] for ls in loaded))
        write_bundles(bundles, manifest, args.out)


if __name__ == "__main__":
    main()
