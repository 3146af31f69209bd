"""Write a scenario's synthetic base-year trace as CSV.

The output can replace the ``synthetic`` block of a scenario with a ``csv``
block, or serve as a template for real traces:

    python3 scripts/make_trace.py eirgrid --interval 60 -o eirgrid_2022.csv
"""
import argparse
import dataclasses
import sys

from dcadequacy.scenario import load_scenario
from dcadequacy.synthetic import SyntheticTraceConfig, generate
from dcadequacy.timeseries import write_trace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("scenario", help="bundled name or scenario file with a synthetic trace block")
    ap.add_argument("--interval", type=int, help="override interval minutes")
    ap.add_argument("--seed", type=int, help="override seed")
    ap.add_argument("-o", "--output", help="CSV path (default stdout)")
    args = ap.parse_args(argv)

    doc = load_scenario(args.scenario).doc
    syn = doc["traces"].get("synthetic")
    if syn is None:
        ap.error("scenario has no synthetic trace block")
    cfg = SyntheticTraceConfig.from_dict({
        "interval_minutes": doc["grid"].get("interval_minutes", 60),
        "dc_load_mw": doc["grid"]["dc_base_mw"],
        **syn,
    })
    changes = {k: v for k, v in (("interval_minutes", args.interval), ("seed", args.seed)) if v is not None}
    traces = generate(dataclasses.replace(cfg, **changes))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_trace(traces, fh)
        print(f"wrote {len(traces.total_load)} rows; wind_cap_base_mw={traces.wind_cap_base} "
              f"solar_cap_base_mw={traces.solar_cap_base}", file=sys.stderr)
    else:
        write_trace(traces, sys.stdout)


if __name__ == "__main__":
    main()
