"""Plot committed limits against demand from a ``limits.csv`` (needs matplotlib).

    python3 scripts/plot_limits.py results/limits.csv -o limits.png
"""
import argparse
from collections import defaultdict

from dcadequacy.report import read_limits_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("limits_csv")
    ap.add_argument("-o", "--output", default="limits.png")
    args = ap.parse_args(argv)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.limits_csv, newline="") as fh:
        rows = read_limits_csv(fh)
    grids = list(dict.fromkeys(r.scenario for r in rows))
    fig, axes = plt.subplots(1, len(grids), figsize=(4 * len(grids), 3.5), squeeze=False)
    for ax, grid in zip(axes[0], grids):
        series = defaultdict(list)
        demand = {}
        for r in rows:
            if r.scenario != grid:
                continue
            # total supportable DC: committed new capacity plus existing, i.e. surplus + demand
            series[r.qos].append((r.year, r.surplus_mw + r.demand_mw))
            demand[r.year] = r.demand_mw
        for qos, pts in series.items():
            ax.step(*zip(*pts), where="mid", label=qos)
        ax.plot(*zip(*sorted(demand.items())), "k--", label="demand")
        ax.set_title(grid)
        ax.set_xlabel("year")
    axes[0][0].set_ylabel("datacenter MW")
    axes[0][-1].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
