#!/usr/bin/env python3
"""Write the data behind the three standard plots as CSV, optionally rendering them.

    python3 scripts/reproduce_figures.py --outdir figures [--plot]

frontier_G_F.csv      optimal (G, F) frontier for 2j = 1..6
normalized_I_D.csv    normalized (I, D) curves for 2j = 1..6 plus the oscillator limit
trace_xi_j1.csv       Tr xi against I for j = 1
"""

import argparse
import csv
import os
import sys

import numpy as np

from spin_tradeoff.tradeoff import ho_tradeoff, sweep_curve

SPINS = range(1, 7)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def fmt(x):
    return f"{x:.12g}"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--points", type=int, default=201)
    ap.add_argument("--plot", action="store_true", help="also render PNGs (needs matplotlib)")
    args = ap.parse_args(argv)
    os.makedirs(args.outdir, exist_ok=True)
    grid = np.linspace(0.0, 1.0, args.points)

    curves = {two_j: sweep_curve(two_j, grid) for two_j in SPINS}
    rows_gf, rows_id = [], []
    for two_j, pts in curves.items():
        rows_gf += [[two_j, fmt(pt.p), fmt(pt.G), fmt(pt.F)] for pt in pts]
        rows_id += [[two_j, fmt(pt.p), fmt(pt.I), fmt(pt.D)] for pt in pts]
    rows_id += [["ho", "", fmt(i), fmt(ho_tradeoff(i))] for i in grid]
    write_csv(os.path.join(args.outdir, "frontier_G_F.csv"), ["two_j", "p", "G", "F"], rows_gf)
    write_csv(os.path.join(args.outdir, "normalized_I_D.csv"), ["two_j", "p", "I", "D"], rows_id)
    write_csv(
        os.path.join(args.outdir, "trace_xi_j1.csv"),
        ["p", "I", "trace_xi"],
        [[fmt(pt.p), fmt(pt.I), fmt(pt.trace_xi)] for pt in curves[2]],
    )

    if args.plot:
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not installed; CSVs written, plots skipped", file=sys.stderr)
            return 0
        fig, ax = plt.subplots()
        for two_j, pts in curves.items():
            ax.plot([p.G for p in pts], [p.F for p in pts], label=f"2j={two_j}")
        ax.set(xlabel="G", ylabel="F")
        ax.legend()
        fig.savefig(os.path.join(args.outdir, "frontier_G_F.png"), dpi=150)

        fig, ax = plt.subplots()
        for two_j, pts in curves.items():
            ax.plot([p.I for p in pts], [p.D for p in pts], label=f"2j={two_j}")
        ax.plot(grid, [ho_tradeoff(i) for i in grid], "k--", label="oscillator")
        ax.set(xlabel="I", ylabel="D")
        ax.legend()
        fig.savefig(os.path.join(args.outdir, "normalized_I_D.png"), dpi=150)

        fig, ax = plt.subplots()
        ax.plot([p.I for p in curves[2]], [p.trace_xi for p in curves[2]])
        ax.set(xlabel="I", ylabel="Tr xi (j=1)")
        fig.savefig(os.path.join(args.outdir, "trace_xi_j1.png"), dpi=150)
    print(f"wrote {args.outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
