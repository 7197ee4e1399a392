"""Noiseless PPM: SRM (optimal for pure states) against photon counting, m = 2, 3, 4."""

import argparse

from qppm.sweep import SweepSpec, parse_grid, render, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", default="2,3,4")
    ap.add_argument("--ns", default="0.25:10:0.25")
    ap.add_argument("--out", default="results/pure")
    args = ap.parse_args()
    rows = []
    for m in (int(x) for x in args.m.split(",")):
        spec = SweepSpec(m=m, Ns_grid=parse_grid(args.ns), nbar_list=(0.0,),
                         methods=("srm", "pure-closed-form", "classical"))
        rows += run_sweep(spec).rows
    for p in render(rows, args.out):
        print(p)


if __name__ == "__main__":
    main()
