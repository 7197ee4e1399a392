"""3- and 4-PPM in thermal noise with the dimensions used for the desk-scale runs.

Defaults: m=3 with n=40, h=8 (H=512) and m=4 with n=30, h=6 (H=1296). A 4-PPM
point takes several seconds on one core; the whole default run is a few minutes
per noise level.
"""

import argparse
import sys

from qppm.sweep import SweepSpec, parse_grid, render, run_sweep

DIMS = {3: (40, 8), 4: (30, 6)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, choices=sorted(DIMS), default=3)
    ap.add_argument("--ns", default="0.5:6.5:0.5")
    ap.add_argument("--nbar", default="0.05")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    n, h = DIMS[args.m]
    spec = SweepSpec(m=args.m, Ns_grid=parse_grid(args.ns), nbar_list=parse_grid(args.nbar),
                     methods=("srm", "classical", "pure-closed-form"), force_n=n, force_h=h,
                     workers=args.workers)
    res = run_sweep(spec, progress=sys.stderr.isatty())
    for f in res.failures:
        print("skipped:", f)
    for p in render(res.rows, args.out or f"results/ppm{args.m}"):
        print(p)


if __name__ == "__main__":
    main()
