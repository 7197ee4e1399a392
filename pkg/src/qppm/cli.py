"""Command-line entry point: ``sweep``, ``selftest`` and ``export-sdp``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import glauber


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _methods(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qppm", description="Quantum PPM detection experiments")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="error probability over an (Ns, nbar) grid")
    sw.add_argument("--m", type=_ints, required=True, help="PPM order(s), e.g. 4 or 2,3,4")
    sw.add_argument("--ns", required=True, help="Ns grid: start:stop:step (inclusive) or a,b,c")
    sw.add_argument("--nbar", default="0", help="comma-separated thermal noise levels")
    sw.add_argument("--methods", type=_methods, default=("srm",),
                    help="srm,helstrom,pure-closed-form,classical,ook-baselines")
    sw.add_argument("--eps", type=float, default=glauber.DEFAULT_EPS, help="truncation accuracy")
    sw.add_argument("--nu", type=float, default=glauber.DEFAULT_NU, help="rank-selection accuracy")
    sw.add_argument("--force-n", type=int, default=None, help="fixed slot dimension")
    sw.add_argument("--force-h", type=int, default=None, help="fixed practical rank")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--no-plot", action="store_true")
    sw.add_argument("--out", type=Path, required=True, help="output directory")

    sub.add_parser("selftest", help="run the small-instance oracle checks")

    ex = sub.add_parser("export-sdp", help="write the optimal-POVM problem in SDPA sparse format")
    ex.add_argument("--m", type=int, required=True)
    ex.add_argument("--ns", type=float, required=True)
    ex.add_argument("--nbar", type=float, default=0.0)
    ex.add_argument("--eps", type=float, default=glauber.DEFAULT_EPS)
    ex.add_argument("--nu", type=float, default=glauber.DEFAULT_NU)
    ex.add_argument("--force-n", type=int, default=None)
    ex.add_argument("--force-h", type=int, default=None)
    ex.add_argument("--cap", type=int, default=None, help="largest composite dimension N to write")
    ex.add_argument("--out", type=Path, required=True)
    return p


def _sweep(args) -> int:
    from .sweep import SweepSpec, parse_grid, render, run_sweep

    rows, failures = [], []
    for m in args.m:
        spec = SweepSpec(
            m=m, Ns_grid=parse_grid(args.ns), nbar_list=parse_grid(args.nbar),
            methods=args.methods, eps=args.eps, nu=args.nu,
            force_n=args.force_n, force_h=args.force_h, workers=args.workers,
        )
        res = run_sweep(spec, progress=sys.stderr.isatty())
        rows.extend(res.rows)
        failures.extend(res.failures)
    for f in failures:
        print(f"skipped m={f.m} {f.method} Ns={f.Ns:g} nbar={f.nbar:g}: {f.message}", file=sys.stderr)
    if not rows:
        print("no points could be evaluated", file=sys.stderr)
        return 1
    written = render(rows, args.out, ("csv",) if args.no_plot else ("csv", "plot"))
    for p in written:
        print(p)
    return 0 if not failures else 3


def _selftest(args) -> int:
    from .selftest import run

    checks = run()
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.name}: {c.detail}")
    bad = sum(not c.ok for c in checks)
    print(f"{len(checks) - bad}/{len(checks)} checks passed")
    return 1 if bad else 0


def _export(args) -> int:
    from .constellation import PpmParams
    from .detect import EXPORT_CAP, export_sdp

    params = PpmParams(
        m=args.m, Ns=args.ns, nbar=args.nbar, eps=args.eps, nu=args.nu,
        n=args.force_n, h=args.force_h,
    )
    prob = export_sdp(params, args.out, cap=args.cap or EXPORT_CAP)
    print(f"{args.out}: {prob.m_dim} constraints, blocks {list(prob.blocks)}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handlers = {"sweep": _sweep, "selftest": _selftest, "export-sdp": _export}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
