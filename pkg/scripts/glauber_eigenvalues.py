"""Spectrum and low-rank accuracy of a truncated displaced thermal state.

Displacement is unitary, so an untruncated state has eigenvalues
(1 - v) v^k with v = nbar / (1 + nbar) whatever alpha is; truncation only
matters once the Fock cut bites into the photon distribution.
"""

import argparse
import math

from qppm import glauber


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, nargs="+", default=[math.sqrt(5), 5.0])
    ap.add_argument("--nbar", type=float, default=0.1)
    ap.add_argument("--eps", type=float, default=1e-5)
    ap.add_argument("--dim", type=int, default=None, help="override the trace-based size")
    ap.add_argument("--top", type=int, default=6)
    args = ap.parse_args()
    v = args.nbar / (1 + args.nbar)
    print("untruncated:", " ".join(f"{(1 - v) * v**k:.6g}" for k in range(args.top)))
    for a in args.alpha:
        rho = glauber.thermal_density(a, args.nbar, args.eps, dim=args.dim or glauber.thermal_dim(math.sqrt(5), args.nbar, args.eps))
        f = glauber.factorize(rho, 1e-8)
        print(f"|alpha|={a:.6g} n={rho.dim} trace={rho.trace:.6g}")
        print("  eigenvalues:", " ".join(f"{x:.6g}" for x in f.eigenvalues[: args.top]))
        for r in range(1, args.top + 1):
            err = glauber.factorize(rho, 1e-8, rank=r).reconstruction_error
            print(f"  rank {r}: max-entry error {err:.3e}")


if __name__ == "__main__":
    main()
