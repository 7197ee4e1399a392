"""Solve an exported SDPA problem with cvxpy and compare with Helstrom (m = 2).

    qppm export-sdp --m 2 --ns 2 --nbar 0.05 --force-n 4 --force-h 2 --out small.dat-s
    python3 scripts/solve_sdp.py small.dat-s --ns 2 --nbar 0.05 --force-n 4 --force-h 2

Needs the optional ``sdp`` extra (cvxpy). The interior-point solver behind it
holds dense KKT systems, which is fine up to N of a few dozen; the N = 324 file
of the default ``export-sdp`` example needs tens of GB and is meant for a
dedicated SDPA-format solver.
"""

import argparse

import cvxpy as cp
import numpy as np
import scipy.sparse as sp

from qppm import sdpa
from qppm.constellation import PpmParams, slot_states
from qppm.detect import helstrom_2ppm


def solve(p: sdpa.SdpaProblem) -> float:
    """Dual optimum ``max F0.Y`` subject to ``Fk.Y = ck`` and ``Y >= 0`` per block."""
    triplets = {b: ([], [], []) for b in range(1, len(p.blocks) + 1)}
    for k, b, i, j, v in p.entries:
        size = abs(p.blocks[b - 1])
        r, c, d = triplets[b]
        r.append(k)
        c.append((i - 1) * size + (j - 1))
        # F.Y over a symmetric pair counts the off-diagonal entry twice
        d.append(v if i == j else 2 * v)
    ys, lin = [], 0
    for b, size in enumerate(p.blocks, start=1):
        size = abs(size)
        y = cp.Variable((size, size), symmetric=True)
        r, c, d = triplets[b]
        a = sp.csr_matrix((d, (r, c)), shape=(p.m_dim + 1, size * size))
        lin = lin + a @ cp.vec(y, order="C")
        ys.append(y)
    prob = cp.Problem(cp.Maximize(lin[0]), [y >> 0 for y in ys] + [lin[1:] == np.array(p.c)])
    prob.solve(solver="CLARABEL")
    return prob.value


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("path")
    ap.add_argument("--ns", type=float, help="Ns of the exported instance, for the Helstrom comparison")
    ap.add_argument("--nbar", type=float, default=0.0)
    ap.add_argument("--force-n", type=int, default=None)
    ap.add_argument("--force-h", type=int, default=None)
    args = ap.parse_args()
    prob = sdpa.read(args.path)
    pc = solve(prob)
    print(f"SDP optimum Pc = {pc:.10f}")
    if args.ns is not None and len(prob.blocks) == 2:
        st = slot_states(PpmParams(2, args.ns, args.nbar, n=args.force_n, h=args.force_h))
        print(f"Helstrom     Pc = {helstrom_2ppm(st).Pc:.10f}")


if __name__ == "__main__":
    main()
