"""Fast oracle checks on small instances, run by ``qppm selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import detect, gus, reference
from .constellation import PpmParams, composite_factor, gram_block, slot_states
from .srm import pc_gram_matrix, pc_gram_operator


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str


def _shuffle_matches_reference() -> tuple[bool, str]:
    s = gus.shuffle_operator(2, 4).dense()
    ref = np.zeros((16, 16))
    ref[np.arange(16), reference.SHUFFLE_2_4_COLS] = 1
    sp = gus.spectrum(2, 4)
    recon = sum(sp.eigenvalue(k) * sp.projector(k) for k in range(4))
    err = float(np.max(np.abs(recon - s)))
    ok = np.array_equal(s, ref) and sp.multiplicities == reference.MULTIPLICITIES_2_4 and err < 1e-12
    return ok, f"spectral reconstruction error {err:.1e}"


def _counting() -> tuple[bool, str]:
    dec = gus.cycles(2, 10)
    ok = (
        dec.counts == reference.MIN_PERIOD_COUNTS_2_10
        and dec.cycle_counts == reference.CYCLE_COUNTS_2_10
        and gus.count_multiplicities(2, 10) == reference.MULTIPLICITIES_2_10
    )
    return ok, f"N_p={dec.counts}"


def _pure_closed_form() -> tuple[bool, str]:
    worst = 0.0
    for m in (2, 3, 4):
        for ns in (0.5, 2.0, 6.0):
            pc = pc_gram_matrix(slot_states(PpmParams(m, ns))).Pc
            ref = 1 - detect.pure_ppm_pe(m, ns)
            worst = max(worst, abs(pc - ref) / ref)
    return worst <= 1e-9, f"max relative error {worst:.1e}"


def _path_equivalence() -> tuple[bool, str]:
    worst = 0.0
    for m, n, h, ns, nb in ((2, 4, 2, 1.0, 0.05), (3, 3, 2, 1.5, 0.1), (2, 6, 3, 2.0, 0.2)):
        st = slot_states(PpmParams(m, ns, nb, n=n, h=h))
        worst = max(worst, abs(pc_gram_matrix(st).Pc - pc_gram_operator(st).Pc))
    return worst <= 1e-9, f"max |dPc| {worst:.1e}"


def _gram_blocks() -> tuple[bool, str]:
    st = slot_states(PpmParams(3, 1.0, 0.1, n=3, h=2))
    g0 = composite_factor(st, 0)
    err = max(
        float(np.max(np.abs(g0.T @ composite_factor(st, s) - gram_block(st, s)))) for s in range(3)
    )
    return err < 1e-12, f"max block error {err:.1e}"


def _helstrom_vs_srm() -> tuple[bool, str]:
    st = slot_states(PpmParams(2, 2.0, 0.05, n=8, h=3))
    hel = detect.helstrom_2ppm(st)
    dense = detect.helstrom_2ppm_dense(st)
    srm = pc_gram_matrix(st)
    ok = abs(hel.Pc - dense.Pc) < 1e-10 and srm.Pe >= hel.Pe - 1e-10
    return ok, f"Pe helstrom {hel.Pe:.4e}, srm {srm.Pe:.4e}"


def _classical() -> tuple[bool, str]:
    vals = [detect.classical_ppm_pe(m, 0.0, 0.1) for m in (2, 3, 4, 8)]
    ok = all(v == (m - 1) / m for v, m in zip(vals, (2, 3, 4, 8)))
    r = detect.ook_baselines(10.0).helstrom / detect.ook_baselines(10.0).helstrom_asymptotic
    return ok and abs(r - 1) < 0.02, f"asymptote ratio {r:.6f}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "symmetry operator n=2 m=4": _shuffle_matches_reference,
    "cycle counting n=2 m=10": _counting,
    "pure states vs closed form": _pure_closed_form,
    "gram-matrix vs gram-operator": _path_equivalence,
    "gram blocks vs dense factors": _gram_blocks,
    "helstrom factored vs dense, srm >= helstrom": _helstrom_vs_srm,
    "classical baselines": _classical,
}


def run() -> list[Check]:
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail))
    return out
