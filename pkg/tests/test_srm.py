import math

import numpy as np
import pytest

from qppm import gus
from qppm.constellation import DimensionCapError, PpmParams, composite_factor, gram_blocks, slot_states
from qppm.detect import pure_ppm_pe
from qppm.linalg import LinalgError
from qppm.srm import (
    DftBlocks,
    dft_blocks,
    dft_from_gram,
    pc_from_dft,
    pc_gram_matrix,
    pc_gram_operator,
    srm_optimality_certificate,
    srm_povm_reference,
    transition_matrix,
)


def closed_pc(m, ns):
    x = math.exp(-ns)
    return (math.sqrt(1 + (m - 1) * x) + (m - 1) * math.sqrt(1 - x)) ** 2 / m**2


@pytest.mark.parametrize("m", [2, 3, 4])
def test_pure_dft_blocks_are_scalars(m):
    ns = 1.3
    d = dft_blocks(slot_states(PpmParams(m, ns)))
    x = math.exp(-ns)
    assert d.blocks[0].shape == (1, 1)
    assert d.blocks[0][0, 0] == pytest.approx(1 + (m - 1) * x, rel=1e-14)
    for k in range(1, m):
        assert d.blocks[k][0, 0] == pytest.approx(1 - x, rel=1e-14)


def test_zero_signal_blocks():
    d = dft_blocks(slot_states(PpmParams(3, 0.0)))
    assert d.blocks[0][0, 0] == pytest.approx(3.0)
    assert abs(d.blocks[1][0, 0]) < 1e-15 and abs(d.blocks[2][0, 0]) < 1e-15
    assert pc_from_dft(d) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("m,n,h", [(2, 4, 2), (3, 3, 2), (4, 3, 2)])
def test_dft_reassembles_gram_blocks(m, n, h):
    st = slot_states(PpmParams(m, 1.1, 0.1, n=n, h=h))
    blocks = gram_blocks(st)
    d = dft_from_gram(blocks)
    for s in range(m):
        assert np.max(np.abs(d.reassemble(s) - blocks[s])) <= 1e-10
    for e in d.blocks:
        assert np.allclose(e, e.conj().T, atol=0)
        assert np.linalg.eigvalsh(e)[0] >= -1e-9


def test_gram_blocks_conjugate_symmetry():
    st = slot_states(PpmParams(3, 0.7, 0.2, n=3, h=2))
    b = gram_blocks(st)
    for s in range(1, 3):
        assert np.allclose(b[s].conj().T, b[3 - s], atol=1e-15)


@pytest.mark.parametrize("m,n,h", [(2, 4, 2), (3, 3, 2)])
def test_dft_blocks_match_eigenspace_projection(m, n, h):
    # E_k = m gamma_0^* Y_k Y_k^* gamma_0 with Y_k the eigenspace of S for W^-k
    st = slot_states(PpmParams(m, 1.4, 0.1, n=n, h=h))
    sp = gus.spectrum(n, m)
    g0 = composite_factor(st, 0)
    d = dft_blocks(st)
    for k in range(m):
        dense = m * g0.conj().T @ sp.projector(k) @ g0
        assert np.max(np.abs(dense - d.blocks[k])) <= 1e-12


def test_block_phases_exact_for_small_m():
    st = slot_states(PpmParams(4, 1.0, 0.1, n=3, h=2))
    d = dft_blocks(st)
    # E_0 and E_2 have real phases; E_1 and E_3 are complex conjugates
    assert not np.iscomplexobj(d.blocks[0]) and not np.iscomplexobj(d.blocks[2])
    assert np.allclose(d.blocks[1], d.blocks[3].conj(), atol=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("ns", [0.5, 2.0, 5.0, 10.0])
def test_pure_pc_matches_closed_form(m, ns):
    res = pc_gram_matrix(slot_states(PpmParams(m, ns)))
    assert res.Pc == pytest.approx(closed_pc(m, ns), rel=1e-10)
    assert res.method == "srm-gram-matrix"
    assert res.diagnostics["m"] == m


def test_pure_operator_path_matches_closed_form():
    st = slot_states(PpmParams(2, 2.0, eps=1e-12))
    assert pc_gram_operator(st).Pc == pytest.approx(closed_pc(2, 2.0), abs=1e-10)


def test_paths_agree_on_small_mixed_instance():
    st = slot_states(PpmParams(2, 1.0, 0.05, n=4, h=2))
    assert abs(pc_gram_matrix(st).Pc - pc_gram_operator(st).Pc) <= 1e-9


def test_operator_path_cap():
    st = slot_states(PpmParams(3, 1.0, 0.1, n=5, h=2))
    with pytest.raises(DimensionCapError, match="gram-matrix"):
        pc_gram_operator(st, cap=100)


def test_sqrt_failure_names_block():
    bad = DftBlocks(blocks=(np.eye(2), -np.eye(2)), source="test")
    with pytest.raises(LinalgError, match="E_1"):
        pc_from_dft(bad)


def test_povm_resolves_identity():
    st = slot_states(PpmParams(3, 1.2, 0.1, n=3, h=2))
    povm = srm_povm_reference(st)
    total = sum(povm.elements)
    assert np.linalg.eigvalsh(total)[-1] <= 1 + 1e-9
    assert np.linalg.eigvalsh(povm.completion)[0] >= -1e-9
    for pi in povm.elements:
        assert np.linalg.eigvalsh(pi)[0] >= -1e-10
    # Pi_0 = mu_0 mu_0^*
    assert np.allclose(povm.Pi0, povm.mu0 @ povm.mu0.conj().T)


def test_povm_elements_related_by_symmetry():
    st = slot_states(PpmParams(3, 1.0, 0.1, n=3, h=2))
    povm = srm_povm_reference(st)
    s = gus.shuffle_operator(3, 3).dense()
    for i in range(3):
        si = np.linalg.matrix_power(s.T, i)
        assert np.allclose(si @ povm.Pi0 @ si.T, povm.elements[i], atol=1e-12)


def test_transition_matrix_circulant_and_consistent():
    st = slot_states(PpmParams(3, 1.5, 0.1, n=3, h=2))
    p = transition_matrix(st, srm_povm_reference(st))
    for i in range(3):
        for j in range(3):
            assert abs(p[i, j] - p[0, (j - i) % 3]) <= 1e-10
    assert np.trace(p) / 3 == pytest.approx(pc_gram_matrix(st).Pc, abs=1e-9)


def test_orthogonal_limit():
    st = slot_states(PpmParams(2, 30.0, eps=1e-12))
    # Pe from 1 - Pc bottoms out at roundoff; the closed form keeps going
    assert pc_gram_matrix(st).Pe <= 4e-16
    assert 0 < pure_ppm_pe(2, 30.0) < 1e-26


def test_certificate_pure_is_optimal():
    for m in (2, 3):
        cert = srm_optimality_certificate(slot_states(PpmParams(m, 1.0, n=8, h=1)))
        assert cert.deviation <= 1e-9
        assert not cert.degenerate


def test_certificate_mixed_not_optimal():
    cert = srm_optimality_certificate(slot_states(PpmParams(2, 1.0, 0.1, n=6, h=3)))
    assert cert.deviation > 1e-4


def test_certificate_flags_identical_states():
    cert = srm_optimality_certificate(slot_states(PpmParams(2, 0.0, n=4, h=1)))
    assert cert.degenerate


def test_roundoff_blocks_do_not_inflate_pc():
    # identical noisy states: E_k (k != 0) vanish analytically
    st = slot_states(PpmParams(3, 0.0, 0.25, n=2, h=2))
    assert pc_gram_matrix(st).Pc == pytest.approx(pc_gram_operator(st).Pc, abs=1e-12)
    # identical states: Pc = Tr(rho) / m
    g0 = composite_factor(st, 0)
    assert pc_gram_matrix(st).Pc == pytest.approx(np.trace(g0.T @ g0) / 3, abs=1e-12)


def test_block_floor_is_absolute_for_tiny_blocks():
    noisy = DftBlocks(blocks=(np.eye(2), np.diag([1e-16, -2e-16])), source="test")
    assert pc_from_dft(noisy) == pytest.approx(0.5, abs=1e-12)
