"""Square-root measurement for the PPM constellation.

Two routes to the same number:

* Gram-matrix route (production). The Gram matrix is block circulant, so a DFT
  over the blocks ``G_{0s}`` gives ``m`` Hermitian matrices ``E_k`` of size
  ``h^m`` and ``Pc = Tr[(sum_k E_k^{1/2})^2] / m^2``.
* Gram-operator route (oracle). Build ``Gamma`` explicitly, ``T = Gamma Gamma^*``
  and ``Pc = Tr[(rho_0 T^{-1/2})^2]``. Only for ``N`` up to a few thousand.

DFT convention: ``W_m = exp(2 pi i / m)`` and ``E_k = sum_s G_{0s} W_m^{-ks}``,
so that ``G_{0s} = (1/m) sum_k W_m^{ks} E_k`` and ``E_k = m gamma_0^* Y_k Y_k^* gamma_0``
where ``Y_k`` spans the eigenspace of ``S`` for eigenvalue ``W_m^{-k}``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .constellation import DimensionCapError, SlotStates, composite_factor, gram_blocks
from .linalg import LinalgError, NotPSDError, eid_hermitian, hermitian, inv_sqrt_psd
from .result import DetectionResult, make_result

OPERATOR_CAP = 4096
# eigenvalue floor for E_k before it counts as a genuine PSD violation
BLOCK_PSD_TOL = 1e-9
# Gram-matrix eigenvalues below RCOND * largest are roundoff. The nonzero spectrum
# of T is the union of the E_k spectra, so both paths share this cutoff.
RCOND = 1e-14


@dataclass(frozen=True)
class DftBlocks:
    blocks: tuple[np.ndarray, ...]
    source: str

    @property
    def m(self) -> int:
        return len(self.blocks)

    def reassemble(self, s: int) -> np.ndarray:
        """``G_{0s}`` recovered from the ``E_k``."""
        m = self.m
        return sum(np.exp(2j * np.pi * k * s / m) * e for k, e in enumerate(self.blocks)) / m


def _phase(k: int, s: int, m: int) -> complex:
    r = (k * s) % m
    # exact values where they exist keep m = 2 and m = 4 blocks real
    if 4 * r % m == 0:
        return (1, -1j, -1, 1j)[4 * r // m]
    return np.exp(-2j * np.pi * r / m)


def dft_from_gram(blocks: list[np.ndarray], source: str = "gram-blocks") -> DftBlocks:
    m = len(blocks)
    out = []
    for k in range(m):
        e = sum(_phase(k, s, m) * g for s, g in enumerate(blocks))
        if np.iscomplexobj(e) and not np.any(e.imag):
            e = e.real
        out.append(hermitian(e))
    return DftBlocks(blocks=tuple(out), source=source)


def dft_blocks(states: SlotStates) -> DftBlocks:
    return dft_from_gram(gram_blocks(states), source="slot-factorized")


def _diagnostics(states: SlotStates, t0: float) -> dict:
    p = states.params
    return dict(
        m=p.m, Ns=p.Ns, nbar=p.nbar, eps=p.eps, nu=p.nu, n=states.n, h=states.h,
        H=states.H, trace_deficit=states.trace_deficit, runtime=time.perf_counter() - t0,
    )


def pc_from_dft(dft: DftBlocks) -> float:
    eids = []
    for k, e in enumerate(dft.blocks):
        try:
            eid = eid_hermitian(e)
        except LinalgError as exc:
            raise LinalgError(f"E_{k}: {exc}") from exc
        # Gram entries are O(1), so the floor is absolute for small blocks
        scale = max(abs(eid.values[0]), 1.0)
        if eid.values[-1] < -BLOCK_PSD_TOL * scale:
            raise LinalgError(f"E_{k}: {NotPSDError(eid.values[-1], scale, BLOCK_PSD_TOL)}")
        eids.append(eid)
    top = max(e.values[0] for e in eids)
    r = 0
    for eid in eids:
        vals = np.where(eid.values > RCOND * top, eid.values, 0.0)
        r = r + (eid.vectors * np.sqrt(vals)) @ eid.vectors.conj().T
    # Tr(R^2) = ||R||_F^2 for Hermitian R
    return float(np.sum(np.abs(r) ** 2)) / dft.m**2


def pc_gram_matrix(states: SlotStates, dft: DftBlocks | None = None) -> DetectionResult:
    t0 = time.perf_counter()
    if dft is None:
        dft = dft_blocks(states)
    pc = pc_from_dft(dft)
    return make_result("srm-gram-matrix", pc, **_diagnostics(states, t0))


def _require_small(states: SlotStates, cap: int) -> None:
    if states.N > cap:
        raise DimensionCapError(
            f"N = {states.N} exceeds the Gram-operator cap {cap}; use the gram-matrix path"
        )


def state_matrix(states: SlotStates) -> np.ndarray:
    """``Gamma = [gamma_0, ..., gamma_{m-1}]``, ``N x m h^m``."""
    return np.hstack([composite_factor(states, i) for i in range(states.m)])


def _inv_sqrt_T(states: SlotStates) -> np.ndarray:
    gam = state_matrix(states)
    return inv_sqrt_psd(gam @ gam.conj().T, tol=RCOND)


def pc_gram_operator(states: SlotStates, cap: int = OPERATOR_CAP) -> DetectionResult:
    t0 = time.perf_counter()
    _require_small(states, cap)
    t_is = _inv_sqrt_T(states)
    g0 = composite_factor(states, 0)
    # Tr[(rho_0 T^-1/2)^2] = ||gamma_0^* T^-1/2 gamma_0||_F^2
    x = g0.conj().T @ t_is @ g0
    pc = float(np.sum(np.abs(x) ** 2))
    return make_result("srm-gram-operator", pc, **_diagnostics(states, t0))


@dataclass(frozen=True)
class SrmPovm:
    """Reference measurement factor ``mu_0`` and the full SRM POVM."""

    mu0: np.ndarray
    elements: tuple[np.ndarray, ...]
    completion: np.ndarray

    @property
    def Pi0(self) -> np.ndarray:
        return self.elements[0]


def srm_povm_reference(states: SlotStates, cap: int = OPERATOR_CAP) -> SrmPovm:
    _require_small(states, cap)
    t_is = _inv_sqrt_T(states)
    elements = []
    for i in range(states.m):
        mu = t_is @ composite_factor(states, i)
        elements.append(mu @ mu.conj().T)
    completion = np.eye(states.N) - sum(elements)
    mu0 = t_is @ composite_factor(states, 0)
    return SrmPovm(mu0=mu0, elements=tuple(elements), completion=completion)


def transition_matrix(states: SlotStates, povm: SrmPovm) -> np.ndarray:
    """``p[i, j] = Tr(rho_i Pi_j)``."""
    m = states.m
    facs = [composite_factor(states, i) for i in range(m)]
    return np.array(
        [[np.trace(f.conj().T @ pi @ f).real for pi in povm.elements] for f in facs]
    )


@dataclass(frozen=True)
class OptimalityCertificate:
    deviation: float
    alpha: complex
    degenerate: bool


def srm_optimality_certificate(states: SlotStates, cap: int = OPERATOR_CAP) -> OptimalityCertificate:
    """Distance of ``mu_0^* gamma_0`` from the nearest multiple of the identity.

    A zero deviation means the SRM is the optimal measurement. ``degenerate``
    flags constellations whose state matrix has lost rank (e.g. ``Ns = 0``).
    """
    _require_small(states, cap)
    gam = state_matrix(states)
    g0 = composite_factor(states, 0)
    x = (_inv_sqrt_T(states) @ g0).conj().T @ g0
    alpha = np.trace(x) / x.shape[0]
    norm = np.linalg.norm(x)
    dev = float(np.linalg.norm(x - alpha * np.eye(x.shape[0])) / norm) if norm > 0 else 0.0
    sv = np.linalg.svd(gam, compute_uv=False)
    rank = int(np.sum(sv > 1e-10 * sv[0])) if sv.size and sv[0] > 0 else 0
    rank0 = int(np.linalg.matrix_rank(g0, tol=1e-10 * max(np.linalg.norm(g0, 2), 1e-300)))
    return OptimalityCertificate(deviation=dev, alpha=complex(alpha), degenerate=rank < states.m * rank0)
