"""Exact and baseline detectors.

Helstrom's binary optimum (dense and factored), the closed-form pure-state PPM
result, classical photon-counting PPM in thermal noise, OOK/Dolinar closed
forms, and export of the m-ary optimal-POVM problem as an SDPA file.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass

import mpmath
import numpy as np

from . import sdpa
from .constellation import (
    DimensionCapError,
    PpmParams,
    SlotStates,
    composite_density,
    gram_block,
    slot_states,
)
from .linalg import eid_hermitian, hermitian, sqrt_psd
from .result import DetectionResult, make_result

# dense composite densities are written out in full, so keep N modest
EXPORT_CAP = 1024
_PSD_TOL = 1e-10
_TRACE_SLACK = 1e-9


@dataclass(frozen=True)
class BinaryProblem:
    rho0: np.ndarray
    rho1: np.ndarray
    q0: float = 0.5
    q1: float = 0.5

    def __post_init__(self):
        r0, r1 = hermitian(self.rho0), hermitian(self.rho1)
        if r0.shape != r1.shape:
            raise ValueError(f"density dimensions differ: {r0.shape} vs {r1.shape}")
        if self.q0 < 0 or self.q1 < 0 or abs(self.q0 + self.q1 - 1) > 1e-12:
            raise ValueError(f"priors must be non-negative and sum to 1, got {self.q0}, {self.q1}")
        for name, r in (("rho0", r0), ("rho1", r1)):
            w = np.linalg.eigvalsh(r)
            if w[0] < -_PSD_TOL * max(abs(w[-1]), 1.0):
                raise ValueError(f"{name} is not PSD (eigenvalue {w[0]:.3e})")
            tr = float(np.trace(r).real)
            if not 0 < tr <= 1 + _TRACE_SLACK:
                raise ValueError(f"{name} has trace {tr!r} outside (0, 1]")
        object.__setattr__(self, "rho0", r0)
        object.__setattr__(self, "rho1", r1)

    @property
    def dim(self) -> int:
        return self.rho0.shape[0]


@dataclass(frozen=True)
class HelstromPovm:
    Pi0: np.ndarray
    Pi1: np.ndarray


def _decision(p: BinaryProblem):
    return eid_hermitian(p.q1 * p.rho1 - p.q0 * p.rho0)


def helstrom_binary(p: BinaryProblem) -> DetectionResult:
    """Optimal binary detection: ``Pc = q0 Tr(rho0) + sum of the positive eigenvalues of q1 rho1 - q0 rho0``.

    For unit-trace densities this is the familiar ``q0 + sum``; keeping ``Tr(rho0)``
    makes the value the exact ``sum_i q_i Tr(rho_i Pi_i)`` for truncated states too.
    """
    t0 = time.perf_counter()
    eid = _decision(p)
    pos = eid.values[eid.values > 0]
    pc = p.q0 * float(np.trace(p.rho0).real) + math.fsum(pos)
    return make_result(
        "helstrom-binary", pc, dim=p.dim, runtime=time.perf_counter() - t0
    )


def helstrom_povm(p: BinaryProblem) -> HelstromPovm:
    """Projectors of the optimal measurement; zero eigenvalues go to ``Pi0``."""
    eid = _decision(p)
    z1 = eid.vectors[:, eid.values > 0]
    pi1 = z1 @ z1.conj().T
    return HelstromPovm(Pi0=np.eye(p.dim) - pi1, Pi1=pi1)


def helstrom_factored(g0: np.ndarray, g1: np.ndarray, q0: float = 0.5, q1: float = 0.5) -> float:
    """Helstrom ``Pc`` from factors ``rho_i = g_i g_i^*`` without forming the densities.

    With ``M = [g0, g1]`` and ``J = diag(-q0, q1)`` the decision operator is
    ``M J M^*``, whose nonzero spectrum is that of ``G^{1/2} J G^{1/2}`` for the
    Gram matrix ``G = M^* M``.
    """
    m = np.hstack([g0, g1])
    return _helstrom_from_gram(m.conj().T @ m, g0.shape[1], q0, q1)


def _helstrom_from_gram(g: np.ndarray, r0: int, q0: float, q1: float) -> float:
    root = sqrt_psd(hermitian(g), tol=1e-9)
    j = np.full(g.shape[0], q1)
    j[:r0] = -q0
    w = np.linalg.eigvalsh(hermitian((root * j) @ root))
    # Tr(rho0) = Tr(g0^* g0)
    return q0 * float(np.trace(g[:r0, :r0]).real) + math.fsum(w[w > 0])


def helstrom_2ppm(states: SlotStates) -> DetectionResult:
    """Helstrom bound for 2-PPM from the slot cross-Grams (never forms ``N x N`` objects)."""
    if states.m != 2:
        raise ValueError(f"helstrom detection is binary; got m={states.m}")
    t0 = time.perf_counter()
    g00 = gram_block(states, 0)
    g01 = gram_block(states, 1)
    # gamma_1 = S^{-1} gamma_0, so G_11 = G_00
    g = np.block([[g00, g01], [g01.conj().T, g00]])
    pc = _helstrom_from_gram(g, g00.shape[0], 0.5, 0.5)
    p = states.params
    return make_result(
        "helstrom-binary", pc, m=2, Ns=p.Ns, nbar=p.nbar, eps=p.eps, nu=p.nu,
        n=states.n, h=states.h, H=states.H, trace_deficit=states.trace_deficit,
        runtime=time.perf_counter() - t0,
    )


def helstrom_2ppm_dense(states: SlotStates) -> DetectionResult:
    """Same bound from the explicit composite densities; small instances only."""
    if states.m != 2:
        raise ValueError(f"helstrom detection is binary; got m={states.m}")
    return helstrom_binary(BinaryProblem(composite_density(states, 0), composite_density(states, 1)))


def pure_ppm_pe(m: int, Ns: float) -> float:
    """Pure-state PPM error probability, free of the cancellation in ``1 - Pc``.

    With ``x = exp(-Ns)``, ``a = sqrt(1 - x)``, ``b = sqrt(1 + (m-1) x)`` and
    ``s = (b + (m-1) a) / m`` one has ``Pc = s^2`` and
    ``1 - s = (m-1) x^2 / ((1+a)(1+b)(a+b))``.
    """
    if m < 2 or Ns < 0:
        raise ValueError("need m >= 2 and Ns >= 0")
    x = math.exp(-Ns)
    a = math.sqrt(-math.expm1(-Ns))
    b = math.sqrt(1 + (m - 1) * x)
    s = (b + (m - 1) * a) / m
    return (1 + s) * (m - 1) * x * x / ((1 + a) * (1 + b) * (a + b))


def pure_ppm_closed_form(m: int, Ns: float) -> DetectionResult:
    x = math.exp(-Ns)
    pc = (math.sqrt(1 + (m - 1) * x) + (m - 1) * math.sqrt(-math.expm1(-Ns))) ** 2 / m**2
    return make_result("closed-form-pure", min(pc, 1.0), pure_ppm_pe(m, Ns), m=m, Ns=Ns, nbar=0.0)


def classical_ppm_pe(m: int, Ns: float, nbar: float) -> float:
    """Photon-counting PPM error probability in thermal noise (Laguerre photon statistics).

    The alternating binomial sum cancels badly for large ``m`` and ``Ns``, so it
    is evaluated in extended precision.
    """
    if m < 2 or Ns < 0 or nbar < 0:
        raise ValueError("need m >= 2, Ns >= 0 and nbar >= 0")
    with mpmath.workdps(30 + 2 * m):
        v = mpmath.mpf(nbar) / (1 + mpmath.mpf(nbar))
        ns = mpmath.mpf(Ns)
        total = mpmath.mpf(0)
        for i in range(2, m + 1):
            ratio = (1 - v ** (i - 1)) / (1 - v**i)
            total += (-1) ** i * mpmath.binomial(m, i) * mpmath.exp(-(1 - v) * ratio * ns)
        return float(total / m)


def classical_ppm(m: int, Ns: float, nbar: float) -> DetectionResult:
    pe = classical_ppm_pe(m, Ns, nbar)
    return make_result("classical-photon-counting", 1.0 - pe, pe, m=m, Ns=Ns, nbar=nbar)


@dataclass(frozen=True)
class OokBaselines:
    """OOK error probabilities at mean energy ``Ns`` per symbol (``|alpha|^2 = 2 Ns`` when on).

    The PPM fields are filled only when an order ``m`` is given. ``slot_classical_printed``
    is the slot-by-slot photon-counting formula ``(m/(m-1)) e^{-Ns}`` exactly as
    usually quoted; it exceeds 1 for small ``Ns``. ``slot_classical_consistent``
    is the noiseless limit of :func:`classical_ppm_pe`, ``((m-1)/m) e^{-Ns}``.
    """

    Ns: float
    classical: float
    helstrom: float
    helstrom_asymptotic: float
    m: int | None = None
    dolinar_ppm_asymptotic: float | None = None
    ppm_quantum_asymptotic: float | None = None
    slot_classical_printed: float | None = None
    slot_classical_consistent: float | None = None


def ook_baselines(Ns: float, m: int | None = None) -> OokBaselines:
    if Ns < 0:
        raise ValueError("Ns must be non-negative")
    x = math.exp(-2 * Ns)
    # 1 - sqrt(1 - x) = x / (1 + sqrt(1 - x)) avoids cancellation at large Ns
    helstrom = 0.5 * x / (1 + math.sqrt(-math.expm1(-2 * Ns)))
    extra = {}
    if m is not None:
        if m < 2:
            raise ValueError("PPM order must be >= 2")
        extra = dict(
            m=m,
            dolinar_ppm_asymptotic=0.5 * (m - 1) * x,
            ppm_quantum_asymptotic=0.25 * (m - 1) * x,
            slot_classical_printed=m / (m - 1) * math.exp(-Ns),
            slot_classical_consistent=(m - 1) / m * math.exp(-Ns),
        )
    return OokBaselines(Ns=Ns, classical=0.5 * x, helstrom=helstrom, helstrom_asymptotic=0.25 * x, **extra)


def export_sdp(params: PpmParams, path: str | os.PathLike, cap: int = EXPORT_CAP) -> sdpa.SdpaProblem:
    """Write the optimal m-ary POVM problem of a PPM instance in SDPA sparse format."""
    n_guess = params.n
    if n_guess is not None and n_guess**params.m > cap:
        raise DimensionCapError(f"N = {n_guess}^{params.m} exceeds the export cap {cap}")
    states = slot_states(params)
    if states.N > cap:
        raise DimensionCapError(f"N = {states.N} exceeds the export cap {cap}")
    rhos = [composite_density(states, i) for i in range(states.m)]
    prob = sdpa.povm_problem(rhos, comment=_comment(params, states))
    sdpa.write(prob, path)
    return prob


def _comment(params: PpmParams, states: SlotStates) -> list[str]:
    return [
        f"optimal POVM for {params.m}-PPM: Ns={params.Ns!r} nbar={params.nbar!r} "
        f"n={states.n} h={states.h} N={states.N}",
        "maximize F0.Y with Y = blockdiag(Pi_0..Pi_{m-1}); optimum is Pc",
    ]
