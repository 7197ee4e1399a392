"""m-ary PPM constellation in the composite space ``H_0^{(x) m}``.

Symbol ``i`` carries the signal state in slot ``i`` and the ground state in the
other slots; slot ``i`` is n-ary digit ``i`` of the composite index, so slot 0 is
the rightmost Kronecker factor. With the shuffle ``S`` of :mod:`qppm.gus` the
symbols satisfy ``gamma_i = S^{-i} gamma_0``.

The production path never forms an ``N``-dimensional object: Gram blocks are
Kronecker products of ``h x h`` slot cross-Grams with their columns reordered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from . import glauber
from .glauber import SlotFactor, ThermalDensity
from .linalg import kron

DEFAULT_MAX_N = 2**24


class DimensionCapError(ValueError):
    """Raised when a requested instance exceeds a configured size cap."""


@dataclass(frozen=True)
class PpmParams:
    """Physical and numerical parameters of one PPM instance.

    ``n`` and ``h`` force the slot dimension and practical rank; left as
    ``None`` they follow from ``eps`` and ``nu``.
    """

    m: int
    Ns: float
    nbar: float = 0.0
    eps: float = glauber.DEFAULT_EPS
    nu: float = glauber.DEFAULT_NU
    n: int | None = None
    h: int | None = None
    max_N: int = DEFAULT_MAX_N

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"PPM order must be >= 2, got m={self.m}")
        if self.Ns < 0 or self.nbar < 0:
            raise ValueError("Ns and nbar must be non-negative")
        if self.n is not None:
            if self.n < 1:
                raise ValueError("forced n must be positive")
            if self.n**self.m > self.max_N:
                raise DimensionCapError(f"N = {self.n}^{self.m} exceeds cap {self.max_N}")
        if self.h is not None and self.h < 1:
            raise ValueError("forced h must be positive")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.Ns)

    @property
    def pure(self) -> bool:
        return self.nbar == 0


@dataclass(frozen=True)
class SlotStates:
    """Resolved slot-level states and factors shared by every symbol.

    ``gamma[0]`` is the ground-state factor and ``gamma[1]`` the signal factor,
    both ``n x h``.
    """

    params: PpmParams
    rho: tuple[ThermalDensity, ThermalDensity]
    factors: tuple[SlotFactor, SlotFactor]
    exact_overlaps: bool = True

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n(self) -> int:
        return self.rho[0].dim

    @property
    def h(self) -> int:
        return self.factors[0].matrix.shape[1]

    @property
    def N(self) -> int:
        return self.n**self.m

    @property
    def H(self) -> int:
        return self.h**self.m

    @property
    def gamma(self) -> tuple[np.ndarray, np.ndarray]:
        return self.factors[0].matrix, self.factors[1].matrix

    def truncated(self) -> "SlotStates":
        """Same states with cross-Grams taken from the truncated factors.

        This is what the dimension-``N`` operator path sees, so it is the view
        to compare against it for pure states.
        """
        return replace(self, exact_overlaps=False)

    @property
    def trace_deficit(self) -> float:
        return max(r.trace_deficit for r in self.rho)

    @cached_property
    def cross_grams(self) -> dict[tuple[int, int], np.ndarray]:
        """``gamma[a]^* gamma[b]`` for ``a, b`` in {0, 1}.

        Pure states use exact coherent-state overlaps unless ``exact_overlaps``
        is off, so the Gram-matrix path carries no truncation error in that case.
        """
        if self.params.pure and self.exact_overlaps:
            amps = (0.0, self.params.alpha)
            out = {}
            for i in (0, 1):
                for j in (0, 1):
                    # forced ranks above 1 only add zero columns
                    g = np.zeros((self.h, self.h))
                    g[0, 0] = glauber.glauber_overlap(amps[i], amps[j]).real
                    out[i, j] = g
            return out
        g = self.gamma
        return {(i, j): g[i].conj().T @ g[j] for i in (0, 1) for j in (0, 1)}


def slot_states(params: PpmParams) -> SlotStates:
    """Truncate and factorize the ground and signal slot states at a common ``n`` and ``h``."""
    a = params.alpha
    if params.n is not None:
        n = params.n
    else:
        n = max(
            glauber.thermal_dim(a, params.nbar, params.eps),
            glauber.thermal_dim(0.0, params.nbar, params.eps),
        )
        if n**params.m > params.max_N:
            raise DimensionCapError(f"N = {n}^{params.m} exceeds cap {params.max_N}")
    rho0 = glauber.thermal_density(0.0, params.nbar, params.eps, dim=n)
    rho1 = glauber.thermal_density(a, params.nbar, params.eps, dim=n)
    if params.h is not None:
        h = params.h
    else:
        h = max(glauber.factorize(r, params.nu).rank for r in (rho0, rho1))
    f0 = glauber.factorize(rho0, params.nu, rank=h)
    f1 = glauber.factorize(rho1, params.nu, rank=h)
    return SlotStates(params=params, rho=(rho0, rho1), factors=(f0, f1))


def with_densities(params: PpmParams, rho0: ThermalDensity, rho1: ThermalDensity, h: int) -> SlotStates:
    """Slot states built from given (e.g. normalized) densities at rank ``h``.

    Cross-Grams always come from the factors here, so truncation effects show.
    """
    f0 = glauber.factorize(rho0, params.nu, rank=h)
    f1 = glauber.factorize(rho1, params.nu, rank=h)
    return SlotStates(params=params, rho=(rho0, rho1), factors=(f0, f1), exact_overlaps=False)


def _check_symbol(states: SlotStates, i: int) -> None:
    if not 0 <= i < states.m:
        raise IndexError(f"symbol index {i} out of range for m={states.m}")


def _check_dense(states: SlotStates) -> None:
    if states.N > states.params.max_N:
        raise DimensionCapError(f"N = {states.N} exceeds cap {states.params.max_N}")


def slot_pattern(m: int, i: int) -> list[int]:
    """Slot contents of symbol ``i`` listed leftmost (slot m-1) first; 1 marks the signal."""
    return [1 if slot == i else 0 for slot in range(m - 1, -1, -1)]


def composite_pure(states: SlotStates, i: int) -> np.ndarray:
    """Ket of symbol ``i`` (pure states only), length ``N``."""
    if not states.params.pure:
        raise ValueError("composite_pure needs nbar = 0")
    _check_symbol(states, i)
    _check_dense(states)
    kets = (
        glauber.coherent_amplitudes(0.0, states.n),
        glauber.coherent_amplitudes(states.params.alpha, states.n),
    )
    return kron(*(kets[b] for b in slot_pattern(states.m, i)))


def column_order(h: int, m: int, s: int) -> np.ndarray:
    """Column map turning the Kronecker factor of symbol ``s`` into ``S^{-s} gamma_0``.

    Rotating the row digits of a Kronecker product rotates its column digits
    too, so ``S^{-s} gamma_0`` is the plain Kronecker factor of symbol ``s``
    with its ``h``-ary column digits rotated up ``s`` places.
    """
    c = np.arange(h**m, dtype=np.int64)
    if h == 1:
        return c
    top = h ** (m - 1)
    for _ in range(s % m):
        c = (c % top) * h + c // top
    return c


def composite_factor(states: SlotStates, i: int) -> np.ndarray:
    """``N x h^m`` factor of the density of symbol ``i``, equal to ``S^{-i} gamma_0``.

    Up to column order this is the Kronecker product of the slot factors.
    """
    _check_symbol(states, i)
    _check_dense(states)
    g = states.gamma
    f = kron(*(g[b] for b in slot_pattern(states.m, i)))
    return f[:, column_order(states.h, states.m, i)]


def composite_density(states: SlotStates, i: int) -> np.ndarray:
    f = composite_factor(states, i)
    return f @ f.conj().T


def gram_block(states: SlotStates, s: int) -> np.ndarray:
    """``G_{0s} = gamma_0^* gamma_s`` from slot cross-Grams, never touching dimension ``N``."""
    _check_symbol(states, s)
    cg = states.cross_grams
    p0 = slot_pattern(states.m, 0)
    ps = slot_pattern(states.m, s)
    k = kron(*(cg[a, b] for a, b in zip(p0, ps)))
    return k[:, column_order(cg[0, 0].shape[0], states.m, s)]


def gram_blocks(states: SlotStates) -> list[np.ndarray]:
    return [gram_block(states, s) for s in range(states.m)]
