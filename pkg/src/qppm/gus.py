"""Symmetry operator of the m-ary PPM constellation and its eigendecomposition.

The composite space has unit vectors ``w(k)``, ``k = sum_i k_i n^i``, with slot
``i`` as n-ary digit ``i`` (slot ``m-1`` is the leftmost Kronecker factor). The
symmetry operator used here is the perfect shuffle

    S = sum_{k<n} w_n(k) (x) I_{n^(m-1)} (x) w_n(k)^*

whose 16x16 instance for ``n=2, m=4`` is the reference matrix in the tests. It
moves the rightmost Kronecker factor to the leftmost position, i.e. it rotates
the digits of ``k`` one place down. Its inverse rotates them up, which is the
recursion ``k -> n k mod (n^m - 1)`` used to enumerate cycles.

Nothing here materializes an ``N x N`` matrix except the ``dense`` helpers,
which are meant for small oracle checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

DENSE_CAP = 4096


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _check(n: int, m: int) -> None:
    if n < 2 or m < 2:
        raise ValueError(f"need n >= 2 and m >= 2, got n={n}, m={m}")


def _rotate_down(k: np.ndarray, n: int, m: int) -> np.ndarray:
    # digit 0 -> digit m-1, digit i -> digit i-1
    return (k % n) * n ** (m - 1) + k // n


def _rotate_up(k: np.ndarray, n: int, m: int) -> np.ndarray:
    # digit m-1 -> digit 0, digit i -> digit i+1
    top = n ** (m - 1)
    return (k % top) * n + k // top


@dataclass(frozen=True)
class ShuffleOperator:
    """``S w(k) = w(perm[k])``."""

    n: int
    m: int
    perm: np.ndarray

    @property
    def N(self) -> int:
        return self.n**self.m

    @cached_property
    def successor(self) -> np.ndarray:
        """Inverse permutation, ``k -> n k mod (n^m - 1)``."""
        return _rotate_up(np.arange(self.N, dtype=np.int64), self.n, self.m)

    def power(self, t: int) -> np.ndarray:
        """Index map of ``S^t`` (``t`` may be negative)."""
        t %= self.m
        k = np.arange(self.N, dtype=np.int64)
        for _ in range(t):
            k = _rotate_down(k, self.n, self.m)
        return k

    def dense(self) -> np.ndarray:
        if self.N > DENSE_CAP:
            raise ValueError(f"refusing to build a dense {self.N}x{self.N} symmetry operator")
        s = np.zeros((self.N, self.N))
        s[self.perm, np.arange(self.N)] = 1.0
        return s


def shuffle_operator(n: int, m: int) -> ShuffleOperator:
    _check(n, m)
    k = np.arange(n**m, dtype=np.int64)
    return ShuffleOperator(n=n, m=m, perm=_rotate_down(k, n, m))


def perfect_shuffle(r: int, s: int) -> np.ndarray:
    """``sum_{k<s} w_s(k) (x) I_r (x) w_s(k)^*``; maps ``a (x) b`` to ``b (x) a`` for ``a`` in C^r, ``b`` in C^s."""
    out = np.zeros((r * s, r * s))
    for k in range(s):
        e = np.zeros((s, 1))
        e[k] = 1.0
        out += np.kron(np.kron(e, np.eye(r)), e.T)
    return out


def apply_symmetry_power(S: ShuffleOperator, t: int, x: np.ndarray) -> np.ndarray:
    """``S^t x`` by row permutation; ``x`` is a vector or an ``N x r`` factor."""
    x = np.asarray(x)
    if x.shape[0] != S.N:
        raise ValueError(f"leading dimension {x.shape[0]} does not match N={S.N}")
    out = np.empty_like(x)
    out[S.power(t)] = x
    return out


@dataclass(frozen=True)
class Cycle:
    """Orbit of a unit vector; ``members[h+1] = n * members[h] mod (n^m - 1)``."""

    period: int
    members: tuple[int, ...]

    @property
    def representative(self) -> int:
        return self.members[0]


@dataclass(frozen=True)
class CycleDecomposition:
    n: int
    m: int
    cycles: tuple[Cycle, ...]

    @cached_property
    def counts(self) -> dict[int, int]:
        """``N_p``: number of unit vectors of minimum period ``p``."""
        out = {p: 0 for p in divisors(self.m)}
        for c in self.cycles:
            out[c.period] += c.period
        return out

    @cached_property
    def cycle_counts(self) -> dict[int, int]:
        return {p: cnt // p for p, cnt in self.counts.items()}

    def by_period(self, p: int) -> list[Cycle]:
        return [c for c in self.cycles if c.period == p]

    def member_sets(self) -> set[frozenset[int]]:
        return {frozenset(c.members) for c in self.cycles}


def cycles(n: int, m: int) -> CycleDecomposition:
    """All orbits, each listed from its minimal index, sorted by (period, representative)."""
    _check(n, m)
    N = n**m
    orbit = np.empty((m, N), dtype=np.int64)
    orbit[0] = np.arange(N, dtype=np.int64)
    for t in range(1, m):
        orbit[t] = _rotate_up(orbit[t - 1], n, m)
    rep = orbit.min(axis=0)
    period = np.full(N, m, dtype=np.int64)
    for t in range(m - 1, 0, -1):
        period[orbit[t] == orbit[0]] = t
    reps = np.nonzero(rep == orbit[0])[0]
    found = [Cycle(int(period[r]), tuple(int(x) for x in orbit[: period[r], r])) for r in reps]
    found.sort(key=lambda c: (c.period, c.representative))
    return CycleDecomposition(n=n, m=m, cycles=tuple(found))


def min_period_counts(n: int, m: int) -> dict[int, int]:
    """``N_p`` from ``n^p = sum_{d | p} N_d`` without enumerating anything."""
    _check(n, m)
    out: dict[int, int] = {}
    for p in divisors(m):
        out[p] = n**p - sum(out[d] for d in divisors(p) if d < p)
    return out


def count_multiplicities(n: int, m: int) -> tuple[int, ...]:
    """Multiplicity of eigenvalue ``W_m^{-k}`` for ``k = 0..m-1``."""
    counts = min_period_counts(n, m)
    mult = []
    for k in range(m):
        h = k if k else m
        mult.append(sum(counts[p] // p for p in counts if h % (m // p) == 0))
    return tuple(mult)


@dataclass(frozen=True)
class SymmetrySpectrum:
    """Sparse eigenvectors of ``S`` grouped by eigenvalue ``W_m^{-k}``.

    Family ``k`` holds, for every cycle whose period ``p`` satisfies
    ``(m/p) | k``, the vector ``p^{-1/2} sum_h W_p^{-jh} w(k_h)`` with
    ``j = k p / m``. The representative always carries the real coefficient
    ``p^{-1/2}``.
    """

    n: int
    m: int
    decomposition: CycleDecomposition

    @property
    def N(self) -> int:
        return self.n**self.m

    def eigenvalue(self, k: int) -> complex:
        return np.exp(-2j * np.pi * k / self.m)

    def family(self, k: int) -> list[tuple[Cycle, int]]:
        """(cycle, j) recipes for eigenvalue ``W_m^{-k}``."""
        out = []
        for c in self.decomposition.cycles:
            step = self.m // c.period
            if k % step == 0:
                out.append((c, k // step))
        return out

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(len(self.family(k)) for k in range(self.m))

    def dense_family(self, k: int) -> np.ndarray:
        """``Y_k`` as an ``N x n_k`` matrix."""
        if self.N > DENSE_CAP:
            raise ValueError(f"refusing to build dense eigenvectors for N={self.N}")
        fam = self.family(k)
        y = np.zeros((self.N, len(fam)), dtype=complex)
        for col, (c, j) in enumerate(fam):
            h = np.arange(c.period)
            y[list(c.members), col] = np.exp(-2j * np.pi * j * h / c.period) / np.sqrt(c.period)
        return y

    def projector(self, k: int) -> np.ndarray:
        y = self.dense_family(k)
        return y @ y.conj().T


def spectrum(n: int, m: int) -> SymmetrySpectrum:
    return SymmetrySpectrum(n=n, m=m, decomposition=cycles(n, m))
