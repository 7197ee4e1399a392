"""Single-mode Glauber states in a truncated Fock basis.

Pure coherent kets, thermal-noise (displaced thermal) density matrices, the
trace-based truncation rule and the low-rank factorization ``rho = gamma gamma^*``
with a practical rank chosen from a reconstruction accuracy.

Factorials and large powers are handled in log space: the noisy density matrix
involves ``(alpha / nbar)^(n-m)`` and Laguerre values of argument
``-|alpha|^2 / (nbar (nbar + 1))``, both of which overflow doubles long before the
product does when ``nbar`` is small.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import gammaln, pdtrc

from .linalg import eid_hermitian

DEFAULT_EPS = 1e-8
DEFAULT_NU = 1e-8

# dimension guard for the truncation search
MAX_DIM = 4096

_RESCALE = 1e150

# below this the noisy entries differ from the pure projector by O(nbar |alpha|^2 n),
# far under roundoff, while |alpha|^2 / nbar would overflow the Laguerre recurrence
NOISELESS_NBAR = 1e-30


def _noiseless(nbar: float) -> bool:
    return nbar < NOISELESS_NBAR


@dataclass(frozen=True)
class CoherentKet:
    alpha: complex
    eps: float
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class ThermalDensity:
    """Truncated density matrix of a coherent signal in thermal noise.

    ``scale`` is 1 for a raw truncation and ``1 / Tr`` once :func:`normalized`
    has been applied.
    """

    alpha: complex
    nbar: float
    eps: float
    matrix: np.ndarray
    scale: float = 1.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def v(self) -> float:
        return self.nbar / (1.0 + self.nbar)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def trace_deficit(self) -> float:
        return 1.0 - self.trace


@dataclass(frozen=True)
class SlotFactor:
    """``matrix`` is an ``n x rank`` factor with ``matrix @ matrix^* ~ rho``."""

    matrix: np.ndarray
    rank: int
    reconstruction_error: float
    eigenvalues: np.ndarray = field(repr=False)


def _smallest_dim(tail_after, eps: float) -> int:
    for n in range(1, MAX_DIM + 1):
        if tail_after(n) <= eps:
            return n
    raise ValueError(f"truncation needs more than {MAX_DIM} Fock states (eps={eps:g})")


def poisson_dim(ns: float, eps: float) -> int:
    """Smallest ``n`` with ``P(Poisson(ns) <= n - 1) >= 1 - eps``."""
    if ns == 0:
        return 1
    return _smallest_dim(lambda n: float(pdtrc(n - 1, ns)), eps)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """First ``dim`` Fock amplitudes ``exp(-|a|^2/2) a^k / sqrt(k!)`` of ``|alpha>``."""
    alpha = complex(alpha)
    k = np.arange(dim)
    if alpha == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
    else:
        r, theta = abs(alpha), cmath.phase(alpha)
        logmag = -0.5 * r * r + k * math.log(r) - 0.5 * gammaln(k + 1)
        out = np.exp(logmag) * np.exp(1j * theta * k)
    if alpha.imag == 0:
        return out.real.copy()
    return out


def coherent_ket(alpha: complex, eps: float = DEFAULT_EPS, dim: int | None = None) -> CoherentKet:
    """Truncated coherent ket; ``dim`` defaults to the Poisson truncation size."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if dim is None:
        dim = poisson_dim(abs(alpha) ** 2, eps)
    return CoherentKet(alpha=complex(alpha), eps=eps, amplitudes=coherent_amplitudes(alpha, dim))


def glauber_overlap(alpha: complex, beta: complex) -> complex:
    """Exact ``<alpha|beta>`` of two untruncated coherent states."""
    alpha, beta = complex(alpha), complex(beta)
    return cmath.exp(-0.5 * (abs(alpha) ** 2 + abs(beta) ** 2 - 2 * alpha.conjugate() * beta))


def _laguerre_scaled(jmax: int, k: float, x: float) -> tuple[np.ndarray, np.ndarray]:
    """``L_j^(k)(x) = mant[j] * exp(logscale[j])`` for ``j = 0..jmax``.

    Three-term recurrence in the degree, renormalizing whenever the running
    values exceed ``_RESCALE``.
    """
    mant = np.empty(jmax + 1)
    logscale = np.zeros(jmax + 1)
    prev, cur, s = 0.0, 1.0, 0.0
    mant[0] = 1.0
    if jmax >= 1:
        prev, cur = cur, 1.0 + k - x
        mant[1] = cur
    for j in range(1, jmax):
        nxt = ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
        prev, cur = cur, nxt
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            s += math.log(_RESCALE)
        mant[j + 1] = cur
        logscale[j + 1] = s
    return mant, logscale


def laguerre_assoc(m: int, k: float, x: float) -> float:
    """Generalized Laguerre polynomial ``L_m^(k)(x)``."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    mant, logscale = _laguerre_scaled(m, k, x)
    return float(mant[m] * math.exp(logscale[m]))


def _thermal_entries(alpha: complex, nbar: float, dim: int) -> np.ndarray:
    """Dense ``dim x dim`` displaced-thermal density, ``nbar > 0``."""
    v = nbar / (1.0 + nbar)
    a2 = abs(alpha) ** 2
    rho = np.zeros((dim, dim), dtype=complex)
    if a2 == 0:
        idx = np.arange(dim)
        rho[idx, idx] = (1 - v) * v**idx
        return rho
    theta = cmath.phase(alpha)
    y = a2 / (nbar * (nbar + 1.0))
    lg = gammaln(np.arange(dim) + 1)
    base = math.log1p(-v) - (1 - v) * a2
    for d in range(dim):
        # row m, column m + d: L_m^(d)(-y) > 0, so every entry is a pure magnitude times a phase
        mant, logscale = _laguerre_scaled(dim - 1 - d, d, -y)
        m = np.arange(dim - d)
        col = m + d
        logmag = (
            base
            + col * math.log(v)
            + 0.5 * (lg[m] - lg[col])
            + d * (math.log(math.sqrt(a2)) - math.log(nbar))
            + np.log(mant)
            + logscale
        )
        vals = np.exp(logmag) * cmath.exp(-1j * theta * d)
        rho[m, col] = vals
        rho[col, m] = np.conj(vals)
    return rho


def thermal_diagonal(alpha: complex, nbar: float, dim: int) -> np.ndarray:
    """Photon-number distribution ``rho_mm`` for ``m < dim`` (Laguerre distribution)."""
    if _noiseless(nbar):
        return np.abs(coherent_amplitudes(alpha, dim)) ** 2
    v = nbar / (1.0 + nbar)
    a2 = abs(alpha) ** 2
    m = np.arange(dim)
    if a2 == 0:
        return (1 - v) * v**m
    mant, logscale = _laguerre_scaled(dim - 1, 0, -a2 / (nbar * (nbar + 1.0)))
    return np.exp(math.log1p(-v) - (1 - v) * a2 + m * math.log(v) + np.log(mant) + logscale)


def thermal_dim(alpha: complex, nbar: float, eps: float) -> int:
    """Smallest ``n`` whose leading diagonal mass reaches ``1 - eps``."""
    if _noiseless(nbar):
        return poisson_dim(abs(alpha) ** 2, eps)
    # grow in chunks so the Laguerre diagonal is evaluated O(log n) times
    size = 16
    while size <= MAX_DIM:
        cum = np.cumsum(thermal_diagonal(alpha, nbar, size))
        hit = np.nonzero(cum >= 1 - eps)[0]
        if hit.size:
            return int(hit[0]) + 1
        size *= 2
    raise ValueError(f"truncation needs more than {MAX_DIM} Fock states (eps={eps:g})")


def thermal_density(
    alpha: complex, nbar: float, eps: float = DEFAULT_EPS, dim: int | None = None
) -> ThermalDensity:
    """Truncated density matrix of ``|alpha>`` in thermal noise of mean ``nbar`` photons.

    With ``nbar == 0`` (or below ``NOISELESS_NBAR``) this is the projector onto
    the truncated coherent ket.
    ``dim`` overrides the trace-based truncation size.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be non-negative, got {nbar}")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if dim is None:
        dim = thermal_dim(alpha, nbar, eps)
    if _noiseless(nbar):
        c = coherent_amplitudes(alpha, dim)
        mat = np.outer(c, c.conj())
    else:
        mat = _thermal_entries(alpha, nbar, dim)
        if complex(alpha).imag == 0:
            mat = mat.real.copy()
    return ThermalDensity(alpha=complex(alpha), nbar=float(nbar), eps=eps, matrix=mat)


def normalized(rho: ThermalDensity) -> ThermalDensity:
    """Rescale to unit trace; the factor applied is kept in ``scale``."""
    tr = rho.trace
    if not tr > 0:
        raise ValueError("cannot normalize a density with non-positive trace")
    c = 1.0 / tr
    return replace(rho, matrix=rho.matrix * c, scale=rho.scale * c)


def _max_error(rho: np.ndarray, g: np.ndarray) -> float:
    return float(np.max(np.abs(rho - g @ g.conj().T)))


def factorize(rho: ThermalDensity, nu: float = DEFAULT_NU, rank: int | None = None) -> SlotFactor:
    """Low-rank factor of ``rho`` from its leading eigenpairs.

    Without ``rank`` the smallest rank whose max-entry reconstruction error is
    ``<= nu`` is used. Pure states give the ket itself and the ground state the
    square root of its diagonal, without an eigendecomposition. A requested
    ``rank`` beyond the dimension is met with zero columns.
    """
    n = rho.dim
    mat = rho.matrix
    if _noiseless(rho.nbar):
        ket = coherent_amplitudes(rho.alpha, n) * math.sqrt(rho.scale)
        vals = np.zeros(n)
        vals[0] = float(np.vdot(ket, ket).real)
        g = ket[:, None]
        return _padded(SlotFactor(g, 1, _max_error(mat, g), vals), rank)
    if rho.alpha == 0:
        vals = np.real(np.diag(mat)).copy()
        vecs = np.eye(n)
    else:
        eid = eid_hermitian(mat)
        vals, vecs = eid.values, eid.vectors
    roots = np.sqrt(np.clip(vals, 0.0, None))
    if rank is None:
        for h in range(1, n + 1):
            g = vecs[:, :h] * roots[:h]
            err = _max_error(mat, g)
            if err <= nu:
                break
    else:
        h = min(rank, n)
        g = vecs[:, :h] * roots[:h]
        err = _max_error(mat, g)
    if not np.iscomplexobj(mat):
        g = g.real
    return _padded(SlotFactor(g, h, err, vals), rank)


def _padded(f: SlotFactor, rank: int | None) -> SlotFactor:
    if rank is None or f.matrix.shape[1] >= rank:
        return f
    g = np.zeros((f.matrix.shape[0], rank), dtype=f.matrix.dtype)
    g[:, : f.matrix.shape[1]] = f.matrix
    return replace(f, matrix=g, rank=rank)
