"""Reader and writer for the SDPA sparse text format (``.dat-s``).

Layout, one item per line after any leading comment lines (``"`` or ``*``)::

    mDIM                 number of equality constraints / primal variables
    nBLOCK               number of diagonal blocks
    s_1 s_2 ... s_nBLOCK block sizes (negative = diagonal LP block)
    c_1 ... c_mDIM       right-hand side vector
    k b i j value        entry (i, j) of block b of matrix F_k, 1-based, i <= j

``F_0`` is the objective matrix. The problem pair is

    primal: minimize  c^T x   subject to  sum_k x_k F_k - F_0 >= 0
    dual:   maximize  F_0 . Y subject to  F_k . Y = c_k,  Y >= 0

Values are written with ``repr`` so a write/read round trip is exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

Entry = tuple[int, int, int, int, float]


class SdpaFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SdpaProblem:
    c: tuple[float, ...]
    blocks: tuple[int, ...]
    entries: tuple[Entry, ...]
    comment: tuple[str, ...] = field(default=(), compare=False)

    @property
    def m_dim(self) -> int:
        return len(self.c)

    def validate(self) -> None:
        if not self.blocks or any(b == 0 for b in self.blocks):
            raise SdpaFormatError(f"bad block structure {self.blocks}")
        seen = set()
        for k, b, i, j, _ in self.entries:
            if not 0 <= k <= self.m_dim:
                raise SdpaFormatError(f"matrix index {k} outside 0..{self.m_dim}")
            if not 1 <= b <= len(self.blocks):
                raise SdpaFormatError(f"block index {b} outside 1..{len(self.blocks)}")
            size = abs(self.blocks[b - 1])
            if not 1 <= i <= j <= size:
                raise SdpaFormatError(f"entry ({i}, {j}) invalid for block {b} of size {size}")
            if self.blocks[b - 1] < 0 and i != j:
                raise SdpaFormatError(f"off-diagonal entry in diagonal block {b}")
            if (k, b, i, j) in seen:
                raise SdpaFormatError(f"duplicate entry {(k, b, i, j)}")
            seen.add((k, b, i, j))

    def matrix(self, k: int, b: int) -> np.ndarray:
        """Dense symmetric block ``b`` of ``F_k`` (1-based block index)."""
        size = abs(self.blocks[b - 1])
        out = np.zeros((size, size))
        for kk, bb, i, j, v in self.entries:
            if kk == k and bb == b:
                out[i - 1, j - 1] = v
                out[j - 1, i - 1] = v
        return out


def _fmt(v: float) -> str:
    v = float(v)
    return repr(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)


def dumps(p: SdpaProblem) -> str:
    p.validate()
    lines = [f'"{c}' for c in p.comment]
    lines.append(str(p.m_dim))
    lines.append(str(len(p.blocks)))
    lines.append(" ".join(str(b) for b in p.blocks))
    lines.append(" ".join(_fmt(v) for v in p.c))
    lines.extend(f"{k} {b} {i} {j} {_fmt(v)}" for k, b, i, j, v in p.entries)
    return "\n".join(lines) + "\n"


def write(p: SdpaProblem, path: str | os.PathLike) -> None:
    text = dumps(p)
    # exclusive create on a temp name, then an atomic rename
    tmp = f"{os.fspath(path)}.{os.getpid()}.tmp"
    with open(tmp, "x") as fh:
        fh.write(text)
    os.replace(tmp, path)


_PUNCT = str.maketrans({ch: " " for ch in "{}(),"})


def loads(text: str) -> SdpaProblem:
    lines = text.splitlines()
    comment = []
    pos = 0
    while pos < len(lines) and lines[pos][:1] in ('"', "*"):
        comment.append(lines[pos][1:])
        pos += 1
    body = [ln.translate(_PUNCT).split() for ln in lines[pos:]]
    body = [ln for ln in body if ln]
    try:
        m_dim = int(body[0][0])
        nblock = int(body[1][0])
        blocks = tuple(int(x) for x in body[2][:nblock])
        c = tuple(float(x) for x in body[3][:m_dim])
        entries = tuple(
            (int(t[0]), int(t[1]), int(t[2]), int(t[3]), float(t[4])) for t in body[4:]
        )
    except (IndexError, ValueError) as exc:
        raise SdpaFormatError(f"malformed SDPA file: {exc}") from exc
    if len(blocks) != nblock or len(c) != m_dim:
        raise SdpaFormatError("header counts do not match the data")
    p = SdpaProblem(c=c, blocks=blocks, entries=entries, comment=tuple(comment))
    p.validate()
    return p


def read(path: str | os.PathLike) -> SdpaProblem:
    with open(path) as fh:
        return loads(fh.read())


def _realify(a: np.ndarray) -> np.ndarray:
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


def povm_problem(rhos, comment=()) -> SdpaProblem:
    """Minimum-error POVM for equiprobable densities as an SDPA dual problem.

    ``Y = blockdiag(Pi_0, ..., Pi_{m-1})`` and ``F_0 = blockdiag(rho_i) / m``, so
    the optimum of the dual is the correct-decision probability. One constraint
    per independent entry of ``sum_i Pi_i = I``: ``N(N+1)/2`` for real data.
    Complex data uses the embedding ``A -> [[Re A, -Im A], [Im A, Re A]]`` with
    ``N^2`` constraints (real and imaginary parts of a Hermitian matrix); the
    embedded relaxation has the same optimum.
    """
    rhos = [np.asarray(r) for r in rhos]
    m = len(rhos)
    n = rhos[0].shape[0]
    if m < 2 or any(r.shape != (n, n) for r in rhos):
        raise ValueError("need at least two square densities of equal size")
    cplx = any(np.iscomplexobj(r) and np.any(r.imag) for r in rhos)
    if cplx:
        mats = [_realify(r) / 2 for r in rhos]
    else:
        mats = [np.real(r) for r in rhos]
    size = mats[0].shape[0]
    entries: list[Entry] = []
    iu, ju = np.triu_indices(size)
    for b, f in enumerate(mats, start=1):
        vals = f[iu, ju] / m
        for i, j, v in zip(iu[vals != 0], ju[vals != 0], vals[vals != 0]):
            entries.append((0, b, int(i) + 1, int(j) + 1, float(v)))
    c: list[float] = []
    k = 0
    for a in range(n):
        for bb in range(a, n):
            k += 1
            c.append((2.0 if cplx else 1.0) if a == bb else 0.0)
            for blk in range(1, m + 1):
                entries.append((k, blk, a + 1, bb + 1, 1.0))
                if cplx:
                    entries.append((k, blk, a + n + 1, bb + n + 1, 1.0))
    if cplx:
        for a in range(n):
            for bb in range(a + 1, n):
                k += 1
                c.append(0.0)
                for blk in range(1, m + 1):
                    # [[0, -(e_ab - e_ba)], [e_ab - e_ba, 0]], upper triangle only
                    entries.append((k, blk, a + 1, bb + n + 1, -1.0))
                    entries.append((k, blk, bb + 1, a + n + 1, 1.0))
    return SdpaProblem(
        c=tuple(c), blocks=(size,) * m, entries=tuple(entries), comment=tuple(comment)
    )
