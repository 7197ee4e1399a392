"""Parameter sweeps over (m, Ns, nbar), CSV emission and plotting."""

from __future__ import annotations

import csv
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import detect, glauber
from .constellation import DEFAULT_MAX_N, DimensionCapError, PpmParams, slot_states
from .srm import pc_gram_matrix

log = logging.getLogger(__name__)

METHODS = ("srm", "helstrom", "pure-closed-form", "classical", "ook-baselines")
CSV_HEADER = ("method", "m", "Ns", "nbar", "n", "h", "H", "Pe", "Pc", "runtime_s")
DEFAULT_MAX_H = 1500
MAX_H_ENV = "QPPM_MAX_H"


def max_h_from_env(default: int = DEFAULT_MAX_H) -> int:
    raw = os.environ.get(MAX_H_ENV)
    if raw is None or raw == "":
        return default
    try:
        val = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_H_ENV} must be an integer, got {raw!r}") from None
    if val < 1:
        raise ValueError(f"{MAX_H_ENV} must be positive, got {val}")
    return val


@dataclass(frozen=True)
class SweepSpec:
    m: int
    Ns_grid: tuple[float, ...]
    nbar_list: tuple[float, ...]
    methods: tuple[str, ...] = ("srm",)
    eps: float = glauber.DEFAULT_EPS
    nu: float = glauber.DEFAULT_NU
    force_n: int | None = None
    force_h: int | None = None
    max_H: int = field(default_factory=max_h_from_env)
    max_N: int = DEFAULT_MAX_N
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "Ns_grid", tuple(float(x) for x in self.Ns_grid))
        object.__setattr__(self, "nbar_list", tuple(float(x) for x in self.nbar_list))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.m < 2:
            raise ValueError(f"PPM order must be >= 2, got {self.m}")
        if not self.Ns_grid or not self.nbar_list:
            raise ValueError("Ns grid and nbar list must be non-empty")
        if any(x < 0 or not math.isfinite(x) for x in self.Ns_grid + self.nbar_list):
            raise ValueError("Ns and nbar values must be finite and non-negative")
        if not self.methods:
            raise ValueError("at least one method is required")
        bad = [x for x in self.methods if x not in METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
        if "helstrom" in self.methods and self.m != 2:
            raise ValueError("helstrom is only available for m = 2")
        if not (0 < self.eps < 1 and 0 < self.nu < 1):
            raise ValueError("eps and nu must lie in (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class Row:
    method: str
    m: int
    Ns: float
    nbar: float
    n: int | None
    h: int | None
    H: int | None
    Pe: float
    Pc: float
    runtime_s: float

    def key(self):
        return (self.method, self.nbar, self.Ns)


@dataclass(frozen=True)
class Failure:
    method: str
    m: int
    Ns: float
    nbar: float
    message: str


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[Row]
    failures: list[Failure]


def parse_grid(text: str) -> tuple[float, ...]:
    """``a:b:step`` (inclusive end) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    return tuple(float(p) for p in text.split(",") if p.strip())


def _row(method, m, Ns, nbar, pe, t0, n=None, h=None, H=None) -> Row:
    return Row(method, m, Ns, nbar, n, h, H, pe, 1.0 - pe, time.perf_counter() - t0)


def _params(spec: SweepSpec, Ns: float, nbar: float) -> PpmParams:
    return PpmParams(
        m=spec.m, Ns=Ns, nbar=nbar, eps=spec.eps, nu=spec.nu,
        n=spec.force_n, h=spec.force_h, max_N=spec.max_N,
    )


def _quantum(spec: SweepSpec, method: str, Ns: float, nbar: float) -> Row:
    t0 = time.perf_counter()
    states = slot_states(_params(spec, Ns, nbar))
    if states.H > spec.max_H:
        raise DimensionCapError(
            f"H = {states.h}^{spec.m} = {states.H} exceeds the EID cap {spec.max_H} "
            f"(set {MAX_H_ENV} or force a smaller h)"
        )
    res = pc_gram_matrix(states) if method == "srm" else detect.helstrom_2ppm(states)
    return _row(method, spec.m, Ns, nbar, res.Pe, t0, states.n, states.h, states.H)


def _ook_rows(m: int, Ns: float) -> list[Row]:
    t0 = time.perf_counter()
    b = detect.ook_baselines(Ns, m)
    # the printed slot-classical formula exceeds 1 at small Ns and is kept out of the table
    vals = {
        "ook-classical": b.classical,
        "ook-helstrom": b.helstrom,
        "ook-helstrom-asymptotic": b.helstrom_asymptotic,
        "ppm-dolinar-asymptotic": b.dolinar_ppm_asymptotic,
        "ppm-quantum-asymptotic": b.ppm_quantum_asymptotic,
        "ppm-slot-classical": b.slot_classical_consistent,
    }
    return [_row(k, m, Ns, 0.0, v, t0) for k, v in vals.items() if v <= 1]


def _jobs(spec: SweepSpec):
    for method in spec.methods:
        if method in ("pure-closed-form", "ook-baselines"):
            # noiseless formulas: one row per Ns with nbar = 0
            for Ns in spec.Ns_grid:
                yield method, Ns, 0.0
        else:
            for nbar in spec.nbar_list:
                for Ns in spec.Ns_grid:
                    yield method, Ns, nbar


def _evaluate(spec: SweepSpec, job) -> list[Row]:
    method, Ns, nbar = job
    t0 = time.perf_counter()
    if method in ("srm", "helstrom"):
        return [_quantum(spec, method, Ns, nbar)]
    if method == "pure-closed-form":
        return [_row("closed-form-pure", spec.m, Ns, 0.0, detect.pure_ppm_pe(spec.m, Ns), t0)]
    if method == "classical":
        return [_row("classical", spec.m, Ns, nbar, detect.classical_ppm_pe(spec.m, Ns, nbar), t0)]
    return _ook_rows(spec.m, Ns)


def run_sweep(spec: SweepSpec, progress: bool = False) -> SweepResult:
    jobs = list(dict.fromkeys(_jobs(spec)))
    rows: list[Row] = []
    failures: list[Failure] = []
    done = 0

    def one(job):
        try:
            return job, _evaluate(spec, job), None
        except (ValueError, ArithmeticError, MemoryError) as exc:
            return job, [], exc

    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        for job, out, exc in pool.map(one, jobs):
            done += 1
            method, Ns, nbar = job
            if exc is not None:
                log.warning("m=%d %s Ns=%g nbar=%g failed: %s", spec.m, method, Ns, nbar, exc)
                failures.append(Failure(method, spec.m, Ns, nbar, str(exc)))
            rows.extend(out)
            if progress:
                print(f"\r[m={spec.m}] {done}/{len(jobs)} points", end="", file=sys.stderr, flush=True)
    if progress:
        print(file=sys.stderr)
    rows.sort(key=Row.key)
    return SweepResult(spec=spec, rows=rows, failures=failures)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows: list[Row], path: str | os.PathLike) -> None:
    if not rows:
        raise ValueError("nothing to write: the result table is empty")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([_cell(getattr(r, k)) for k in CSV_HEADER])


def read_csv(path: str | os.PathLike) -> list[Row]:
    def opt_int(s):
        return int(s) if s else None

    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {rd.fieldnames}")
        return [
            Row(
                d["method"], int(d["m"]), float(d["Ns"]), float(d["nbar"]),
                opt_int(d["n"]), opt_int(d["h"]), opt_int(d["H"]),
                float(d["Pe"]), float(d["Pc"]), float(d["runtime_s"]),
            )
            for d in rd
        ]


def plot(rows: list[Row], path: str | os.PathLike, title: str | None = None) -> None:
    """Pe (log scale) against Ns, one curve per (method, nbar)."""
    if not rows:
        raise ValueError("nothing to plot: the result table is empty")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    curves: dict[tuple[str, float], list[Row]] = {}
    for r in rows:
        curves.setdefault((r.method, r.nbar), []).append(r)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.set_prop_cycle(color=plt.get_cmap("tab20").colors)
    for (method, nbar), pts in sorted(curves.items()):
        pts = [p for p in sorted(pts, key=lambda r: r.Ns) if p.Pe > 0]
        if not pts:
            continue
        style = "--" if method.startswith(("classical", "ook", "ppm")) else "-"
        ax.semilogy([p.Ns for p in pts], [p.Pe for p in pts], style, marker=".",
                    label=f"{method}, nbar={nbar:g}")
    ax.set_xlabel("Ns (mean signal photons)")
    ax.set_ylabel("Pe")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render(rows: list[Row], out_dir: str | os.PathLike, fmt: tuple[str, ...] = ("csv", "plot")) -> list[Path]:
    """Write ``results.csv`` and one ``pe_m<m>.png`` per PPM order into ``out_dir``."""
    if not rows:
        raise ValueError("nothing to render: the result table is empty")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in fmt:
        p = out / "results.csv"
        write_csv(rows, p)
        written.append(p)
    if "plot" in fmt:
        for m in sorted({r.m for r in rows}):
            p = out / f"pe_m{m}.png"
            plot([r for r in rows if r.m == m], p, title=f"{m}-PPM")
            written.append(p)
    return written
