import csv

import pytest

from qppm import sweep
from qppm.constellation import PpmParams, slot_states
from qppm.sweep import CSV_HEADER, SweepSpec, parse_grid, read_csv, render, run_sweep, write_csv


def test_parse_grid():
    assert parse_grid("0.5:2:0.5") == (0.5, 1.0, 1.5, 2.0)
    assert parse_grid("0.5:10:0.5")[-1] == 10.0 and len(parse_grid("0.5:10:0.5")) == 20
    assert parse_grid("0,0.05, 0.1") == (0.0, 0.05, 0.1)
    assert parse_grid("3") == (3.0,)
    for bad in ("1:2", "2:1:0.5", "0:1:0"):
        with pytest.raises(ValueError):
            parse_grid(bad)


@pytest.mark.parametrize(
    "kw",
    [
        dict(m=1),
        dict(Ns_grid=()),
        dict(nbar_list=(-0.1,)),
        dict(methods=()),
        dict(methods=("magic",)),
        dict(m=3, methods=("helstrom",)),
        dict(eps=0.0),
        dict(workers=0),
    ],
)
def test_spec_validation(kw):
    base = dict(m=2, Ns_grid=(1.0,), nbar_list=(0.1,), methods=("srm",))
    base.update(kw)
    with pytest.raises(ValueError):
        SweepSpec(**base)


def test_max_h_env(monkeypatch):
    monkeypatch.setenv("QPPM_MAX_H", "7")
    assert SweepSpec(m=2, Ns_grid=(1.0,), nbar_list=(0.1,)).max_H == 7
    monkeypatch.setenv("QPPM_MAX_H", "zero")
    with pytest.raises(ValueError):
        sweep.max_h_from_env()
    monkeypatch.delenv("QPPM_MAX_H")
    assert sweep.max_h_from_env() == 1500


def test_cap_violations_are_per_point(monkeypatch):
    monkeypatch.setenv("QPPM_MAX_H", "9")
    spec = SweepSpec(m=2, Ns_grid=(0.5, 4.0), nbar_list=(0.0, 0.1), methods=("srm", "classical"), eps=1e-6, nu=1e-6)
    res = run_sweep(spec)
    assert res.failures and all("EID cap" in f.message for f in res.failures)
    assert all(f.method == "srm" and f.nbar == 0.1 for f in res.failures)
    # pure points (h = 1) and classical rows still come through
    assert {(r.method, r.nbar) for r in res.rows} >= {("srm", 0.0), ("classical", 0.1)}


def test_rows_consistent_and_ordered():
    spec = SweepSpec(m=2, Ns_grid=(0.5, 1.0, 2.0), nbar_list=(0.0, 0.1),
                     methods=("srm", "helstrom", "pure-closed-form", "classical", "ook-baselines"),
                     eps=1e-6, nu=1e-6)
    res = run_sweep(spec)
    assert not res.failures
    for r in res.rows:
        assert 0 <= r.Pe <= 1 and abs(r.Pe + r.Pc - 1) <= 1e-12
    assert [r.key() for r in res.rows] == sorted(r.key() for r in res.rows)
    srm = {(r.nbar, r.Ns): r for r in res.rows if r.method == "srm"}
    hel = {(r.nbar, r.Ns): r for r in res.rows if r.method == "helstrom"}
    closed = {r.Ns: r for r in res.rows if r.method == "closed-form-pure"}
    for key, r in srm.items():
        assert r.Pe >= hel[key].Pe - 1e-10
        if key[0] == 0:
            assert abs(r.Pc - closed[key[1]].Pc) <= 1e-10
    assert {r.method for r in res.rows if r.nbar == 0 and r.method.startswith("ook")} == {
        "ook-classical", "ook-helstrom", "ook-helstrom-asymptotic"}


def test_monotone_in_ns_and_nbar():
    spec = SweepSpec(m=3, Ns_grid=(0.5, 1.0, 1.5, 2.0, 3.0), nbar_list=(0.0, 0.05, 0.1),
                     methods=("srm", "classical"), eps=1e-5, nu=1e-5)
    res = run_sweep(spec)
    for method in ("srm", "classical"):
        table = {(r.nbar, r.Ns): r.Pe for r in res.rows if r.method == method}
        for nb in spec.nbar_list:
            col = [table[nb, x] for x in spec.Ns_grid]
            assert all(a >= b for a, b in zip(col, col[1:]))
        for x in spec.Ns_grid:
            row = [table[nb, x] for nb in spec.nbar_list]
            assert all(a <= b + 1e-12 for a, b in zip(row, row[1:]))


def _strip_runtime(path):
    with open(path) as fh:
        return [row[:-1] for row in csv.reader(fh)]


def test_deterministic_csv(tmp_path):
    spec = SweepSpec(m=2, Ns_grid=(0.5, 1.5), nbar_list=(0.05, 0.1), methods=("srm", "classical"),
                     eps=1e-5, nu=1e-5, workers=2)
    write_csv(run_sweep(spec).rows, tmp_path / "a.csv")
    write_csv(run_sweep(spec).rows, tmp_path / "b.csv")
    assert _strip_runtime(tmp_path / "a.csv") == _strip_runtime(tmp_path / "b.csv")


def test_csv_round_trip_and_header(tmp_path):
    spec = SweepSpec(m=2, Ns_grid=(1.0,), nbar_list=(0.1,), methods=("srm", "classical"), eps=1e-5, nu=1e-5)
    rows = run_sweep(spec).rows
    write_csv(rows, tmp_path / "r.csv")
    with open(tmp_path / "r.csv") as fh:
        assert fh.readline().strip() == ",".join(CSV_HEADER) == "method,m,Ns,nbar,n,h,H,Pe,Pc,runtime_s"
    assert read_csv(tmp_path / "r.csv") == rows


def test_render_files(tmp_path):
    rows = []
    for m in (2, 3):
        rows += run_sweep(SweepSpec(m=m, Ns_grid=(0.5, 1.0), nbar_list=(0.0,), methods=("srm", "classical"))).rows
    written = render(rows, tmp_path / "out")
    names = sorted(p.name for p in written)
    assert names == ["pe_m2.png", "pe_m3.png", "results.csv"]
    assert all(p.stat().st_size > 1000 for p in written if p.suffix == ".png")
    with pytest.raises(ValueError):
        render([], tmp_path / "empty")


def test_dimension_schedule_4ppm():
    # Ns ~ 3 with light noise needs about ten photon levels per slot
    st = slot_states(PpmParams(4, 3.0, 0.05, eps=1e-3, nu=1e-3))
    assert 9 <= st.n <= 12
    assert 5e3 <= st.N <= 3e4


def test_dimension_schedule_3ppm_within_desk_scale():
    st = slot_states(PpmParams(3, 8.0, 0.1, eps=1e-7, nu=1e-7))
    assert st.n <= 40 and st.h <= 8 and st.H <= 512
