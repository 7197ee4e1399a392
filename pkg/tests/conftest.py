import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    "C1": "pure-state exactness",
    "C2": "symmetry-operator fidelity",
    "C3": "counting at scale",
    "C4": "Glauber numerics",
    "C5": "path equivalence",
    "C6": "binary optimality gap",
    "C7": "normalization irrelevance",
    "C8": "4-PPM desk-scale run",
    "C9": "classical baselines",
}

_outcomes: dict[str, list[tuple[str, str]]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark and mark.args:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(crit, []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit, title in CRITERIA.items():
        results = _outcomes.get(crit)
        if not results:
            continue
        ok = all(outcome == "passed" for _, outcome in results)
        failed = [name for name, outcome in results if outcome != "passed"]
        extra = f"  (failing: {', '.join(failed)})" if failed else ""
        tr.write_line(f"{crit} {title}: {'PASS' if ok else 'FAIL'}{extra}")
