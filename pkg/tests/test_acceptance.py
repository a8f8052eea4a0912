"""Acceptance suite: one test per criterion, each backed by a named verification suite.

A one-line PASS/FAIL summary per criterion is printed at the end of the pytest run
(see ``pytest_terminal_summary`` in conftest.py).
"""

import time
from math import comb

import pytest

from scx.suites import FAIL, PASS, SEMI, run_suite

# every suite must finish at desk scale
TIME_LIMIT_S = 60.0


def _run(name: str, seed: int = 0):
    t = time.perf_counter()
    report = run_suite(name, seed)
    elapsed = time.perf_counter() - t
    assert elapsed < TIME_LIMIT_S, f"{name} took {elapsed:.1f}s"
    failures = {c.name: c.witness for c in report.failures()}
    assert not failures, failures
    return {c.name: c for c in report.checks}


def _statuses(checks):
    return {c.status for c in checks.values()}


@pytest.mark.acceptance
def test_criterion_01_coherent_cubes():
    checks = _run("coherent-cubes")
    windows = [(n, i, j) for n in range(6) for i in range(n + 1) for j in range(i, n + 1)]
    assert len(windows) == 56
    for n, i, j in windows:
        assert checks[f"hom D{n} ({i},{j})"].status == PASS
    assert sum("assoc" in name for name in checks) >= 1
    assert _statuses(checks) == {PASS}


@pytest.mark.acceptance
def test_criterion_02_subdivision_spheres():
    checks = _run("subdivision-spheres")
    for n in (2, 3, 4):
        assert checks[f"sd0 boundary D{n}"].status == PASS
    assert checks["sd+0 marking D2 flat"].status == PASS
    assert checks["sd+0 marking D2 sharp"].status == PASS


@pytest.mark.acceptance
def test_criterion_03_jt_fibers():
    checks = _run("jt-fibers")
    # n-simplices of the m-simplex: monotone maps [n] -> [m]; the boundary of D2 loses one 2-simplex
    expected = sum(comb(m + n + 1, n + 1) for m in (0, 1, 2) for n in range(3)) + 3 + 6 + (10 - 1)
    assert len(checks) == expected == 49
    assert _statuses(checks) == {PASS}


@pytest.mark.acceptance
def test_criterion_04_colk():
    checks = _run("colk")
    assert sorted(checks) == sorted(f"C'({m},{n})" for m, n in [(1, 1), (2, 1), (1, 2), (2, 2)])
    assert _statuses(checks) == {PASS}


@pytest.mark.acceptance
def test_criterion_05_filtrations():
    checks = _run("filtrations")
    names = [f"preperc n={n}" for n in range(1, 5)]
    names += [f"swww n={n} i={i}" for n in (2, 3) for i in range(1, n)]
    names += [f"carpal n={n}" for n in range(3)]
    assert sorted(checks) == sorted(names)
    assert _statuses(checks) == {PASS}


@pytest.mark.acceptance
def test_criterion_06_csi():
    checks = _run("csi")
    two = checks["two parallel arrows Hom(a,b)"]
    assert two.status == PASS
    assert list(two.info["betti"]) == [2, 0, 0]
    assert two.info["enriched_betti"] == two.info["betti"]
    for n in (1, 2, 3):
        assert checks[f"sharp D{n} Hom(0,{n})"].status == PASS


@pytest.mark.acceptance
def test_criterion_07_segal_roundtrip():
    checks = _run("segal-roundtrip", seed=0)
    assert len(checks) == 20
    assert _statuses(checks) == {PASS}


@pytest.mark.acceptance
def test_criterion_08_free_category():
    checks = _run("free-category")
    counts = [c for name, c in checks.items() if name.startswith("counts")]
    adj = [c for name, c in checks.items() if name.startswith("adjunction")]
    assert len(counts) == 4 * 3
    assert all(c.status == PASS for c in counts)
    assert len(adj) == 3 * 2 * 6
    assert all(c.status == SEMI for c in adj)


@pytest.mark.acceptance
def test_criterion_09_weak_bicategory():
    checks = _run("weak-bicategory")
    rejected = checks["D2 flat"]
    assert rejected.status == PASS
    assert rejected.info["witness_generator"] == "A(2,1)"
    for name in ("D0", "nerve par", "nerve [1]", "nerve [2]"):
        assert checks[name].status == SEMI
        assert checks[name].info["verdict"] == "SEMI-DECIDED-YES"


@pytest.mark.acceptance
def test_criterion_10_flatness():
    checks = _run("flatness")
    for name in ("identity D2", "D3 via 0112", "prism D2xD1"):
        assert checks[name].status == PASS
        assert checks[name].info["hypothesis"] is True
    assert checks["D02 + point"].status == PASS
    assert FAIL not in _statuses(checks)
