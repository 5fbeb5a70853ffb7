"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import time
from contextlib import contextmanager

import pytest

from galois_euler.cardinality import FormalCardinality as FC
from galois_euler.cli import evaluate_file
from galois_euler.scenario import bundled_dir
from galois_euler.selftest import run_suite


@pytest.fixture
def verdict(capsys):
    @contextmanager
    def record(name: str):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                state = "PASS" if ok else "FAIL"
                print(f"\n{state} {name} ({time.perf_counter() - t0:.2f} s)")

    return record


def card(d: dict) -> FC:
    return FC({int(p): e for p, e in d.items()})


def test_example1_reproduction(verdict):
    with verdict("example 1: Q(sqrt -5), Gamma = C2"):
        t0 = time.perf_counter()
        (rep,) = evaluate_file(bundled_dir() / "example1_sqrt-5.json")
        elapsed = time.perf_counter() - t0
        for p in (2, 3, 5):
            m = rep["results"]["modules"][f"F{p}"]
            assert card(m["chi2_exact"]) == FC({p: 1})
            assert card(m["chi2_bound"]) == FC({p: 2 if p == 2 else 1})
            assert m["tight"] is (p != 2)
        ledger = rep["results"]["ledger"]
        assert (ledger["r_minus_d"], ledger["rhs_bound"]) == (0, 1)
        assert rep["warnings"] == []
        assert elapsed < 1.0, f"{elapsed:.2f} s"


def test_example2_reproduction(verdict):
    with verdict("example 2: Q(sqrt -120), Gamma = Q8"):
        t0 = time.perf_counter()
        (rep,) = evaluate_file(bundled_dir() / "example2_sqrt-120.json")
        elapsed = time.perf_counter() - t0
        mods = rep["results"]["modules"]
        f3 = mods["F3"]
        assert card(f3["chi2_exact"]) == FC({3: 1}) == card(f3["chi2_bound"])
        assert f3["tight"] is True
        two = mods["F2"]
        coh = two["cohomology"]
        assert coh["engines_agree"] and coh["snf"]["dims"] == coh["fp_linear"]["dims"]
        computed_h2 = coh["snf"]["dims"][2]
        claim = two["claims"]["h2_dim"]
        assert claim["claimed"] == 3
        assert claim["computed"] == {"snf": computed_h2, "fp_linear": computed_h2}
        differs = computed_h2 != claim["claimed"]
        flagged = any(w["code"] == "DISCREPANCY" for w in rep["warnings"])
        assert flagged == differs
        assert elapsed < 30.0, f"{elapsed:.2f} s"


@pytest.mark.parametrize(
    "suite, label, minimum",
    [
        ("cyclic", "cyclic closed forms, n <= 12, p in {2,3,5}, k <= 3", 100),
        ("engines", "engine equivalence on elementary abelian modules, |Gamma| <= 16", 30),
        ("product_formula", "product formula on 100 seeded pairs", 100),
        ("dominance", "bound dominance on bundled full-quotient scenarios", 5),
        ("reduction", "reduction identities across the scenario corpus", 5),
    ],
)
def test_selftest_suite(verdict, suite, label, minimum):
    with verdict(label):
        res = run_suite(suite, seed=0)
        assert res.ok, res.failed
        assert res.passed >= minimum


def test_dimension_defect_reproduction(verdict):
    with verdict("dimension defect: -3, -3, 0"):
        got = []
        for name in ("defect_imaginary_quadratic", "defect_real_quadratic", "defect_rank_one_Q"):
            (rep,) = evaluate_file(bundled_dir() / f"{name}.json")
            got.append(rep["results"]["defect"]["defect"])
        assert got == [-3, -3, 0]
