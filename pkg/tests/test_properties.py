"""Randomised invariants across modules, fields and the scenario corpus."""

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from galois_euler.cohom import cocycle_oracle, cohomology, herbrand_quotient
from galois_euler.fingroup import builtin_group
from galois_euler.formulas import (
    chi2_exact_finite,
    chi2_upper_bound,
    epsilon_of,
    etale_chi,
    tate_rhs,
)
from galois_euler.galmod import module_from_generators
from galois_euler.selftest import bundled_contexts


def matrix_order(A: np.ndarray, p: int, cap: int = 12) -> int | None:
    n = A.shape[0]
    B = A.copy()
    for k in range(1, cap + 1):
        if np.array_equal(B % p, np.eye(n, dtype=np.int64)):
            return k
        B = B @ A % p
    return None


@st.composite
def cyclic_modules(draw, max_size: int = 36):
    """C_m acting on F_p^n through a random invertible matrix of order m <= 12, with m * n <= max_size."""
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 3))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    A = np.array(entries, dtype=np.int64).reshape(n, n)
    m = matrix_order(A, p)
    assume(m is not None and m > 1 and m * n <= max_size)
    G = builtin_group(f"C{m}")
    return module_from_generators(G, p, (1,) * n, {G.generators[0]: A})


@settings(max_examples=40)
@given(cyclic_modules(max_size=16))  # the cochain oracle grows like m^3 n
def test_engines_agree_on_random_cyclic_modules(M):
    assert cohomology(M).dims == cocycle_oracle(M).dims


@settings(max_examples=40)
@given(cyclic_modules())
def test_herbrand_quotient_of_finite_module_is_one(M):
    assert herbrand_quotient(M).is_one()


@settings(max_examples=40)
@given(cyclic_modules())
def test_cyclic_periodicity(M):
    rep = cohomology(M)
    # for cyclic groups H^2 = Hhat^0 = M^G / N(M)
    assert rep.orders[2] == rep.tate_h0


CORPUS = list(bundled_contexts())


def test_corpus_is_nonempty():
    assert len(CORPUS) >= 10


def test_bound_dominance_on_full_quotients():
    checked = 0
    for name, sc, ctx in CORPUS:
        if sc.quotient_is_full:
            cmp = chi2_exact_finite(ctx)
            assert cmp.lhs <= cmp.rhs_bound, name
            assert cmp.tight == (cmp.lhs == cmp.rhs_bound)
            checked += 1
    assert checked >= 5


def test_reduction_identities_on_corpus():
    for name, sc, ctx in CORPUS:
        if sc.S.contains_all_above(ctx.p) and sc.S.has_finite:
            assert chi2_upper_bound(ctx) == tate_rhs(ctx), name
        if sc.S.contains_all_above(ctx.p) and sc.field.totally_imaginary:
            assert etale_chi(ctx) == tate_rhs(ctx), name


def test_bound_is_tate_times_correction():
    for name, sc, ctx in CORPUS:
        if ctx.module.cyclo_char is None and not sc.S.has_finite:
            continue
        ratio = chi2_upper_bound(ctx) / tate_rhs(ctx) / epsilon_of(ctx)
        # the remaining factor is a nonnegative power of p
        assert set(ratio.exponents) <= {ctx.p} and ratio.exponents.get(ctx.p, 0) >= 0, name


def _ledger_rows():
    from galois_euler.cli import evaluate_file
    from galois_euler.scenario import build_scenario, bundled_paths, load_raw

    for path in bundled_paths():
        for raw, rep in zip(load_raw(path), evaluate_file(path)):
            ledger = rep["results"].get("ledger")
            if ledger:
                sc = build_scenario(raw)
                for row in ledger["rows"]:
                    yield sc, row


def test_case_bounds_hold_outside_mu_p_with_p_unramified():
    rows = list(_ledger_rows())
    assert rows
    for sc, row in rows:
        if row["classification"] == "mu_p_nontrivial" and not sc.S.contains_all_above(row["p"]):
            continue
        assert row["r_minus_d"] <= row["case_bound"], (sc.id, row)


def test_mu_p_case_bound_can_fail_when_p_not_in_S():
    # Q(sqrt -120) with S archimedean: K(sqrt -3)/K is unramified, so mu_3 gives r - d = -1 > -2
    exceeded = [
        (sc.id, row["module"]) for sc, row in _ledger_rows() if row["r_minus_d"] > row["case_bound"]
    ]
    assert exceeded == [("example2_sqrt-120", "mu3")]
