from fractions import Fraction
from math import ceil

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from galois_euler.cardinality import FormalCardinality as FC
from galois_euler.errors import (
    EmptyLedgerError,
    EngineError,
    MissingCyclotomicCharacterError,
    MissingRepresentationError,
    UnknownClassificationError,
)
from galois_euler.fingroup import builtin_group, trivial_group
from galois_euler.formulas import (
    EulerContext,
    LedgerRow,
    case_bound,
    chi2_exact_finite,
    chi2_upper_bound,
    dimension_defect,
    epsilon_of,
    etale_cards,
    etale_chi,
    lubotzky_r,
    mu_p_dimension,
    presentation_bounds,
    row_from_module,
    tate_rhs,
    whatif_enlarge,
)
from galois_euler.galmod import COMPLEX, AdjointModule, module_from_generators, trivial_module
from galois_euler.numfield import NumberField, PlaceSet, quadratic_field, rational_field, split_prime
from galois_euler.polynomials import is_squarefree_over_q

K5 = quadratic_field(-5)
K120 = quadratic_field(-120)
QQ = rational_field()
R2 = quadratic_field(2)


def sqrt_minus_5(p, S=None, cyclo=None):
    """Gamma = C2 over Q(sqrt -5) with trivial Z/p."""
    G = builtin_group("C2")
    if cyclo is None:
        cyclo = (1, 1) if p == 2 else (1, p - 1)
    M = trivial_module(G, p, (1,), cyclo_char=cyclo, places=(COMPLEX,))
    return EulerContext(K5, S or PlaceSet.archimedean(K5), M, quotient_is_full=True)


def quaternion_ctx(p):
    Q8 = builtin_group("Q8")
    cyclo = None
    if p == 2:
        cyclo = (1,) * 8
    else:
        from galois_euler.galmod import character_from_generators

        cyclo = character_from_generators(Q8, p, 1, {2: p - 1, 4: 1})
    M = trivial_module(Q8, p, (1,), cyclo_char=cyclo, places=(COMPLEX,))
    return EulerContext(K120, PlaceSet.archimedean(K120), M, quotient_is_full=True)


def rational_trivial(p, primes, real_place=0):
    M = trivial_module(trivial_group(), p, (1,), cyclo_char=(1,), places=(real_place,))
    return EulerContext(QQ, PlaceSet.with_primes(QQ, primes), M, quotient_is_full=True)


# -- Tate's right-hand side ---------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tate_rhs_imaginary_quadratic(p):
    assert tate_rhs(sqrt_minus_5(p)) == FC({p: -1})


def test_tate_rhs_rationals_trivial():
    assert tate_rhs(rational_trivial(2, [])).is_one()


def test_tate_rhs_real_quadratic_sign():
    G = builtin_group("C2")
    M = module_from_generators(G, 3, (1,), {1: [[2]]}, places=(1, 1))
    assert tate_rhs(EulerContext(R2, PlaceSet.archimedean(R2), M)) == FC({3: -2})


# -- epsilon and the bound ----------------------------------------------------


def test_epsilon_with_finite_place():
    assert epsilon_of(sqrt_minus_5(3, PlaceSet.with_primes(K5, [7]))).is_one()


def test_epsilon_needs_cyclotomic_character():
    M = trivial_module(builtin_group("C2"), 3, places=(COMPLEX,))
    with pytest.raises(MissingCyclotomicCharacterError):
        epsilon_of(EulerContext(K5, PlaceSet.archimedean(K5), M))


def test_epsilon_sqrt_minus_5():
    assert epsilon_of(sqrt_minus_5(2)) == FC({2: 1})
    assert epsilon_of(sqrt_minus_5(3)).is_one()


@pytest.mark.parametrize("p, bound", [(2, 2), (3, 1), (5, 1), (7, 1)])
def test_chi2_upper_bound_sqrt_minus_5(p, bound):
    assert chi2_upper_bound(sqrt_minus_5(p)) == FC({p: bound})


def test_bound_reduces_to_tate_when_S_contains_p():
    ctx = sqrt_minus_5(3, PlaceSet.with_primes(K5, [3]))
    assert chi2_upper_bound(ctx) == tate_rhs(ctx)


# -- exact chi_2 ---------------------------------------------------------------


def test_exact_sqrt_minus_5():
    c2 = chi2_exact_finite(sqrt_minus_5(2))
    assert (c2.lhs, c2.rhs_bound, c2.tight) == (FC({2: 1}), FC({2: 2}), False)
    c3 = chi2_exact_finite(sqrt_minus_5(3))
    assert (c3.lhs, c3.rhs_bound, c3.tight) == (FC({3: 1}), FC({3: 1}), True)


def test_exact_quaternion_odd_prime():
    c = chi2_exact_finite(quaternion_ctx(3))
    assert (c.lhs, c.rhs_bound, c.tight) == (FC({3: 1}), FC({3: 1}), True)


def test_exact_quaternion_at_two_differs_from_published_value():
    c = chi2_exact_finite(quaternion_ctx(2))
    assert c.rhs_bound == FC({2: 2})
    assert c.lhs == FC({2: 1})  # published: 2^2
    assert c.lhs <= c.rhs_bound


def test_exact_needs_full_quotient():
    ctx = sqrt_minus_5(3)
    partial = EulerContext(ctx.field, ctx.S, ctx.module, quotient_is_full=False)
    with pytest.raises(EngineError):
        chi2_exact_finite(partial)


# -- etale side ---------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5])
def test_etale_chi_sqrt_minus_5(p):
    assert etale_chi(sqrt_minus_5(p)) == FC({p: 1})


def test_etale_chi_rationals_with_2():
    # real place: H^0 = Z/2, Hhat^0 = Z/2, |2|_infty = 2, and no finite factor
    assert etale_chi(rational_trivial(2, [2])) == FC({2: -1})


@pytest.mark.parametrize("primes", [[2], [2, 3], [2, 7]])
def test_etale_chi_is_tate_rhs_when_totally_imaginary(primes):
    ctx = sqrt_minus_5(2, PlaceSet.with_primes(K5, primes))
    assert etale_chi(ctx) == tate_rhs(ctx)


def test_etale_cards_theta_cases():
    h3 = etale_cards(sqrt_minus_5(2)).h3
    assert h3.kind == "UpperBound" and h3.upper == FC({2: 1})
    finite = etale_cards(sqrt_minus_5(2, PlaceSet.with_primes(K5, [3]))).h3
    assert finite.kind == "Exact" and finite.value.is_one()  # no real places
    rat = etale_cards(rational_trivial(3, [5])).h3
    assert rat.kind == "Exact" and rat.value.is_one()
    two = etale_cards(rational_trivial(2, [3])).h3
    assert two.kind == "Exact" and two.value == FC({2: 1})


def test_etale_cards_interval_case():
    # p = 2, K not totally imaginary, no finite places
    G = builtin_group("C2")
    M = trivial_module(G, 2, (1,), cyclo_char=(1, 1), places=(1, 1))
    ctx = EulerContext(R2, PlaceSet.archimedean(R2), M, quotient_is_full=True)
    cards = etale_cards(ctx)
    assert cards.h3.kind == "Interval"
    assert cards.h3.lower.is_one() and cards.h3.upper == FC({2: 3})
    assert cards.h2.kind == "Interval"
    assert cards.degree(4).value.is_one()


def test_etale_cards_low_degrees_are_galois():
    cards = etale_cards(sqrt_minus_5(2))
    assert cards.h0.value == FC({2: 1}) and cards.h1.value == FC({2: 1})


# -- presentations -------------------------------------------------------------


def test_lubotzky_examples():
    assert lubotzky_r(2, 2, 3, 1, True) == 3
    assert lubotzky_r(1, 1, 1, 1, True) == 1
    assert lubotzky_r(2, 0, 0, 2, False) == 1
    assert lubotzky_r(0, 3, 0, 2, True) == -1  # ceil(-3/2) = -1


@given(st.integers(0, 5), st.integers(0, 20), st.integers(0, 20), st.integers(1, 6), st.booleans())
def test_lubotzky_ceiling_semantics(d, h1, h2, dim, trivial):
    r = lubotzky_r(d, h1, h2, dim, trivial)
    assert r == ceil(Fraction(h2 - h1, dim)) + d - (0 if trivial else 1)
    assert r - 1 < Fraction(h2 - h1, dim) + d - (0 if trivial else 1) <= r


def test_case_bounds():
    assert case_bound(K5, "mu_p_nontrivial") == -2
    assert case_bound(K5, "trivial_S_finite_empty", 1) == 1
    assert case_bound(QQ, "trivial_S_finite_nonempty") == 0
    assert case_bound(R2, "nontrivial_not_mu_p") == 1
    with pytest.raises(UnknownClassificationError):
        case_bound(QQ, "metabelian")


def test_mu_p_dimension():
    assert mu_p_dimension(K5, 2) == 1
    assert mu_p_dimension(K5, 3) == 0
    assert mu_p_dimension(quadratic_field(-3), 3) == 1
    assert mu_p_dimension(QQ, 5) == 0
    assert mu_p_dimension(NumberField.from_poly([1, 1, 1, 1, 1]), 5) is None


def test_ledger_sqrt_minus_5():
    rows = [row_from_module(f"F{p}", sqrt_minus_5(p).module, 1) for p in (2, 3)]
    L = presentation_bounds(K5, PlaceSet.archimedean(K5), rows, d=1)
    assert (L.r_minus_d, L.rhs_bound, L.presentation, L.violation) == (0, 1, (1, 2), False)


def test_ledger_quaternion_computed_and_published():
    S = PlaceSet.archimedean(K120)
    row = row_from_module("F2", quaternion_ctx(2).module, 2)
    assert (row.h1, row.h2) == (2, 2)
    L = presentation_bounds(K120, S, [row], d=2)
    assert (L.r_minus_d, L.rhs_bound) == (0, 1)
    published = LedgerRow("F2", 2, 2, 3, 1, True, 2, "published")
    Lp = presentation_bounds(K120, S, [published], d=2)
    assert (Lp.sup_r, Lp.r_minus_d) == (3, 1)


def test_ledger_trivial_group():
    M = trivial_module(trivial_group(), 3, places=(0,))
    L = presentation_bounds(QQ, PlaceSet.archimedean(QQ), [row_from_module("F3", M, 0)], d=0)
    assert (L.d, L.sup_r) == (0, 0) and L.rhs_bound >= 0


def test_empty_ledger():
    with pytest.raises(EmptyLedgerError):
        presentation_bounds(QQ, PlaceSet.archimedean(QQ), [], d=0)


# -- adjoint defect ------------------------------------------------------------

S3 = builtin_group("S3")
REFLECTION = {S3.index("(1 2)"): [[4, 1], [0, 1]], S3.index("(1 2 3)"): [[0, 4], [1, 4]]}


def test_defect_imaginary_quadratic():
    rep = AdjointModule.from_generators(S3, 5, 2, REFLECTION)
    assert dimension_defect(rep, (COMPLEX,), absolutely_irreducible=True) == -3


def test_defect_real_quadratic():
    rep = AdjointModule.from_generators(S3, 5, 2, REFLECTION)
    c = S3.index("(1 2)")
    assert dimension_defect(rep, (c, c), absolutely_irreducible=True) == -3
    # computing h^0(ad) instead of asserting it gives the same answer here
    assert dimension_defect(rep, (c, c)) == -3


def test_defect_diagonal_involution():
    G = builtin_group("C2")
    rep = AdjointModule.from_generators(G, 5, 2, {1: [[1, 0], [0, 4]]})
    assert dimension_defect(rep, (1, 1), absolutely_irreducible=True) == -3


def test_defect_rank_one():
    rep = AdjointModule.from_generators(trivial_group(), 3, 1, {})
    assert dimension_defect(rep, (0,), absolutely_irreducible=True) == 0


def test_defect_needs_representation():
    with pytest.raises(MissingRepresentationError):
        dimension_defect(None, (COMPLEX,))


# -- context checks and enlarging S -----------------------------------------------


def test_context_checks_place_data():
    M = trivial_module(builtin_group("C2"), 2, places=(1,))
    with pytest.raises(ValueError):
        EulerContext(K5, PlaceSet.archimedean(K5), M)  # complex field, real marker
    M2 = trivial_module(builtin_group("C2"), 2, places=(COMPLEX,))
    with pytest.raises(ValueError):
        EulerContext(R2, PlaceSet.archimedean(R2), M2)


def test_whatif_enlarge():
    ctx = sqrt_minus_5(2)
    w = whatif_enlarge(ctx, [2])
    assert w.bound == FC({2: -1}) and w.exact is None
    w2 = whatif_enlarge(ctx, [2], enlarged_module=ctx.module)
    assert w2.exact is not None and w2.exact.rhs_bound == FC({2: -1})


# -- reduction identities on random fields --------------------------------------


@st.composite
def field_and_primes(draw):
    n = draw(st.integers(1, 4))
    coeffs = draw(st.lists(st.integers(-15, 15), min_size=n, max_size=n)) + [1]
    assume(is_squarefree_over_q(coeffs))
    K = NumberField.from_poly(coeffs)
    p = draw(st.sampled_from([2, 3, 5]))
    extra = draw(st.lists(st.sampled_from([2, 3, 5, 7, 11]), max_size=2))
    return K, p, sorted(set(extra) | {p})


@given(field_and_primes(), st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_bound_equals_tate_when_S_contains_p(data, exps):
    K, p, primes = data
    exps = sorted(exps, reverse=True)
    places = (0,) * K.r1 + (COMPLEX,) * K.r2
    M = trivial_module(trivial_group(), p, exps, places=places)
    ctx = EulerContext(K, PlaceSet.with_primes(K, primes), M)
    assert chi2_upper_bound(ctx) == tate_rhs(ctx)
    if K.totally_imaginary:
        assert etale_chi(ctx) == tate_rhs(ctx)


@given(field_and_primes())
def test_bound_factor_counts_missing_local_degree(data):
    K, p, _ = data
    places = (0,) * K.r1 + (COMPLEX,) * K.r2
    M = trivial_module(trivial_group(), p, (1,), cyclo_char=(1,), places=places)
    S = PlaceSet.archimedean(K)
    ratio = chi2_upper_bound(EulerContext(K, S, M)) / tate_rhs(EulerContext(K, S, M))
    eps = epsilon_of(EulerContext(K, S, M))
    assert ratio / eps == FC({p: sum(e * f for e, f in split_prime(K, p).factors)}) == FC({p: K.degree})
