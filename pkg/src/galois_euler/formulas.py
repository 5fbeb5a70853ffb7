"""Closed-form Euler characteristics, bounds and presentation ledgers.

All functions take an :class:`EulerContext`: a number field, a place set S,
and a p-primary module over the finite quotient Gamma through which
G_{K,S} is assumed to act.  Results are exact prime-exponent maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cardinality import FormalCardinality, ValueOrBound
from .cohom import CohomologyReport, chi2_finite, cohomology
from .errors import EmptyLedgerError, EngineError, MissingRepresentationError, UnknownClassificationError
from .galmod import (
    COMPLEX,
    AdjointModule,
    GaloisModule,
    archimedean_h0,
    archimedean_tate_h0,
    cartier_dual,
    centralizer_dim,
    fixed_points,
    full_centralizer_dim,
)
from .numfield import NumberField, PlaceSet, bound_exponent_S_p, squarefree_part


@dataclass(frozen=True, eq=False)
class EulerContext:
    field: NumberField
    S: PlaceSet
    module: GaloisModule
    quotient_is_full: bool = False
    faithful_quotient: bool = False

    def __post_init__(self):
        places = self.module.real_place_involutions
        K = self.field
        if len(places) != K.num_archimedean:
            raise ValueError(
                f"need one involution or 'complex' per archimedean place: got {len(places)},"
                f" field has {K.num_archimedean}"
            )
        expected = [p == COMPLEX for p in places]
        if expected != [False] * K.r1 + [True] * K.r2:
            raise ValueError("'complex' markers must sit exactly at the complex places (listed last)")
        if self.S.field is not K:
            if self.S.field.min_poly != K.min_poly:
                raise ValueError("place set belongs to a different field")

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def log_order(self) -> int:
        """a with [M] = p^a."""
        return self.module.module.exponent_sum

    @property
    def places(self) -> tuple:
        return self.module.real_place_involutions

    def with_S(self, S: PlaceSet, module: GaloisModule | None = None, full: bool | None = None) -> "EulerContext":
        return EulerContext(
            self.field,
            S,
            module or self.module,
            self.quotient_is_full if full is None else full,
            self.faithful_quotient,
        )


def tate_rhs(ctx: EulerContext) -> FormalCardinality:
    """[M]^(-[K:Q]) times the product of |H^0(G_v, M)| over archimedean v."""
    out = ctx.module.order ** (-ctx.field.degree)
    for place in ctx.places:
        out = out * archimedean_h0(ctx.module, place)
    return out


def epsilon_of(ctx: EulerContext) -> FormalCardinality:
    """1 when S has a finite place, else the fixed points of the Cartier dual."""
    if ctx.S.has_finite:
        return FormalCardinality()
    dual = cartier_dual(ctx.module)
    return fixed_points(dual, range(dual.group.order))


def chi2_upper_bound(ctx: EulerContext) -> FormalCardinality:
    """Upper bound for chi_2(G_{K,S}, M) with the p-adic and epsilon corrections."""
    return tate_rhs(ctx) * bound_exponent_S_p(ctx.field, ctx.S, ctx.p, ctx.log_order) * epsilon_of(ctx)


@dataclass(frozen=True)
class ExactComparison:
    lhs: FormalCardinality
    rhs_bound: FormalCardinality
    tight: bool
    report: CohomologyReport


def chi2_exact_finite(ctx: EulerContext, report: CohomologyReport | None = None) -> ExactComparison:
    """chi_2 computed from Gamma itself, next to the bound."""
    if not ctx.quotient_is_full:
        raise EngineError("exact chi_2 needs quotient_is_full: Gamma must be all of G_{K,S}")
    rep = report or cohomology(ctx.module)
    lhs = chi2_finite(ctx.module, rep)
    bound = chi2_upper_bound(ctx)
    return ExactComparison(lhs, bound, lhs == bound, rep)


def _archimedean_tate_product(ctx: EulerContext) -> FormalCardinality:
    out = FormalCardinality()
    for place in ctx.places:
        out = out * archimedean_tate_h0(ctx.module, place)
    return out


def etale_chi(ctx: EulerContext) -> FormalCardinality:
    """Euler characteristic of M on Spec O_{K,S} (alternating over degrees 0..3)."""
    M = ctx.module
    out = bound_exponent_S_p(ctx.field, ctx.S, ctx.p, ctx.log_order)
    for place in ctx.places:
        abs_m = M.order ** (2 if place == COMPLEX else 1)
        out = out * archimedean_h0(M, place) / (archimedean_tate_h0(M, place) * abs_m)
    return out


@dataclass(frozen=True)
class EtaleCards:
    h0: ValueOrBound
    h1: ValueOrBound
    h2: ValueOrBound
    h3: ValueOrBound

    def degree(self, i: int) -> ValueOrBound:
        """Cardinality in degree i; zero groups outside 0..3."""
        if i in (0, 1, 2, 3):
            return (self.h0, self.h1, self.h2, self.h3)[i]
        return ValueOrBound.exact(FormalCardinality())

    def to_json(self) -> dict:
        return {f"h{i}": self.degree(i).to_json() for i in range(4)}


def theta(ctx: EulerContext) -> ValueOrBound:
    """Size of H^3_et(U, M), exact only when S has a finite place."""
    arch = _archimedean_tate_product(ctx)
    if ctx.S.has_finite:
        return ValueOrBound.exact(arch)
    dual = cartier_dual(ctx.module)
    dual_fixed = fixed_points(dual, range(dual.group.order))
    if ctx.p != 2 or ctx.field.totally_imaginary:
        return ValueOrBound.upper_bound(dual_fixed)
    return ValueOrBound.interval(FormalCardinality(), dual_fixed * arch)


def etale_cards(ctx: EulerContext, report: CohomologyReport | None = None) -> EtaleCards:
    if not ctx.quotient_is_full:
        raise EngineError("etale cardinalities need quotient_is_full")
    rep = report or cohomology(ctx.module)
    h0, h1 = rep.orders[0], rep.orders[1]
    th = theta(ctx)
    base = (
        tate_rhs(ctx)
        * bound_exponent_S_p(ctx.field, ctx.S, ctx.p, ctx.log_order)
        * h1
        / h0
        / _archimedean_tate_product(ctx)
    )
    return EtaleCards(ValueOrBound.exact(h0), ValueOrBound.exact(h1), th.scale(base), th)


# ---------------------------------------------------------------------------
# presentations


def ceil_div(num: int, den: int) -> int:
    """Least integer >= num/den, for den > 0."""
    return math.ceil(Fraction(num, den))


def lubotzky_r(d: int, h1: int, h2: int, dimM: int, trivial: bool) -> int:
    if dimM < 1:
        raise ValueError("dim M >= 1")
    return ceil_div(h2 - h1, dimM) + d - (0 if trivial else 1)


CLASSIFICATIONS = (
    "mu_p_nontrivial",
    "nontrivial_not_mu_p",
    "trivial_S_finite_empty",
    "trivial_S_finite_nonempty",
)


def archimedean_count(K: NumberField) -> int:
    return K.r1 + K.r2


def case_bound(field: NumberField, classification: str, mu_p_dim: int | None = None) -> int:
    """Upper bound on r(G_{K,S}, p, M) - d(G_{K,S}) for a simple module of the given kind."""
    R, R2 = archimedean_count(field), field.r2
    if classification == "mu_p_nontrivial":
        return -R2 - 1
    if classification == "nontrivial_not_mu_p":
        return R - 1
    if classification == "trivial_S_finite_empty":
        if mu_p_dim not in (0, 1):
            raise ValueError("case needs dim mu_p(K) in {0, 1}")
        return R + mu_p_dim - 1
    if classification == "trivial_S_finite_nonempty":
        return R - 1
    raise UnknownClassificationError(f"unknown classification {classification!r}")


def mu_p_dimension(field: NumberField, p: int) -> int | None:
    """dim_{F_p} mu_p(K) when decidable from the degree alone, else None."""
    if p == 2:
        return 1
    if (p - 1) > field.degree or field.degree % (p - 1):
        return 0
    if field.degree == 1:
        return 0
    if field.degree == 2 and p == 3:
        # Q(zeta_3) = Q(sqrt(-3)); the discriminant pins down the quadratic field
        disc = field.discriminant()
        return 1 if squarefree_part(disc) == -3 else 0
    return None


@dataclass(frozen=True)
class LedgerRow:
    module_id: str
    p: int
    h1: int
    h2: int
    dim: int
    trivial: bool
    d: int
    source: str = "computed"
    mu_p: bool = False

    @property
    def xi(self) -> int:
        return 0 if self.trivial else 1

    @property
    def r(self) -> int:
        return lubotzky_r(self.d, self.h1, self.h2, self.dim, self.trivial)

    def classification(self, S: PlaceSet) -> str:
        if not self.trivial:
            return "mu_p_nontrivial" if self.mu_p else "nontrivial_not_mu_p"
        return "trivial_S_finite_nonempty" if S.has_finite else "trivial_S_finite_empty"

    def to_json(self) -> dict:
        return {
            "module": self.module_id,
            "p": self.p,
            "xi": self.xi,
            "h1": self.h1,
            "h2": self.h2,
            "dim": self.dim,
            "r": self.r,
            "source": self.source,
        }


def row_from_module(module_id: str, M: GaloisModule, d: int, report: CohomologyReport | None = None, mu_p: bool = False) -> LedgerRow:
    if not M.module.is_elementary:
        raise ValueError("ledger rows need F_p-vector-space modules")
    rep = report or cohomology(M)
    return LedgerRow(module_id, M.p, rep.dims[1], rep.dims[2], M.module.rank, M.is_trivial(), d, "computed", mu_p)


@dataclass(frozen=True)
class PresentationLedger:
    rows: tuple[LedgerRow, ...]
    d: int
    gamma: int
    archimedean: int

    @property
    def sup_r(self) -> int:
        return max(row.r for row in self.rows)

    @property
    def r_minus_d(self) -> int:
        return self.sup_r - self.d

    @property
    def rhs_bound(self) -> int:
        return self.archimedean - self.gamma

    @property
    def presentation(self) -> tuple[int, int]:
        return self.d, self.archimedean + self.d - self.gamma

    @property
    def violation(self) -> bool:
        return self.r_minus_d > self.rhs_bound

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "d": self.d,
            "sup_r": self.sup_r,
            "r_minus_d": self.r_minus_d,
            "gamma": self.gamma,
            "rhs_bound": self.rhs_bound,
            "presentation": {"generators": self.presentation[0], "relations": self.presentation[1]},
            "violation": self.violation,
        }


def presentation_bounds(field: NumberField, S: PlaceSet, rows: Iterable[LedgerRow], d: int) -> PresentationLedger:
    rows = tuple(rows)
    if not rows:
        raise EmptyLedgerError("ledger needs at least one module row")
    gamma = 1 if S.has_finite else 0
    return PresentationLedger(rows, d, gamma, archimedean_count(field))


# ---------------------------------------------------------------------------
# adjoint defect


def dimension_defect_terms(rep: AdjointModule, places: Sequence, absolutely_irreducible: bool = False) -> tuple[int, list[int]]:
    """(h^0(ad), [dim H^0(G_v, ad) for each archimedean v])."""
    h0 = 1 if absolutely_irreducible else full_centralizer_dim(rep)
    terms = [rep.n**2 if c == COMPLEX else centralizer_dim(rep, c) for c in places]
    return h0, terms


def dimension_defect(rep: AdjointModule | None, places: Sequence, absolutely_irreducible: bool = False) -> int:
    """h^0(ad) minus the archimedean fixed-point dimensions; negative means h^1 - h^2 < 0 is forced."""
    if rep is None:
        raise MissingRepresentationError("dimension defect needs a representation")
    h0, terms = dimension_defect_terms(rep, places, absolutely_irreducible)
    return h0 - sum(terms)


# ---------------------------------------------------------------------------
# enlarging S


@dataclass(frozen=True)
class WhatIf:
    S: PlaceSet
    bound: FormalCardinality
    exact: ExactComparison | None = None


def whatif_enlarge(ctx: EulerContext, extra_primes: Sequence[int], enlarged_module: GaloisModule | None = None) -> WhatIf:
    """Re-evaluate the bound (and chi_2 when a full quotient is supplied) for S plus extra primes.

    Without an enlarged quotient the module is kept but the exact value is
    not recomputed, since Gamma need no longer be all of G_{K,S}.
    """
    S2 = ctx.S.enlarge(extra_primes)
    if enlarged_module is None:
        new = ctx.with_S(S2, full=False)
        return WhatIf(S2, chi2_upper_bound(new))
    new = ctx.with_S(S2, enlarged_module, full=True)
    return WhatIf(S2, chi2_upper_bound(new), chi2_exact_finite(new))
