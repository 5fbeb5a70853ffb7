"""Local and archimedean data of a number field given by a defining polynomial.

Splitting is read off the factorisation of the defining polynomial mod p,
i.e. it is computed in the order Z[x]/(f).  Dedekind's criterion tells us
when that order can disagree with the maximal order at p; those splittings
carry ``index_warning`` and a scenario may override them.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import discriminant, factorint, isprime, Poly as SymPoly
from sympy.abc import x as _x

from .cardinality import FormalCardinality
from .errors import NonMonicError, NotAPowerOfPError, NotPrimeError, NotSquarefreeError
from .polynomials import (
    count_real_roots,
    degree,
    fp_divmod,
    fp_factor,
    fp_gcd,
    fp_mul,
    fp_trim,
    is_squarefree_over_q,
    trim,
)

MAX_DEGREE = 24
MAX_HEIGHT = 2**64


def signature(min_poly: Sequence[int]) -> tuple[int, int]:
    """(r1, r2) of a monic squarefree integer polynomial, by Sturm counting."""
    f = trim([int(c) for c in min_poly])
    if not f or f[-1] != 1:
        raise NonMonicError(f"defining polynomial must be monic: {list(min_poly)}")
    if len(f) == 1:
        raise NonMonicError("defining polynomial must have degree >= 1")
    if not is_squarefree_over_q(f):
        raise NotSquarefreeError(f"defining polynomial is not squarefree: {f}")
    r1 = count_real_roots(f)
    n = degree(f)
    if (n - r1) % 2:
        raise AssertionError("non-real roots must pair up")
    return r1, (n - r1) // 2


@dataclass(frozen=True)
class NumberField:
    min_poly: tuple[int, ...]
    degree: int
    signature: tuple[int, int]
    name: str = ""
    # p -> ((e, f), ...) supplied by hand, used in place of the computed splitting
    splitting_overrides: tuple[tuple[int, tuple[tuple[int, int], ...]], ...] = ()

    def __post_init__(self):
        r1, r2 = self.signature
        if r1 + 2 * r2 != self.degree or degree(self.min_poly) != self.degree:
            raise ValueError("signature inconsistent with degree")
        if signature(self.min_poly) != (r1, r2):
            raise ValueError("stored signature does not match the defining polynomial")

    @classmethod
    def from_poly(cls, coeffs: Iterable[int], name: str = "", overrides=None) -> "NumberField":
        f = tuple(trim([int(c) for c in coeffs]))
        sig = signature(f)
        ov = ()
        if overrides:
            ov = tuple(sorted((int(p), tuple((int(e), int(fd)) for e, fd in facs)) for p, facs in overrides.items()))
        return cls(f, len(f) - 1, sig, name or poly_to_str(f), ov)

    @property
    def r1(self) -> int:
        return self.signature[0]

    @property
    def r2(self) -> int:
        return self.signature[1]

    @property
    def num_archimedean(self) -> int:
        return self.r1 + self.r2

    @property
    def totally_imaginary(self) -> bool:
        return self.r1 == 0

    def archimedean_places(self) -> list[str]:
        """Real places first, then complex ones."""
        return ["real"] * self.r1 + ["complex"] * self.r2

    def discriminant(self) -> int:
        return int(discriminant(SymPoly(list(reversed(self.min_poly)), _x)))


def rational_field() -> NumberField:
    return NumberField.from_poly([0, 1], name="Q")


def squarefree_part(d: int) -> int:
    if d == 0:
        raise ValueError("d must be nonzero")
    sign = -1 if d < 0 else 1
    out = 1
    for q, e in factorint(abs(d)).items():
        if e % 2:
            out *= q
    return sign * out


def quadratic_field(d: int) -> NumberField:
    """Q(sqrt d) defined by the minimal polynomial of a generator of its maximal order."""
    m = squarefree_part(d)
    if m == 1:
        raise ValueError("Q(sqrt d) with d a square is Q itself")
    if m % 4 == 1:
        poly = [(1 - m) // 4, -1, 1]  # x^2 - x + (1 - m)/4, root (1 + sqrt m)/2
    else:
        poly = [-m, 0, 1]
    return NumberField.from_poly(poly, name=f"Q(sqrt({d}))")


def poly_to_str(f: Sequence[int]) -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if mono and abs(c) == 1:
            coef = "-" if c < 0 else "+"
        else:
            coef = f"{c:+d}"
        terms.append(f"{coef}{mono}" if mono else coef)
    s = "".join(terms) or "0"
    return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class PrimeSplitting:
    rational_prime: int
    factors: tuple[tuple[int, int], ...]  # (e, f) per prime above p
    index_warning: bool = False
    p_divides_disc: bool = False
    residue_factors: tuple[tuple[int, ...], ...] = ()
    overridden: bool = False

    def __post_init__(self):
        for e, f in self.factors:
            if e < 1 or f < 1:
                raise ValueError(f"bad (e, f) = ({e}, {f})")

    @property
    def local_degree_sum(self) -> int:
        return sum(e * f for e, f in self.factors)


def _dedekind_p_maximal(f: Sequence[int], p: int, factors) -> bool:
    """Dedekind's criterion: is Z[x]/(f) maximal at p?"""
    g = [1]
    for h, _ in factors:
        g = fp_mul(g, h, p)
    hbar = fp_divmod(fp_trim(f, p), g, p)[0]
    # integer lifts with coefficients in [0, p)
    gh = [0] * (len(g) + len(hbar) - 1)
    for i, a in enumerate(g):
        for j, b in enumerate(hbar):
            gh[i + j] += a * b
    diff = [(gh[i] if i < len(gh) else 0) - (f[i] if i < len(f) else 0) for i in range(max(len(gh), len(f)))]
    assert all(c % p == 0 for c in diff)
    F = fp_trim([c // p for c in diff], p)
    common = fp_gcd(fp_gcd(F, g, p), hbar, p)
    return degree(common) == 0


@lru_cache(maxsize=None)
def _split_cached(min_poly: tuple[int, ...], p: int) -> PrimeSplitting:
    n = len(min_poly) - 1
    factors = fp_factor(list(min_poly), p, seed=p)
    # re-multiplying must give back f mod p
    prod = [1]
    for h, m in factors:
        for _ in range(m):
            prod = fp_mul(prod, h, p)
    assert prod == fp_trim(min_poly, p), "factorisation mod p does not reproduce f"
    disc = int(discriminant(SymPoly(list(reversed(min_poly)), _x)))
    split = PrimeSplitting(
        rational_prime=p,
        factors=tuple((m, degree(h)) for h, m in factors),
        index_warning=not _dedekind_p_maximal(min_poly, p, factors),
        p_divides_disc=disc % p == 0,
        residue_factors=tuple(tuple(h) for h, _ in factors),
    )
    assert split.local_degree_sum == n
    return split


def split_prime(field: NumberField, p: int) -> PrimeSplitting:
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime")
    for q, facs in field.splitting_overrides:
        if q == p:
            split = PrimeSplitting(p, facs, overridden=True)
            if split.local_degree_sum != field.degree:
                raise ValueError(f"override at {p}: sum e*f != {field.degree}")
            return split
    return _split_cached(field.min_poly, p)


def normalized_abs_value(ef: tuple[int, int], p: int, m: int) -> FormalCardinality:
    """|m|_v = q^(-ord_v m) for m a power of p and v above p with data (e, f)."""
    if m < 1:
        raise NotAPowerOfPError(f"{m} is not a power of {p}")
    a = 0
    while m % p == 0:
        m //= p
        a += 1
    if m != 1:
        raise NotAPowerOfPError(f"not a power of {p}")
    e, f = ef
    return FormalCardinality({p: -f * e * a})


def product_formula_check(field: NumberField, x: Fraction | int) -> bool:
    """Sum of log|x|_v over every place of the field is zero."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    total = FormalCardinality()
    ax = abs(x)
    factored = FormalCardinality.from_fraction(ax)
    for q, a in factored.exponents.items():
        for ef in split_prime(field, q).factors:
            total = total * normalized_abs_value(ef, q, q ** abs(a)) ** (1 if a > 0 else -1)
    total = total * factored ** field.r1 * factored ** (2 * field.r2)
    return total.is_one()


@dataclass(frozen=True)
class PlaceSet:
    """S = all archimedean places plus the listed finite places (p, factor index)."""

    field: NumberField
    finite_places: tuple[tuple[int, int], ...] = ()
    includes_all_archimedean: bool = dc_field(default=True, init=False)

    def __post_init__(self):
        if len(set(self.finite_places)) != len(self.finite_places):
            raise ValueError("duplicate finite place in S")
        for p, idx in self.finite_places:
            n = len(split_prime(self.field, p).factors)
            if not 0 <= idx < n:
                raise ValueError(f"factor index {idx} out of range at p={p} ({n} places)")
        object.__setattr__(self, "finite_places", tuple(sorted(self.finite_places)))

    @classmethod
    def archimedean(cls, field: NumberField) -> "PlaceSet":
        return cls(field, ())

    @classmethod
    def with_primes(cls, field: NumberField, primes: Iterable[int]) -> "PlaceSet":
        places = []
        for p in primes:
            places.extend((p, i) for i in range(len(split_prime(field, p).factors)))
        return cls(field, tuple(places))

    def enlarge(self, primes: Iterable[int]) -> "PlaceSet":
        extra = PlaceSet.with_primes(self.field, primes).finite_places
        return PlaceSet(self.field, tuple(sorted(set(self.finite_places) | set(extra))))

    @property
    def has_finite(self) -> bool:
        return bool(self.finite_places)

    def contains(self, p: int, idx: int) -> bool:
        return (p, idx) in self.finite_places

    def contains_all_above(self, p: int) -> bool:
        n = len(split_prime(self.field, p).factors)
        return all(self.contains(p, i) for i in range(n))

    def to_json(self) -> dict:
        return {
            "archimedean": self.field.archimedean_places(),
            "finite": [[p, i] for p, i in self.finite_places],
        }


def bound_exponent_S_p(field: NumberField, S: PlaceSet, p: int, a: int) -> FormalCardinality:
    """Product of 1/|[M]|_v over places v above p not in S, for [M] = p^a."""
    split = split_prime(field, p)
    total = sum(e * f for i, (e, f) in enumerate(split.factors) if not S.contains(p, i))
    return FormalCardinality({p: a * total})
