"""Exact cardinalities as prime-exponent maps.

Every size that leaves a module is a :class:`FormalCardinality`; machine
integers are only used inside a computation.  Exponents may be negative, so
the type really represents a positive rational number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from sympy import factorint


class FormalCardinality:
    """A positive rational ``prod p**e`` stored as ``{p: e}`` with no zero exponents."""

    __slots__ = ("_exps",)

    def __init__(self, exponents: Mapping[int, int] | None = None):
        exps = {}
        for p, e in (exponents or {}).items():
            p, e = int(p), int(e)
            if p < 2:
                raise ValueError(f"not a prime base: {p}")
            if e:
                exps[p] = exps.get(p, 0) + e
        self._exps = {p: e for p, e in sorted(exps.items()) if e}

    @classmethod
    def one(cls) -> "FormalCardinality":
        return cls()

    @classmethod
    def prime_power(cls, p: int, e: int) -> "FormalCardinality":
        return cls({p: e})

    @classmethod
    def from_int(cls, n: int) -> "FormalCardinality":
        if n <= 0:
            raise ValueError("cardinalities are positive")
        return cls(factorint(n))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "FormalCardinality":
        q = Fraction(q)
        if q <= 0:
            raise ValueError("cardinalities are positive")
        num = factorint(q.numerator)
        den = factorint(q.denominator)
        return cls(num) * cls({p: -e for p, e in den.items()})

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "FormalCardinality":
        return cls({int(p): int(e) for p, e in data.items()})

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self._exps)

    def exponent(self, p: int) -> int:
        return self._exps.get(p, 0)

    def is_one(self) -> bool:
        return not self._exps

    def to_fraction(self) -> Fraction:
        out = Fraction(1)
        for p, e in self._exps.items():
            out *= Fraction(p) ** e
        return out

    def to_json(self) -> dict[str, int]:
        return {str(p): e for p, e in self._exps.items()}

    def __mul__(self, other: "FormalCardinality") -> "FormalCardinality":
        merged = dict(self._exps)
        for p, e in other._exps.items():
            merged[p] = merged.get(p, 0) + e
        return FormalCardinality(merged)

    def __truediv__(self, other: "FormalCardinality") -> "FormalCardinality":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FormalCardinality":
        return FormalCardinality({p: e * k for p, e in self._exps.items()})

    def inverse(self) -> "FormalCardinality":
        return FormalCardinality({p: -e for p, e in self._exps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalCardinality):
            return NotImplemented
        return self._exps == other._exps

    def __hash__(self) -> int:
        return hash(tuple(self._exps.items()))

    # comparisons are between the rationals, never floats
    def __le__(self, other: "FormalCardinality") -> bool:
        return self.to_fraction() <= other.to_fraction()

    def __lt__(self, other: "FormalCardinality") -> bool:
        return self.to_fraction() < other.to_fraction()

    def __ge__(self, other: "FormalCardinality") -> bool:
        return other <= self

    def __gt__(self, other: "FormalCardinality") -> bool:
        return other < self

    def __repr__(self) -> str:
        return f"FormalCardinality({self._exps})"

    def __str__(self) -> str:
        if not self._exps:
            return "1"
        return "*".join(f"{p}^{e}" for p, e in self._exps.items())


ONE = FormalCardinality()


@dataclass(frozen=True)
class ValueOrBound:
    """Exact value, upper bound, or closed interval of a cardinality."""

    kind: str
    lower: FormalCardinality | None = None
    upper: FormalCardinality | None = None

    EXACT = "Exact"
    UPPER = "UpperBound"
    INTERVAL = "Interval"

    def __post_init__(self):
        if self.kind == self.EXACT:
            if self.upper is None or self.lower != self.upper:
                raise ValueError("Exact needs lower == upper")
        elif self.kind == self.UPPER:
            if self.upper is None or self.lower is not None:
                raise ValueError("UpperBound carries only an upper value")
        elif self.kind == self.INTERVAL:
            if self.lower is None or self.upper is None:
                raise ValueError("Interval needs both ends")
            if not self.lower <= self.upper:
                raise ValueError("Interval lower end exceeds upper end")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def exact(cls, value: FormalCardinality) -> "ValueOrBound":
        return cls(cls.EXACT, value, value)

    @classmethod
    def upper_bound(cls, value: FormalCardinality) -> "ValueOrBound":
        return cls(cls.UPPER, None, value)

    @classmethod
    def interval(cls, lo: FormalCardinality, hi: FormalCardinality) -> "ValueOrBound":
        return cls(cls.INTERVAL, lo, hi)

    @property
    def value(self) -> FormalCardinality:
        if self.kind != self.EXACT:
            raise ValueError(f"{self.kind} has no single value")
        return self.upper

    def scale(self, factor: FormalCardinality) -> "ValueOrBound":
        """Multiply every end by ``factor``; the kind is kept."""
        lo = None if self.lower is None else self.lower * factor
        return ValueOrBound(self.kind, lo, self.upper * factor)

    def contains(self, x: FormalCardinality) -> bool:
        if self.kind == self.EXACT:
            return x == self.value
        if self.kind == self.UPPER:
            return x <= self.upper
        return self.lower <= x <= self.upper

    def to_json(self) -> dict:
        if self.kind == self.EXACT:
            return {"kind": self.kind, "value": self.value.to_json()}
        if self.kind == self.UPPER:
            return {"kind": self.kind, "upper": self.upper.to_json()}
        return {"kind": self.kind, "lower": self.lower.to_json(), "upper": self.upper.to_json()}
