"""Finite abelian p-groups and homomorphisms between them.

A group ``Z/p^e1 + ... + Z/p^ek`` is stored by its exponent list; elements
are integer column vectors reduced row by row.  Orders of kernels and images
are computed through Smith forms over Z/p^N (N the largest exponent in play),
by two different routes, and checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cardinality import FormalCardinality
from .linalg import local_smith_valuations


@dataclass(frozen=True)
class FiniteAbelianPGroup:
    p: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 1 for e in exps):
            raise ValueError("exponents must be >= 1")
        if list(exps) != sorted(exps, reverse=True):
            raise ValueError("exponents must be non-increasing")
        object.__setattr__(self, "exponents", exps)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def exponent_sum(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> FormalCardinality:
        return FormalCardinality({self.p: self.exponent_sum})

    @property
    def max_exponent(self) -> int:
        return max(self.exponents, default=0)

    @property
    def is_elementary(self) -> bool:
        return all(e == 1 for e in self.exponents)

    @cached_property
    def moduli(self) -> np.ndarray:
        return np.array([self.p**e for e in self.exponents], dtype=np.int64)

    def power(self, m: int) -> "FiniteAbelianPGroup":
        """Direct sum of ``m`` copies, components in block order."""
        return _Blocks(self.p, self.exponents * m)

    def reduce(self, vec_or_mat: np.ndarray) -> np.ndarray:
        """Reduce a column vector, or each row of a matrix, into this group."""
        arr = np.asarray(vec_or_mat, dtype=np.int64)
        if arr.ndim == 1:
            return arr % self.moduli
        return arr % self.moduli[:, None]

    def elements(self):
        """Iterate over all elements (small groups only)."""
        import itertools

        ranges = [range(self.p**e) for e in self.exponents]
        for t in itertools.product(*ranges):
            yield np.array(t, dtype=np.int64)


class _Blocks(FiniteAbelianPGroup):
    """Direct power of a module; exponents repeat so need not be sorted."""

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))


def well_defined_mask(dom_exps, cod_exps, p: int) -> np.ndarray:
    """Required divisibility p^max(0, f_i - e_j) for entry (i, j)."""
    f = np.asarray(cod_exps)[:, None]
    e = np.asarray(dom_exps)[None, :]
    return np.power(p, np.maximum(0, f - e)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class FinAbHom:
    domain: FiniteAbelianPGroup
    codomain: FiniteAbelianPGroup
    matrix: np.ndarray  # codomain rows x domain columns

    def __post_init__(self):
        if self.domain.p != self.codomain.p:
            raise ValueError("domain and codomain must share p")
        A = np.asarray(self.matrix, dtype=np.int64).reshape(self.codomain.rank, self.domain.rank)
        A = self.codomain.reduce(A) if A.size else A
        div = well_defined_mask(self.domain.exponents, self.codomain.exponents, self.domain.p)
        if A.size and np.any(A % div):
            raise ValueError("matrix does not define a homomorphism of these groups")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def p(self) -> int:
        return self.domain.p

    @cached_property
    def _N(self) -> int:
        return max(self.domain.max_exponent, self.codomain.max_exponent, 1)

    @cached_property
    def image_exponent(self) -> int:
        """log_p |image|, from the cokernel of [A | relations of the codomain]."""
        p, N = self.p, self._N
        m = self.codomain.rank
        if m == 0 or self.domain.rank == 0:
            return 0
        rel = [i for i, f in enumerate(self.codomain.exponents) if f < N]
        D = np.zeros((m, len(rel)), dtype=np.int64)
        for c, i in enumerate(rel):
            D[i, c] = p ** self.codomain.exponents[i]
        B = np.hstack([self.matrix, D])
        vals = local_smith_valuations(B, p, N)
        vals += [N] * (m - len(vals))
        return self.codomain.exponent_sum - sum(vals)

    @cached_property
    def kernel_exponent(self) -> int:
        """log_p |kernel|, via the lift to free Z/p^N-modules."""
        p, N = self.p, self._N
        n = self.domain.rank
        if n == 0:
            return 0
        if self.codomain.rank == 0:
            return self.domain.exponent_sum
        scale = np.array([p ** (N - f) for f in self.codomain.exponents], dtype=np.int64)
        psi = self.matrix * scale[:, None]
        vals = local_smith_valuations(psi, p, N)
        vals += [N] * (n - len(vals))
        lifted = sum(vals)
        return lifted - sum(N - e for e in self.domain.exponents)

    def image_order(self) -> FormalCardinality:
        self.check_rank_nullity()
        return FormalCardinality({self.p: self.image_exponent})

    def kernel_order(self) -> FormalCardinality:
        self.check_rank_nullity()
        return FormalCardinality({self.p: self.kernel_exponent})

    def check_rank_nullity(self) -> None:
        if self.kernel_exponent + self.image_exponent != self.domain.exponent_sum:
            raise AssertionError(
                f"|ker|*|im| != |domain|: p^{self.kernel_exponent} * p^{self.image_exponent}"
                f" vs p^{self.domain.exponent_sum}"
            )

    def compose(self, other: "FinAbHom") -> "FinAbHom":
        """self after other."""
        big = self.p ** self._N > 2**20
        a = self.matrix.astype(object) if big else self.matrix
        b = other.matrix.astype(object) if big else other.matrix
        prod = self.codomain.reduce(np.asarray(a @ b) % (self.p ** self._N))
        return FinAbHom(other.domain, self.codomain, prod)

    def is_zero(self) -> bool:
        return not np.any(self.codomain.reduce(self.matrix))
