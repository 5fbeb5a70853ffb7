"""Cohomology of a finite group with coefficients in a finite p-primary module.

Two engines compute H^0, H^1, H^2 from the inhomogeneous bar complex:

``snf``
    Kernels and images of the differentials as homomorphisms of finite
    abelian p-groups, through Smith forms over Z/p^N.  Works for any
    exponents.
``fp-linear``
    Elementary abelian coefficients only.  Builds the cochain maps column by
    column from the coboundary formula and takes ranks over F_p.  It shares
    neither the matrix builder nor the elimination with ``snf``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .abelian import FinAbHom
from .cardinality import FormalCardinality
from .errors import NotCyclicError, NotElementaryAbelianError, SizeCapExceededError
from .galmod import GaloisModule, fixed_points, norm_map
from .linalg import rank_mod_p

SIZE_CAP = 10**6


def _check_size(n: int, k: int, degree: int) -> None:
    rows = n ** (degree + 1) * k
    if rows > SIZE_CAP:
        raise SizeCapExceededError(f"|Gamma|^{degree + 1} * k = {rows} exceeds {SIZE_CAP}")


def bar_differential(M: GaloisModule, degree: int) -> FinAbHom:
    """d^i : C^i -> C^(i+1) on inhomogeneous cochains, i in {0, 1, 2}.

    A cochain in C^i is a block vector indexed by (g_1, ..., g_i) in
    lexicographic order, each block an element of M.
    """
    if degree not in (0, 1, 2):
        raise ValueError("only d^0, d^1, d^2 are materialised")
    G = M.group
    n, k = G.order, M.module.rank
    _check_size(n, k, degree)
    A = M.action
    T = G.table
    eye = np.eye(k, dtype=np.int64)
    i = degree
    D = np.zeros((n ** (i + 1), k, n**i, k), dtype=np.int64)
    if i == 0:
        # (d m)(g) = g m - m
        D[:, :, 0, :] = A - eye
    elif i == 1:
        g, h = np.divmod(np.arange(n * n), n)
        rows = np.arange(n * n)
        np.add.at(D, (rows, slice(None), h, slice(None)), A[g])
        np.add.at(D, (rows, slice(None), T[g, h], slice(None)), -eye)
        np.add.at(D, (rows, slice(None), g, slice(None)), eye)
    else:
        rows = np.arange(n**3)
        g, rest = np.divmod(rows, n * n)
        h, l = np.divmod(rest, n)
        np.add.at(D, (rows, slice(None), h * n + l, slice(None)), A[g])
        np.add.at(D, (rows, slice(None), T[g, h] * n + l, slice(None)), -eye)
        np.add.at(D, (rows, slice(None), g * n + T[h, l], slice(None)), eye)
        np.add.at(D, (rows, slice(None), g * n + h, slice(None)), -eye)
    mat = D.reshape(n ** (i + 1) * k, n**i * k)
    return FinAbHom(M.module.power(n**i), M.module.power(n ** (i + 1)), mat)


@dataclass(frozen=True)
class CohomologyReport:
    orders: tuple[FormalCardinality, FormalCardinality, FormalCardinality]
    tate_h0: FormalCardinality | None
    engine: str
    dims: tuple[int, int, int] | None = None
    p: int = 0

    def exponent(self, i: int) -> int:
        return self.orders[i].exponent(self.p)

    def to_json(self) -> dict:
        out = {
            "engine": self.engine,
            "orders": [o.to_json() for o in self.orders],
        }
        if self.dims is not None:
            out["dims"] = list(self.dims)
        if self.tate_h0 is not None:
            out["tate_h0"] = self.tate_h0.to_json()
        return out


def tate_h0(M: GaloisModule) -> FormalCardinality:
    """|M^Gamma| / |N M| with N the sum over all of Gamma."""
    G = M.group
    return fixed_points(M, range(G.order)) / norm_map(M, range(G.order)).image_order()


def cohomology(M: GaloisModule, check_complex: bool = True) -> CohomologyReport:
    """H^0, H^1, H^2 of Gamma with coefficients in M, via Smith forms."""
    d = [bar_differential(M, i) for i in range(3)]
    if check_complex:
        for a, b in zip(d, d[1:]):
            if not b.compose(a).is_zero():
                raise AssertionError("bar differentials do not compose to zero")
    p = M.p
    ker = [di.kernel_order() for di in d]
    im = [FormalCardinality()] + [di.image_order() for di in d[:2]]
    orders = tuple(ker[i] / im[i] for i in range(3))
    dims = None
    if M.module.is_elementary:
        dims = tuple(o.exponent(p) for o in orders)
    return CohomologyReport(orders, tate_h0(M), "snf", dims, p)


# ---------------------------------------------------------------------------
# independent oracle over F_p


def _coboundary_at(acts, mul, f: dict, args: tuple[int, ...], k: int, p: int) -> list[int]:
    """Evaluate (d f)(g_1, ..., g_{i+1}) pointwise from the textbook formula."""
    i = len(args) - 1
    zero = (0,) * k
    g = acts[args[0]]
    first = f.get(args[1:], zero)
    acc = [sum(g[r][c] * first[c] for c in range(k)) for r in range(k)]
    for j in range(i):
        merged = args[:j] + (mul[args[j]][args[j + 1]],) + args[j + 2 :]
        sign = (-1) ** (j + 1)
        acc = [a + sign * b for a, b in zip(acc, f.get(merged, zero))]
    sign = (-1) ** (i + 1)
    acc = [a + sign * b for a, b in zip(acc, f.get(args[:-1], zero))]
    return [a % p for a in acc]


def _coboundary_matrix(M: GaloisModule, i: int, p: int) -> np.ndarray:
    n, k = M.group.order, M.module.rank
    acts = M.action.tolist()
    mul = M.group.table.tolist()
    sources = list(itertools.product(range(n), repeat=i))
    targets = list(itertools.product(range(n), repeat=i + 1))
    cols = []
    for src in sources:
        for r in range(k):
            basis = {src: tuple(1 if c == r else 0 for c in range(k))}
            col = []
            for tgt in targets:
                col.extend(_coboundary_at(acts, mul, basis, tgt, k, p))
            cols.append(col)
    return np.array(cols, dtype=np.int64).T.reshape(len(targets) * k, len(sources) * k)


def cocycle_oracle(M: GaloisModule) -> CohomologyReport:
    """dim H^i for i <= 2 by ranks of the coboundary maps over F_p."""
    if not M.module.is_elementary:
        raise NotElementaryAbelianError("oracle needs an F_p vector space")
    p = M.p
    n, k = M.group.order, M.module.rank
    _check_size(n, k, 2)
    ranks = [rank_mod_p(_coboundary_matrix(M, i, p), p) for i in range(3)]
    cochain_dims = [n**i * k for i in range(3)]
    prev = [0] + ranks[:2]
    dims = tuple(cochain_dims[i] - ranks[i] - prev[i] for i in range(3))
    orders = tuple(FormalCardinality({p: d}) for d in dims)
    return CohomologyReport(orders, None, "fp-linear", dims, p)


def chi2_finite(M: GaloisModule, report: CohomologyReport | None = None) -> FormalCardinality:
    """h^0 * h^2 / h^1."""
    rep = report or cohomology(M)
    h0, h1, h2 = rep.orders
    return h0 * h2 / h1


def herbrand_quotient(M: GaloisModule) -> FormalCardinality:
    """|Hhat^0| / |Hhat^1| for cyclic Gamma; always 1 on a finite module."""
    G = M.group
    g = G.cyclic_generator()
    if g is None:
        raise NotCyclicError("Herbrand quotient needs a cyclic group")
    N = norm_map(M, range(G.order))
    eye = np.eye(M.module.rank, dtype=np.int64)
    aug = FinAbHom(M.module, M.module, M.action[g] - eye)
    h0 = aug.kernel_order() / N.image_order()
    h1 = N.kernel_order() / aug.image_order()
    return h0 / h1
