"""Finite groups materialised as composition tables.

Element 0 is always the identity.  Products follow the convention
``table[a, b] = a * b``; for permutation groups ``a * b`` means "apply b,
then a".
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidGroupError, OrderCapExceededError
from .linalg import smith_invariants

CLOSURE_CAP = 5000
GENERATOR_CAP = 512
_ASSOC_EXHAUSTIVE = 64
_ASSOC_SAMPLES = 10_000


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    labels: tuple[str, ...]
    generators: tuple[int, ...] = ()

    def __post_init__(self):
        T = np.asarray(self.table, dtype=np.int32)
        T.setflags(write=False)
        object.__setattr__(self, "table", T)
        n = T.shape[0]
        if T.shape != (n, n) or n == 0:
            raise InvalidGroupError("table must be square and nonempty")
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise InvalidGroupError("labels must be distinct, one per element")
        ar = np.arange(n)
        if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
            raise InvalidGroupError("element 0 is not a two-sided identity")
        if not all(np.array_equal(np.sort(T[i]), ar) for i in range(n)):
            raise InvalidGroupError("table rows are not permutations")
        if not all(np.array_equal(np.sort(T[:, j]), ar) for j in range(n)):
            raise InvalidGroupError("table columns are not permutations")
        if n <= _ASSOC_EXHAUSTIVE:
            if not np.array_equal(T[T, :], T[:, T]):
                raise InvalidGroupError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
            if not np.array_equal(T[T[a, b], c], T[a, T[b, c]]):
                raise InvalidGroupError("table is not associative")
        inv = self.inverses
        if not (np.all(T[ar, inv] == 0) and np.all(T[inv, ar] == 0)):
            raise InvalidGroupError("inverse check failed")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1)
        inv.setflags(write=False)
        return inv

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label!r}") from None

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens``."""
        gens = [g for g in gens if g != 0]
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def is_cyclic(self) -> bool:
        return self.cyclic_generator() is not None

    def cyclic_generator(self) -> int | None:
        n = self.order
        if n == 1:
            return 0
        return next((a for a in range(1, n) if self.element_order(a) == n), None)

    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    def is_p_group(self) -> int | None:
        """The prime p if the order is a power of p (1 counts for every p: returns None)."""
        n = self.order
        if n == 1:
            return None
        p = next(q for q in range(2, n + 1) if n % q == 0)
        while n % p == 0:
            n //= p
        return p if n == 1 else None

    def commutator_subgroup(self) -> frozenset[int]:
        T, inv = self.table, self.inverses
        n = self.order
        a = np.repeat(np.arange(n), n)
        b = np.tile(np.arange(n), n)
        comms = T[T[inv[a], inv[b]], T[a, b]]
        return self.closure(set(int(c) for c in np.unique(comms)))

    def involutions(self) -> list[int]:
        """Elements with g*g = 1, identity included."""
        return [a for a in range(self.order) if self.table[a, a] == 0]

    def abelianization(self) -> list[int]:
        """Invariant factors d_1 | d_2 | ... of G/[G,G] (empty for a perfect group)."""
        comm = self.commutator_subgroup()
        # cosets of the commutator subgroup
        coset_of = {}
        reps = []
        for a in range(self.order):
            if a in coset_of:
                continue
            idx = len(reps)
            reps.append(a)
            for c in comm:
                coset_of[int(self.table[a, c])] = idx
        gens = list(self.generators) or list(range(1, self.order))
        gens = sorted({coset_of[g] for g in gens} - {coset_of[0]})
        if not gens:
            return []
        # Schreier relations of the abelian quotient on the chosen generators
        s = len(gens)
        word = {coset_of[0]: [0] * s}
        queue = deque([reps[coset_of[0]]])
        relations = []
        while queue:
            x = queue.popleft()
            cx = coset_of[x]
            for k, g in enumerate(gens):
                y = int(self.table[x, reps[g]])
                cy = coset_of[y]
                step = list(word[cx])
                step[k] += 1
                if cy in word:
                    rel = [u - v for u, v in zip(step, word[cy])]
                    if any(rel):
                        relations.append(rel)
                else:
                    word[cy] = step
                    queue.append(reps[cy])
        if len(word) != len(reps):
            raise AssertionError("chosen elements do not generate the abelian quotient")
        # columns are relations
        mat = [list(col) for col in zip(*relations)] if relations else [[0] for _ in range(s)]
        diag = smith_invariants(mat)
        if len(diag) != s:
            raise AssertionError("abelian quotient of a finite group came out infinite")
        factors = [d for d in diag if d != 1]
        prod = 1
        for d in factors:
            prod *= d
        if prod * len(comm) != self.order:
            raise AssertionError("invariant factors do not multiply to |G/[G,G]|")
        return factors

    def minimal_generators(self) -> int:
        """d(G) by breadth-first search over subgroups generated by k elements."""
        n = self.order
        if n > GENERATOR_CAP:
            raise OrderCapExceededError(f"order {n} exceeds {GENERATOR_CAP} for d(G)")
        if n == 1:
            return 0
        full = frozenset(range(n))
        # subgroup -> one generating tuple of length k
        level: dict[frozenset[int], tuple[int, ...]] = {frozenset({0}): ()}
        k = 0
        while True:
            k += 1
            nxt: dict[frozenset[int], tuple[int, ...]] = {}
            for H, gens in level.items():
                for g in range(1, n):
                    if g in H:
                        continue
                    K = self.closure(gens + (g,))
                    if K == full:
                        return k
                    nxt.setdefault(K, gens + (g,))
            level = nxt


# ---------------------------------------------------------------------------
# constructors


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse one-line cycle notation like ``"(1 2 3)(4 5)"`` into cycles."""
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return []
    if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
        raise ValueError(f"bad cycle notation: {text!r}")
    cycles = []
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = tuple(int(t) for t in re.split(r"[\s,]+", body.strip()))
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle {body!r}")
        cycles.append(pts)
    return cycles


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    """Image tuple on points 0..degree-1 (cycle points are 1-based)."""
    img = list(range(degree))
    seen = set()
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a in seen:
                raise ValueError("cycles are not disjoint")
            seen.add(a)
            img[a - 1] = b - 1
    return tuple(img)


def perm_to_cycles(perm: Sequence[int]) -> str:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def from_permutations(generators: Sequence, cap: int = CLOSURE_CAP) -> FiniteGroup:
    """Group generated by permutations given as cycle strings or image tuples."""
    parsed = []
    for g in generators:
        parsed.append(parse_cycles(g) if isinstance(g, str) else g)
    degree = 1
    for g in parsed:
        if g and isinstance(g[0], (tuple, list)):
            degree = max([degree] + [max(c) for c in g])
        elif g:
            degree = max(degree, len(g))
    perms = []
    for g in parsed:
        if g and isinstance(g[0], (tuple, list)):
            perms.append(cycles_to_perm(g, degree))
        elif g:
            if len(g) != degree:
                raise ValueError("image tuples must share one ground set")
            perms.append(tuple(int(x) for x in g))
        else:
            perms.append(tuple(range(degree)))
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in perms:
            y = tuple(g[x[i]] for i in range(degree))  # g after x
            if y not in index:
                if len(elems) >= cap:
                    raise OrderCapExceededError(f"closure exceeds order cap {cap}")
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    n = len(elems)
    arr = np.array(elems, dtype=np.int64)
    # right multiplication by each element, via composition of image arrays
    table = np.empty((n, n), dtype=np.int32)
    for b in range(n):
        composed = arr[:, arr[b]]  # (a * b)(i) = a(b(i))
        table[:, b] = [index[tuple(row)] for row in composed.tolist()]
    labels = tuple(perm_to_cycles(e) for e in elems)
    gen_idx = tuple(sorted({index[g] for g in perms} - {0}))
    return FiniteGroup(table, labels, gen_idx)


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int32), ("1",))


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("n >= 1")
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    labels = tuple("1" if k == 0 else ("g" if k == 1 else f"g^{k}") for k in range(n))
    return FiniteGroup(table, labels, (1,) if n > 1 else ())


def klein_four() -> FiniteGroup:
    # (a, b) in (Z/2)^2 encoded as a + 2b
    ar = np.arange(4)
    return FiniteGroup(ar[:, None] ^ ar[None, :], ("1", "a", "b", "ab"), (1, 2))


def quaternion_group() -> FiniteGroup:
    """Q8 = {+-1, +-i, +-j, +-k} with the usual quaternion product."""
    units = ["1", "i", "j", "k"]
    # unit products: (sign, unit)
    prod = {
        ("1", u): (1, u) for u in units
    }
    prod.update({(u, "1"): (1, u) for u in units})
    prod.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    idx = {e: n for n, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int32)
    for a, (sa, ua) in enumerate(elems):
        for b, (sb, ub) in enumerate(elems):
            s, u = prod[(ua, ub)]
            table[a, b] = idx[(sa * sb * s, u)]
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return FiniteGroup(table, labels, (2, 4))


def symmetric_group_3() -> FiniteGroup:
    return from_permutations(["(1 2)", "(1 2 3)"])


def builtin_group(name: str) -> FiniteGroup:
    key = name.strip()
    if key == "trivial":
        return trivial_group()
    if key == "Q8":
        return quaternion_group()
    if key == "Klein4":
        return klein_four()
    if key == "S3":
        return symmetric_group_3()
    m = re.fullmatch(r"C_?(\d+)", key)
    if m:
        return cyclic_group(int(m.group(1)))
    raise ValueError(f"unknown builtin group {name!r}")


def regular_permutations(G: FiniteGroup, elements: Iterable[int]) -> list[tuple[int, ...]]:
    """Left-regular images x -> g*x, as image tuples on 0..|G|-1."""
    return [tuple(int(v) for v in G.table[g]) for g in elements]
