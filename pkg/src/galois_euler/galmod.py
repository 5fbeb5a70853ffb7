"""Finite p-primary modules with an action of a finite group.

The acting group Gamma stands in for G_{K,S}: scenarios supply it together
with the cyclotomic character and the image of complex conjugation at each
real place, since none of these can be derived from the field alone here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .abelian import FinAbHom, FiniteAbelianPGroup, well_defined_mask
from .cardinality import FormalCardinality
from .errors import InvalidGroupError, MissingCyclotomicCharacterError
from .fingroup import FiniteGroup
from .linalg import rank_mod_p

COMPLEX = "complex"


def _extend_by_generators(G: FiniteGroup, images: Mapping[int, object], mul, one):
    """Extend values given on generators to every element by walking words."""
    values = {0: one}
    queue = deque([0])
    gens = [g for g in images if g != 0]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mul(x, g)
            if y not in values:
                values[y] = mul(values[x], images[g])
                queue.append(y)
    if len(values) != G.order:
        raise InvalidGroupError("the given elements do not generate the group")
    return [values[a] for a in range(G.order)]


@dataclass(frozen=True, eq=False)
class GaloisModule:
    group: FiniteGroup
    module: FiniteAbelianPGroup
    action: np.ndarray  # (|Gamma|, k, k); action[g] acts on column vectors
    cyclo_char: tuple[int, ...] | None = None  # values in (Z/p^e1)^x
    real_place_involutions: tuple = ()  # element index or COMPLEX, per archimedean place
    name: str = ""

    def __post_init__(self):
        G, M = self.group, self.module
        n, k = G.order, M.rank
        A = np.asarray(self.action, dtype=np.int64).reshape(n, k, k)
        A = A % M.moduli[None, :, None]
        div = well_defined_mask(M.exponents, M.exponents, M.p)
        if np.any(A % div[None]):
            raise InvalidGroupError("an action matrix is not an endomorphism of the module")
        if not np.array_equal(A[0], np.eye(k, dtype=np.int64)):
            raise InvalidGroupError("the identity must act trivially")
        # action(gh) = action(g) action(h), for every pair
        prod = np.einsum("aij,bjk->abik", A, A) % M.moduli[None, None, :, None]
        if not np.array_equal(prod, A[G.table]):
            raise InvalidGroupError("action is not a homomorphism")
        A.setflags(write=False)
        object.__setattr__(self, "action", A)
        if self.cyclo_char is not None:
            q = M.p ** M.max_exponent
            chi = tuple(int(c) % q for c in self.cyclo_char)
            if len(chi) != n or chi[0] != 1 % q:
                raise InvalidGroupError("cyclotomic character must send 1 to 1")
            if any(c % M.p == 0 for c in chi):
                raise InvalidGroupError("cyclotomic character must take unit values")
            for a in range(n):
                for b in range(n):
                    if chi[a] * chi[b] % q != chi[G.mul(a, b)]:
                        raise InvalidGroupError("cyclotomic character is not a homomorphism")
            object.__setattr__(self, "cyclo_char", chi)
        for c in self.real_place_involutions:
            if c != COMPLEX and G.mul(c, c) != 0:
                raise InvalidGroupError(f"element {G.labels[c]} is not an involution")

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def order(self) -> FormalCardinality:
        return self.module.order

    def act(self, g: int, x) -> np.ndarray:
        return self.module.reduce(self.action[g] @ np.asarray(x, dtype=np.int64))

    def is_trivial(self) -> bool:
        return all(np.array_equal(a, np.eye(self.module.rank, dtype=np.int64)) for a in self.action)

    def with_places(self, places: Sequence) -> "GaloisModule":
        return GaloisModule(self.group, self.module, self.action, self.cyclo_char, tuple(places), self.name)

    def restrict(self, H: Sequence[int]) -> "GaloisModule":
        """The same module viewed over the subgroup generated by H (as a table group)."""
        from .fingroup import FiniteGroup as _FG

        elems = sorted(self.group.closure(H))
        pos = {a: i for i, a in enumerate(elems)}
        T = np.array([[pos[self.group.mul(a, b)] for b in elems] for a in elems])
        sub = _FG(T, tuple(self.group.labels[a] for a in elems))
        chi = None if self.cyclo_char is None else tuple(self.cyclo_char[a] for a in elems)
        return GaloisModule(sub, self.module, self.action[elems], chi, (), self.name)


def trivial_module(G: FiniteGroup, p: int, exponents: Sequence[int] = (1,), cyclo_char=None, places=(), name="") -> GaloisModule:
    M = FiniteAbelianPGroup(p, tuple(exponents))
    k = M.rank
    action = np.broadcast_to(np.eye(k, dtype=np.int64), (G.order, k, k))
    return GaloisModule(G, M, action, cyclo_char, tuple(places), name)


def module_from_generators(
    G: FiniteGroup,
    p: int,
    exponents: Sequence[int],
    images: Mapping[int, Sequence[Sequence[int]]],
    cyclo_images: Mapping[int, int] | None = None,
    places=(),
    name="",
) -> GaloisModule:
    """Build the action from matrices on a generating set (checked afterwards)."""
    M = FiniteAbelianPGroup(p, tuple(exponents))
    k = M.rank
    mats = {g: np.array(m, dtype=np.int64).reshape(k, k) for g, m in images.items()}
    action = _extend_by_generators(G, mats, lambda a, b: M.reduce(a @ b), np.eye(k, dtype=np.int64))
    chi = None
    if cyclo_images is not None:
        q = p ** M.max_exponent
        chi = tuple(_extend_by_generators(G, dict(cyclo_images), lambda a, b: a * b % q, 1))
    return GaloisModule(G, M, np.array(action), chi, tuple(places), name)


def character_from_generators(G: FiniteGroup, p: int, e: int, images: Mapping[int, int]) -> tuple[int, ...]:
    q = p**e
    return tuple(_extend_by_generators(G, dict(images), lambda a, b: a * b % q, 1))


def _stacked(M: GaloisModule, mats: Iterable[np.ndarray]) -> FinAbHom:
    mats = list(mats)
    k = M.module.rank
    if not mats:
        return FinAbHom(M.module, M.module.power(0), np.zeros((0, k), dtype=np.int64))
    return FinAbHom(M.module, M.module.power(len(mats)), np.vstack(mats))


def fixed_points(M: GaloisModule, H: Iterable[int]) -> FormalCardinality:
    """|{m : g m = m for g in H}|, i.e. the fixed points of the subgroup H generates."""
    k = M.module.rank
    eye = np.eye(k, dtype=np.int64)
    H = [h for h in dict.fromkeys(H) if h != 0]
    if not H:
        return M.order
    return _stacked(M, [M.action[h] - eye for h in H]).kernel_order()


def norm_map(M: GaloisModule, H: Iterable[int]) -> FinAbHom:
    """Sum of the action over the listed elements (pass a whole subgroup)."""
    total = sum(M.action[h] for h in H)
    return FinAbHom(M.module, M.module, np.asarray(total))


def archimedean_h0(M: GaloisModule, place) -> FormalCardinality:
    """|H^0(G_v, M)|: fixed points of complex conjugation, all of M at a complex place."""
    if place == COMPLEX:
        return M.order
    return fixed_points(M, [place])


def archimedean_tate_h0(M: GaloisModule, place) -> FormalCardinality:
    """|Hhat^0(G_v, M)| with G_v of order 2 at a real place, trivial at a complex one.

    At a real place conjugation may act trivially on M; the decomposition
    group is still of order two, so the norm is 1 + c.
    """
    if place == COMPLEX:
        return FormalCardinality()
    eye = np.eye(M.module.rank, dtype=np.int64)
    fixed = fixed_points(M, [place])
    norms = FinAbHom(M.module, M.module, eye + M.action[place]).image_order()
    return fixed / norms


def cartier_dual(M: GaloisModule) -> GaloisModule:
    """Hom(M, mu) with (g.phi)(x) = chi(g) phi(g^-1 x).

    Hom(Z/p^e, Q/Z) is identified with Z/p^e through phi -> p^e phi(1); under
    this pairing the dual matrix of g has entry (j, i) equal to
    chi(g) * A(g^-1)[i, j] * p^(e_j - e_i).
    """
    if M.cyclo_char is None:
        raise MissingCyclotomicCharacterError("Cartier dual needs the cyclotomic character")
    G, mod = M.group, M.module
    p, e = mod.p, np.array(mod.exponents)
    k = mod.rank
    dual = np.zeros_like(M.action)
    for g in range(G.order):
        A = M.action[G.inv(g)]
        for i in range(k):
            for j in range(k):
                shift = int(e[j] - e[i])
                val = int(A[i, j]) * p**shift if shift >= 0 else int(A[i, j]) // p ** (-shift)
                dual[g, j, i] = M.cyclo_char[g] * val
    return GaloisModule(G, mod, dual, M.cyclo_char, M.real_place_involutions, f"({M.name})'")


@dataclass(frozen=True, eq=False)
class AdjointModule:
    """A representation Gamma -> GL_n(F_p) whose adjoint we want."""

    group: FiniteGroup
    p: int
    n: int
    rep: np.ndarray  # (|Gamma|, n, n) over Z/p

    def __post_init__(self):
        G = self.group
        R = np.asarray(self.rep, dtype=np.int64).reshape(G.order, self.n, self.n) % self.p
        if not np.array_equal(R[0], np.eye(self.n, dtype=np.int64)):
            raise InvalidGroupError("identity must map to the identity matrix")
        prod = np.einsum("aij,bjk->abik", R, R) % self.p
        if not np.array_equal(prod, R[G.table]):
            raise InvalidGroupError("representation is not a homomorphism")
        R.setflags(write=False)
        object.__setattr__(self, "rep", R)

    @classmethod
    def from_generators(cls, G: FiniteGroup, p: int, n: int, images: Mapping[int, Sequence]) -> "AdjointModule":
        mats = {g: np.array(m, dtype=np.int64).reshape(n, n) % p for g, m in images.items()}
        vals = _extend_by_generators(G, mats, lambda a, b: (a @ b) % p, np.eye(n, dtype=np.int64))
        return cls(G, p, n, np.array(vals))


def adjoint_of(rep: AdjointModule, places=()) -> GaloisModule:
    """(Z/p)^(n^2) with g acting by X -> rho(g) X rho(g)^-1 (row-major flattening)."""
    G = rep.group
    mats = [np.kron(rep.rep[g], rep.rep[G.inv(g)].T) % rep.p for g in range(G.order)]
    mod = FiniteAbelianPGroup(rep.p, (1,) * rep.n**2)
    return GaloisModule(G, mod, np.array(mats), None, tuple(places), "ad")


def _commutant_system(mats: Iterable[np.ndarray], n: int) -> np.ndarray:
    eye = np.eye(n, dtype=np.int64)
    # X R = R X  <=>  (I (x) R^T - R (x) I) vec(X) = 0 in row-major vec
    return np.vstack([np.kron(eye, R.T) - np.kron(R, eye) for R in mats])


def centralizer_dim(rep: AdjointModule, g: int) -> int:
    """dim_{F_p} of the matrices commuting with rho(g)."""
    n = rep.n
    return n * n - rank_mod_p(_commutant_system([rep.rep[g]], n), rep.p)


def full_centralizer_dim(rep: AdjointModule) -> int:
    """dim of the commutant of the whole image, i.e. h^0(Gamma, ad)."""
    n = rep.n
    gens = list(rep.group.generators) or list(range(rep.group.order))
    return n * n - rank_mod_p(_commutant_system([rep.rep[g] for g in gens], n), rep.p)
