"""Invariant suites run by ``galois-euler selftest``.

Each suite yields (case name, ok, detail); failures carry the invariant name
so a broken fixture is easy to locate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .cohom import cocycle_oracle, cohomology, herbrand_quotient
from .errors import EngineError, InvalidGroupError
from .fingroup import FiniteGroup, builtin_group, from_permutations, regular_permutations
from .formulas import EulerContext, chi2_exact_finite, chi2_upper_bound, etale_chi, tate_rhs
from .galmod import module_from_generators, trivial_module
from .numfield import NumberField, product_formula_check
from .polynomials import is_squarefree_over_q
from .scenario import build_scenario, bundled_paths, load_raw

Case = tuple[str, bool, str]


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


# -- product formula ---------------------------------------------------------


def random_field(rng: random.Random) -> NumberField:
    """A monic squarefree quadratic or cubic with small coefficients."""
    while True:
        deg = rng.choice((2, 3))
        coeffs = [rng.randint(-30, 30) for _ in range(deg)] + [1]
        if coeffs[0] != 0 and is_squarefree_over_q(coeffs):
            return NumberField.from_poly(coeffs)


def product_formula_cases(seed: int, count: int = 100) -> Iterator[Case]:
    rng = random.Random(seed)
    for i in range(count):
        K = random_field(rng)
        num = rng.choice((1, -1)) * rng.randint(1, 10**6)
        den = rng.randint(1, 10**6)
        x = Fraction(num, den)
        yield f"{K.name} at {x}", product_formula_check(K, x), ""


# -- cyclic closed forms -----------------------------------------------------


def _closed_forms(n: int, p: int, k: int, sign: int) -> tuple[int, int, int]:
    """|H^0|, |H^1|, |H^2| of C_n on Z/p^k with the generator acting by sign, by enumeration."""
    q = p**k
    elems = range(q)
    aug = [(sign * x - x) % q for x in elems]
    norm_coeff = sum(sign**i for i in range(n)) % q
    norm = [norm_coeff * x % q for x in elems]
    fixed = sum(1 for a in aug if a == 0)
    ker_norm = sum(1 for v in norm if v == 0)
    h1 = ker_norm // len(set(aug))
    h2 = fixed // len(set(norm))
    return fixed, h1, h2


def cyclic_cases(max_n: int = 12, primes=(2, 3, 5), max_k: int = 3) -> Iterator[Case]:
    for n in range(1, max_n + 1):
        G = builtin_group(f"C{n}")
        for p, k in itertools.product(primes, range(1, max_k + 1)):
            kinds = [("trivial", 1)]
            if n % 2 == 0 or p**k == 2:
                kinds.append(("inversion", -1))
            for kind, sign in kinds:
                images = {g: [[sign]] for g in G.generators}
                M = module_from_generators(G, p, (k,), images)
                rep = cohomology(M)
                got = tuple(int(o.to_fraction()) for o in rep.orders)
                want = _closed_forms(n, p, k, sign)
                hq = herbrand_quotient(M) if n > 1 else None
                ok = got == want and (hq is None or hq.is_one())
                yield f"C{n} on Z/{p}^{k} {kind}", ok, f"engine {got} closed form {want} herbrand {hq}"


# -- engine agreement --------------------------------------------------------


def _permutation_module(G, p: int, perms: list[tuple[int, ...]]):
    deg = len(perms[0])
    images = {}
    for g, perm in zip(G.generators, perms):
        m = np.zeros((deg, deg), dtype=np.int64)
        for i, j in enumerate(perm):
            m[j, i] = 1
        images[g] = m
    return module_from_generators(G, p, (1,) * deg, images)


def engine_modules():
    """Elementary abelian test modules over groups of order <= 16."""
    for name in ("trivial", "C2", "C3", "C4", "Klein4", "Q8", "S3"):
        G = builtin_group(name)
        for p in (2, 3, 5):
            yield f"{name} F{p} trivial", trivial_module(G, p)
        if name in ("C2", "C4", "Klein4", "Q8"):
            for p in (2, 3):
                sign = {g: [[p - 1]] for g in G.generators[:1]}
                sign.update({g: [[1]] for g in G.generators[1:]})
                yield f"{name} F{p} sign", module_from_generators(G, p, (1,), sign)
        if name in ("C2", "C3", "C4", "Klein4"):
            for p in (2, 3):
                perms = regular_permutations(G, G.generators)
                yield f"{name} F{p} regular", _permutation_module(G, p, perms)
    S3 = from_permutations(["(1 2)", "(1 2 3)"])
    for p in (2, 3):
        perms = [(1, 0, 2), (1, 2, 0)]
        yield f"S3 F{p} natural", _permutation_module(S3, p, perms)
    Q8 = builtin_group("Q8")
    # two-dimensional faithful representation of Q8 over F3
    i_mat, j_mat = [[1, 1], [1, 2]], [[2, 1], [1, 1]]
    yield "Q8 F3 faithful", module_from_generators(Q8, 3, (1, 1), {2: i_mat, 4: j_mat})


def engine_cases() -> Iterator[Case]:
    for name, M in engine_modules():
        snf = cohomology(M).dims
        oracle = cocycle_oracle(M).dims
        yield name, snf == oracle, f"snf {snf} fp-linear {oracle}"


# -- composition tables -----------------------------------------------------

BUILTIN_TABLES = ("trivial", "C2", "C3", "C4", "C6", "C12", "Klein4", "Q8", "S3")


def table_cases(fixtures=None) -> Iterator[Case]:
    """Re-validate composition tables; the detail names the violated group axiom."""
    if fixtures is None:
        fixtures = [(n, builtin_group(n).table, builtin_group(n).labels) for n in BUILTIN_TABLES]
    for name, table, labels in fixtures:
        try:
            FiniteGroup(np.array(table), tuple(labels))
        except InvalidGroupError as exc:
            yield name, False, f"group axiom violated: {exc}"
        else:
            yield name, True, ""


# -- bound dominance and reduction identities --------------------------------


def bundled_contexts(full_only: bool = False):
    for path in bundled_paths():
        for raw in load_raw(path):
            sc = build_scenario(raw)
            if full_only and not sc.quotient_is_full:
                continue
            for M in sc.modules:
                yield f"{sc.id}/{M.name}", sc, EulerContext(sc.field, sc.S, M, sc.quotient_is_full)


def dominance_cases() -> Iterator[Case]:
    for name, _, ctx in bundled_contexts(full_only=True):
        cmp = chi2_exact_finite(ctx)
        yield name, cmp.lhs <= cmp.rhs_bound, f"chi2 {cmp.lhs} bound {cmp.rhs_bound}"


def reduction_cases() -> Iterator[Case]:
    for name, sc, ctx in bundled_contexts():
        covers_p = sc.S.contains_all_above(ctx.p)
        if covers_p and sc.S.has_finite:
            b, t = chi2_upper_bound(ctx), tate_rhs(ctx)
            yield f"{name} bound == tate", b == t, f"{b} vs {t}"
        if covers_p and sc.field.totally_imaginary:
            e, t = etale_chi(ctx), tate_rhs(ctx)
            yield f"{name} etale == tate", e == t, f"{e} vs {t}"


SUITES: dict[str, Callable[[int], Iterator[Case]]] = {
    "product_formula": lambda seed: product_formula_cases(seed),
    "tables": lambda seed: table_cases(),
    "cyclic": lambda seed: cyclic_cases(),
    "engines": lambda seed: engine_cases(),
    "dominance": lambda seed: dominance_cases(),
    "reduction": lambda seed: reduction_cases(),
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    res = SuiteResult(name)
    try:
        for case, ok, detail in SUITES[name](seed):
            if ok:
                res.passed += 1
            else:
                res.failed.append(f"{name}: {case}: {detail}")
    except (EngineError, ValueError, AssertionError) as exc:
        res.failed.append(f"{name}: aborted: {type(exc).__name__}: {exc}")
    return res


def run_all(filter_name: str | None = None, seed: int = 0) -> list[SuiteResult]:
    names = [n for n in SUITES if filter_name is None or filter_name in n]
    if not names:
        raise KeyError(f"no suite matches {filter_name!r}; have {list(SUITES)}")
    return [run_suite(n, seed) for n in names]
