"""Dense univariate polynomials over Q and F_p.

Coefficient lists are constant term first, the same order scenario files use.
Rational arithmetic goes through :class:`fractions.Fraction`; nothing here
touches floating point.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

Poly = list  # constant term first


def trim(f: Sequence) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence) -> int:
    f = trim(f)
    return len(f) - 1  # the zero polynomial has degree -1


# ---------------------------------------------------------------------------
# Q[x]


def q_derivative(f: Sequence) -> list:
    return trim([Fraction(i) * c for i, c in enumerate(f)][1:])


def q_divmod(f: Sequence, g: Sequence) -> tuple[list, list]:
    f = [Fraction(c) for c in trim(f)]
    g = [Fraction(c) for c in trim(g)]
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lead = g[-1]
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        c = f[-1] / lead
        q[shift] = c
        for i, gc in enumerate(g):
            f[i + shift] -= c * gc
        f = trim(f)
    return trim(q), f


def q_gcd(f: Sequence, g: Sequence) -> list:
    a, b = trim(f), trim(g)
    while b:
        a, b = b, q_divmod(a, b)[1]
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(c) / lead for c in a]


def q_eval(f: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def is_squarefree_over_q(f: Sequence) -> bool:
    return degree(q_gcd(f, q_derivative(f))) == 0


def sturm_sequence(f: Sequence) -> list[list]:
    """Canonical Sturm chain f, f', -rem(f, f'), ... ."""
    seq = [[Fraction(c) for c in trim(f)], q_derivative(f)]
    while seq[-1] and degree(seq[-1]) > 0:
        r = q_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def count_real_roots(f: Sequence) -> int:
    """Number of distinct real roots of ``f``, via sign changes at -inf and +inf."""
    seq = sturm_sequence(f)
    at_pos = [_sign(s[-1]) for s in seq]
    at_neg = [_sign(s[-1]) * (-1) ** degree(s) for s in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def count_real_roots_in(f: Sequence, a: Fraction, b: Fraction) -> int:
    """Distinct real roots in the half-open interval (a, b]."""
    seq = sturm_sequence(f)
    va = _sign_changes([_sign(q_eval(s, Fraction(a))) for s in seq])
    vb = _sign_changes([_sign(q_eval(s, Fraction(b))) for s in seq])
    return va - vb


# ---------------------------------------------------------------------------
# F_p[x]; polynomials are lists of ints in [0, p)


def fp_trim(f: Sequence[int], p: int) -> list[int]:
    return trim([c % p for c in f])


def fp_add(f, g, p):
    n = max(len(f), len(g))
    return fp_trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def fp_sub(f, g, p):
    n = max(len(f), len(g))
    return fp_trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p)


def fp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return fp_trim(out, p)


def fp_divmod(f, g, p):
    f = fp_trim(f, p)
    g = fp_trim(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        c = f[-1] * inv % p
        q[shift] = c
        for i, gc in enumerate(g):
            f[i + shift] = (f[i + shift] - c * gc) % p
        f = trim(f)
    return trim(q), f


def fp_mod(f, g, p):
    return fp_divmod(f, g, p)[1]


def fp_monic(f, p):
    f = fp_trim(f, p)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def fp_gcd(f, g, p):
    a, b = fp_trim(f, p), fp_trim(g, p)
    while b:
        a, b = b, fp_mod(a, b, p)
    return fp_monic(a, p)


def fp_derivative(f, p):
    return fp_trim([i * c for i, c in enumerate(f)][1:], p)


def fp_powmod(base, exp: int, mod, p):
    result = [1]
    base = fp_mod(base, mod, p)
    while exp:
        if exp & 1:
            result = fp_mod(fp_mul(result, base, p), mod, p)
        base = fp_mod(fp_mul(base, base, p), mod, p)
        exp >>= 1
    return result


def _pth_root(f, p):
    # f(x) = g(x^p) over F_p, and Frobenius is the identity on coefficients
    return [f[i] for i in range(0, len(f), p)]


def fp_squarefree_decomposition(f, p) -> list[tuple[list[int], int]]:
    """Monic squarefree factors with multiplicities, ``f = lc * prod g_i**m_i``."""
    f = fp_monic(f, p)
    if degree(f) <= 0:
        return []
    out: list[tuple[list[int], int]] = []
    df = fp_derivative(f, p)
    if not df:
        return [(g, m * p) for g, m in fp_squarefree_decomposition(_pth_root(f, p), p)]
    c = fp_gcd(f, df, p)
    w = fp_divmod(f, c, p)[0]
    i = 1
    while degree(w) > 0:
        y = fp_gcd(w, c, p)
        z = fp_divmod(w, y, p)[0]
        if degree(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = fp_divmod(c, y, p)[0]
    if degree(c) > 0:
        out.extend((g, m * p) for g, m in fp_squarefree_decomposition(_pth_root(c, p), p))
    return out


def fp_distinct_degree(f, p) -> list[tuple[list[int], int]]:
    """Split a monic squarefree ``f`` into products of irreducibles of equal degree."""
    out = []
    h = [0, 1]
    x = [0, 1]
    d = 0
    f = fp_monic(f, p)
    while degree(f) >= 2 * (d + 1):
        d += 1
        h = fp_powmod(h, p, f, p)
        g = fp_gcd(f, fp_sub(h, x, p), p)
        if degree(g) > 0:
            out.append((g, d))
            f = fp_divmod(f, g, p)[0]
            h = fp_mod(h, f, p)
    if degree(f) > 0:
        out.append((f, degree(f)))
    return out


def fp_equal_degree(f, d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    f = fp_monic(f, p)
    n = degree(f)
    if n == d:
        return [f]
    while True:
        a = fp_trim([rng.randrange(p) for _ in range(n)], p)
        if degree(a) <= 0:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            t, acc = a, a
            for _ in range(d - 1):
                t = fp_mod(fp_mul(t, t, p), f, p)
                acc = fp_add(acc, t, p)
            g = fp_gcd(f, acc, p)
        else:
            g = fp_gcd(f, fp_sub(fp_powmod(a, (p**d - 1) // 2, f, p), [1], p), p)
        if 0 < degree(g) < n:
            return fp_equal_degree(g, d, p, rng) + fp_equal_degree(fp_divmod(f, g, p)[0], d, p, rng)


def fp_factor(f: Sequence[int], p: int, seed: int = 0) -> list[tuple[list[int], int]]:
    """Monic irreducible factors of ``f`` mod ``p`` with multiplicity, sorted."""
    rng = random.Random(seed)
    factors = []
    for g, m in fp_squarefree_decomposition(list(f), p):
        for h, d in fp_distinct_degree(g, p):
            factors.extend((q, m) for q in fp_equal_degree(h, d, p, rng))
    factors.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return factors
