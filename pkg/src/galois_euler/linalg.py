"""Normal forms used by the cohomology engines.

Three independent eliminations live here:

* :func:`smith_invariants` -- Smith normal form over Z with Python integers,
  for small presentations (abelianisation).
* :func:`local_smith_valuations` -- Smith normal form over the chain ring
  Z/p^N.  Every module in this package is killed by p^N, so diagonal entries
  are p^v and only the valuations matter.  Vectorised with numpy.
* :func:`rank_mod_p` -- plain row reduction over the field F_p.  Used by the
  cocycle oracle so that it shares no elimination code with the SNF engine.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# products of two residues mod p^N must fit in int64
MAX_MODULUS = 2**31


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith diagonal d_1 | d_2 | ... of an integer matrix (all positive)."""
    A = [list(map(int, row)) for row in matrix]
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        dirty = False
        piv = A[t][t]
        for i in range(t + 1, m):
            if A[i][t]:
                q = A[i][t] // piv
                rt, ri = A[t], A[i]
                for j in range(t, n):
                    ri[j] -= q * rt[j]
                dirty |= A[i][t] != 0
        for j in range(t + 1, n):
            if A[t][j]:
                q = A[t][j] // piv
                for i in range(t, m):
                    A[i][j] -= q * A[i][t]
                dirty |= A[t][j] != 0
        if dirty:
            continue  # a smaller remainder appeared; re-pivot
        bad = next(
            (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
            None,
        )
        if bad is not None:
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
            continue
        diag.append(abs(piv))
        t += 1
    return diag


def valuations(A: np.ndarray, p: int, N: int) -> np.ndarray:
    """p-adic valuation of each entry of a matrix over Z/p^N (N for zero)."""
    v = np.full(A.shape, N, dtype=np.int64)
    nz = A != 0
    v[nz] = 0
    pk = 1
    for k in range(1, N):
        pk *= p
        v[nz & (A % pk == 0)] = k
    return v


def local_smith_valuations(A, p: int, N: int) -> list[int]:
    """Valuations of the Smith diagonal of ``A`` over Z/p^N.

    Returns ``min(rows, cols)`` values, using N for a zero diagonal entry.
    The pivot is always an entry of least valuation in the trailing block,
    so every other entry of its row and column is a multiple of it and a
    single rank-one update clears both.  That least valuation never drops
    as elimination proceeds, so it is tracked as a running level.
    """
    q = p**N
    if q >= MAX_MODULUS:
        raise OverflowError(f"modulus {p}^{N} too large for int64 elimination")
    A = np.array(A, dtype=np.int64) % q
    m, n = A.shape
    out: list[int] = []
    t, v = 0, 0
    while t < min(m, n) and v < N:
        level = p ** (v + 1)
        # look in the current column first; the whole block only if it is empty
        hits = np.flatnonzero(A[t:, t] % level)
        if hits.size:
            i, j = t + int(hits[0]), t
        else:
            hits = np.flatnonzero(A[t:, t:] % level)
            if hits.size == 0:
                v += 1
                continue
            i, j = divmod(int(hits[0]), n - t)
            i, j = i + t, j + t
        A[[t, i]] = A[[i, t]]
        A[:, [t, j]] = A[:, [j, t]]
        pk = p**v
        inv = pow(int(A[t, t]) // pk, -1, q)
        row = A[t, t + 1 :] * inv % q  # pivot entry is now exactly p^v
        # bar matrices are sparse: touch only rows with something under the pivot
        rows = t + 1 + np.flatnonzero(A[t + 1 :, t])
        if rows.size:
            col = A[rows, t] // pk  # exact: every entry has valuation >= v
            A[rows, t + 1 :] = (A[rows, t + 1 :] - np.outer(col, row)) % q
            A[rows, t] = 0
        out.append(v)
        t += 1
    out.extend([N] * (min(m, n) - len(out)))
    return out


def rank_mod_p(A, p: int) -> int:
    """Rank of an integer matrix reduced mod the prime ``p``."""
    A = np.array(A, dtype=np.int64) % p
    if A.size == 0:
        return 0
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(A[rank:, c])[0]
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            A[[rank, r]] = A[[r, rank]]
        A[rank] = A[rank] * pow(int(A[rank, c]), -1, p) % p
        below = A[rank + 1 :, c].copy()
        if below.any():
            A[rank + 1 :] = (A[rank + 1 :] - np.outer(below, A[rank])) % p
        rank += 1
    return rank

