"""Pure-Python kernels: exact integer rank and brute-force ray search.

These are the reference semantics for the compiled twin in _fast.pyx; the
two must produce identical output on identical input. Everything is exact
integer arithmetic (fraction-free elimination with gcd normalization), so
Python's big ints make this version immune to overflow, just slow.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence


def _normalized(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return [x // g for x in v]
    return v


def _reduce(row: Sequence[int], basis: list[tuple[int, list[int]]]) -> list[int]:
    """Eliminate the pivot columns of ``basis`` from ``row``."""
    v = list(row)
    for pcol, prow in basis:
        b = v[pcol]
        if b:
            a = prow[pcol]
            v = [a * x - b * y for x, y in zip(v, prow)]
            v = _normalized(v)
    return v


def _pivot_col(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals of an integer matrix."""
    basis: list[tuple[int, list[int]]] = []
    for row in rows:
        v = _reduce(row, basis)
        c = _pivot_col(v)
        if c >= 0:
            basis.append((c, v))
    return len(basis)


def _nullvector(basis: list[tuple[int, list[int]]], dim: int) -> tuple[int, ...]:
    """Primitive integer spanning vector of the 1-dim nullspace of a
    (dim-1)-row echelon basis."""
    pivot_cols = {pcol for pcol, _ in basis}
    free = next(c for c in range(dim) if c not in pivot_cols)
    x = [0] * dim
    x[free] = 1
    for pcol, prow in reversed(basis):
        s = 0
        for c in range(dim):
            if c != pcol and x[c]:
                s += prow[c] * x[c]
        p = prow[pcol]
        if s == 0:
            x[pcol] = 0
            continue
        g = gcd(abs(s), abs(p))
        mult = abs(p) // g
        if mult != 1:
            x = [v * mult for v in x]
            s *= mult
        x[pcol] = -s // p
    return tuple(_normalized(x))


def brute_rays(rows: Sequence[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    """All extreme rays of {x : rows @ x >= 0}, assumed pointed.

    Depth-first search over independent row subsets of size dim-1; each
    such subset pins a 1-dim nullspace whose primitive generator is kept
    when it (or its negative) satisfies every row. Returns the sorted,
    deduplicated primitive rays.
    """
    mat = [tuple(r) for r in rows]
    m = len(mat)
    found: set[tuple[int, ...]] = set()
    checked: dict[tuple[int, ...], bool] = {}
    basis: list[tuple[int, list[int]]] = []

    def leaf():
        v = _nullvector(basis, dim)
        # sign-canonical form for the dedup cache
        for x in v:
            if x:
                if x < 0:
                    v = tuple(-y for y in v)
                break
        cached = checked.get(v)
        if cached is not None:
            return
        pos = neg = False
        for row in mat:
            s = 0
            for a, b in zip(row, v):
                if b:
                    s += a * b
            if s > 0:
                pos = True
            elif s < 0:
                neg = True
            if pos and neg:
                break
        feasible = not (pos and neg)
        checked[v] = feasible
        if feasible:
            found.add(v if not neg else tuple(-y for y in v))

    def dfs(start: int):
        need = dim - 1 - len(basis)
        if need == 0:
            leaf()
            return
        for i in range(start, m - need + 1):
            v = _reduce(mat[i], basis)
            c = _pivot_col(v)
            if c < 0:
                continue
            basis.append((c, v))
            dfs(i + 1)
            basis.pop()

    dfs(0)
    return tuple(sorted(found))
