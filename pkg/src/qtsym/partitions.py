"""Integer partitions, compositions, and cell statistics.

Partitions are plain tuples of weakly decreasing positive ints; compositions
are tuples of positive ints.  Cells of a diagram are (column, row) pairs,
both 1-based, with row j containing cells (1, j) .. (mu_j, j).
"""

from __future__ import annotations

import math
from functools import lru_cache


@lru_cache(maxsize=None)
def partitions_of(n: int, max_part: int | None = None) -> tuple:
    """All partitions of n, parts bounded by max_part, in descending lex order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    top = n if max_part is None else min(n, max_part)
    out = []
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def is_partition(mu) -> bool:
    return all(isinstance(p, int) and p > 0 for p in mu) and all(
        mu[i] >= mu[i + 1] for i in range(len(mu) - 1)
    )


def conjugate(mu: tuple) -> tuple:
    if not mu:
        return ()
    return tuple(sum(1 for p in mu if p >= i) for i in range(1, mu[0] + 1))


def z_of(lam: tuple) -> int:
    """Centralizer order: prod over part sizes k of k^m_k * m_k!."""
    out = 1
    mult: dict = {}
    for p in lam:
        mult[p] = mult.get(p, 0) + 1
    for k, m in mult.items():
        out *= k**m * math.factorial(m)
    return out


def n_stat(mu: tuple) -> int:
    """Sum over rows of (row index - 1) * row length."""
    return sum((j - 1) * p for j, p in enumerate(mu, start=1))


def cells(mu: tuple):
    """Cells (i, j) row by row, i = column, j = row, 1-based."""
    for j, p in enumerate(mu, start=1):
        for i in range(1, p + 1):
            yield (i, j)


def arm(mu: tuple, i: int, j: int) -> int:
    return mu[j - 1] - i


def leg(mu: tuple, i: int, j: int) -> int:
    return sum(1 for j2 in range(j + 1, len(mu) + 1) if mu[j2 - 1] >= i)


def coarm(i: int) -> int:
    return i - 1


def coleg(j: int) -> int:
    return j - 1


def dominates(lam: tuple, mu: tuple) -> bool:
    """Partial sums of lam weakly exceed those of mu (same total size)."""
    if sum(lam) != sum(mu):
        return False
    run_l = run_m = 0
    for k in range(max(len(lam), len(mu))):
        run_l += lam[k] if k < len(lam) else 0
        run_m += mu[k] if k < len(mu) else 0
        if run_l < run_m:
            return False
    return True


@lru_cache(maxsize=None)
def compositions_of(n: int) -> tuple:
    """All compositions of n in lex order; n = 0 gives the empty one."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for rest in compositions_of(n - first):
            out.append((first,) + rest)
    return tuple(out)


def sort_to_partition(alpha: tuple) -> tuple:
    return tuple(sorted(alpha, reverse=True))
