"""Exact rank over the rationals by fraction-free row reduction."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence


def _primitive(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    if g > 1:
        return [v // g for v in row]
    return row


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix, computed without leaving the integers.

    Each elimination step replaces ``r`` by ``(p/g)*r - (f/g)*pivot`` with
    ``g = gcd(p, f)`` and then divides the row by its content, so entries
    stay bounded by the size of the original minors.  The smallest nonzero
    entry in the pivot column is chosen as pivot.
    """
    work = [_primitive([int(v) for v in row]) for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    if any(len(row) != ncols for row in work):
        raise ValueError("ragged matrix")
    rank = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, len(work)):
            v = work[i][c]
            if v and (pivot is None or abs(v) < abs(work[pivot][c])):
                pivot = i
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        p = prow[c]
        for i in range(rank + 1, len(work)):
            f = work[i][c]
            if not f:
                continue
            g = gcd(p, f)
            mp, mf = p // g, f // g
            work[i] = _primitive([mp * u - mf * v for u, v in zip(work[i], prow)])
        rank += 1
        if rank == len(work):
            break
    return rank


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix; each row is cleared of denominators first."""
    scaled = []
    for row in rows:
        den = reduce(lcm, (Fraction(v).denominator for v in row), 1)
        scaled.append([int(Fraction(v) * den) for v in row])
    return integer_rank(scaled)
