"""Pure-Python exact sparse integer elimination.

Rows are dicts mapping column index to a nonzero integer. All reductions are
fraction-free (cross-multiplication followed by gcd normalization), so the
arithmetic stays in the integers and is exact at any size.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def normalize_row(row: dict[int, int]) -> dict[int, int]:
    """Divide by the content and make the leading coefficient positive."""
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
    lead = row[min(row)]
    if g > 1:
        row = {c: v // g for c, v in row.items()}
        lead //= g
    if lead < 0:
        row = {c: -v for c, v in row.items()}
    return row


def _combine(row: dict[int, int], pivot_row: dict[int, int],
             col: int, pivot_lead: int) -> dict[int, int]:
    """Return pivot_lead*row - row[col]*pivot_row, gcd-normalized."""
    factor = row[col]
    out = {}
    for c, v in row.items():
        out[c] = v * pivot_lead
    for c, v in pivot_row.items():
        s = out.get(c, 0) - factor * v
        if s:
            out[c] = s
        else:
            out.pop(c, None)
    return normalize_row(out)


def echelon(rows: list[dict[int, int]]) -> tuple[list[int], list[dict[int, int]]]:
    """Reduced row echelon form over the integers.

    Returns (pivot columns ascending, reduced rows in the same order). Every
    returned row has its pivot as its smallest column, a positive pivot
    coefficient, and zeros in every other row's pivot column.
    """
    work = [normalize_row(dict(r)) for r in rows if r]
    pivots: list[int] = []
    reduced: list[dict[int, int]] = []
    while work:
        col = min(min(r) for r in work)
        best = -1
        best_len = -1
        for idx, r in enumerate(work):
            if min(r) == col and (best < 0 or len(r) < best_len):
                best, best_len = idx, len(r)
        pivot_row = work.pop(best)
        lead = pivot_row[col]
        work = [_combine(r, pivot_row, col, lead) if col in r else r
                for r in work]
        work = [r for r in work if r]
        reduced = [_combine(r, pivot_row, col, lead) if col in r else r
                   for r in reduced]
        pivots.append(col)
        reduced.append(pivot_row)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [reduced[i] for i in order]


def rank(rows: list[dict[int, int]]) -> int:
    return len(echelon(rows)[0])


def nullspace(rows: list[dict[int, int]], ncols: int) -> list[dict[int, int]]:
    """Primitive integer basis of the right kernel, one vector per free column.

    The basis is in bijection with the non-pivot columns (ascending); the
    vector for free column f has a positive entry at f.
    """
    pivots, reduced = echelon(rows)
    pivot_set = set(pivots)
    basis: list[dict[int, int]] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        entries: dict[int, Fraction] = {free: Fraction(1)}
        for p, row in zip(pivots, reduced):
            v = row.get(free)
            if v:
                entries[p] = Fraction(-v, row[p])
        denom = 1
        for val in entries.values():
            denom = denom * val.denominator // gcd(denom, val.denominator)
        vec = {c: int(v * denom) for c, v in entries.items()}
        basis.append(normalize_row(vec))
    return basis
