# cython: language_level=3
"""Compiled twin of the sparse integer elimination kernel.

Same algorithm and same outputs as _echelon_py; the win is C-level loop and
dict handling around arbitrary-precision Python integers.
"""

from math import gcd


def normalize_row(dict row):
    cdef object g = 0
    cdef object v, lead
    if not row:
        return row
    for v in row.values():
        g = gcd(g, v)
    lead = row[min(row)]
    cdef dict out
    if g > 1:
        out = {}
        for c, v in row.items():
            out[c] = v // g
        row = out
        lead = lead // g
    if lead < 0:
        out = {}
        for c, v in row.items():
            out[c] = -v
        row = out
    return row


cdef dict _combine(dict row, dict pivot_row, object col, object pivot_lead):
    cdef object factor = row[col]
    cdef dict out = {}
    cdef object c, v, s
    for c, v in row.items():
        out[c] = v * pivot_lead
    for c, v in pivot_row.items():
        s = out.get(c, 0) - factor * v
        if s:
            out[c] = s
        else:
            out.pop(c, None)
    return normalize_row(out)


def echelon(list rows):
    cdef list work = [normalize_row(dict(r)) for r in rows if r]
    cdef list pivots = []
    cdef list reduced = []
    cdef dict r, pivot_row
    cdef object col, lead
    cdef Py_ssize_t idx, best, best_len, n
    while work:
        col = None
        for r in work:
            m = min(r)
            if col is None or m < col:
                col = m
        best = -1
        best_len = -1
        n = len(work)
        for idx in range(n):
            r = <dict>work[idx]
            if min(r) == col and (best < 0 or len(r) < best_len):
                best = idx
                best_len = len(r)
        pivot_row = <dict>work[best]
        del work[best]
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


def rank(list rows):
    return len(echelon(rows)[0])


def nullspace(list rows, Py_ssize_t ncols):
    from fractions import Fraction
    pivots, reduced = echelon(rows)
    cdef set pivot_set = set(pivots)
    cdef list basis = []
    cdef Py_ssize_t free
    cdef dict row, vec
    cdef object v, denom
    for free in range(ncols):
        if free in pivot_set:
            continue
        entries = {free: Fraction(1)}
        for p, row in zip(pivots, reduced):
            v = row.get(free)
            if v:
                entries[p] = Fraction(-v, row[p])
        denom = 1
        for val in entries.values():
            denom = denom * val.denominator // gcd(denom, val.denominator)
        vec = {}
        for c, val in entries.items():
            vec[c] = int(val * denom)
        basis.append(normalize_row(vec))
    return basis
