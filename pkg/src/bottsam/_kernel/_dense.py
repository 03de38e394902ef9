"""Small dense exact helpers over the rationals.

These are cold paths (tiny systems: raising-operator derivation, basis-change
columns, affine fits), so they stay pure Python regardless of the kernel
selection.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def solve_dense(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve rows * x = rhs exactly. Returns None if inconsistent.

    Raises ValueError if the solution is not unique (the caller decides
    whether an underdetermined system is an error).
    """
    m = [[Fraction(v) for v in row] + [Fraction(b)]
         for row, b in zip(rows, rhs)]
    ncols = len(m[0]) - 1 if m else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [v / lead for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, len(m)):
        if m[i][ncols]:
            return None
    if len(pivots) < ncols:
        raise ValueError("underdetermined linear system")
    x = [Fraction(0)] * ncols
    for row, col in pivots:
        x[col] = m[row][ncols]
    return x


def invert_dense(rows: Sequence[Sequence]) -> list[list[Fraction]] | None:
    """Exact inverse of a square matrix, or None if singular."""
    n = len(rows)
    m = [[Fraction(v) for v in row] + [Fraction(1 if i == j else 0)
                                       for j in range(n)]
         for i, row in enumerate(rows)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return None
        m[c], m[pivot] = m[pivot], m[c]
        lead = m[c][c]
        m[c] = [v / lead for v in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [row[n:] for row in m]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(rows)
    m = [[Fraction(v) for v in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        lead = m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / lead
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def kernel_lattice_basis(int_rows: Sequence[dict[int, int] | Sequence[int]],
                         ncols: int) -> list[list[int]]:
    """Basis of the saturated integer kernel lattice ker(A) (cap) Z^ncols.

    Row-HNF with a tracked unimodular transform on the transpose: the
    transform rows matching zero rows of the HNF form a basis of the kernel
    lattice itself, not merely a finite-index sublattice.
    """
    dense: list[list[int]] = []
    for row in int_rows:
        if isinstance(row, dict):
            dense.append([row.get(c, 0) for c in range(ncols)])
        else:
            dense.append(list(row))
    nrows = len(dense)
    # Work on A^T: columns of A become rows.
    a = [[dense[r][c] for r in range(nrows)] for c in range(ncols)]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    row = 0
    for col in range(nrows):
        while True:
            nonzero = [i for i in range(row, ncols) if a[i][col]]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda i: (abs(a[i][col]), i))
            if pivot != row:
                a[row], a[pivot] = a[pivot], a[row]
                u[row], u[pivot] = u[pivot], u[row]
            p = a[row][col]
            done = True
            for i in range(row + 1, ncols):
                if a[i][col]:
                    q = a[i][col] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[row])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if any(a[i][col] for i in range(row, ncols)):
            row += 1
        if row == ncols:
            break
    basis = [u[i] for i in range(ncols) if not any(a[i])]
    normalized = []
    for vec in basis:
        g = 0
        for v in vec:
            g = gcd(g, v)
        if g > 1:
            vec = [v // g for v in vec]
        lead = next((v for v in vec if v), 0)
        if lead < 0:
            vec = [-v for v in vec]
        normalized.append(vec)
    return sorted(normalized)
