"""Independent closed-form oracles that tests freeze expected values against.

Everything here is computed from scratch: textbook formulas and brute-force
Fraction linear algebra, sharing no code with the package under test.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def demazure_closed_form(matrix, index, terms):
    """Isobaric divided-difference operator, applied weight by weight.

    ``matrix`` holds the Cartan integers, ``index`` is 1-based, ``terms``
    maps weight coordinate tuples to integer multiplicities.  Each weight
    is handled by the rank-one formula: a geometric string down the root
    for nonnegative pairing, zero at pairing -1, and a negated string up
    the root below that.
    """
    rank = len(matrix)
    i = index - 1
    root = tuple(matrix[r][i] for r in range(rank))
    out: dict[tuple, int] = {}

    def add(coords, mult):
        total = out.get(coords, 0) + mult
        if total:
            out[coords] = total
        else:
            out.pop(coords, None)

    for coords, mult in terms.items():
        pairing = coords[i]
        if pairing >= 0:
            for j in range(pairing + 1):
                add(tuple(coords[r] - j * root[r] for r in range(rank)),
                    mult)
        elif pairing <= -2:
            for j in range(1, -pairing):
                add(tuple(coords[r] + j * root[r] for r in range(rank)),
                    -mult)
    return out


def weyl_dim_a1(m):
    return m + 1


def weyl_dim_a2(a, b):
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def weyl_dim_b2(a, b):
    """Highest weight a*omega_1 + b*omega_2 with alpha_1 the long root."""
    return (a + 1) * (b + 1) * (a + b + 2) * (2 * a + b + 3) // 6


def hirzebruch_count(c1, c2):
    """Sections of the (c1, c2) bundle on the first Hirzebruch surface.

    The length-2 word in type A_2 realizes that surface; counting lattice
    points column by column under the canonical coordinates gives this
    closed form for nef classes.
    """
    return (c2 + 1) * (c1 + 1) + c2 * (c2 + 1) // 2


def _primitive(vector):
    from math import gcd

    g = 0
    for v in vector:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    return tuple(v // g for v in vector)


def extreme_rays_2d(vectors):
    """Extreme rays of a pointed planar cone, by pairwise 2x2 solves.

    A primitive generator is extreme exactly when it is not a nonnegative
    combination of two other generators; in the plane that combination can
    always be taken over a pair, so exhaustive pairs decide it.
    """
    primitives = sorted({p for p in map(_primitive, vectors) if p})
    rays = []
    for v in primitives:
        others = [u for u in primitives if u != v]
        redundant = False
        for u, w in itertools.combinations(others, 2):
            det = u[0] * w[1] - u[1] * w[0]
            if det == 0:
                continue
            a = Fraction(v[0] * w[1] - v[1] * w[0], det)
            b = Fraction(u[0] * v[1] - u[1] * v[0], det)
            if a >= 0 and b >= 0:
                redundant = True
                break
        if not redundant:
            rays.append(v)
    return rays


def shoelace_area(ordered_vertices):
    """Area of a polygon whose vertices are listed in boundary order."""
    total = Fraction(0)
    count = len(ordered_vertices)
    for k in range(count):
        x1, y1 = ordered_vertices[k]
        x2, y2 = ordered_vertices[(k + 1) % count]
        total += Fraction(x1) * Fraction(y2) - Fraction(x2) * Fraction(y1)
    return abs(total) / 2


def dense_rank(rows, ncols):
    """Rank of sparse integer rows by plain Gaussian elimination."""
    matrix = [[Fraction(row.get(j, 0)) for j in range(ncols)]
              for row in rows]
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(matrix))
                      if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        lead = matrix[rank][col]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col]:
                factor = matrix[r][col] / lead
                matrix[r] = [matrix[r][j] - factor * matrix[rank][j]
                             for j in range(ncols)]
        rank += 1
        if rank == len(matrix):
            break
    return rank


def dense_determinant(rows):
    """Determinant by cofactor expansion; intended for tiny matrices."""
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [[rows[r][c] for c in range(n) if c != j]
                 for r in range(1, n)]
        sign = -1 if j % 2 else 1
        total += sign * Fraction(rows[0][j]) * dense_determinant(minor)
    return total


def apply_sparse(rows, vector):
    """Multiply sparse integer rows against a sparse or dense vector."""
    if isinstance(vector, dict):
        entry = lambda j: Fraction(vector.get(j, 0))
    else:
        entry = lambda j: Fraction(vector[j])
    return [sum(Fraction(val) * entry(j) for j, val in row.items())
            for row in rows]
