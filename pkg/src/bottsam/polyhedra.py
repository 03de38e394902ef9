"""Exact rational convex geometry in small ambient dimension.

Everything here runs on int/Fraction arithmetic; no floating point enters.
The single core primitive is a double-description sweep (_dual_description)
that turns an inequality system {x : a.x >= 0} into extreme rays plus a
lineality basis.  Polytopes homogenize into that primitive for both
directions of the V/H conversion.

Volumes come out of a pyramid recursion: with primitive integer facet
normals, the Euclidean volume of a full-dimensional polytope equals
(1/d) * sum over facets of (height of an apex over the facet) times the
facet volume normalized to the saturated hyperplane lattice.  The same
recursion computes lattice-normalized volumes of lower-dimensional
polytopes after a change to saturated-lattice coordinates.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from ._kernel import kernel_lattice_basis, solve_dense
from .errors import (
    EngineError,
    NotPointed,
    ValidationError,
    VerificationFailure,
)

Vector = tuple[Fraction, ...]

_MAX_POLYTOPE_DIM = 8
_MAX_CONE_DIM = _MAX_POLYTOPE_DIM + 1
_LATTICE_POINT_GUARD = 2_000_000


def _frac_vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def _idot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def primitive_vector(values: Iterable) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, preserving direction.

    The zero vector comes back unchanged; callers treat it as degenerate.
    """
    fracs = [Fraction(v) for v in values]
    if all(f == 0 for f in fracs):
        return (0,) * len(fracs)
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    ints = [int(f * scale) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


def _dual_description(
    rows: Sequence[Sequence[int]], dim: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Extreme rays and lineality basis of {x : row . x >= 0 for each row}.

    Rays are primitive integer vectors, extreme modulo the lineality space;
    the lineality basis is an independent list of integer vectors.  The
    incremental cut keeps, for every ray, the bitmask of already-processed
    inequalities it satisfies with equality, and uses the combinatorial
    adjacency test (no third ray's tight set contains the common tight set)
    when pairing positive against negative rays.
    """
    lineality = [tuple(1 if k == i else 0 for k in range(dim))
                 for i in range(dim)]
    rays: list[list] = []
    seen_rows: set[tuple[int, ...]] = set()
    processed = 0
    for raw in rows:
        row = primitive_vector(raw)
        if not any(row) or row in seen_rows:
            continue
        seen_rows.add(row)
        bit = 1 << processed
        processed += 1
        values = [_idot(row, v) for v in lineality]
        pivot = next((k for k, v in enumerate(values) if v), None)
        if pivot is not None:
            v0 = lineality[pivot]
            c = values[pivot]
            if c < 0:
                v0 = tuple(-x for x in v0)
                c = -c
            lineality = [
                primitive_vector(tuple(c * x - values[k] * y
                                       for x, y in zip(vec, v0)))
                for k, vec in enumerate(lineality) if k != pivot
            ]
            new_rays = []
            for vec, mask in rays:
                t = _idot(row, vec)
                shifted = primitive_vector(tuple(c * x - t * y
                                                 for x, y in zip(vec, v0)))
                new_rays.append([shifted, mask | bit])
            new_rays.append([v0, bit - 1])
            rays = new_rays
            continue
        pos, zero, neg = [], [], []
        for vec, mask in rays:
            t = _idot(row, vec)
            if t > 0:
                pos.append((vec, mask, t))
            elif t < 0:
                neg.append((vec, mask, t))
            else:
                zero.append([vec, mask | bit])
        if not neg:
            rays = [[vec, mask] for vec, mask, _ in pos] + zero
            continue
        new_rays = [[vec, mask] for vec, mask, _ in pos] + zero
        fresh: set[tuple[int, ...]] = set()
        for vp, mp, tp in pos:
            for vn, mn, tn in neg:
                common = mp & mn
                blocked = False
                for vec, mask in rays:
                    if vec is vp or vec is vn:
                        continue
                    if mask & common == common:
                        blocked = True
                        break
                if blocked:
                    continue
                comb = primitive_vector(tuple(tp * b - tn * a
                                              for a, b in zip(vp, vn)))
                if any(comb) and comb not in fresh:
                    fresh.add(comb)
                    new_rays.append([comb, common | bit])
        rays = new_rays
    return [vec for vec, _ in rays], lineality


def _hrep_from_rays(
    generators: Sequence[Sequence[int]], dim: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Facet inequalities and span equations of the cone the rays generate."""
    return _dual_description(generators, dim)


class RationalCone:
    """A polyhedral cone with exact V- and H-descriptions."""

    __slots__ = ("ambient", "rays", "lineality", "inequalities", "equations")

    def __init__(self, ambient, rays, lineality, inequalities, equations):
        self.ambient = ambient
        self.rays = tuple(sorted(rays))
        self.lineality = tuple(lineality)
        self.inequalities = tuple(sorted(inequalities))
        self.equations = tuple(equations)

    @staticmethod
    def _check_ambient(ambient: int) -> None:
        if not 1 <= ambient <= _MAX_CONE_DIM:
            raise ValidationError(
                f"cone ambient dimension must be 1..{_MAX_CONE_DIM}")

    @classmethod
    def from_generators(cls, vectors: Sequence[Sequence],
                        ambient: int | None = None) -> "RationalCone":
        vecs = [primitive_vector(v) for v in vectors]
        if ambient is None:
            if not vecs:
                raise ValidationError(
                    "generator list is empty; pass the ambient dimension")
            ambient = len(vecs[0])
        cls._check_ambient(ambient)
        if any(len(v) != ambient for v in vecs):
            raise ValidationError("generators have mixed lengths")
        ineqs, eqs = _hrep_from_rays(vecs, ambient)
        rows = list(ineqs)
        for e in eqs:
            rows.append(e)
            rows.append(tuple(-x for x in e))
        rays, lin = _dual_description(rows, ambient)
        return cls(ambient, rays, lin, ineqs, eqs)

    @classmethod
    def from_inequalities(cls, rows: Sequence[Sequence],
                          equations: Sequence[Sequence] = (),
                          ambient: int | None = None) -> "RationalCone":
        ineq_rows = [primitive_vector(r) for r in rows]
        eq_rows = [primitive_vector(e) for e in equations]
        if ambient is None:
            if not ineq_rows and not eq_rows:
                raise ValidationError(
                    "no rows given; pass the ambient dimension")
            ambient = len((ineq_rows + eq_rows)[0])
        cls._check_ambient(ambient)
        expanded = list(ineq_rows)
        for e in eq_rows:
            expanded.append(e)
            expanded.append(tuple(-x for x in e))
        rays, lin = _dual_description(expanded, ambient)
        generators = list(rays) + list(lin) + [tuple(-x for x in v)
                                               for v in lin]
        ineqs, eqs = _hrep_from_rays(generators, ambient)
        return cls(ambient, rays, lin, ineqs, eqs)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def dim(self) -> int:
        return self.ambient - len(self.equations)

    def contains(self, vector: Sequence) -> bool:
        vec = _frac_vector(vector)
        if len(vec) != self.ambient:
            return False
        return (all(_idot(a, vec) >= 0 for a in self.inequalities)
                and all(_idot(e, vec) == 0 for e in self.equations))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalCone):
            return NotImplemented
        if self.ambient != other.ambient:
            return False

        def covered(cone: "RationalCone", by: "RationalCone") -> bool:
            for v in cone.rays:
                if not by.contains(v):
                    return False
            for v in cone.lineality:
                if not by.contains(v) or not by.contains([-x for x in v]):
                    return False
            return True

        return covered(self, other) and covered(other, self)

    def __repr__(self) -> str:
        return (f"RationalCone(ambient={self.ambient}, rays={len(self.rays)}, "
                f"lines={len(self.lineality)})")


class RationalPolytope:
    """A bounded rational polytope with exact V- and H-descriptions.

    Inequality rows are primitive integer vectors (a_0, a_1, ..., a_n)
    meaning a_0 + a . x >= 0; equation rows use the same shape with equality.
    The empty polytope is represented with no vertices and the single
    infeasible row (-1, 0, ..., 0).
    """

    __slots__ = ("ambient", "vertices", "inequalities", "equations")

    def __init__(self, ambient, vertices, inequalities, equations):
        self.ambient = ambient
        self.vertices = tuple(sorted(vertices))
        self.inequalities = tuple(sorted(inequalities))
        self.equations = tuple(equations)

    @staticmethod
    def _check_ambient(ambient: int) -> None:
        if not 1 <= ambient <= _MAX_POLYTOPE_DIM:
            raise ValidationError(
                f"polytope ambient dimension must be 1..{_MAX_POLYTOPE_DIM}")

    @classmethod
    def empty(cls, ambient: int) -> "RationalPolytope":
        cls._check_ambient(ambient)
        return cls(ambient, (), ((-1,) + (0,) * ambient,), ())

    @classmethod
    def from_points(cls, points: Sequence[Sequence],
                    ambient: int | None = None) -> "RationalPolytope":
        pts = [_frac_vector(p) for p in points]
        if not pts:
            if ambient is None:
                raise ValidationError(
                    "point list is empty; pass the ambient dimension")
            return cls.empty(ambient)
        if ambient is None:
            ambient = len(pts[0])
        cls._check_ambient(ambient)
        if any(len(p) != ambient for p in pts):
            raise ValidationError("points have mixed lengths")
        homog = [primitive_vector((Fraction(1),) + p) for p in pts]
        ineqs, eqs = _hrep_from_rays(homog, ambient + 1)
        verts, unbounded = cls._vertices_from_hrep(ineqs, eqs, ambient)
        if unbounded:
            raise EngineError("hull of finitely many points came out unbounded")
        return cls(ambient, verts, ineqs, eqs)

    @classmethod
    def from_inequalities(cls, rows: Sequence[Sequence],
                          equations: Sequence[Sequence] = (),
                          ambient: int | None = None) -> "RationalPolytope":
        ineq_rows = [primitive_vector(r) for r in rows]
        eq_rows = [primitive_vector(e) for e in equations]
        if ambient is None:
            if not ineq_rows and not eq_rows:
                raise ValidationError(
                    "no rows given; pass the ambient dimension")
            ambient = len((ineq_rows + eq_rows)[0]) - 1
        cls._check_ambient(ambient)
        verts, unbounded = cls._vertices_from_hrep(ineq_rows, eq_rows, ambient)
        if not verts:
            return cls.empty(ambient)
        if unbounded:
            raise ValidationError("inequality system describes an unbounded set")
        return cls.from_points(verts, ambient)

    @staticmethod
    def _vertices_from_hrep(ineq_rows, eq_rows, ambient):
        """Vertices of the homogenization; flags recession rays or lines."""
        rows = [(1,) + (0,) * ambient]
        rows.extend(tuple(r) for r in ineq_rows)
        for e in eq_rows:
            rows.append(tuple(e))
            rows.append(tuple(-x for x in e))
        rays, lineality = _dual_description(rows, ambient + 1)
        verts = []
        unbounded = bool(lineality)
        for ray in rays:
            if ray[0] > 0:
                verts.append(tuple(Fraction(x, ray[0]) for x in ray[1:]))
            elif any(ray[1:]):
                unbounded = True
        return verts, unbounded

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def dim(self) -> int:
        if self.is_empty:
            return -1
        return self.ambient - len(self.equations)

    def contains(self, point: Sequence) -> bool:
        if self.is_empty:
            return False
        p = (Fraction(1),) + _frac_vector(point)
        if len(p) != self.ambient + 1:
            return False
        return (all(_idot(a, p) >= 0 for a in self.inequalities)
                and all(_idot(e, p) == 0 for e in self.equations))

    def scaled(self, factor) -> "RationalPolytope":
        f = Fraction(factor)
        if f < 0:
            raise ValidationError("polytope scaling factor must be >= 0")
        return RationalPolytope.from_points(
            [tuple(f * c for c in v) for v in self.vertices], self.ambient)

    def sliced(self, equalities: Sequence[tuple[Sequence, object]]
               ) -> "RationalPolytope":
        """Intersect with affine hyperplanes coeffs . x = value."""
        if self.is_empty:
            return self
        extra = []
        for coeffs, value in equalities:
            row = (-Fraction(value),) + _frac_vector(coeffs)
            extra.append(primitive_vector(row))
        return RationalPolytope.from_inequalities(
            self.inequalities, tuple(self.equations) + tuple(extra),
            self.ambient)

    def volume(self) -> Fraction:
        """Euclidean volume in the ambient dimension; 0 when not full."""
        if self.is_empty or self.dim() < self.ambient:
            return Fraction(0)
        return _pyramid_volume(list(self.vertices), self.ambient)

    def lattice_volume(self) -> Fraction:
        """Volume normalized to the saturated lattice of the affine span.

        A single point has lattice volume 1 by convention.
        """
        if self.is_empty:
            return Fraction(0)
        coords, d = self._lattice_coordinates()
        if d == 0:
            return Fraction(1)
        return _pyramid_volume(coords, d)

    def _lattice_coordinates(self) -> tuple[list[Vector], int]:
        """Vertices rewritten in a basis of the saturated direction lattice."""
        origin = self.vertices[0]
        directions = []
        for v in self.vertices[1:]:
            diff = primitive_vector(tuple(a - b for a, b in zip(v, origin)))
            if any(diff):
                directions.append(diff)
        if not directions:
            return [()] * len(self.vertices), 0
        orthogonal = kernel_lattice_basis(directions, self.ambient)
        basis = kernel_lattice_basis(orthogonal, self.ambient)
        d = len(basis)
        coords = []
        for v in self.vertices:
            rhs = [a - b for a, b in zip(v, origin)]
            rows = [[Fraction(basis[j][i]) for j in range(d)]
                    for i in range(self.ambient)]
            sol = solve_dense(rows, [Fraction(x) for x in rhs])
            if sol is None:
                raise EngineError("vertex fell outside its own affine span")
            coords.append(tuple(sol))
        return coords, d

    def lattice_points(self, denominator: int = 1) -> list[Vector]:
        """All points of (1/denominator) Z^n inside the polytope, sorted."""
        if denominator < 1:
            raise ValidationError("denominator must be a positive integer")
        if self.is_empty:
            return []
        k = denominator
        ranges = []
        total = 1
        for i in range(self.ambient):
            values = [v[i] * k for v in self.vertices]
            lo = min(values)
            hi = max(values)
            lo_int = int(lo) if lo.denominator == 1 else int(lo) + (lo > 0)
            hi_int = int(hi) if hi.denominator == 1 else int(hi) - (hi < 0)
            if hi < lo_int:
                return []
            span = hi_int - lo_int + 1
            total *= max(span, 0)
            if total > _LATTICE_POINT_GUARD:
                raise ValidationError(
                    "lattice point enumeration exceeds the supported size")
            ranges.append(range(lo_int, hi_int + 1))
        points = []
        for combo in itertools.product(*ranges):
            p = tuple(Fraction(c, k) for c in combo)
            if self.contains(p):
                points.append(p)
        points.sort()
        return points

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.ambient == other.ambient and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.ambient, self.vertices))

    def __repr__(self) -> str:
        return (f"RationalPolytope(ambient={self.ambient}, "
                f"vertices={len(self.vertices)})")


def _pyramid_volume(vertices: list[Vector], d: int) -> Fraction:
    """Lattice-normalized volume of a full-dimensional polytope in Q^d."""
    if d == 0:
        return Fraction(1)
    if d == 1:
        values = [v[0] for v in vertices]
        return max(values) - min(values)
    homog = [primitive_vector((Fraction(1),) + v) for v in vertices]
    ineqs, eqs = _hrep_from_rays(homog, d + 1)
    if eqs:
        raise EngineError("volume recursion hit a degenerate facet")
    apex = vertices[0]
    total = Fraction(0)
    for row in ineqs:
        height = row[0] + _idot(row[1:], apex)
        if height == 0:
            continue
        facet = [v for v in vertices if row[0] + _idot(row[1:], v) == 0]
        basis = kernel_lattice_basis([row[1:]], d)
        origin = facet[0]
        coords = []
        for v in facet:
            rows = [[Fraction(basis[j][i]) for j in range(d - 1)]
                    for i in range(d)]
            rhs = [Fraction(a - b) for a, b in zip(v, origin)]
            sol = solve_dense(rows, rhs)
            if sol is None:
                raise EngineError("facet vertex left the facet hyperplane")
            coords.append(tuple(sol))
        total += height * _pyramid_volume(coords, d - 1)
    return Fraction(total, d)


def hull(points: Sequence[Sequence],
         ambient: int | None = None) -> RationalPolytope:
    return RationalPolytope.from_points(points, ambient)


def extreme_rays(vectors: Sequence[Sequence],
                 ambient: int | None = None) -> list[tuple[int, ...]]:
    """Extreme rays of the cone the vectors generate, as primitive vectors.

    Raises NotPointed when the cone contains a line: extreme rays are only
    well defined for pointed cones.
    """
    cone = RationalCone.from_generators(vectors, ambient)
    if not cone.is_pointed:
        raise NotPointed("cone contains a line; extreme rays are undefined")
    return list(cone.rays)


def volume(polytope: RationalPolytope) -> Fraction:
    return polytope.volume()


def slice_polytope(polytope: RationalPolytope,
                   equalities: Sequence[tuple[Sequence, object]]
                   ) -> RationalPolytope:
    return polytope.sliced(equalities)


def lattice_points(polytope: RationalPolytope,
                   denominator: int = 1) -> list[Vector]:
    return polytope.lattice_points(denominator)


def minkowski_sum(first: RationalPolytope,
                  second: RationalPolytope) -> RationalPolytope:
    if first.ambient != second.ambient:
        raise ValidationError("Minkowski sum needs matching ambient dimensions")
    if first.is_empty or second.is_empty:
        return RationalPolytope.empty(first.ambient)
    sums = [tuple(a + b for a, b in zip(u, v))
            for u in first.vertices for v in second.vertices]
    return RationalPolytope.from_points(sums, first.ambient)


# ----- JSON payloads ---------------------------------------------------------
#
# All integers travel as decimal strings so arbitrary precision survives any
# JSON reader, and rationals as [numerator, denominator] string pairs.


def _pair(value) -> list[str]:
    q = Fraction(value)
    return [str(q.numerator), str(q.denominator)]


def _int_row(row: Sequence) -> list[str]:
    return [str(int(v)) for v in row]


def _parse_pair(item) -> Fraction:
    num, den = item
    return Fraction(int(num), int(den))


def _parse_int_row(row) -> tuple[int, ...]:
    return tuple(int(v) for v in row)


def polytope_payload(polytope: RationalPolytope) -> dict:
    return {
        "ambient": polytope.ambient,
        "vertices": [[_pair(c) for c in vertex]
                     for vertex in polytope.vertices],
        "inequalities": [_int_row(row) for row in polytope.inequalities],
        "equations": [_int_row(row) for row in polytope.equations],
    }


def polytope_from_payload(payload: dict) -> RationalPolytope:
    """Rebuild a polytope from its payload and re-validate both halves.

    The vertex list is authoritative; the stored inequality and equation
    rows must reproduce themselves from it exactly.
    """
    try:
        ambient = int(payload["ambient"])
        points = [tuple(_parse_pair(c) for c in vertex)
                  for vertex in payload["vertices"]]
        inequalities = tuple(_parse_int_row(row)
                             for row in payload["inequalities"])
        equations = tuple(_parse_int_row(row)
                          for row in payload["equations"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed polytope payload: {exc}") from exc
    polytope = RationalPolytope.empty(ambient) if not points \
        else RationalPolytope.from_points(points, ambient)
    if polytope.inequalities != inequalities \
            or polytope.equations != equations:
        raise VerificationFailure(
            "polytope payload fails its facet round-trip")
    return polytope


def cone_payload(cone: RationalCone) -> dict:
    return {
        "ambient": cone.ambient,
        "rays": [_int_row(ray) for ray in cone.rays],
        "lineality": [_int_row(row) for row in cone.lineality],
    }


def cone_from_payload(payload: dict) -> RationalCone:
    try:
        ambient = int(payload["ambient"])
        rays = [_parse_int_row(row) for row in payload["rays"]]
        lineality = [_parse_int_row(row) for row in payload["lineality"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed cone payload: {exc}") from exc
    generators = list(rays) + list(lineality) \
        + [tuple(-v for v in row) for row in lineality]
    cone = RationalCone.from_generators(generators, ambient=ambient)
    if cone.rays != tuple(rays) or cone.lineality != tuple(lineality):
        raise VerificationFailure("cone payload fails its ray round-trip")
    return cone
