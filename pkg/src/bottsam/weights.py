"""Torus weights over the valuation semigroup and their asymptotics.

Every section in an adapted basis carries a torus weight; recording it next
to the valuation gives a weighted semigroup on which the weight map must be
well defined and, in all computed cases, affine in (valuation, level).
Slicing the Okounkov body along a fiber of that map gives the polytope
whose lattice-normalized volume governs the growth of weight-space
dimensions.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import (
    NonIntegralAll,
    NotAffine,
    NotInterior,
    ValidationError,
    VerificationFailure,
)
from .okounkov import OkounkovEngine
from .picard import DivisorClass, PicardLattice
from .polyhedra import RationalPolytope
from .rootsys import Weight, bs_character
from .sections import SectionEngine
from .valuation import adapted_basis, valuation


class WeightedSemigroup:
    """Valuation points labeled with torus weights, for one class."""

    __slots__ = ("divisor", "levels", "triples", "weight_dim")

    def __init__(self, divisor: DivisorClass, levels: int,
                 triples: Sequence[tuple], weight_dim: int):
        self.divisor = divisor
        self.levels = levels
        self.triples = tuple(triples)
        self.weight_dim = weight_dim


def _labeled_basis(engine: SectionEngine, mc: tuple[int, ...]):
    if min(mc) >= 0:
        return engine.section_basis(can=mc)
    if engine.is_multiplicity_free():
        return engine.monomial_section_basis(can=mc)
    return engine.section_basis_glue(can=mc)


def _coerce_projection(torus_projection, rank: int):
    if torus_projection is None:
        return None
    rows = tuple(tuple(int(v) for v in row) for row in torus_projection)
    if not rows or any(len(row) != rank for row in rows):
        raise ValidationError(
            f"torus projection rows must have length {rank}")
    return rows


def _project(weight: Weight, projection) -> tuple:
    if projection is None:
        return weight.coords
    return tuple(sum(row[j] * weight.coords[j] for j in range(len(row)))
                 for row in projection)


def weighted_semigroup(lattice: PicardLattice, divisor: DivisorClass,
                       levels: int,
                       torus_projection=None) -> WeightedSemigroup:
    """Collect (valuation, level, weight) triples for levels 1..levels.

    Raises VerificationFailure if one (valuation, level) pair ever carries
    two different weights; that well-definedness is the content of the
    weight map existing at all.
    """
    if levels < 1:
        raise ValidationError("levels must be a positive integer")
    projection = _coerce_projection(torus_projection, lattice.datum.rank)
    seen: dict[tuple, tuple] = {}
    triples = []
    for k in range(1, levels + 1):
        mc = lattice.canonical(divisor.scaled(k)).coords
        for section in adapted_basis(_labeled_basis(lattice.engine, mc)):
            if section.weight is None:
                raise ValidationError(
                    "sections must carry torus weights; use the canonical "
                    "route")
            nu = valuation(section)
            mu = _project(section.weight, projection)
            prior = seen.get((nu, k))
            if prior is not None and prior != mu:
                raise VerificationFailure(
                    f"valuation {nu} at level {k} carries two weights "
                    f"{prior} and {mu}; the weight map is ill defined")
            seen[(nu, k)] = mu
            triples.append((nu, k, mu))
    width = len(triples[0][2]) if triples else \
        (len(projection) if projection else lattice.datum.rank)
    return WeightedSemigroup(divisor, levels, triples, width)


class WeightProjection:
    """Exact affine weight map mu = C nu + k b on the graded semigroup."""

    __slots__ = ("matrix", "level_part")

    def __init__(self, matrix, level_part):
        self.matrix = tuple(tuple(Fraction(v) for v in row)
                            for row in matrix)
        self.level_part = tuple(Fraction(v) for v in level_part)

    def apply(self, nu: Sequence[int], level: int) -> tuple[Fraction, ...]:
        return tuple(
            sum(row[j] * nu[j] for j in range(len(nu)))
            + self.level_part[i] * level
            for i, row in enumerate(self.matrix))


def _solve_exact(rows: list[list[Fraction]],
                 rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve an exact, possibly overdetermined system; free unknowns get 0.

    Returns None when the system is inconsistent.
    """
    width = len(rows[0]) if rows else 0
    aug = [list(row) + [value] for row, value in zip(rows, rhs)]
    pivots: list[tuple[int, int]] = []
    row_at = 0
    for col in range(width):
        pivot = next((r for r in range(row_at, len(aug)) if aug[r][col]),
                     None)
        if pivot is None:
            continue
        aug[row_at], aug[pivot] = aug[pivot], aug[row_at]
        scale = aug[row_at][col]
        aug[row_at] = [v / scale for v in aug[row_at]]
        for r in range(len(aug)):
            if r != row_at and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * p
                          for v, p in zip(aug[r], aug[row_at])]
        pivots.append((row_at, col))
        row_at += 1
    for r in range(row_at, len(aug)):
        if aug[r][width]:
            return None
    solution = [Fraction(0)] * width
    for r, col in pivots:
        solution[col] = aug[r][width]
    return solution


def weight_projection(semigroup: WeightedSemigroup) -> WeightProjection:
    """Fit the unique exact affine map (nu, k) -> mu through all triples.

    Degenerate directions that the data does not determine get coefficient
    zero; an inconsistent fit raises NotAffine.
    """
    if not semigroup.triples:
        raise ValidationError("weighted semigroup is empty")
    n = len(semigroup.triples[0][0])
    rows = [[Fraction(v) for v in nu] + [Fraction(k)]
            for nu, k, _ in semigroup.triples]
    matrix = []
    level_part = []
    for i in range(semigroup.weight_dim):
        rhs = [Fraction(mu[i]) for _, _, mu in semigroup.triples]
        fit = _solve_exact(rows, rhs)
        if fit is None:
            raise NotAffine(
                f"weight coordinate {i + 1} admits no exact affine fit "
                "in (valuation, level)")
        matrix.append(fit[:n])
        level_part.append(fit[n])
    return WeightProjection(matrix, level_part)


def _weight_polytope(semigroup: WeightedSemigroup) -> RationalPolytope:
    points = [tuple(Fraction(v, k) for v in mu)
              for _, k, mu in semigroup.triples]
    return RationalPolytope.from_points(points,
                                        ambient=semigroup.weight_dim)


def _in_relative_interior(polytope: RationalPolytope,
                          point: Sequence[Fraction]) -> bool:
    if polytope.is_empty:
        return False
    for row in polytope.equations:
        if row[0] + sum(a * x for a, x in zip(row[1:], point)) != 0:
            return False
    for row in polytope.inequalities:
        if row[0] + sum(a * x for a, x in zip(row[1:], point)) <= 0:
            return False
    return True


def slice_lattice_count(body_polytope: RationalPolytope,
                        projection: WeightProjection,
                        mu: Sequence[Fraction], level: int) -> int:
    """Count (1/level)-lattice points of the weight fiber inside a body."""
    slice_polytope = body_polytope.sliced(_fiber_equalities(projection, mu))
    return len(slice_polytope.lattice_points(level))


def _fiber_equalities(projection: WeightProjection,
                      mu: Sequence[Fraction]):
    return [
        (row, Fraction(mu[i]) - projection.level_part[i])
        for i, row in enumerate(projection.matrix)
    ]


def multiplicity_asymptotics(lattice: PicardLattice, divisor: DivisorClass,
                             mu, levels: int,
                             torus_projection=None,
                             require_interior: bool = True,
                             okounkov: OkounkovEngine | None = None) -> dict:
    """Weight-space dimensions against the sliced Okounkov body.

    Reports dim W_{k mu} for each level with k mu integral, the slice
    polytope of the weight fiber with its lattice-normalized volume, and
    the ratio sequence dim / k^(d - r) where d is the body dimension and r
    the weight-polytope dimension.  With require_interior=False, boundary
    weights are reported instead of rejected.
    """
    if levels < 1:
        raise ValidationError("levels must be a positive integer")
    coords = mu.coords if isinstance(mu, Weight) else tuple(mu)
    mu_coords = tuple(Fraction(v) for v in coords)
    projection_rows = _coerce_projection(torus_projection,
                                         lattice.datum.rank)
    expected_dim = len(projection_rows) if projection_rows \
        else lattice.datum.rank
    if len(mu_coords) != expected_dim:
        raise ValidationError(
            f"weight has {len(mu_coords)} coordinates, expected "
            f"{expected_dim}")
    semigroup = weighted_semigroup(lattice, divisor, levels,
                                   torus_projection)
    weight_polytope = _weight_polytope(semigroup)
    interior = _in_relative_interior(weight_polytope, mu_coords)
    if require_interior and not interior:
        raise NotInterior(
            f"weight {mu_coords} is not in the relative interior of the "
            "weight polytope")
    projection = weight_projection(semigroup)
    engine = okounkov if okounkov is not None else OkounkovEngine(lattice)
    body = engine.body(divisor, levels)
    d = body.polytope.dim()
    r = weight_polytope.dim()
    step = lcm(*(v.denominator for v in mu_coords)) if mu_coords else 1
    usable = [k for k in range(1, levels + 1) if k % step == 0]
    if not usable:
        raise NonIntegralAll(
            f"no level up to {levels} makes {mu_coords} integral")
    rows = []
    for k in usable:
        mc = lattice.canonical(divisor.scaled(k)).coords
        character = bs_character(lattice.datum, lattice.word, mc)
        target = tuple(k * v for v in mu_coords)
        if projection_rows is None:
            dimension = character.multiplicity(Weight(target))
        else:
            dimension = sum(
                mult for weight, mult in character.terms.items()
                if _project(weight, projection_rows) == target)
        ratio = Fraction(dimension, k ** (d - r))
        rows.append({"level": k, "dimension": dimension, "ratio": ratio})
    slice_polytope = body.polytope.sliced(
        _fiber_equalities(projection, mu_coords))
    slice_volume = Fraction(0) if slice_polytope.is_empty \
        else slice_polytope.lattice_volume()
    return {
        "levels": rows,
        "slice_vertices": slice_polytope.vertices,
        "slice_volume": slice_volume,
        "body_dimension": d,
        "weight_dimension": r,
        "codimension": d - r,
        "interior": interior,
    }
