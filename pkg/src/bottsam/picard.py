"""Picard lattice of a Bott-Samelson variety.

Integer divisor classes carry one of two basis tags: the effective basis of
slot boundary divisors, whose nonnegative orthant is the effective cone, and
the canonical basis of per-slot unit bundles, whose nonnegative orthant is
the nef cone.  The change of basis is never hard-coded; it is solved from
vanishing orders on the boundary divisors and then verified against
dimension probes that do not use the matrix themselves.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from typing import Sequence

from ._kernel import determinant, invert_dense
from .errors import (
    Ambiguous,
    NoMatch,
    NotNef,
    ValidationError,
    VerificationFailure,
)
from .rootsys import (
    CartanDatum,
    Character,
    Weight,
    WeylWord,
    bs_character,
    demazure_operator,
)
from .sections import GroupModel, SectionEngine


class Basis(enum.Enum):
    """Which integer basis a divisor class is written in."""

    EFFECTIVE = "eff"
    CANONICAL = "can"


class DivisorClass:
    """An integer divisor class together with its basis tag."""

    __slots__ = ("coords", "basis")

    def __init__(self, coords: Sequence[int], basis: Basis):
        self.coords = tuple(int(c) for c in coords)
        if not isinstance(basis, Basis):
            raise ValidationError("basis must be a Basis value")
        self.basis = basis

    def __len__(self) -> int:
        return len(self.coords)

    def scaled(self, factor: int) -> "DivisorClass":
        return DivisorClass(tuple(factor * c for c in self.coords), self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.coords == other.coords and self.basis is other.basis

    def __hash__(self) -> int:
        return hash((self.coords, self.basis))

    def __repr__(self) -> str:
        return f"DivisorClass({self.coords}, {self.basis})"


def parse_divisor(text: str, n: int) -> DivisorClass:
    """Parse "eff:1,0,2" or "can:1,1" into a DivisorClass of length n."""
    head, sep, tail = text.partition(":")
    if not sep:
        raise ValidationError(
            f"divisor {text!r} must look like 'eff:1,0' or 'can:1,0'")
    try:
        basis = Basis(head.strip())
    except ValueError:
        raise ValidationError(
            f"unknown basis prefix {head!r}; use 'eff' or 'can'") from None
    try:
        coords = tuple(int(part) for part in tail.split(","))
    except ValueError:
        raise ValidationError(
            f"divisor coordinates {tail!r} must be integers") from None
    if len(coords) != n:
        raise ValidationError(
            f"divisor has {len(coords)} coordinates but the word has {n}")
    return DivisorClass(coords, basis)


def format_divisor(divisor: DivisorClass) -> str:
    return divisor.basis.value + ":" + ",".join(
        str(c) for c in divisor.coords)


class BasisChange:
    """Integer change of basis from effective to canonical coordinates."""

    __slots__ = ("matrix", "inverse")

    def __init__(self, matrix: Sequence[Sequence[int]]):
        self.matrix = tuple(tuple(int(v) for v in row) for row in matrix)
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValidationError("basis change matrix must be square")
        inverse = invert_dense(
            [[Fraction(v) for v in row] for row in self.matrix])
        if inverse is None:
            raise ValidationError("basis change matrix is singular")
        if any(v.denominator != 1 for row in inverse for v in row):
            raise ValidationError(
                "basis change matrix is not invertible over the integers")
        self.inverse = tuple(tuple(int(v) for v in row) for row in inverse)

    def _apply(self, matrix, coords) -> tuple[int, ...]:
        return tuple(sum(row[j] * coords[j] for j in range(len(coords)))
                     for row in matrix)

    def to_canonical(self, divisor: DivisorClass) -> DivisorClass:
        if divisor.basis is Basis.CANONICAL:
            return divisor
        return DivisorClass(self._apply(self.matrix, divisor.coords),
                            Basis.CANONICAL)

    def to_effective(self, divisor: DivisorClass) -> DivisorClass:
        if divisor.basis is Basis.EFFECTIVE:
            return divisor
        return DivisorClass(self._apply(self.inverse, divisor.coords),
                            Basis.EFFECTIVE)


def compute_basis_change(engine: SectionEngine,
                         probe_bound: int | None = None) -> BasisChange:
    """Solve and verify the effective-to-canonical basis change.

    The candidate matrix comes from boundary vanishing orders.  Verification
    never trusts it: for probe vectors m in effective coordinates, the
    chart-gluing dimension of m (computed without the matrix) must match
    the character dimension of M m when M m is nef, must match the glue
    dimension of M m in canonical form otherwise, and must vanish when m
    leaves the effective orthant.
    """
    raw = engine.effective_to_canonical_matrix()
    n = engine.n
    if any(Fraction(v).denominator != 1 for row in raw for v in row):
        raise VerificationFailure(
            f"order matrices give a non-integral basis change: {raw}")
    matrix = tuple(tuple(int(v) for v in row) for row in raw)
    for j in range(n):
        if matrix[j][j] != 1:
            raise VerificationFailure(
                f"basis change has diagonal entry {matrix[j][j]} != 1 "
                f"at column {j + 1}")
    det = determinant([[Fraction(v) for v in row] for row in matrix])
    if det not in (1, -1):
        raise VerificationFailure(
            f"basis change has determinant {det}; expected a unimodular "
            "matrix")
    change = BasisChange(matrix)
    if probe_bound is None:
        probe_bound = 3 if n <= 2 else 1
    for m in itertools.product(range(-probe_bound, probe_bound + 1),
                               repeat=n):
        mc = change._apply(matrix, m)
        if min(m) < 0:
            for route, got in (("effective", engine.glue_dimension(eff=m)),
                               ("canonical", engine.glue_dimension(can=mc))):
                if got != 0:
                    raise VerificationFailure(
                        f"probe {m} lies outside the effective orthant but "
                        f"the {route} glue dimension is {got}")
        elif min(mc) >= 0:
            expected = bs_character(engine.datum, engine.word,
                                    mc).dimension()
            got = engine.glue_dimension(eff=m)
            if got != expected:
                raise VerificationFailure(
                    f"probe {m}: glue dimension {got} != character "
                    f"dimension {expected} at canonical image {mc}")
        else:
            got_eff = engine.glue_dimension(eff=m)
            got_can = engine.glue_dimension(can=mc)
            if got_eff != got_can:
                raise VerificationFailure(
                    f"probe {m}: effective route gives {got_eff} but the "
                    f"canonical image {mc} gives {got_can}")
    return change


class PicardLattice:
    """Divisor-class arithmetic for one reduced word.

    The verified basis change is computed lazily, on the first operation
    that actually converts between bases; nef tests, volumes and pullbacks
    of canonical classes never trigger the probe run.
    """

    def __init__(self, datum: CartanDatum, word,
                 model: GroupModel | None = None,
                 engine: SectionEngine | None = None,
                 probe_bound: int | None = None):
        self.engine = engine if engine is not None \
            else SectionEngine(datum, word, model)
        self.datum = self.engine.datum
        self.word = self.engine.word
        self.n = self.engine.n
        self._probe_bound = probe_bound
        self._change: BasisChange | None = None

    @property
    def change(self) -> BasisChange:
        if self._change is None:
            self._change = compute_basis_change(self.engine,
                                                self._probe_bound)
        return self._change

    def _check(self, divisor: DivisorClass) -> DivisorClass:
        if len(divisor) != self.n:
            raise ValidationError(
                f"divisor has {len(divisor)} coordinates but the word "
                f"has {self.n}")
        return divisor

    def canonical(self, divisor: DivisorClass) -> DivisorClass:
        divisor = self._check(divisor)
        if divisor.basis is Basis.CANONICAL:
            return divisor
        return self.change.to_canonical(divisor)

    def effective(self, divisor: DivisorClass) -> DivisorClass:
        divisor = self._check(divisor)
        if divisor.basis is Basis.EFFECTIVE:
            return divisor
        return self.change.to_effective(divisor)

    def is_effective(self, divisor: DivisorClass) -> bool:
        return min(self.effective(divisor).coords, default=0) >= 0

    def is_nef(self, divisor: DivisorClass) -> bool:
        return min(self.canonical(divisor).coords, default=0) >= 0

    def section_basis(self, divisor: DivisorClass):
        """Section space in the basis-tag route the class arrived in."""
        divisor = self._check(divisor)
        if divisor.basis is Basis.CANONICAL:
            return self.engine.section_basis(can=divisor.coords)
        return self.engine.section_basis(eff=divisor.coords)

    def section_dimension(self, divisor: DivisorClass) -> int:
        divisor = self._check(divisor)
        if divisor.basis is Basis.CANONICAL \
                and min(divisor.coords, default=0) >= 0:
            return bs_character(self.datum, self.word,
                                divisor.coords).dimension()
        return len(self.section_basis(divisor))

    def volume(self, divisor: DivisorClass) -> Fraction:
        """Exact degree of a nef class.

        Interpolates k -> dim H^0(kD) at k = 0..n and returns n! times the
        leading coefficient, with one oversample at k = n+1 guarding the
        polynomiality assumption.
        """
        coords = self.canonical(divisor).coords
        if min(coords, default=0) < 0:
            raise NotNef(f"class with canonical coordinates {coords} "
                         "is not nef")
        values = [
            bs_character(self.datum, self.word,
                         tuple(k * c for c in coords)).dimension()
            for k in range(self.n + 2)
        ]
        for _ in range(self.n):
            values = [b - a for a, b in zip(values, values[1:])]
        if values[0] != values[1]:
            raise VerificationFailure(
                "section dimensions of a nef class failed the degree-n "
                "polynomial oversample")
        return Fraction(values[0])

    def pullback_from_flag_variety(self, highest: Weight) -> DivisorClass:
        """The canonical class whose sections match a Demazure module.

        Searches nonnegative canonical classes whose character equals the
        Demazure character of the given dominant weight along the word.
        """
        if len(highest.coords) != self.datum.rank:
            raise ValidationError(
                f"weight has {len(highest.coords)} coordinates; "
                f"the root datum has rank {self.datum.rank}")
        if not highest.is_dominant():
            raise ValidationError(
                f"weight {highest} is not dominant; pullbacks need a "
                "dominant weight")
        target = Character.monomial(highest)
        for i in reversed(self.word.indices):
            target = demazure_operator(self.datum, i, target)
        goal = target.dimension()
        matches: list[tuple[int, ...]] = []

        def search(prefix: tuple[int, ...]) -> None:
            if len(prefix) == self.n:
                if bs_character(self.datum, self.word, prefix) == target:
                    matches.append(prefix)
                return
            value = 0
            while True:
                padded = prefix + (value,) + (0,) * (self.n - len(prefix) - 1)
                if bs_character(self.datum, self.word,
                                padded).dimension() > goal:
                    return
                search(prefix + (value,))
                value += 1

        search(())
        if not matches:
            raise NoMatch(
                f"no nonnegative canonical class matches the Demazure "
                f"character of {highest}")
        if len(matches) > 1:
            raise Ambiguous(
                f"classes {matches} all match the Demazure character "
                f"of {highest}")
        return DivisorClass(matches[0], Basis.CANONICAL)
