"""Section spaces of line bundles on Bott-Samelson varieties.

The variety for a reduced word is covered by 2^n affine charts, one for each
subset of slots where the defining P^1-bundle coordinate is inverted.  Every
chart is computed symbolically from exact matrices of the fundamental
representations: chart coordinates x give the open-cell coordinates t as
ratios of matrix pairings, and each slot contributes a polynomial factor that
trivializes the corresponding line bundle on that chart.

Section spaces are built two independent ways and cross-checked by the tests:

  - section_basis_nef multiplies out per-slot generator sections and certifies
    the span against the Demazure character dimension;
  - section_basis_glue solves exact regularity (divisibility) conditions on
    every chart inside a growing degree box, with a stability certificate.
"""

from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from importlib import resources
from math import factorial, gcd
from typing import Iterable, Sequence

from ._kernel import invert_dense, nullspace, solve_dense
from ._poly import Mono, Polynomial
from .errors import (
    BoxTooSmall,
    EngineError,
    SpanDeficiency,
    Unstable,
    ValidationError,
)
from .polyhedra import RationalPolytope
from .rootsys import (
    CartanDatum,
    Weight,
    WeylWord,
    bs_character,
    is_reduced,
    simple_reflection,
)

_BOX_CAP = 64
_CANDIDATE_GUARD = 400_000
_WITNESS_GUARD = 200_000


class FundamentalRep:
    """One fundamental representation in an exact integral weight basis.

    The lowering and raising actions are stored as (to, from, coeff) triples
    per simple index.  Construction validates the weight shifts and the
    commutator [e_j, f_j] = h_j, so malformed data files fail loudly.
    """

    __slots__ = ("dim", "weights", "highest", "lowering", "raising")

    def __init__(self, datum: CartanDatum, fundamental: int,
                 weights: Sequence, highest: int,
                 lowering: dict[int, tuple], raising: dict[int, tuple]):
        self.weights = tuple(w if isinstance(w, Weight) else Weight(w)
                             for w in weights)
        self.dim = len(self.weights)
        self.highest = int(highest)
        if not 0 <= self.highest < self.dim:
            raise ValidationError("highest-weight index out of range")
        if self.weights[self.highest] != datum.fundamental_weight(fundamental):
            raise ValidationError(
                f"highest weight does not match fundamental weight {fundamental}")
        self.lowering = {j: tuple(sorted(lowering.get(j, ())))
                         for j in range(1, datum.rank + 1)}
        self.raising = {j: tuple(sorted(raising.get(j, ())))
                        for j in range(1, datum.rank + 1)}
        for j in range(1, datum.rank + 1):
            alpha = datum.simple_root(j)
            for to, frm, coeff in self.lowering[j]:
                if not coeff or self.weights[to] != self.weights[frm] - alpha:
                    raise ValidationError(
                        f"lowering action for index {j} breaks weights")
            for to, frm, coeff in self.raising[j]:
                if not coeff or self.weights[to] != self.weights[frm] + alpha:
                    raise ValidationError(
                        f"raising action for index {j} breaks weights")
            self._check_commutator(j)

    def _check_commutator(self, j: int) -> None:
        e = self.raising_matrix(j)
        f = self.lowering_matrix(j)
        d = self.dim
        for r in range(d):
            for c in range(d):
                ef = sum(e[r][k] * f[k][c] for k in range(d))
                fe = sum(f[r][k] * e[k][c] for k in range(d))
                expect = self.weights[r][j - 1] if r == c else 0
                if ef - fe != expect:
                    raise ValidationError(
                        f"[e_{j}, f_{j}] is not the coweight action; "
                        "representation data is inconsistent")

    def _dense(self, triples) -> list[list[int]]:
        mat = [[0] * self.dim for _ in range(self.dim)]
        for to, frm, coeff in triples:
            mat[to][frm] = coeff
        return mat

    def lowering_matrix(self, j: int) -> list[list[int]]:
        return self._dense(self.lowering[j])

    def raising_matrix(self, j: int) -> list[list[int]]:
        return self._dense(self.raising[j])

    def __repr__(self) -> str:
        return f"FundamentalRep(dim={self.dim})"


class GroupModel:
    """Cartan datum plus the fundamental representations the engine needs."""

    __slots__ = ("datum", "reps")

    def __init__(self, datum: CartanDatum, reps: dict[int, FundamentalRep]):
        self.datum = datum
        self.reps = dict(reps)

    def rep(self, i: int) -> FundamentalRep:
        try:
            return self.reps[i]
        except KeyError:
            raise ValidationError(
                f"group model has no representation for fundamental weight {i}"
            ) from None

    @classmethod
    def type_a(cls, rank: int) -> "GroupModel":
        """Exterior powers of the defining representation of SL(rank+1)."""
        datum = CartanDatum.from_type(f"A{rank}")
        reps: dict[int, FundamentalRep] = {}
        for k in range(1, rank + 1):
            subsets = sorted(itertools.combinations(range(1, rank + 2), k))
            index = {s: i for i, s in enumerate(subsets)}
            weights = [
                tuple((1 if i in s else 0) - (1 if i + 1 in s else 0)
                      for i in range(1, rank + 1))
                for s in subsets
            ]
            lowering: dict[int, list] = {j: [] for j in range(1, rank + 1)}
            raising: dict[int, list] = {j: [] for j in range(1, rank + 1)}
            for s in subsets:
                for j in range(1, rank + 1):
                    if j in s and j + 1 not in s:
                        t = tuple(sorted(set(s) - {j} | {j + 1}))
                        lowering[j].append((index[t], index[s], 1))
                    if j + 1 in s and j not in s:
                        t = tuple(sorted(set(s) - {j + 1} | {j}))
                        raising[j].append((index[t], index[s], 1))
            reps[k] = FundamentalRep(
                datum, k, weights, index[tuple(range(1, k + 1))],
                {j: tuple(v) for j, v in lowering.items()},
                {j: tuple(v) for j, v in raising.items()})
        return cls(datum, reps)

    @classmethod
    def from_payload(cls, data: dict) -> "GroupModel":
        try:
            datum = CartanDatum(data["cartan_matrix"])

            def actions(block, key):
                return {int(j): tuple((int(t), int(f), int(c))
                                      for t, f, c in trips)
                        for j, trips in block[key].items()}

            reps = {}
            for block in data["representations"]:
                fundamental = int(block["fundamental"])
                reps[fundamental] = FundamentalRep(
                    datum, fundamental, block["weights"], block["highest"],
                    actions(block, "lowering"), actions(block, "raising"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(
                f"malformed representation data: {exc}") from exc
        return cls(datum, reps)

    @classmethod
    def from_file(cls, path: str) -> "GroupModel":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(
                f"cannot read representation data from {path}: {exc}"
            ) from exc
        return cls.from_payload(data)

    @classmethod
    def bundled(cls, name: str) -> "GroupModel":
        try:
            text = resources.files("bottsam.repdata").joinpath(
                f"{name}.json").read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(
                f"no bundled representation data named {name}") from exc
        return cls.from_payload(json.loads(text))

    @classmethod
    def resolve(cls, datum: CartanDatum) -> "GroupModel":
        """Pick a built-in model matching the Cartan matrix."""
        if datum.matrix == CartanDatum.from_type(f"A{datum.rank}").matrix:
            return cls.type_a(datum.rank)
        if (datum.rank == 2
                and datum.matrix == CartanDatum.from_type("B2").matrix):
            return cls.bundled("B2")
        raise ValidationError(
            "no built-in weight-basis model for this Cartan matrix; "
            "load one from a representation data file")


class SectionPoly:
    """A section written as a polynomial in the open-cell coordinates.

    multidegree is the canonical-basis multidegree of the bundle when known;
    weight is the torus weight of the section when known.  Glue output on the
    effective route leaves both unset on purpose, so that route stays fully
    independent of the basis-change matrix.
    """

    __slots__ = ("poly", "multidegree", "weight")

    def __init__(self, poly: Polynomial,
                 multidegree: tuple[int, ...] | None = None,
                 weight: Weight | None = None):
        self.poly = poly
        self.multidegree = multidegree
        self.weight = weight

    def __bool__(self) -> bool:
        return bool(self.poly)

    def multiplied(self, other: "SectionPoly") -> "SectionPoly":
        degree = None
        if self.multidegree is not None and other.multidegree is not None:
            degree = tuple(a + b
                           for a, b in zip(self.multidegree, other.multidegree))
        weight = None
        if self.weight is not None and other.weight is not None:
            weight = self.weight + other.weight
        return SectionPoly(self.poly * other.poly, degree, weight)

    def __repr__(self) -> str:
        return f"SectionPoly({self.poly!r}, multidegree={self.multidegree})"


class _ChartFrame:
    """Symbolic data of one affine chart: t_j as ratios, slot factors, and
    the torus weight carried by each chart coordinate."""

    __slots__ = ("flips", "numerators", "denominators", "slot_factors",
                 "x_weights")

    def __init__(self, flips, numerators, denominators, slot_factors,
                 x_weights):
        self.flips = flips
        self.numerators = numerators
        self.denominators = denominators
        self.slot_factors = slot_factors
        self.x_weights = x_weights


class _IncrementalSpan:
    """Row space with incremental insertion; pivots are minimal keys."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict = {}

    def add(self, row: dict) -> dict | None:
        """Reduce a row against the span; store and return it if independent."""
        row = dict(row)
        while row:
            lead = min(row)
            pivot = self.pivots.get(lead)
            if pivot is None:
                scale = row[lead]
                row = {k: v / scale for k, v in row.items()}
                self.pivots[lead] = row
                return row
            factor = row[lead]
            for k, v in pivot.items():
                s = row.get(k, 0) - factor * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        return None

    def __len__(self) -> int:
        return len(self.pivots)


def _int_matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(rows)]


def _matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        line = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                term = a[i][k] * b[k][j]
                acc = term if acc is None else acc + term
            line.append(acc)
        out.append(line)
    return out


def _exp_nilpotent(action: list[list[int]], t, size: int, const):
    """exp(t * action) for a nilpotent integer matrix, exactly.

    t may be a Fraction or a Polynomial; const builds ring constants.
    """
    result = [[const(1 if i == j else 0) for j in range(size)]
              for i in range(size)]
    power = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for k in range(1, size + 1):
        power = _int_matmul(power, action)
        if not any(any(row) for row in power):
            return result
        scalar = (t ** k) * Fraction(1, factorial(k))
        for i in range(size):
            for j in range(size):
                if power[i][j]:
                    result[i][j] = result[i][j] + scalar * power[i][j]
    raise EngineError("lowering or raising operator is not nilpotent")


def _lift_matrix(matrix, nvars: int):
    return [[Polynomial.constant(nvars, v) if isinstance(v, (int, Fraction))
             else v for v in row] for row in matrix]


def _poly_weight(poly: Polynomial, x_weights: Sequence[Weight]) -> tuple:
    mono = next(iter(poly.terms))
    coords = [0] * len(x_weights[0].coords)
    for exp, w in zip(mono, x_weights):
        if exp:
            for i, c in enumerate(w.coords):
                coords[i] += exp * c
    return tuple(coords)


def _assert_homogeneous(poly: Polynomial, x_weights: Sequence[Weight],
                        what: str) -> None:
    seen = set()
    for mono in poly.terms:
        coords = [0] * len(x_weights[0].coords)
        for exp, w in zip(mono, x_weights):
            if exp:
                for i, c in enumerate(w.coords):
                    coords[i] += exp * c
        seen.add(tuple(coords))
        if len(seen) > 1:
            raise EngineError(
                f"{what} is not torus homogeneous; "
                "representation data or chart conventions are inconsistent")


def _clear_row(row: dict[int, Fraction]) -> dict[int, int]:
    denom = 1
    for v in row.values():
        f = Fraction(v)
        denom = denom * f.denominator // gcd(denom, f.denominator)
    return {k: int(Fraction(v) * denom) for k, v in row.items()}


class SectionEngine:
    """Exact section-space engine for one reduced word."""

    def __init__(self, datum: CartanDatum, word, model: GroupModel | None = None):
        self.datum = datum
        self.word = word if isinstance(word, WeylWord) else WeylWord(word)
        if len(self.word) == 0:
            raise ValidationError("word must be nonempty")
        for i in self.word:
            datum._check_index(i)
        if not is_reduced(datum, self.word):
            raise ValidationError("word is not reduced")
        self.n = len(self.word)
        self.model = model if model is not None else GroupModel.resolve(datum)
        if self.model.datum.matrix != datum.matrix:
            raise ValidationError("group model was built for a different "
                                  "Cartan matrix")
        self._letters = self.word.indices
        self._rep_indices = sorted(set(self._letters))
        self._fidx: dict[int, int] = {}
        for i in self._rep_indices:
            rep = self.model.rep(i)
            hits = [(to, coeff) for to, frm, coeff in rep.lowering[i]
                    if frm == rep.highest]
            if len(hits) != 1 or hits[0][1] != 1:
                raise ValidationError(
                    "the lowering action must send the highest-weight vector "
                    "to a single basis vector with coefficient 1")
            self._fidx[i] = hits[0][0]
        self._charts: dict[tuple[int, ...], _ChartFrame] = {}
        self._bigcell_prefixes: dict[int, list] = {}
        self._slot_polys: dict[int, list[SectionPoly]] = {}
        self._order_matrices: tuple | None = None
        self._chart((0,) * self.n)

    # ----- charts ---------------------------------------------------------

    def _chart(self, flips: tuple[int, ...]) -> _ChartFrame:
        frame = self._charts.get(flips)
        if frame is not None:
            return frame
        n = self.n
        const = lambda c: Polynomial.constant(n, c)
        prefixes: dict[int, list] = {}
        for i in self._rep_indices:
            rep = self.model.rep(i)
            chain = [[[const(1 if r == c else 0) for c in range(rep.dim)]
                      for r in range(rep.dim)]]
            current = chain[0]
            for j, letter in enumerate(self._letters):
                x = Polynomial.variable(n, j)
                if flips[j]:
                    slot = _matmul(
                        _exp_nilpotent(rep.raising_matrix(letter), x,
                                       rep.dim, const),
                        _lift_matrix(self._flip_matrix(rep, letter), n))
                else:
                    slot = _exp_nilpotent(rep.lowering_matrix(letter), x,
                                          rep.dim, const)
                current = _matmul(current, slot)
                chain.append(current)
            prefixes[i] = chain
        x_weights = self._chart_weights(flips)
        numerators, denominators, slot_factors = [], [], []
        for j, letter in enumerate(self._letters):
            rep = self.model.rep(letter)
            hw, fidx = rep.highest, self._fidx[letter]
            now = prefixes[letter][j + 1]
            before = prefixes[letter][j]
            d_now, a_now = now[hw][hw], now[fidx][hw]
            d_prev, a_prev = before[hw][hw], before[fidx][hw]
            num = a_now * d_prev - a_prev * d_now
            den = d_now * d_prev
            if not den:
                raise EngineError(
                    f"chart {flips} is degenerate at slot {j + 1}")
            numerators.append(num)
            denominators.append(den)
            slot_factors.append(d_now)
            for poly, what in ((num, "coordinate numerator"),
                               (den, "coordinate denominator"),
                               (d_now, "slot factor")):
                if poly:
                    _assert_homogeneous(poly, x_weights,
                                        f"{what} at slot {j + 1}")
        frame = _ChartFrame(flips, tuple(numerators), tuple(denominators),
                            tuple(slot_factors), tuple(x_weights))
        if not any(flips):
            one = Polynomial.one(n)
            for j in range(n):
                if (numerators[j] != Polynomial.variable(n, j)
                        or denominators[j] != one or slot_factors[j] != one):
                    raise EngineError(
                        "open-cell chart failed its coordinate self-check")
            self._bigcell_prefixes = prefixes
        self._charts[flips] = frame
        return frame

    def _flip_matrix(self, rep: FundamentalRep, letter: int):
        """Weyl representative exp(f) exp(-e) exp(f) as exact Fractions."""
        f = rep.lowering_matrix(letter)
        e = rep.raising_matrix(letter)
        one = Fraction(1)
        ef = _exp_nilpotent(f, one, rep.dim, Fraction)
        ee = _exp_nilpotent(e, -one, rep.dim, Fraction)
        return _matmul(_matmul(ef, ee), ef)

    def _chart_weights(self, flips: tuple[int, ...]) -> list[Weight]:
        weights = []
        flipped_before: list[int] = []
        for l, letter in enumerate(self._letters):
            w = self.datum.simple_root(letter)
            for jp in reversed(flipped_before):
                w = simple_reflection(self.datum, self._letters[jp], w)
            weights.append(w if flips[l] else w.scaled(-1))
            if flips[l]:
                flipped_before.append(l)
        return weights

    # ----- generator sections ---------------------------------------------

    def slot_polynomials(self, k: int) -> list[SectionPoly]:
        """Sections of the k-th unit canonical bundle from the k-prefix.

        These are the pairings of the open-cell prefix product against every
        dual basis vector of the slot's fundamental representation; zero
        pairings are dropped.
        """
        if not 1 <= k <= self.n:
            raise ValidationError(f"slot index {k} out of range 1..{self.n}")
        cached = self._slot_polys.get(k)
        if cached is not None:
            return cached
        letter = self._letters[k - 1]
        rep = self.model.rep(letter)
        matrix = self._bigcell_prefixes[letter][k]
        unit = tuple(1 if pos == k - 1 else 0 for pos in range(self.n))
        polys = []
        for r in range(rep.dim):
            entry = matrix[r][rep.highest]
            if entry:
                polys.append(SectionPoly(entry, unit, rep.weights[r]))
        self._slot_polys[k] = polys
        return polys

    def cell_polynomial(self, k: int, dual_index: int) -> SectionPoly:
        """Pairing of the k-prefix against one dual basis vector.

        The result may be the zero section; callers test truthiness.
        """
        if not 1 <= k <= self.n:
            raise ValidationError(f"slot index {k} out of range 1..{self.n}")
        letter = self._letters[k - 1]
        rep = self.model.rep(letter)
        if not 0 <= dual_index < rep.dim:
            raise ValidationError("dual index out of range")
        entry = self._bigcell_prefixes[letter][k][dual_index][rep.highest]
        unit = tuple(1 if pos == k - 1 else 0 for pos in range(self.n))
        return SectionPoly(entry, unit, rep.weights[dual_index])

    def boundary_section(self, j: int) -> SectionPoly:
        """The coordinate section t_j, the canonical section of the j-th
        effective-basis bundle.  Its class is deliberately left unlabeled so
        the effective route never depends on the basis change."""
        if not 1 <= j <= self.n:
            raise ValidationError(f"slot index {j} out of range 1..{self.n}")
        return SectionPoly(Polynomial.variable(self.n, j - 1))

    # ----- spanning route --------------------------------------------------

    def section_basis_nef(self, multidegree: Sequence[int]) -> list[SectionPoly]:
        """Independent products of slot sections for a nef multidegree.

        Certifies the span against the Demazure character dimension and
        raises SpanDeficiency when the products do not fill the space.
        """
        m = self._canonical_degree(multidegree)
        if any(v < 0 for v in m):
            raise ValidationError(
                "the spanning route needs a nonnegative canonical multidegree")
        expected = bs_character(self.datum, self.word, m).dimension()
        per_slot = []
        for k in range(1, self.n + 1):
            if m[k - 1] == 0:
                per_slot.append([()])
                continue
            polys = self.slot_polynomials(k)
            per_slot.append(list(
                itertools.combinations_with_replacement(polys, m[k - 1])))
        span = _IncrementalSpan()
        basis: list[SectionPoly] = []
        for choice in itertools.product(*per_slot):
            section = SectionPoly(Polynomial.one(self.n), (0,) * self.n,
                                  self.datum.zero_weight())
            for factor in itertools.chain.from_iterable(choice):
                section = section.multiplied(factor)
            if not section.poly:
                continue
            if span.add(dict(section.poly.terms)) is not None:
                basis.append(section)
                if len(basis) == expected:
                    return basis
        raise SpanDeficiency(
            f"slot products span {len(basis)} of {expected} dimensions "
            f"for multidegree {tuple(m)}")

    # ----- glue route ------------------------------------------------------

    def section_basis_glue(self, can: Sequence[int] | None = None,
                           eff: Sequence[int] | None = None
                           ) -> list[SectionPoly]:
        """Solve chart regularity conditions inside a stable degree box.

        Exactly one of can (canonical multidegree) and eff (effective
        coordinates) must be given.  The box doubles until the dimension
        agrees with the doubled box; past the cap the bundle is reported
        Unstable.
        """
        can, eff = self._route(can, eff)
        if eff is not None and not self.is_multiplicity_free():
            # With a repeated letter a boundary divisor can meet a chart in
            # a non-coordinate hypersurface, so coordinate powers cannot
            # clear its poles; the slot factors can, at these exponents.
            can, eff = self.effective_exponents(eff), None
        box = self._initial_box(can, eff)
        while True:
            try:
                return self._certified_glue(can, eff, box)
            except BoxTooSmall:
                box = tuple(2 * b for b in box)

    def glue_dimension(self, can: Sequence[int] | None = None,
                       eff: Sequence[int] | None = None) -> int:
        return len(self.section_basis_glue(can=can, eff=eff))

    def section_basis(self, can: Sequence[int] | None = None,
                      eff: Sequence[int] | None = None) -> list[SectionPoly]:
        """Spanning route when it applies, glue route otherwise."""
        if can is not None and all(v >= 0 for v in can):
            try:
                return self.section_basis_nef(can)
            except SpanDeficiency:
                return self.section_basis_glue(can=can)
        return self.section_basis_glue(can=can, eff=eff)

    def is_multiplicity_free(self) -> bool:
        """True when no letter repeats, so every torus weight in a section
        space is carried by a single monomial."""
        return len(set(self._letters)) == self.n

    def monomial_section_basis(self, can: Sequence[int] | None = None,
                               eff: Sequence[int] | None = None
                               ) -> list[SectionPoly]:
        """Monomial basis cut out by the boundary order conditions alone.

        Valid only for words without repeated letters: there each weight
        space is at most one dimensional, so a section space has a basis of
        monomials t^a with a nonnegative and the boundary vanishing orders
        bounded by those of the bundle.  The candidates are the lattice
        points of an explicit polytope.
        """
        if not self.is_multiplicity_free():
            raise ValidationError(
                "monomial bases need a word without repeated letters")
        can, eff = self._route(can, eff)
        a_rows, b_rows = self._orders()
        n = self.n
        if can is not None:
            rhs = [sum(a_rows[l][k] * can[k] for k in range(n))
                   for l in range(n)]
        else:
            rhs = [sum(b_rows[l][j] * eff[j] for j in range(n))
                   for l in range(n)]
        rows = [(0,) + tuple(1 if pos == j else 0 for pos in range(n))
                for j in range(n)]
        rows.extend((rhs[l],) + tuple(-b_rows[l][j] for j in range(n))
                    for l in range(n))
        polytope = RationalPolytope.from_inequalities(rows, ambient=n)
        bundle_weight = None
        if can is not None:
            bundle_weight = self.datum.zero_weight()
            for k, letter in enumerate(self._letters):
                bundle_weight = bundle_weight + \
                    self.datum.fundamental_weight(letter).scaled(can[k])
        basis = []
        for point in polytope.lattice_points(1):
            mono = tuple(int(v) for v in point)
            weight = None
            if bundle_weight is not None:
                drop = self.datum.zero_weight()
                for exp, letter in zip(mono, self._letters):
                    drop = drop + self.datum.simple_root(letter).scaled(exp)
                weight = bundle_weight - drop
            degree = tuple(can) if can is not None else None
            basis.append(SectionPoly(Polynomial.monomial(n, mono),
                                     degree, weight))
        return basis

    def _route(self, can, eff):
        if (can is None) == (eff is None):
            raise ValidationError(
                "give exactly one of a canonical multidegree and effective "
                "coordinates")
        if can is not None:
            return self._canonical_degree(can), None
        return None, self._canonical_degree(eff)

    def _canonical_degree(self, vector) -> tuple[int, ...]:
        v = tuple(int(x) for x in vector)
        if len(v) != self.n:
            raise ValidationError(
                f"expected {self.n} coordinates, got {len(v)}")
        return v

    def _initial_box(self, can, eff) -> tuple[int, ...]:
        if eff is not None:
            base = 2 + 2 * sum(abs(v) for v in eff)
            return (base,) * self.n
        box = []
        for j in range(self.n):
            total = 2
            for k in range(1, self.n + 1):
                if can[k - 1] > 0:
                    worst = max((p.poly.max_degree_in(j)
                                 for p in self.slot_polynomials(k)), default=0)
                    total += can[k - 1] * worst
            box.append(total)
        return tuple(box)

    def _certified_glue(self, can, eff, box) -> list[SectionPoly]:
        doubled = tuple(2 * b for b in box)
        if any(b > _BOX_CAP for b in doubled):
            raise Unstable(
                f"glue dimensions kept growing past the degree-box cap "
                f"({_BOX_CAP})")
        basis = self._glue_space(can, eff, box)
        check = self._glue_space(can, eff, doubled)
        if len(basis) != len(check):
            raise BoxTooSmall(
                f"dimension grew from {len(basis)} at box {box} to "
                f"{len(check)} at box {doubled}")
        return basis

    def _glue_space(self, can, eff, box) -> list[SectionPoly]:
        size = 1
        for b in box:
            size *= b + 1
            if size > _CANDIDATE_GUARD:
                raise Unstable("glue candidate box exceeds the supported size")
        candidates = sorted(itertools.product(*[range(b + 1) for b in box]))
        classes: dict[tuple, list[Mono]] = {}
        for a in candidates:
            coords = [0] * self.datum.rank
            for exp, letter in zip(a, self._letters):
                if exp:
                    root = self.datum.simple_root(letter)
                    for i, c in enumerate(root.coords):
                        coords[i] += exp * c
            classes.setdefault(tuple(coords), []).append(a)
        charts = sorted((flips for flips in
                         itertools.product((0, 1), repeat=self.n)
                         if any(flips)),
                        key=lambda f: (sum(f), f))
        bundle_weight = None
        if can is not None:
            bundle_weight = self.datum.zero_weight()
            for k, letter in enumerate(self._letters):
                bundle_weight = bundle_weight + \
                    self.datum.fundamental_weight(letter).scaled(can[k])
        result: list[SectionPoly] = []
        for key in sorted(classes):
            cands = classes[key]
            vectors = [{i: Fraction(1)} for i in range(len(cands))]
            for flips in charts:
                vectors = self._chart_filter(flips, can, eff, cands, vectors)
                if not vectors:
                    break
            weight = None
            if bundle_weight is not None:
                weight = bundle_weight - Weight(key)
            degree = tuple(can) if can is not None else None
            for vec in vectors:
                poly = Polynomial(self.n, {cands[i]: c
                                           for i, c in vec.items()})
                result.append(SectionPoly(poly.normalized(), degree, weight))
        return result

    def _chart_filter(self, flips, can, eff, cands, vectors):
        frame = self._chart(flips)
        n = self.n
        amax = tuple(max(a[j] for a in cands) for j in range(n))
        num_common = Polynomial.one(n)
        den = Polynomial.one(n)
        if can is not None:
            for k, mk in enumerate(can):
                if mk > 0:
                    num_common = num_common * frame.slot_factors[k] ** mk
                elif mk < 0:
                    den = den * frame.slot_factors[k] ** (-mk)
        else:
            orders = self.coordinate_order_matrix()
            for l in range(n):
                if not flips[l]:
                    continue
                e = sum(orders[l][j] * eff[j] for j in range(n))
                mono = tuple(abs(e) if pos == l else 0 for pos in range(n))
                if e > 0:
                    num_common = num_common.shifted(mono)
                elif e < 0:
                    den = den.shifted(mono)
        npow = [[Polynomial.one(n)] for _ in range(n)]
        dpow = [[Polynomial.one(n)] for _ in range(n)]
        for j in range(n):
            for _ in range(amax[j]):
                npow[j].append(npow[j][-1] * frame.numerators[j])
                dpow[j].append(dpow[j][-1] * frame.denominators[j])
            den = den * dpow[j][amax[j]]
        lifted = {}
        for a in cands:
            g = num_common
            for j in range(n):
                g = g * npow[j][a[j]] * dpow[j][amax[j] - a[j]]
            lifted[a] = g
        combined = []
        for vec in vectors:
            g = Polynomial.zero(n)
            for i, c in vec.items():
                g = g + lifted[cands[i]] * c
            combined.append(g)
        bounds = []
        for l in range(n):
            worst = max(g.max_degree_in(l) for g in lifted.values())
            bounds.append(worst - den.max_degree_in(l))
        support: list[Mono] = []
        if all(b >= 0 for b in bounds):
            size = 1
            for b in bounds:
                size *= b + 1
            if size > _WITNESS_GUARD:
                raise Unstable(
                    "witness support exceeds the supported size")
            target = tuple(
                x - y for x, y in zip(
                    _poly_weight(next(iter(lifted.values())),
                                 frame.x_weights),
                    _poly_weight(den, frame.x_weights)))
            for b in itertools.product(*[range(v + 1) for v in bounds]):
                coords = [0] * self.datum.rank
                for exp, w in zip(b, frame.x_weights):
                    if exp:
                        for i, c in enumerate(w.coords):
                            coords[i] += exp * c
                if tuple(coords) == target:
                    support.append(b)
        nv = len(vectors)
        rows: dict[Mono, dict[int, Fraction]] = {}
        for i, g in enumerate(combined):
            for mono, c in g.terms.items():
                rows.setdefault(mono, {})[i] = c
        for bi, b in enumerate(support):
            for qm, qc in den.terms.items():
                mono = tuple(x + y for x, y in zip(b, qm))
                row = rows.setdefault(mono, {})
                row[nv + bi] = row.get(nv + bi, Fraction(0)) - qc
        int_rows = [_clear_row(row) for row in rows.values()]
        solutions = nullspace(int_rows, nv + len(support))
        span = _IncrementalSpan()
        filtered = []
        for sol in solutions:
            vec: dict[int, Fraction] = {}
            for i in range(nv):
                s = sol.get(i)
                if not s:
                    continue
                for cidx, cf in vectors[i].items():
                    acc = vec.get(cidx, Fraction(0)) + s * cf
                    if acc:
                        vec[cidx] = acc
                    else:
                        vec.pop(cidx, None)
            if not vec:
                continue
            reduced = span.add(vec)
            if reduced is not None:
                filtered.append(reduced)
        return filtered

    # ----- order matrices and the raw basis change --------------------------

    def slot_order_matrix(self) -> tuple[tuple[int, ...], ...]:
        """A[l][k]: vanishing order of the k-th slot factor on divisor l."""
        return self._orders()[0]

    def coordinate_order_matrix(self) -> tuple[tuple[int, ...], ...]:
        """B[l][j]: pole order of t_j along the l-th divisor at infinity."""
        return self._orders()[1]

    def _orders(self):
        if self._order_matrices is None:
            n = self.n
            a_rows, b_rows = [], []
            for l in range(n):
                flips = tuple(1 if pos == l else 0 for pos in range(n))
                frame = self._chart(flips)
                a_rows.append(tuple(
                    frame.slot_factors[k].min_degree_in(l) for k in range(n)))
                b_rows.append(tuple(
                    frame.denominators[j].min_degree_in(l)
                    - frame.numerators[j].min_degree_in(l) for j in range(n)))
            self._order_matrices = (tuple(a_rows), tuple(b_rows))
        return self._order_matrices

    def effective_to_canonical_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Raw basis change solved from the order matrices, unverified.

        Row k, column j is the k-th canonical coordinate of the j-th
        effective basis class.  Integrality, unimodularity and the probe
        checks live in the lattice layer, not here.
        """
        a_rows, b_rows = self._orders()
        n = self.n
        columns = []
        for j in range(n):
            rhs = [Fraction(b_rows[l][j]) for l in range(n)]
            sol = solve_dense([[Fraction(v) for v in row] for row in a_rows],
                              rhs)
            if sol is None:
                raise EngineError(
                    "order matrices are inconsistent; no basis change exists")
            columns.append(sol)
        return tuple(tuple(columns[j][k] for j in range(n)) for k in range(n))

    def effective_exponents(self, eff: Sequence[int]) -> tuple[int, ...]:
        """Slot-factor exponents whose product realizes an effective class.

        The slot factors vanish on the boundary divisors with orders given
        by the slot order matrix, so the exponent vector solves that system
        against the boundary orders the effective coordinates prescribe.
        The solution must be integral.
        """
        matrix = self.effective_to_canonical_matrix()
        out = []
        for row in matrix:
            value = sum(row[j] * eff[j] for j in range(self.n))
            if value.denominator != 1:
                raise EngineError(
                    "effective class needs fractional slot-factor exponents")
            out.append(int(value))
        return tuple(out)

    # ----- fixed parts ------------------------------------------------------

    def fixed_part_peel(self, multidegree: Sequence[int],
                        level: int) -> tuple["DivisorClass", int]:
        """Fixed boundary part of the level-scaled bundle, plus movable dim.

        Returns the fixed part as an effective-basis divisor class whose
        entry j is the largest power of t_j dividing every section of
        level * multidegree, together with the dimension of the peeled
        (movable) class.  Warns when the residual sections still share a
        nonmonomial factor.
        """
        m = self._canonical_degree(multidegree)
        if level < 1:
            raise ValidationError("level must be a positive integer")
        total = tuple(level * v for v in m)
        basis = self.section_basis(can=total)
        if not basis:
            raise ValidationError(
                "the class has no sections at this level; "
                "there is nothing to peel")
        mins = tuple(min(sp.poly.min_degree_in(j) for sp in basis)
                     for j in range(self.n))
        matrix = self.effective_to_canonical_matrix()
        inverse = invert_dense([[Fraction(v) for v in row] for row in matrix])
        if inverse is not None:
            caps = [sum(inverse[j][k] * total[k] for k in range(self.n))
                    for j in range(self.n)]
            for j in range(self.n):
                if caps[j].denominator == 1 and mins[j] > caps[j]:
                    raise EngineError(
                        "fixed part exceeds the effective coordinates; "
                        "the order matrices are inconsistent")
        if any(mins):
            self._warn_residual_factor(basis, mins)
        from .picard import Basis, DivisorClass
        return DivisorClass(mins, Basis.EFFECTIVE), len(basis)

    def _warn_residual_factor(self, basis, mins) -> None:
        import warnings

        import sympy

        symbols = sympy.symbols(f"t1:{self.n + 1}")
        shift = tuple(-v for v in mins)
        residual_gcd = None
        for sp in basis:
            expr = sympy.Integer(0)
            for mono, coeff in sp.poly.shifted(shift).terms.items():
                term = sympy.Rational(coeff)
                for sym, exp in zip(symbols, mono):
                    if exp:
                        term *= sym ** exp
                expr += term
            residual_gcd = expr if residual_gcd is None \
                else sympy.gcd(residual_gcd, expr)
            if residual_gcd == 1:
                return
        if residual_gcd is not None and residual_gcd.free_symbols:
            warnings.warn(
                "residual sections share a nonmonomial common factor; "
                "the coordinatewise peel is not the full fixed part",
                stacklevel=3)

    # ----- equivariance ------------------------------------------------------

    def equivariance_failures(self, sections: Iterable[SectionPoly],
                              multidegree: Sequence[int],
                              trials: int = 20, seed: int = 1) -> int:
        """Check the torus transformation law at random rational points.

        Each section is evaluated at a random point of the open cell and at
        a random right translate of it; the values must differ by the
        product of the slot characters of the translating element.  Returns
        the number of failed comparisons.
        """
        m = self._canonical_degree(multidegree)
        rng = random.Random(seed)
        rank = self.datum.rank
        failures = 0
        for sp in sections:
            if not sp.poly:
                continue
            for _ in range(trials):
                for _attempt in range(80):
                    taus = [self._random_fraction(rng, nonzero=True)
                            for _ in range(self.n)]
                    zs = [[self._random_fraction(rng, nonzero=True)
                           for _ in range(rank)] for _ in range(self.n)]
                    translators = []
                    for k in range(self.n):
                        elem = self._torus_element(zs[k])
                        for _unip in range(2):
                            a = rng.randint(1, rank)
                            c = Fraction(rng.randint(-2, 2))
                            if c:
                                elem = self._product(
                                    elem, self._raising_element(a, c))
                        translators.append(elem)
                    points = [self._lowering_element(self._letters[k], taus[k])
                              for k in range(self.n)]
                    translated = []
                    previous_inverse = None
                    ok = True
                    for k in range(self.n):
                        term = points[k]
                        if previous_inverse is not None:
                            term = self._product(previous_inverse, term)
                        term = self._product(term, translators[k])
                        inv = self._inverse(translators[k])
                        if inv is None:
                            ok = False
                            break
                        previous_inverse = inv
                        translated.append(term)
                    if not ok:
                        continue
                    base_vals = self._chain_values(points)
                    moved_vals = self._chain_values(translated)
                    if base_vals is None or moved_vals is None:
                        continue
                    t_base, r_base = base_vals
                    if (any(t != tau for t, tau in zip(t_base, taus))
                            or any(r != 1 for r in r_base)):
                        raise EngineError(
                            "open-cell chain values failed their self-check")
                    t_moved, r_moved = moved_vals
                    if any(r == 0 and mk < 0
                           for r, mk in zip(r_moved, m)):
                        continue
                    lhs = sp.poly.evaluate(t_moved)
                    for r, mk in zip(r_moved, m):
                        if mk:
                            if r == 0:
                                lhs = Fraction(0)
                                break
                            lhs *= r ** mk
                    factor = Fraction(1)
                    for k, letter in enumerate(self._letters):
                        factor *= zs[k][letter - 1] ** m[k]
                    if lhs != sp.poly.evaluate(taus) * factor:
                        failures += 1
                    break
                else:
                    raise EngineError(
                        "could not draw a nondegenerate random translate")
        return failures

    @staticmethod
    def _random_fraction(rng: random.Random, nonzero: bool = False) -> Fraction:
        num = rng.randint(1 if nonzero else 0, 3)
        if nonzero and rng.random() < 0.5:
            num = -num
        elif not nonzero:
            num *= rng.choice((-1, 1))
        return Fraction(num, rng.randint(1, 3))

    def _lowering_element(self, letter: int, value: Fraction):
        return {i: _exp_nilpotent(self.model.rep(i).lowering_matrix(letter),
                                  value, self.model.rep(i).dim, Fraction)
                for i in self._rep_indices}

    def _raising_element(self, letter: int, value: Fraction):
        return {i: _exp_nilpotent(self.model.rep(i).raising_matrix(letter),
                                  value, self.model.rep(i).dim, Fraction)
                for i in self._rep_indices}

    def _torus_element(self, z: Sequence[Fraction]):
        out = {}
        for i in self._rep_indices:
            rep = self.model.rep(i)
            mat = [[Fraction(0)] * rep.dim for _ in range(rep.dim)]
            for r in range(rep.dim):
                value = Fraction(1)
                for coord, zi in zip(rep.weights[r].coords, z):
                    value *= Fraction(zi) ** coord
                mat[r][r] = value
            out[i] = mat
        return out

    def _product(self, left, right):
        return {i: _matmul(left[i], right[i]) for i in self._rep_indices}

    def _inverse(self, elem):
        out = {}
        for i in self._rep_indices:
            inv = invert_dense(elem[i])
            if inv is None:
                return None
            out[i] = inv
        return out

    def _chain_values(self, chain):
        """Open-cell coordinates and slot factors of a group-element chain.

        Returns (t values, slot factor values) or None when a pairing
        denominator vanishes.
        """
        prefixes = {}
        for i in self._rep_indices:
            dim = self.model.rep(i).dim
            mats = [[[Fraction(1 if r == c else 0) for c in range(dim)]
                     for r in range(dim)]]
            for elem in chain:
                mats.append(_matmul(mats[-1], elem[i]))
            prefixes[i] = mats
        t_values, factors = [], []
        for j, letter in enumerate(self._letters):
            rep = self.model.rep(letter)
            hw, fidx = rep.highest, self._fidx[letter]
            now = prefixes[letter][j + 1]
            before = prefixes[letter][j]
            d_now, a_now = now[hw][hw], now[fidx][hw]
            d_prev, a_prev = before[hw][hw], before[fidx][hw]
            if d_now == 0 or d_prev == 0:
                return None
            t_values.append((a_now * d_prev - a_prev * d_now)
                            / (d_now * d_prev))
            factors.append(d_now)
        return t_values, factors
