"""Root data, characters and Demazure operators.

Conventions, pinned by tests:
  - weights live in fundamental-weight coordinates;
  - the Cartan matrix satisfies A[i][j] = <alpha_j, alpha_i^vee>, so alpha_j
    is the j-th column of A read in fundamental-weight coordinates and
    s_i(omega_j) = omega_j - delta_ij alpha_i;
  - simple reflections act by s_i(lam) = lam - <lam, alpha_i^vee> alpha_i.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import EngineError, ValidationError

_ROOT_ENUM_CAP = 10_000


class Weight:
    """A weight in fundamental-weight coordinates (integers or rationals)."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords = tuple(c if isinstance(c, (int, Fraction)) else Fraction(c)
                            for c in coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator:
        return iter(self.coords)

    def __getitem__(self, idx: int):
        return self.coords[idx]

    def __eq__(self, other) -> bool:
        if isinstance(other, Weight):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def scaled(self, factor) -> "Weight":
        return Weight(factor * c for c in self.coords)

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coords)

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def sort_key(self):
        return tuple(Fraction(c) for c in self.coords)

    def __repr__(self) -> str:
        return f"Weight({list(self.coords)})"


class CartanDatum:
    """A rank and a valid generalized Cartan matrix of finite type."""

    __slots__ = ("rank", "matrix")

    def __init__(self, matrix: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        rank = len(rows)
        if rank == 0 or any(len(row) != rank for row in rows):
            raise ValidationError("Cartan matrix must be square and nonempty")
        for i in range(rank):
            if rows[i][i] != 2:
                raise ValidationError("Cartan matrix diagonal must be 2")
            for j in range(rank):
                if i != j:
                    if rows[i][j] > 0:
                        raise ValidationError(
                            "off-diagonal Cartan entries must be <= 0")
                    if (rows[i][j] == 0) != (rows[j][i] == 0):
                        raise ValidationError(
                            "Cartan matrix zero pattern must be symmetric")
        self.rank = rank
        self.matrix = rows

    @classmethod
    def from_type(cls, name: str) -> "CartanDatum":
        """Build a datum from a type string such as "A2", "B3" or "G2"."""
        name = name.strip().upper()
        if len(name) < 2 or name[0] not in "ABCDG" or not name[1:].isdigit():
            raise ValidationError(f"unrecognized type string: {name!r}")
        family, rank = name[0], int(name[1:])
        if rank < 1:
            raise ValidationError("rank must be positive")
        if family == "G" and rank != 2:
            raise ValidationError("type G has rank 2 only")
        if family == "D" and rank < 3:
            raise ValidationError("type D needs rank >= 3")
        if family in ("B", "C") and rank < 2:
            raise ValidationError(f"type {family} needs rank >= 2")
        m = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        for i in range(rank - 1):
            m[i][i + 1] = -1
            m[i + 1][i] = -1
        if family == "B":
            # alpha_rank is short: <alpha_{r-1}, alpha_r^vee> = -2.
            m[rank - 1][rank - 2] = -2
        elif family == "C":
            # alpha_rank is long: <alpha_r, alpha_{r-1}^vee> = -2.
            m[rank - 2][rank - 1] = -2
        elif family == "D":
            m[rank - 2][rank - 1] = 0
            m[rank - 1][rank - 2] = 0
            m[rank - 3][rank - 1] = -1
            m[rank - 1][rank - 3] = -1
        elif family == "G":
            m[0][1] = -3
        return cls(m)

    @classmethod
    def from_matrix_file(cls, path: str) -> "CartanDatum":
        import json

        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        matrix = data["matrix"] if isinstance(data, dict) else data
        return cls(matrix)

    def simple_root(self, i: int) -> Weight:
        """alpha_i in fundamental-weight coordinates (the i-th column)."""
        self._check_index(i)
        return Weight(self.matrix[k][i - 1] for k in range(self.rank))

    def fundamental_weight(self, i: int) -> Weight:
        self._check_index(i)
        return Weight(1 if k == i - 1 else 0 for k in range(self.rank))

    def zero_weight(self) -> Weight:
        return Weight((0,) * self.rank)

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.rank:
            raise ValidationError(f"simple index {i} out of range 1..{self.rank}")

    def __eq__(self, other) -> bool:
        if isinstance(other, CartanDatum):
            return self.matrix == other.matrix
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"CartanDatum(rank={self.rank})"


class WeylWord:
    """A word in the simple reflections, stored as 1-based indices."""

    __slots__ = ("indices",)

    def __init__(self, indices: Iterable[int]):
        idx = tuple(int(i) for i in indices)
        if any(i < 1 for i in idx):
            raise ValidationError("word indices are 1-based positive integers")
        self.indices = idx

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __getitem__(self, k: int) -> int:
        return self.indices[k]

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylWord):
            return self.indices == other.indices
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.indices)

    def __repr__(self) -> str:
        return f"WeylWord({list(self.indices)})"


class Character:
    """A finite multiset of weights: a sparse map weight -> nonzero integer."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Weight, int] | None = None):
        clean: dict[Weight, int] = {}
        if terms:
            for w, m in terms.items():
                if m:
                    clean[w] = int(m)
        self.terms = clean

    @classmethod
    def monomial(cls, weight: Weight, mult: int = 1) -> "Character":
        return cls({weight: mult})

    @classmethod
    def zero(cls) -> "Character":
        return cls()

    def dimension(self) -> int:
        return sum(self.terms.values())

    def multiplicity(self, weight: Weight) -> int:
        return self.terms.get(weight, 0)

    def support(self) -> list[Weight]:
        return sorted(self.terms, key=Weight.sort_key)

    def canonical_items(self) -> list[tuple[Weight, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.terms)
        for w, m in other.terms.items():
            s = out.get(w, 0) + m
            if s:
                out[w] = s
            else:
                del out[w]
        return Character(out)

    def __sub__(self, other: "Character") -> "Character":
        return self + other.scaled(-1)

    def scaled(self, factor: int) -> "Character":
        if not factor:
            return Character()
        return Character({w: factor * m for w, m in self.terms.items()})

    def translated(self, shift: Weight) -> "Character":
        """Multiply by e^shift."""
        return Character({w + shift: m for w, m in self.terms.items()})

    def __mul__(self, other: "Character") -> "Character":
        out: dict[Weight, int] = {}
        for w1, m1 in self.terms.items():
            for w2, m2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, 0) + m1 * m2
                if s:
                    out[w] = s
                else:
                    del out[w]
        return Character(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, Character):
            return self.terms == other.terms
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        items = self.canonical_items()
        inner = ", ".join(f"{list(w.coords)}: {m}" for w, m in items[:5])
        tail = ", ..." if len(items) > 5 else ""
        return f"Character({{{inner}{tail}}})"


def simple_reflection(datum: CartanDatum, i: int, weight: Weight) -> Weight:
    """s_i(lam) = lam - <lam, alpha_i^vee> alpha_i."""
    pairing = weight[i - 1]
    if not pairing:
        return weight
    return weight - datum.simple_root(i).scaled(pairing)


@lru_cache(maxsize=None)
def _positive_roots(datum: CartanDatum) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """All positive roots as (root coords, coroot coords) pairs.

    Coordinates are over the simple roots and simple coroots respectively.
    Raises ValidationError if the closure does not stay finite (the matrix is
    then not of finite type).
    """
    rank = datum.rank
    a = datum.matrix
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    frontier = [(tuple(1 if k == i else 0 for k in range(rank)),
                 tuple(1 if k == i else 0 for k in range(rank)))
                for i in range(rank)]
    seen.update(frontier)
    while frontier:
        new = []
        for b, c in frontier:
            for i in range(rank):
                pb = sum(a[i][j] * b[j] for j in range(rank))
                pc = sum(a[j][i] * c[j] for j in range(rank))
                b2 = tuple(v - (pb if k == i else 0) for k, v in enumerate(b))
                c2 = tuple(v - (pc if k == i else 0) for k, v in enumerate(c))
                pair = (b2, c2)
                if pair not in seen:
                    seen.add(pair)
                    new.append(pair)
                    if len(seen) > _ROOT_ENUM_CAP:
                        raise ValidationError(
                            "root system is not finite; "
                            "the Cartan matrix is not of finite type")
        frontier = new
    return tuple(sorted(p for p in seen if all(v >= 0 for v in p[0])))


def _root_reflection(datum: CartanDatum, i: int,
                     root: tuple[int, ...]) -> tuple[int, ...]:
    a = datum.matrix
    pairing = sum(a[i - 1][j] * root[j] for j in range(datum.rank))
    return tuple(v - (pairing if k == i - 1 else 0) for k, v in enumerate(root))


def word_length(datum: CartanDatum, word: WeylWord | Sequence[int]) -> int:
    """Length of the Weyl group element the word multiplies out to."""
    indices = tuple(word)
    for i in indices:
        datum._check_index(i)
    count = 0
    for root, _ in _positive_roots(datum):
        image = root
        for i in reversed(indices):
            image = _root_reflection(datum, i, image)
        if all(v <= 0 for v in image) and any(image):
            count += 1
    return count


def is_reduced(datum: CartanDatum, word: WeylWord | Sequence[int]) -> bool:
    """True when the word is a reduced expression. The empty word is reduced."""
    indices = tuple(word)
    if not indices:
        return True
    return word_length(datum, indices) == len(indices)


def demazure_operator(datum: CartanDatum, i: int, char: Character) -> Character:
    """The i-th Demazure operator (f - e^{-alpha_i} s_i f) / (1 - e^{-alpha_i}).

    The division is performed exactly along alpha_i-strings; a nonzero
    remainder is an internal error because the numerator is always divisible.
    """
    datum._check_index(i)
    alpha = datum.simple_root(i)
    numerator: dict[Weight, int] = {}
    for w, m in char.terms.items():
        for weight, mult in ((w, m),
                             (simple_reflection(datum, i, w) - alpha, -m)):
            s = numerator.get(weight, 0) + mult
            if s:
                numerator[weight] = s
            else:
                numerator.pop(weight, None)
    # Group the numerator into alpha_i-strings: lam and lam - k*alpha share
    # the s_i-invariant key 2*lam - <lam, alpha_i^vee>*alpha_i.
    strings: dict[tuple, list[tuple[int, Weight, int]]] = {}
    for w, m in numerator.items():
        h = w[i - 1]
        key = (w.scaled(2) - alpha.scaled(h)).sort_key()
        strings.setdefault(key, []).append((h, w, m))
    out: dict[Weight, int] = {}
    for members in strings.values():
        members.sort(key=lambda t: -Fraction(t[0]))
        h_top = members[0][0]
        coeff: dict[int, int] = {}
        for h, w, m in members:
            step = Fraction(h_top - h, 2)
            if step.denominator != 1:
                raise EngineError("Demazure string with fractional step")
            coeff[int(step)] = m
        top_weight = members[0][1]
        running = 0
        last = max(coeff)
        for k in range(last + 1):
            running += coeff.get(k, 0)
            if running:
                w = top_weight - alpha.scaled(k)
                s = out.get(w, 0) + running
                if s:
                    out[w] = s
                else:
                    del out[w]
        if running:
            raise EngineError("Demazure operator division was not exact")
    return Character(out)


def bs_character(datum: CartanDatum, word: WeylWord | Sequence[int],
                 multidegree: Sequence[int]) -> Character:
    """Character of the section space attached to a word and a multidegree.

    The multidegree is in the canonical line-bundle basis: entry k twists by
    the k-th fundamental weight along the word. The recursion applies the
    Demazure operator of each letter from the innermost (last) letter out.
    """
    indices = tuple(word)
    degrees = tuple(int(m) for m in multidegree)
    if len(degrees) != len(indices):
        raise ValidationError("multidegree length must match word length")
    for i in indices:
        datum._check_index(i)
    char = Character.monomial(datum.zero_weight())
    for i, m in zip(reversed(indices), reversed(degrees)):
        shift = datum.fundamental_weight(i).scaled(m)
        char = demazure_operator(datum, i, char.translated(shift))
    return char


def weyl_dimension(datum: CartanDatum, highest: Weight) -> int:
    """Dimension of the irreducible module with the given dominant weight."""
    if not highest.is_dominant():
        raise ValidationError("weyl_dimension needs a dominant weight")
    value = Fraction(1)
    for _, coroot in _positive_roots(datum):
        num = sum((Fraction(h) + 1) * c for h, c in zip(highest, coroot))
        den = sum(coroot)
        value *= Fraction(num, den)
    if value.denominator != 1:
        raise EngineError("Weyl dimension did not come out integral")
    return int(value)
