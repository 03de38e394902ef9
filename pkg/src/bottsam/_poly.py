"""Sparse exact multivariate polynomials over the rationals.

Monomials are exponent tuples, coefficients are Fraction. Everything here is
exact; nothing ever touches floating point. This is internal plumbing shared
by the section and chart machinery.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Mono = tuple[int, ...]


class Polynomial:
    """A sparse polynomial in nvars variables with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Mono, Fraction | int] | None = None):
        self.nvars = nvars
        clean: dict[Mono, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        mono = tuple(1 if j == index else 0 for j in range(nvars))
        return cls(nvars, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, mono: Sequence[int], coeff=1) -> "Polynomial":
        return cls(nvars, {tuple(mono): Fraction(coeff)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None  # mutable dict inside; never used as a key

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.nvars, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.nvars)
            return Polynomial(self.nvars,
                              {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Polynomial":
        if power < 0:
            raise ValueError("negative powers are not defined for polynomials")
        result = Polynomial.one(self.nvars)
        for _ in range(power):
            result = result * self
        return result

    def shifted(self, mono: Sequence[int]) -> "Polynomial":
        """Multiply by the monomial with the given exponent vector."""
        mono = tuple(mono)
        return Polynomial(self.nvars,
                          {tuple(a + b for a, b in zip(m, mono)): c
                           for m, c in self.terms.items()})

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            value = coeff
            for exp, p in zip(mono, point):
                if exp:
                    value *= Fraction(p) ** exp
            total += value
        return total

    def lex_min_monomial(self) -> Mono:
        """Lexicographically smallest exponent vector (x_1 heaviest)."""
        if not self.terms:
            raise ValueError("the zero polynomial has no monomials")
        return min(self.terms)

    def min_degree_in(self, index: int) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degrees")
        return min(m[index] for m in self.terms)

    def max_degree_in(self, index: int) -> int:
        if not self.terms:
            return 0
        return max(m[index] for m in self.terms)

    def max_degrees(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(m[j] for m in self.terms) for j in range(self.nvars))

    def canonical_items(self) -> list[tuple[Mono, Fraction]]:
        return sorted(self.terms.items())

    def normalized(self) -> "Polynomial":
        """Scale so the coefficients are coprime integers and the
        lexicographically smallest monomial has a positive coefficient."""
        if not self.terms:
            return self
        denom = 1
        for c in self.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        numer = 0
        for c in self.terms.values():
            numer = gcd(numer, abs(c.numerator * (denom // c.denominator)))
        scale = Fraction(denom, numer)
        if self.terms[self.lex_min_monomial()] < 0:
            scale = -scale
        return self * scale

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for mono, coeff in self.canonical_items()[:6]:
            vars_part = "*".join(f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}"
                                 for j, e in enumerate(mono) if e)
            if vars_part:
                bits.append(f"{coeff}*{vars_part}" if coeff != 1 else vars_part)
            else:
                bits.append(str(coeff))
        tail = " + ..." if len(self.terms) > 6 else ""
        return f"Polynomial({' + '.join(bits)}{tail})"


def integer_rows(polys: Iterable[Polynomial],
                 monomial_index: Mapping[Mono, int]) -> list[dict[int, int]]:
    """Express polynomials as integer rows over an indexed monomial set.

    Each polynomial's coefficients are scaled by their common denominator, so
    the rows span the same rational row space.
    """
    rows = []
    for poly in polys:
        denom = 1
        for c in poly.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        rows.append({monomial_index[m]: int(c * denom)
                     for m, c in poly.terms.items()})
    return rows
