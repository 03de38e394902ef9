"""Vanishing-order valuations along the nested boundary flag.

On the open cell the j-th flag member is the vanishing locus of t_j, so the
valuation of a section is the lexicographically minimal exponent vector of
its cell polynomial under the fixed variable order t_1 > t_2 > ... > t_n.
Adapted bases are triangularized so that valuation vectors enumerate
dimensions exactly.
"""

from __future__ import annotations

from typing import Sequence

from ._poly import Polynomial
from .errors import ValidationError
from .sections import SectionPoly, _IncrementalSpan


def valuation(section: SectionPoly | Polynomial) -> tuple[int, ...]:
    """Lexicographically minimal exponent vector of a nonzero section."""
    poly = section.poly if isinstance(section, SectionPoly) else section
    if not poly:
        raise ValidationError("the zero section has no valuation")
    return poly.lex_min_monomial()


def adapted_basis(sections: Sequence[SectionPoly]) -> list[SectionPoly]:
    """Triangularize a basis so its valuation vectors are pairwise distinct.

    Reduction happens within torus-weight groups, which keeps the output
    sections weight homogeneous; distinctness across groups is automatic
    because the valuation determines the weight drop of a monomial.
    """
    groups: dict = {}
    order: list = []
    for section in sections:
        key = section.weight
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(section)
    adapted: list[SectionPoly] = []
    for key in order:
        span = _IncrementalSpan()
        members = groups[key]
        degree = members[0].multidegree
        if any(m.multidegree != degree for m in members):
            degree = None
        for section in members:
            if not section.poly:
                raise ValidationError("adapted_basis needs nonzero sections")
            reduced = span.add(dict(section.poly.terms))
            if reduced is None:
                raise ValidationError(
                    "sections are not linearly independent")
            poly = Polynomial(section.poly.nvars, reduced).normalized()
            adapted.append(SectionPoly(poly, degree, key))
    return adapted


def first_boundary_restriction(section: SectionPoly) -> SectionPoly:
    """Restrict a section to the first flag member and drop that variable.

    Keeps only monomials free of t_1 and reindexes the rest; the result can
    be the zero section when t_1 divides every term.
    """
    poly = section.poly if isinstance(section, SectionPoly) else section
    terms = {mono[1:]: coeff for mono, coeff in poly.terms.items()
             if mono[0] == 0}
    return SectionPoly(Polynomial(poly.nvars - 1, terms))
