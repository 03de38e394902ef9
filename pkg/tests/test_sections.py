"""Section spaces: spanning route, gluing route, and their agreement."""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from bottsam import (
    Basis,
    DivisorClass,
    EngineError,
    ValidationError,
    Weight,
    WeylWord,
    bs_character,
)
from bottsam.sections import GroupModel, SectionEngine
from bottsam.valuation import valuation

from oracles import dense_rank, hirzebruch_count


def poly_terms(section):
    return {mono: coeff for mono, coeff in section.poly.terms.items()}


def span_rank(sections_a, sections_b=()):
    """Rank of the joint coefficient matrix over a shared monomial index."""
    polys = [sp.poly for sp in sections_a] + [sp.poly for sp in sections_b]
    monos = sorted({m for p in polys for m in p.terms})
    index = {m: i for i, m in enumerate(monos)}
    rows = [{index[m]: c for m, c in p.terms.items()} for p in polys]
    return dense_rank(rows, len(monos))


@pytest.fixture(scope="module")
def eng12(a2):
    return SectionEngine(a2, WeylWord([1, 2]))


@pytest.fixture(scope="module")
def eng121(a2):
    return SectionEngine(a2, WeylWord([1, 2, 1]))


@pytest.fixture(scope="module")
def engb2(b2):
    return SectionEngine(b2, WeylWord([1, 2]))


def test_non_reduced_word_is_rejected(a2):
    with pytest.raises(ValidationError):
        SectionEngine(a2, WeylWord([1, 1]))


def test_slot_polynomials_length_two(eng12):
    slot1 = [poly_terms(sp) for sp in eng12.slot_polynomials(1)]
    assert slot1 == [{(0, 0): 1}, {(1, 0): 1}]
    slot2 = [poly_terms(sp) for sp in eng12.slot_polynomials(2)]
    assert slot2 == [{(0, 0): 1}, {(0, 1): 1}, {(1, 1): 1}]


def test_slot_polynomials_repeated_letter(eng121):
    slot3 = [poly_terms(sp) for sp in eng121.slot_polynomials(3)]
    assert slot3 == [{(0, 0, 0): 1},
                     {(1, 0, 0): 1, (0, 0, 1): 1},
                     {(0, 1, 1): 1}]


def test_first_coordinate_conventions(eng12, a2):
    """The first slot coordinate pins every sign and side convention."""
    slot1 = eng12.slot_polynomials(1)
    t1 = next(sp for sp in slot1 if poly_terms(sp) == {(1, 0): 1})
    assert valuation(t1) == (1, 0)
    shift = a2.fundamental_weight(1).coords
    root = a2.simple_root(1).coords
    assert t1.weight.coords == tuple(s - r for s, r in zip(shift, root))
    const = next(sp for sp in slot1 if poly_terms(sp) == {(0, 0): 1})
    assert const.weight.coords == shift


def test_nef_dimensions_match_characters(eng12, eng121, engb2, a2, b2):
    cases = [(eng12, a2, [1, 2], 2), (eng121, a2, [1, 2, 1], 3),
             (engb2, b2, [1, 2], 2)]
    for engine, datum, word, n in cases:
        for multidegree in _small_grid(n, 2):
            expected = bs_character(datum, word, multidegree).dimension()
            got = engine.section_basis_nef(multidegree)
            assert len(got) == expected


def _small_grid(n, bound):
    if n == 2:
        return [(a, b) for a in range(bound + 1) for b in range(bound + 1)]
    return [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]


def test_glue_agrees_with_nef_in_dimension_and_span(eng12, engb2):
    for engine in (eng12, engb2):
        for multidegree in _small_grid(2, 2):
            nef = engine.section_basis_nef(multidegree)
            glue = engine.section_basis_glue(can=multidegree)
            assert len(nef) == len(glue)
            joint = span_rank(nef, glue)
            assert joint == span_rank(nef) == span_rank(glue) == len(nef)


def test_glue_repeated_letter_agreement(eng121):
    for multidegree in _small_grid(3, 1):
        nef = eng121.section_basis_nef(multidegree)
        glue = eng121.section_basis_glue(can=multidegree)
        assert len(nef) == len(glue)
        assert span_rank(nef, glue) == span_rank(nef) == len(nef)


def test_hirzebruch_counts(eng12):
    for c1 in range(3):
        for c2 in range(3):
            basis = eng12.section_basis_nef((c1, c2))
            assert len(basis) == hirzebruch_count(c1, c2)


def test_glue_off_the_nef_cone(eng12):
    twisted = eng12.section_basis_glue(can=(-2, 2))
    assert [poly_terms(sp) for sp in twisted] == [{(0, 2): 1}]
    assert twisted[0].multidegree == (-2, 2)
    assert twisted[0].weight.coords == (0, -2)
    assert [poly_terms(sp) for sp in eng12.section_basis_glue(can=(-1, 1))] \
        == [{(0, 1): 1}]


def test_glue_accepts_effective_coordinates(eng12, eng121):
    assert len(eng12.section_basis_glue(eff=(2, 1))) == 5
    assert len(eng121.section_basis_glue(eff=(0, 0, 1))) == 1


def test_monomial_basis_matches_glue_for_multiplicity_free(eng12):
    assert eng12.is_multiplicity_free()
    for can in [(-2, 2), (-1, 1), (0, 1), (1, 1)]:
        mono = eng12.monomial_section_basis(can=can)
        glue = eng12.section_basis_glue(can=can)
        assert len(mono) == len(glue)
        assert span_rank(mono, glue) == len(mono)


def test_monomial_basis_refuses_repeated_letters(eng121):
    assert not eng121.is_multiplicity_free()
    with pytest.raises(ValidationError):
        eng121.monomial_section_basis(can=(0, 1, 1))


def test_order_matrices(eng12, eng121):
    assert eng12.slot_order_matrix() == ((1, 0), (0, 1))
    assert eng12.coordinate_order_matrix() == ((1, -1), (0, 1))
    assert eng121.slot_order_matrix() == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert eng121.coordinate_order_matrix() == ((1, -1, 1), (0, 1, -1),
                                                (0, 0, 1))


def test_effective_exponents_repeated_letter(eng121):
    assert eng121.effective_exponents((0, 0, 1)) == (1, -1, 1)
    assert eng121.effective_exponents((1, 0, 0)) == (1, 0, 0)
    assert eng121.effective_exponents((0, 1, 0)) == (-1, 1, 0)


def test_boundary_sections(eng12):
    for j in (1, 2):
        section = eng12.boundary_section(j)
        expected = tuple(1 if k == j - 1 else 0 for k in range(2))
        assert poly_terms(section) == {expected: 1}
        assert valuation(section) == expected
        assert section.multidegree is None and section.weight is None
    with pytest.raises(ValidationError):
        eng12.boundary_section(3)


def test_fixed_part_peel(eng12):
    fixed, movable = eng12.fixed_part_peel((-1, 1), 1)
    assert fixed == DivisorClass((0, 1), Basis.EFFECTIVE)
    assert movable == 1
    fixed, movable = eng12.fixed_part_peel((1, 1), 1)
    assert fixed == DivisorClass((0, 0), Basis.EFFECTIVE)
    assert movable == 5
    fixed, movable = eng12.fixed_part_peel((-2, 2), 2)
    assert fixed == DivisorClass((0, 4), Basis.EFFECTIVE)
    assert movable == 1


def test_fixed_part_scales_linearly(eng12):
    parts = [eng12.fixed_part_peel((-1, 1), level)[0].coords
             for level in (1, 2, 3)]
    assert parts == [(0, 1), (0, 2), (0, 3)]


def test_peel_of_empty_class_is_rejected(eng12):
    with pytest.raises(ValidationError):
        eng12.fixed_part_peel((1, -1), 1)


def test_equivariance_spot_checks(eng12, eng121):
    nef = eng12.section_basis_nef((1, 1))
    assert eng12.equivariance_failures(nef, (1, 1)) == 0
    basis = eng121.section_basis_nef((0, 1, 1))
    assert eng121.equivariance_failures(basis, (0, 1, 1)) == 0


def test_torus_grading_matches_character(eng12, a2):
    basis = eng12.section_basis_nef((2, 1))
    counted: dict[tuple, int] = {}
    for sp in basis:
        counted[sp.weight.coords] = counted.get(sp.weight.coords, 0) + 1
    character = bs_character(a2, [1, 2], (2, 1))
    assert counted == {w.coords: m for w, m in character.terms.items()}


def test_products_land_in_the_sum_class(eng12):
    first = eng12.section_basis_nef((0, 1))
    second = eng12.section_basis_nef((1, 0))
    target = eng12.section_basis_nef((1, 1))
    target_rank = span_rank(target)
    for f in first:
        for g in second:
            product = f.poly * g.poly
            monos = sorted({m for sp in target for m in sp.poly.terms}
                           | set(product.terms))
            index = {m: i for i, m in enumerate(monos)}
            rows = [{index[m]: c for m, c in sp.poly.terms.items()}
                    for sp in target]
            rows.append({index[m]: c for m, c in product.terms.items()})
            assert dense_rank(rows, len(monos)) == target_rank


def test_group_model_resolution(a2, b2):
    model_a = GroupModel.resolve(a2)
    assert sorted(model_a.reps) == [1, 2]
    model_b = GroupModel.resolve(b2)
    assert sorted(model_b.reps) == [1, 2]
    assert GroupModel.bundled("B2").datum.matrix == b2.matrix


def test_group_model_file_validation(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"matrix": [[2]]}))
    with pytest.raises(ValidationError):
        GroupModel.from_file(str(path))


def test_unknown_bundled_model():
    with pytest.raises(ValidationError):
        GroupModel.bundled("E8")
