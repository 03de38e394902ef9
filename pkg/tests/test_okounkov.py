"""Valuation semigroups, Okounkov bodies, global cones, identity checks."""

from __future__ import annotations

from fractions import Fraction

import pytest

from bottsam import (
    Basis,
    DivisorClass,
    NotNef,
    ValidationError,
    bs_character,
)
from bottsam.okounkov import GradedValuationPoint

from oracles import hirzebruch_count

GOLDEN_RAYS_12 = ((0, 0, 1, 0), (0, 0, 1, 1), (0, 1, 0, 1), (1, 0, 1, 0))


def can(*coords):
    return DivisorClass(coords, Basis.CANONICAL)


def test_base_semigroup(okounkov_a1):
    got = okounkov_a1.semigroup(can(1), 2)
    assert set(got) == {
        GradedValuationPoint((0,), 1), GradedValuationPoint((1,), 1),
        GradedValuationPoint((0,), 2), GradedValuationPoint((1,), 2),
        GradedValuationPoint((2,), 2)}


def test_base_body_is_a_segment(okounkov_a1):
    body = okounkov_a1.body(can(3), 3)
    assert sorted(body.polytope.vertices) == [(0,), (3,)]
    assert body.truncation == 3
    assert body.divisor == can(3)


def test_base_global_cone(okounkov_a1):
    approx = okounkov_a1.global_cone(2, 3)
    assert approx.cone.rays == ((0, 1), (1, 1))
    assert approx.rays == approx.cone.rays
    assert approx.saturated
    assert approx.level_cap == 2 and approx.box_cap == 3


def test_zero_box_gives_the_zero_cone(okounkov_a1):
    approx = okounkov_a1.global_cone(1, 0)
    assert approx.cone.rays == ()
    assert not approx.saturated


def test_level_one_points_match_sections(okounkov_a2_12):
    points = okounkov_a2_12.valuation_points(can(1, 1))
    assert sorted(points) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1)]


def test_counting_identity_small(okounkov_a2_12, a2):
    for c1 in range(3):
        for c2 in range(3):
            for level in range(1, 4):
                points = okounkov_a2_12.valuation_points(can(c1, c2), level)
                scaled = (level * c1, level * c2)
                expected = bs_character(a2, [1, 2], scaled).dimension()
                assert len(points) == len(set(points)) == expected
                assert expected == hirzebruch_count(*scaled)


def test_body_of_the_fiber_class(okounkov_a2_12):
    body = okounkov_a2_12.body(can(0, 1), 4)
    assert sorted(body.polytope.vertices) == [(0, 0), (0, 1), (1, 1)]
    assert body.polytope.volume() == Fraction(1, 2)


def test_body_of_a_non_nef_class_can_degenerate(okounkov_a2_12):
    body = okounkov_a2_12.body(can(-1, 1), 4)
    assert body.polytope.vertices == ((0, 1),)


def test_body_requires_an_effective_class(okounkov_a2_12):
    with pytest.raises(ValidationError):
        okounkov_a2_12.body(can(1, -1), 3)


def test_volume_check_report(okounkov_a2_12):
    report = okounkov_a2_12.volume_check(can(1, 1), 8)
    assert report["hull_volume"] == Fraction(3, 2)
    assert report["target_volume"] == Fraction(3, 2)
    assert report["gap"] == 0
    assert report["stabilized"] and report["certified"]
    rows = report["levels"]
    assert [row["level"] for row in rows] == list(range(1, 9))
    assert all(row["count_match"] for row in rows)
    assert all(row["dilation_match"] for row in rows)


def test_volume_check_on_b2(okounkov_b2_12):
    report = okounkov_b2_12.volume_check(can(1, 1), 8)
    assert report["hull_volume"] == report["target_volume"] == Fraction(3, 2)
    assert report["certified"]


def test_volume_check_requires_nef(okounkov_a2_12):
    with pytest.raises(NotNef):
        okounkov_a2_12.volume_check(can(-1, 1), 4)


def test_global_cone_golden_rays(okounkov_a2_12):
    approx = okounkov_a2_12.global_cone(6, 3)
    assert approx.cone.rays == GOLDEN_RAYS_12
    assert approx.saturated


def test_b2_shares_the_golden_rays(okounkov_b2_12):
    approx = okounkov_b2_12.global_cone(6, 3)
    assert approx.cone.rays == GOLDEN_RAYS_12
    assert approx.saturated


def test_global_cone_validation(okounkov_a1):
    with pytest.raises(ValidationError):
        okounkov_a1.global_cone(0, 2)
    with pytest.raises(ValidationError):
        okounkov_a1.global_cone(2, -1)


def test_surface_recipe_matches_the_saturated_cone(okounkov_a2_12,
                                                   okounkov_b2_12):
    for engine in (okounkov_a2_12, okounkov_b2_12):
        generators, cone = engine.indok_generators_surface()
        saturated = engine.global_cone(6, 3).cone
        assert cone.rays == saturated.rays
        assert generators


def test_surface_recipe_needs_a_surface(okounkov_a2_121):
    with pytest.raises(ValidationError):
        okounkov_a2_121.surface_chamber_data()


def test_restriction_identity(okounkov_a2_12):
    for divisor in (can(0, 1), can(1, 1), can(1, 0), can(2, 1)):
        report = okounkov_a2_12.restriction_check(divisor)
        assert report["contained"]
        assert report["equal"]
        assert report["truncation"] >= 1
        assert report["image_vertices"] and report["intrinsic_vertices"]


def test_semigroup_points_live_at_every_level(okounkov_a2_121, a2):
    divisor = DivisorClass((0, 1, 1), Basis.CANONICAL)
    for level in range(1, 4):
        points = okounkov_a2_121.valuation_points(divisor, level)
        expected = bs_character(
            a2, [1, 2, 1], (0, level, level)).dimension()
        assert len(points) == expected


def test_repeated_letter_body_has_full_dimension(okounkov_a2_121):
    body = okounkov_a2_121.body(DivisorClass((0, 1, 1), Basis.CANONICAL), 4)
    polytope = body.polytope
    assert polytope.ambient == 3
    assert not polytope.equations
    assert polytope.volume() == 1
