from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from branchcover.enumeration import all_candidates_n3, positive_chi_candidates
from branchcover.euler import (
    cover_euler_characteristic,
    geometry_class,
    induced_orbifold_cover,
    is_bad,
    orbifold_euler_characteristic,
    validate_candidate,
    validate_orbifold_cover,
)
from branchcover.model import (
    GeometryClass,
    Instruction,
    Orbifold,
    OrbifoldCover,
    format_orbifold,
    parse_candidate,
    parse_orbifold,
)


@pytest.mark.parametrize(
    "text, chi",
    [("4: (2,2)(3,1)(3,1)", 2), ("2: (2)(2)", 2), ("4: (2,2)(2,2)(2,2)(2,2)", 0)],
)
def test_cover_euler_characteristic(text, chi):
    assert cover_euler_characteristic(parse_candidate(text)) == chi


def test_validate_sphere_cover_length():
    report = validate_candidate(parse_candidate("8: (7,1)(3,3,1,1)(2,2,2,2)"))
    assert report.ok
    assert "length=10 d+2=10 yes" in report["sphere cover"].detail


def test_validate_reports_each_failure():
    report = validate_candidate(parse_candidate("4: (2,2)(3,1)", validate=False))
    assert not report.ok
    assert not report["euler bound"].passed
    assert report["partition sums"].passed

    report = validate_candidate(parse_candidate("3: (1,1,1)(3)", validate=False))
    assert not report["nontrivial partitions"].passed
    assert report.render().startswith("FAILED")


@pytest.mark.parametrize(
    "text, chi",
    [("T", Fraction(0)), ("S(2,3,6)", Fraction(0)), ("S(2,3,7)", Fraction(-1, 42)), ("S", Fraction(2))],
)
def test_orbifold_euler_characteristic(text, chi):
    assert orbifold_euler_characteristic(parse_orbifold(text)) == chi


@pytest.mark.parametrize(
    "text, geometry",
    [
        ("S(3)", GeometryClass.BAD),
        ("S(2,3)", GeometryClass.BAD),
        ("S(3,3)", GeometryClass.SPHERICAL),
        ("S", GeometryClass.SPHERICAL),
        ("S(2,2,2,2)", GeometryClass.EUCLIDEAN),
        ("T", GeometryClass.EUCLIDEAN),
        ("S(2,3,5)", GeometryClass.SPHERICAL),
        ("S(2,3,7)", GeometryClass.HYPERBOLIC),
        ("G2", GeometryClass.HYPERBOLIC),
    ],
)
def test_geometry_class(text, geometry):
    assert geometry_class(parse_orbifold(text)) is geometry


def test_bad_orbifolds_have_positive_characteristic():
    for p in range(2, 12):
        assert is_bad(Orbifold(0, (p,)))
        for q in range(p + 1, 12):
            x = Orbifold(0, (p, q))
            assert is_bad(x) and orbifold_euler_characteristic(x) > 0


def test_induced_cover_with_bad_source():
    oc = induced_orbifold_cover(parse_candidate("9: (2,2,2,2,1)(3,3,3)(3,3,3)"))
    assert (format_orbifold(oc.source), format_orbifold(oc.target)) == ("S(2)", "S(2,3,3)")
    instructions = sorted((i.target, i.source) for i in oc.instructions)
    assert instructions == [(2, (1, 1, 1, 1, 2)), (3, (1, 1, 1)), (3, (1, 1, 1))]
    assert orbifold_euler_characteristic(oc.source) == Fraction(3, 2)
    assert 9 * orbifold_euler_characteristic(oc.target) == Fraction(3, 2)
    assert validate_orbifold_cover(oc).ok


@pytest.mark.parametrize(
    "text, source, target",
    [("2: (2)(2)", "S", "S(2,2)"), ("5: (2,2,1)(4,1)(4,1)", "S(2,4,4)", "S(2,4,4)")],
)
def test_induced_cover_examples(text, source, target):
    oc = induced_orbifold_cover(parse_candidate(text))
    assert (format_orbifold(oc.source), format_orbifold(oc.target)) == (source, target)


def test_instruction_reads_back_partition():
    oc = induced_orbifold_cover(parse_candidate("8: (5,1,1,1)(4,4)(2,2,2,2)"))
    assert sorted(i.partition().entries for i in oc.instructions) == [(2, 2, 2, 2), (4, 4), (5, 1, 1, 1)]


def test_hand_built_cover():
    good = OrbifoldCover(Orbifold(0, (3, 3)), Orbifold(0, (6, 6)), 2, (Instruction(6, (3,)), Instruction(6, (3,))))
    assert validate_orbifold_cover(good).ok
    bad = OrbifoldCover(Orbifold(0, (3, 3)), Orbifold(0, (6, 6)), 3, (Instruction(6, (3,)), Instruction(6, (3,))))
    report = validate_orbifold_cover(bad)
    assert not report["degree sums"].passed
    assert not report["multiplicativity"].passed


_SMALL = [c for d in range(2, 9) for c in all_candidates_n3(d, cover_genus=None)] + positive_chi_candidates(12)


@settings(max_examples=200)
@given(st.sampled_from(_SMALL))
def test_induced_cover_is_consistent(c):
    assert validate_orbifold_cover(induced_orbifold_cover(c)).ok
