import pytest
from hypothesis import given, strategies as st

from branchcover.decide import TEMPLATES, decide, family_instances, match_euclidean_family
from branchcover.model import Verdict, parse_candidate
from branchcover.witness import (
    CASES,
    NOT_A_LIFT,
    TARGET_CLASSES,
    AffineWitness,
    Frame,
    LatticePoint,
    cone_images,
    construct_witness,
    eisenstein,
    gaussian,
    lattice_inclusion_check,
    lift_class,
    mu_options,
    search_witness,
    torus_sublattice,
    torus_witness,
    verify_witness,
)

SQUARE_TARGETS = ("S(2,4,4)", "S(2,2,2,2)")
HEX_TARGETS = ("S(2,3,6)", "S(3,3,3)")


def test_lift_class_examples():
    assert lift_class("S(2,4,4)", LatticePoint.gauss(0, 0)) == "B4"
    assert lift_class("S(2,4,4)", LatticePoint.gauss(2, 1)) == "A2"
    assert lift_class("S(2,4,4)", LatticePoint.gauss(1, 1)) == "C4"
    assert lift_class("S(3,3,3)", LatticePoint.eisenstein(1, 2)) == "C3"
    assert lift_class("S(2,3,6)", LatticePoint.eisenstein(0, 0)) == "B3"
    assert lift_class("S(3,3,3)", LatticePoint.half_eisenstein(1, 0)) == NOT_A_LIFT


def test_lift_class_rejects_wrong_frame():
    with pytest.raises(ValueError):
        lift_class("S(2,3,6)", LatticePoint.gauss(0, 0))


def test_points_of_different_frames_do_not_add():
    with pytest.raises(ValueError):
        LatticePoint.gauss(1, 0) + LatticePoint.eisenstein(1, 0)


small = st.integers(-30, 30)


@given(small, small, small, small)
def test_square_classes_are_lattice_invariant(a, b, u, v):
    # translations of S(2,4,4) and S(2,2,2,2) are 2Z[i]
    for target in SQUARE_TARGETS:
        p = LatticePoint.gauss(a, b)
        q = p + LatticePoint.gauss(2 * u, 2 * v)
        assert lift_class(target, p) == lift_class(target, q)


@given(small, small, small, small)
def test_hex_classes_are_lattice_invariant(a, b, u, v):
    # translation lattice generated by i*sqrt3 = -1 + 2w and (3 + i*sqrt3)/2 = 1 + w
    shift = LatticePoint.eisenstein(-u + v, 2 * u + v)
    for target in HEX_TARGETS:
        p = LatticePoint.half_eisenstein(a, b)
        assert lift_class(target, p) == lift_class(target, p + shift)


def test_each_class_has_a_representative():
    for target, classes in TARGET_CLASSES.items():
        found = {lift_class(target, mu) for mu in mu_options(target)}
        assert set(classes) <= found


def test_lattice_inclusion():
    assert lattice_inclusion_check(1, lam=gaussian(1, 2))
    assert lattice_inclusion_check(2, {"n": 1, "m": 2})
    assert lattice_inclusion_check(2, lam=eisenstein(3, -2))
    # 1 + i*sqrt3 is not a Gaussian integer
    assert not lattice_inclusion_check(1, lam=eisenstein(0, 2))


@given(small, small)
def test_degree_is_squared_modulus(n, m):
    for case_id in (1, 2, 3):
        case = CASES[case_id]
        params = {"n": n, "m": m}
        assert case.scale(params).norm() == case.degree(params)


def test_degree_five_images():
    c = parse_candidate("5: (2,2,1)(4,1)(4,1)")
    w = construct_witness(c)
    assert (w.case_id, w.family_index, w.parameters, w.mu) == (1, 1, {"n": 1, "m": 2}, LatticePoint.gauss(0, 0))
    images = {(src, cls, str(pt)) for src, cls, pt in cone_images(w)}
    assert images == {("A", "A2", "1+2i"), ("B", "B4", "0+0i"), ("C", "C4", "-1+3i")}
    assert verify_witness(c, w).ok


def test_swapped_parameters_also_verify():
    c = parse_candidate("5: (2,2,1)(4,1)(4,1)")
    w = AffineWitness(1, 1, {"n": 2, "m": 1}, LatticePoint.gauss(0, 0), 5)
    assert verify_witness(c, w).ok


def test_even_parameters_fail_at_cone_images():
    # lambda = 2+2i sends every marked point to B4, but the order-2 point must reach A2
    c = parse_candidate("5: (2,2,1)(4,1)(4,1)")
    w = AffineWitness(1, 1, {"n": 2, "m": 2}, LatticePoint.gauss(0, 0), 8)
    report = verify_witness(c, w)
    assert report["lattice"].passed
    assert not report["cone images"].passed
    assert "B4" in report["cone images"].detail


def test_witness_for_wrong_degree_fails():
    c = parse_candidate("5: (2,2,1)(4,1)(4,1)")
    w = AffineWitness(1, 1, {"n": 1, "m": 1}, LatticePoint.gauss(0, 0), 2)
    assert not verify_witness(c, w)["degree"].passed


def test_construct_witness_examples():
    c = parse_candidate("9: (2,2,2,2,1)(4,4,1)(4,4,1)")
    w = construct_witness(c)
    assert w.parameters == {"n": 0, "m": 3} and verify_witness(c, w).ok
    assert construct_witness(parse_candidate("6: (2,1,1,1,1)(2,2,2)(2,2,2)(2,2,2)")) is None


def test_torus_witnesses():
    t = torus_sublattice("S(2,2,2,2)", 2)
    assert (t.k, t.index) == (1, 2)
    t = torus_sublattice("S(2,3,6)", 12)
    assert (t.k, t.index) == (2, 6)
    t = torus_sublattice("T", 3)
    assert t.basis == (LatticePoint(Frame.SQUARE, 3, 0), LatticePoint(Frame.SQUARE, 0, 1))
    with pytest.raises(ValueError):
        torus_sublattice("S(2,3,6)", 8)
    t = torus_witness(parse_candidate("9: (3,3,3)(3,3,3)(3,3,3)"))
    assert (t.target, t.k, t.index) == ("S(3,3,3)", 3, 3)


@pytest.mark.parametrize("key", sorted(k for k in TEMPLATES if k[0] != 0))
def test_witnesses_exist_exactly_when_realizable(key):
    for _, c in family_instances(TEMPLATES[key], 100):
        realizable = decide(c).verdict is Verdict.REALIZABLE
        w = construct_witness(c)
        assert (w is not None) == realizable, str(c)
        if w is not None:
            report = verify_witness(c, w)
            assert report.ok, (str(c), report.failures())


@pytest.mark.parametrize("key", sorted(k for k in TEMPLATES if k[0] != 0))
def test_search_agrees_with_criteria(key, criteria):
    # search is independent of the recipe and of the form criterion
    for _, c in family_instances(TEMPLATES[key], 40):
        found = search_witness(c, match_euclidean_family(c))
        assert (found is not None) == criteria[key](c.degree), str(c)


def test_never_families_have_no_witness():
    for key in [(5, 3), (6, 5), (7, 4)]:
        for _, c in family_instances(TEMPLATES[key], 100):
            assert search_witness(c, match_euclidean_family(c)) is None

