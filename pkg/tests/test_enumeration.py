from collections import defaultdict
from functools import lru_cache
from pathlib import Path

import pytest

from branchcover.decide import HYPERBOLIC_ROWS, TEMPLATES, decide, euclidean_case, family_instances
from branchcover.enumeration import (
    EUCLIDEAN_TARGETS,
    all_candidates_n3,
    bad_source_list,
    census_degree_bound,
    euclidean_candidates,
    euclidean_template_instances,
    hyperbolic_triangular_census,
    partitions_defect_at_most,
    positive_chi_candidates,
    render_defect_table,
    render_triangular_table,
    triangular_candidates,
)
from branchcover.euler import induced_orbifold_cover, validate_candidate
from branchcover.model import CandidateCover, Partition, Verdict, integer_partitions, parse_candidate
from branchcover.quadform import primes_up_to

GOLDEN = Path(__file__).parent / "golden"


@lru_cache(maxsize=None)
def positive_chi(dmax):
    return tuple(positive_chi_candidates(dmax))


def by_source(candidates):
    groups = defaultdict(set)
    for c in candidates:
        src = induced_orbifold_cover(c).source
        cones = src.cone_orders
        if src.genus:
            key = "positive genus"
        elif not cones:
            key = "S"
        elif len(cones) == 1 or (len(cones) == 2 and cones[0] != cones[1]):
            key = "bad"
        elif len(cones) == 2:
            key = "S(p,p)"
        elif cones[:2] == (2, 2) and len(cones) == 3:
            key = "S(2,2,p)"
        else:
            key = "S" + str(cones).replace(" ", "")
        groups[key].add(c)
    return groups


def repeat(value, count):
    return ",".join([str(value)] * count)


def test_defect_partitions_of_eight():
    parts = partitions_defect_at_most(8, 3, include_trivial=False)
    assert len(parts) == 15
    brute = [p for p in integer_partitions(8) if p[0] > 1 and Partition(p).defect <= 3]
    assert sorted(p.entries for p in parts) == sorted(brute)


@pytest.mark.parametrize("d, expected", [(2, [(2,), (1, 1)]), (4, [(4,), (2, 2), (1, 1, 1, 1)])])
def test_defect_zero(d, expected):
    assert [p.entries for p in partitions_defect_at_most(d, 0)] == expected


@pytest.mark.parametrize("d", range(1, 16))
@pytest.mark.parametrize("cmax", range(0, 4))
def test_defect_partitions_match_filter(d, cmax):
    expected = [p for p in integer_partitions(d) if Partition(p).defect <= cmax]
    assert [p.entries for p in partitions_defect_at_most(d, cmax)] == expected


def test_tables_match_golden_files():
    assert render_defect_table() == (GOLDEN / "table1.txt").read_text()
    assert render_triangular_table() == (GOLDEN / "table2.txt").read_text()


def test_triangular_degree_eight():
    found = [str(c) for c in triangular_candidates(8)]
    assert found == [
        "8: (4,4)(4,2,1,1)(2,2,2,2)",
        "8: (5,1,1,1)(4,4)(2,2,2,2)",
        "8: (6,2)(3,3,1,1)(2,2,2,2)",
        "8: (7,1)(3,3,1,1)(2,2,2,2)",
    ]


def test_triangular_small_degrees():
    assert triangular_candidates(2) == []
    assert parse_candidate("5: (2,2,1)(3,1,1)(5)") in triangular_candidates(5)


def test_census_bound():
    assert census_degree_bound() == 41


def test_census():
    census = hyperbolic_triangular_census()
    assert set(census) == {parse_candidate(t) for t in HYPERBOLIC_ROWS}
    assert len(census) == 9
    assert sorted(c.degree for c in census) == [6, 8, 8, 9, 10, 12, 12, 16, 24]
    assert len([c for c in census if c.degree == 12]) == 2


@pytest.mark.slow
def test_census_has_nothing_beyond_the_bound():
    assert hyperbolic_triangular_census(60) == hyperbolic_triangular_census()


def test_candidates_are_valid():
    for c in positive_chi(20):
        assert validate_candidate(c).ok
    for c in euclidean_candidates(16):
        assert validate_candidate(c).ok
    for d in range(2, 8):
        for c in all_candidates_n3(d, cover_genus=None):
            assert validate_candidate(c).ok


def test_exceptional_positive_candidates_are_the_bad_source_list():
    exceptional = {c for c in positive_chi(30) if decide(c).verdict is Verdict.EXCEPTIONAL}
    assert exceptional == set(bad_source_list(30))
    assert not [c for c in exceptional if c.degree in primes_up_to(30)]


def test_bad_source_first_item():
    assert parse_candidate("9: (2,2,2,2,1)(3,3,3)(3,3,3)") in bad_source_list(30)
    assert parse_candidate("4: (2,2)(2,2)(3,1)") in bad_source_list(30)


def test_positive_candidates_with_equal_order_source():
    expected = {
        parse_candidate(t)
        for t in [
            "4: (2,2)(3,1)(3,1)",
            "6: (2,2,1,1)(3,3)(3,3)",
            "6: (2,2,2)(3,3)(4,1,1)",
            "8: (2,2,2,2)(3,3,1,1)(4,4)",
            f"12: ({repeat(2, 5)},1,1)({repeat(3, 4)})(4,4,4)",
            f"12: ({repeat(2, 6)})({repeat(3, 4)})(4,4,2,2)",
            f"12: ({repeat(2, 6)})({repeat(3, 4)})(5,5,1,1)",
            f"20: ({repeat(2, 10)})({repeat(3, 6)},1,1)({repeat(5, 4)})",
            f"30: ({repeat(2, 14)},1,1)({repeat(3, 10)})({repeat(5, 6)})",
        ]
    }
    for k in range(1, 15):
        expected.add(CandidateCover(2 * k + 1, [(2,) * k + (1,), (2,) * k + (1,), (2 * k + 1,)]))
        expected.add(CandidateCover(2 * k + 2, [(2,) * k + (1, 1), (2,) * (k + 1), (2 * k + 2,)]))
    expected = {c for c in expected if c.degree <= 30}
    assert by_source(positive_chi(30))["S(p,p)"] == expected


def test_positive_candidates_with_dihedral_source():
    expected = {
        parse_candidate(t)
        for t in [
            "4: (2,1,1)(3,1)(4)",
            "6: (2,2,1,1)(3,3)(4,2)",
            "6: (2,2,1,1)(3,3)(5,1)",
            f"10: ({repeat(2, 4)},1,1)(3,3,3,1)(5,5)",
            f"15: ({repeat(2, 6)},1,1,1)({repeat(3, 5)})(5,5,5)",
        ]
    }
    assert by_source(positive_chi(30))["S(2,2,p)"] == expected


def test_positive_candidates_with_platonic_source():
    groups = by_source(positive_chi(30))
    assert groups["S(2,3,3)"] == {parse_candidate("5: (2,2,1)(3,1,1)(5)")}
    assert not groups["S(2,3,4)"] and not groups["S(2,3,5)"]


def test_positive_candidates_with_bad_source():
    assert by_source(positive_chi(30))["bad"] == set(bad_source_list(30))


def test_positive_candidates_are_spherical_or_bad_over_spherical():
    for c in positive_chi(30):
        target = induced_orbifold_cover(c).target
        assert target.genus == 0 and c.cover_genus == 0
        assert decide(c).verdict is not Verdict.UNDECIDED


def test_euclidean_candidates_are_the_templates():
    enumerated = set(euclidean_candidates(25))
    # includes the torus-source families, whose covering surface has genus one
    from_templates = {c for _, c in euclidean_template_instances(25)}
    assert enumerated == from_templates


def test_euclidean_case_one_small_degrees():
    case_one = {c for c in euclidean_candidates(13) if euclidean_case(induced_orbifold_cover(c)) == 1}
    templates = {c for key, t in TEMPLATES.items() if key[0] == 1 for _, c in family_instances(t, 13)}
    assert case_one == templates
    case_three = {c for c in euclidean_candidates(13) if euclidean_case(induced_orbifold_cover(c)) == 3}
    assert case_three == {c for key, t in TEMPLATES.items() if key[0] == 3 for _, c in family_instances(t, 13)}


def test_euclidean_degree_seven():
    assert parse_candidate("7: (2,2,2,1)(3,3,1)(6,1)") in euclidean_candidates(7, dmin=7)


def test_euclidean_targets():
    for c in euclidean_candidates(12):
        assert induced_orbifold_cover(c).target.cone_orders in EUCLIDEAN_TARGETS


def test_no_exceptions_at_prime_degree():
    primes = set(primes_up_to(31))
    pool = list(positive_chi(30)) + positive_chi_candidates(31, dmin=31) + euclidean_candidates(31)
    for c in pool:
        if c.degree in primes:
            assert decide(c).verdict is Verdict.REALIZABLE, str(c)


def test_all_candidates_small_degrees():
    assert all_candidates_n3(2) == []
    assert [str(c) for c in all_candidates_n3(3)] == ["3: (3)(2,1)(2,1)"]
    four = set(all_candidates_n3(4))
    assert parse_candidate("4: (2,2)(3,1)(3,1)") in four
    assert parse_candidate("4: (2,2)(2,2)(3,1)") in four


@pytest.mark.parametrize("d", range(2, 8))
def test_all_candidates_match_brute_force(d):
    shapes = [p for p in integer_partitions(d) if p[0] > 1]
    brute = set()
    for i, a in enumerate(shapes):
        for j in range(i, len(shapes)):
            for b in shapes[j:]:
                c = CandidateCover(d, [a, shapes[j], b])
                if c.total_length == d + 2:
                    brute.add(c)
    assert set(all_candidates_n3(d)) == brute
