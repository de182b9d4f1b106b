"""Generation of candidate covers over the sphere and the two degree-8 tables."""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from fractions import Fraction

from .decide import TEMPLATES, family_instances
from .euler import (
    geometry_class,
    induced_orbifold_cover,
    orbifold_euler_characteristic,
    validate_candidate,
)
from .model import (
    CandidateCover,
    GeometryClass,
    Orbifold,
    Partition,
    format_orbifold,
    integer_partitions,
)


def partitions_defect_at_most(d: int, cmax: int, include_trivial: bool = True) -> list[Partition]:
    """Partitions of ``d`` with at most ``cmax`` entries different from their lcm.

    Built as up to ``cmax`` proper divisors of an lcm ``L`` plus copies of ``L``,
    so the cost does not grow with the number of all partitions of ``d``.
    Output is in reverse lexicographic order.

    >>> [str(p) for p in partitions_defect_at_most(4, 0)]
    ['(4)', '(2,2)', '(1,1,1,1)']
    """
    found = set()
    for size in range(cmax + 1):
        for defect in itertools.combinations_with_replacement(range(1, d + 1), size):
            rest = d - sum(defect)
            if rest < 0:
                continue
            base = math.lcm(*defect) if defect else 1
            top = max(defect, default=0)
            if rest == 0:
                if defect and base > top:
                    found.add(tuple(sorted(defect, reverse=True)))
                continue
            for lcm in range(base, rest + 1, base):
                if lcm > top and rest % lcm == 0:
                    entries = defect + (lcm,) * (rest // lcm)
                    found.add(tuple(sorted(entries, reverse=True)))
    parts = sorted(found, reverse=True)
    if not include_trivial:
        parts = [p for p in parts if p[0] > 1]
    return [Partition(p) for p in parts]


def _by_length(parts):
    index = defaultdict(list)
    for p in parts:
        index[len(p)].append(p)
    return index


def triangular_candidates(d: int) -> list[CandidateCover]:
    """Sphere covers with three branching points inducing a cover of triangular orbifolds.

    These are the triples with total length ``d + 2`` and total defect 3.
    """
    if d < 2:
        return []
    parts = partitions_defect_at_most(d, 3, include_trivial=False)
    index = defaultdict(list)
    for p in parts:
        index[(p.defect, len(p))].append(p)
    out = set()
    for p1, p2 in itertools.combinations_with_replacement(parts, 2):
        c3 = 3 - p1.defect - p2.defect
        l3 = d + 2 - len(p1) - len(p2)
        if c3 < 0 or l3 < 1:
            continue
        for p3 in index.get((c3, l3), ()):
            out.add(CandidateCover(d, (p1, p2, p3)))
    return sorted(out, key=_table_row_key)


def _row_partitions(c: CandidateCover):
    """Partitions by largest entry (descending), then length (descending)."""
    return sorted(c.partitions, key=lambda p: (-p.entries[0], -len(p), tuple(-e for e in p.entries)))


def _table_row_key(c: CandidateCover):
    return (c.degree, [p.entries for p in _row_partitions(c)])


def _candidate_key(c: CandidateCover):
    return (c.degree, [tuple(-e for e in p.entries) for p in c.partitions])


def census_degree_bound() -> int:
    """Largest possible degree of a cover between hyperbolic triangular orbifolds.

    The source characteristic satisfies ``0 < -chi < 1`` and the target one is
    at least ``1/42`` in absolute value (attained by ``S(2,3,7)``), so
    ``d = chi(source) / chi(target) < 42``.
    """
    smallest = min(
        -orbifold_euler_characteristic(Orbifold(0, (p, q, r)))
        for p in range(2, 8)
        for q in range(p, 13)
        for r in range(q, 50)
        if orbifold_euler_characteristic(Orbifold(0, (p, q, r))) < 0
    )
    assert smallest == Fraction(1, 42)
    bound = math.ceil(1 / smallest) - 1
    assert bound == 41
    return bound


def hyperbolic_triangular(d: int) -> list[CandidateCover]:
    """Triangular candidates of degree ``d`` whose induced orbifolds are hyperbolic."""
    return [
        c
        for c in triangular_candidates(d)
        if geometry_class(induced_orbifold_cover(c).target) is GeometryClass.HYPERBOLIC
    ]


def hyperbolic_triangular_census(max_degree: int | None = None) -> list[CandidateCover]:
    """All sphere covers inducing a cover between hyperbolic triangular orbifolds.

    ``max_degree`` overrides the computed bound, e.g. to audit that nothing
    appears beyond it.
    """
    limit = census_degree_bound() if max_degree is None else max_degree
    return [c for d in range(2, limit + 1) for c in hyperbolic_triangular(d)]


def partitions_with_lcm(d: int, lcm: int, max_length: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of ``d`` into divisors of ``lcm`` whose lcm is exactly ``lcm``."""
    divisors = [v for v in range(lcm, 0, -1) if lcm % v == 0]
    out = []

    def rec(left, idx, acc):
        if max_length is not None and len(acc) > max_length:
            return
        if left == 0:
            if math.lcm(*acc) == lcm:
                out.append(tuple(acc))
            return
        for j in range(idx, len(divisors)):
            v = divisors[j]
            if v <= left:
                acc.append(v)
                rec(left - v, j, acc)
                acc.pop()

    rec(d, 0, [])
    return out


def partitions_max_length(d: int, max_length: int) -> list[tuple[int, ...]]:
    return [p for p in integer_partitions(d) if len(p) <= max_length]


def _valid(c: CandidateCover) -> bool:
    return validate_candidate(c).ok


def positive_chi_candidates(dmax: int, dmin: int = 2) -> list[CandidateCover]:
    """Sphere-based candidates with at most three branching points over a target of positive
    orbifold characteristic (``S(p,q)``, ``S(2,2,r)``, ``S(2,3,3)``, ``S(2,3,4)``, ``S(2,3,5)``)."""
    out = set()
    for d in range(max(dmin, 2), dmax + 1):
        # two branching points: Riemann-Hurwitz forces both partitions to be (d)
        out.add(CandidateCover(d, ((d,), (d,))))
        twos = partitions_with_lcm(d, 2)
        threes = partitions_with_lcm(d, 3)
        for p1, p2 in itertools.combinations_with_replacement(twos, 2):
            room = d + 2 - len(p1) - len(p2)
            for p3 in partitions_max_length(d, room):
                if p3[0] > 1:
                    out.add(CandidateCover(d, (p1, p2, p3)))
        for p1 in twos:
            for p2 in threes:
                room = d + 2 - len(p1) - len(p2)
                if room < 1:
                    continue
                for top in (3, 4, 5):
                    for p3 in partitions_with_lcm(d, top, room):
                        out.add(CandidateCover(d, (p1, p2, p3)))
    keep = [
        c
        for c in out
        if _valid(c) and orbifold_euler_characteristic(induced_orbifold_cover(c).target) > 0
    ]
    return sorted(keep, key=_candidate_key)


EUCLIDEAN_TARGETS = ((2, 4, 4), (2, 3, 6), (3, 3, 3), (2, 2, 2, 2))


def euclidean_candidates(dmax: int, dmin: int = 2) -> list[CandidateCover]:
    """Sphere-based candidates whose induced target (hence also source) is Euclidean."""
    out = set()
    for d in range(max(dmin, 2), dmax + 1):
        for orders in EUCLIDEAN_TARGETS:
            pools = {top: partitions_with_lcm(d, top) for top in set(orders)}
            if len(orders) == 3:
                first, second, third = orders
                index = {top: _by_length(pools[top]) for top in set(orders)}
                for p1 in pools[first]:
                    for p2 in pools[second]:
                        for genus in (0, 1):
                            length = d + 2 - 2 * genus - len(p1) - len(p2)
                            for p3 in index[third].get(length, ()):
                                out.add(CandidateCover(d, (p1, p2, p3)))
            else:
                for combo in itertools.combinations_with_replacement(pools[2], 4):
                    out.add(CandidateCover(d, combo))
    keep = [
        c
        for c in out
        if _valid(c) and orbifold_euler_characteristic(induced_orbifold_cover(c).target) == 0
    ]
    return sorted(keep, key=_candidate_key)


def all_candidates_n3(d: int, cover_genus: int | None = 0) -> list[CandidateCover]:
    """Every triple of nontrivial partitions of ``d`` satisfying Riemann-Hurwitz over the sphere.

    ``cover_genus=None`` admits every cover genus.
    """
    parts = [p for p in integer_partitions(d) if p[0] > 1]
    index = _by_length(parts)
    genera = range(0, d + 1) if cover_genus is None else (cover_genus,)
    out = set()
    for genus in genera:
        total = d + 2 - 2 * genus
        for p1, p2 in itertools.combinations_with_replacement(parts, 2):
            for p3 in index.get(total - len(p1) - len(p2), ()):
                out.add(CandidateCover(d, (p1, p2, p3)))
    return sorted(out, key=_candidate_key)


def euclidean_template_instances(dmax: int) -> list[tuple[tuple[int, int, int], CandidateCover]]:
    """``((case, family, k), candidate)`` for every family instance of degree at most ``dmax``."""
    out = []
    for (case, fam), template in sorted(TEMPLATES.items()):
        for k, c in family_instances(template, dmax):
            out.append(((case, fam, k), c))
    return out


# ---------------------------------------------------------------------------
# exceptional candidates over spherical targets

SPORADIC_BAD_SOURCE = (
    "9: (2,2,2,2,1)(3,3,3)(3,3,3)",
    "9: (2,2,2,2,1)(3,3,3)(4,4,1)",
    "10: (2,2,2,2,2)(3,3,3,1)(4,4,2)",
    "16: (2,2,2,2,2,2,2,2)(3,3,3,3,3,1)(4,4,4,4)",
    "16: (2,2,2,2,2,2,2,2)(3,3,3,3,3,1)(5,5,5,1)",
    "18: (2,2,2,2,2,2,2,2,2)(3,3,3,3,3,3)(4,4,4,4,2)",
    "21: (2,2,2,2,2,2,2,2,2,2,1)(3,3,3,3,3,3,3)(5,5,5,5,1)",
    "25: (2,2,2,2,2,2,2,2,2,2,2,2,1)(3,3,3,3,3,3,3,3,1)(5,5,5,5,5)",
    "36: (" + ",".join(["2"] * 18) + ")(" + ",".join(["3"] * 12) + ")(5,5,5,5,5,5,5,1)",
    "40: (" + ",".join(["2"] * 20) + ")(" + ",".join(["3"] * 13) + ",1)(5,5,5,5,5,5,5,5)",
    "45: (" + ",".join(["2"] * 22) + ",1)(" + ",".join(["3"] * 15) + ")(5,5,5,5,5,5,5,5,5)",
)


def bad_source_list(dmax: int) -> list[CandidateCover]:
    """The known exceptional candidates over spherical targets, up to degree ``dmax``."""
    from .model import parse_candidate

    out = [c for c in map(parse_candidate, SPORADIC_BAD_SOURCE) if c.degree <= dmax]
    for k in range(2, dmax // 2 + 1):
        for h in range(1, k):
            out.append(CandidateCover(2 * k, ((2,) * k, (2,) * k, (h, 2 * k - h))))
    return sorted(set(out), key=_candidate_key)


# ---------------------------------------------------------------------------
# the degree-8 tables


def render_defect_table(d: int = 8, cmax: int = 3, blocks: int = 3) -> str:
    """Nontrivial partitions with small defect, laid out column by column in blocks."""
    parts = partitions_defect_at_most(d, cmax, include_trivial=False)
    lines = []
    for b in range(blocks):
        chunk = parts[b::blocks]
        if not chunk:
            continue
        if lines:
            lines.append("")
        lines.append("\t".join(["Pi"] + [str(p) for p in chunk]))
        lines.append("\t".join(["l"] + [str(len(p)) for p in chunk]))
        lines.append("\t".join(["c"] + [str(p.defect) for p in chunk]))
    return "\n".join(lines) + "\n"


_GEOMETRY_LETTER = {
    GeometryClass.SPHERICAL: "S",
    GeometryClass.EUCLIDEAN: "E",
    GeometryClass.HYPERBOLIC: "H",
    GeometryClass.BAD: "B",
}


def render_triangular_table(d: int = 8) -> str:
    """Triangular candidates of one degree with their induced cover and its geometry."""
    rows = triangular_candidates(d)
    lines = ["Pi1\tPi2\tPi3\tAssociated cover\tGeometry"]
    for c in rows:
        oc = induced_orbifold_cover(c)
        cover = f"{format_orbifold(oc.source)} ~> {format_orbifold(oc.target)}"
        cells = [str(p) for p in _row_partitions(c)]
        lines.append("\t".join(cells + [cover, _GEOMETRY_LETTER[geometry_class(oc.target)]]))
    return "\n".join(lines) + "\n"
