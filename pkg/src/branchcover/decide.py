"""Realizability decisions driven by the geometry of the induced orbifold cover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .euler import geometry_class, induced_orbifold_cover, orbifold_euler_characteristic
from .model import (
    CandidateCover,
    Decision,
    GeometryClass,
    Orbifold,
    OrbifoldCover,
    Partition,
    Verdict,
    canonical_order,
    format_orbifold,
    parse_candidate,
)
from .quadform import Constraint, FormId, represent


class NoFamilyMatch(ValueError):
    """A Euclidean candidate that fits none of the known family templates."""


# ---------------------------------------------------------------------------
# Euclidean family templates

Groups = tuple[tuple[int, int], ...]

SOURCE_TARGET = {
    0: (None, None),
    1: ("S(2,4,4)", "S(2,4,4)"),
    2: ("S(2,3,6)", "S(2,3,6)"),
    3: ("S(3,3,3)", "S(3,3,3)"),
    4: ("S(2,2,2,2)", "S(2,2,2,2)"),
    5: ("S(3,3,3)", "S(2,3,6)"),
    6: ("S(2,2,2,2)", "S(2,4,4)"),
    7: ("S(2,2,2,2)", "S(2,3,6)"),
}


@dataclass(frozen=True)
class EuclideanFamily:
    case_id: int
    family_index: int
    k: int

    @property
    def template(self) -> "FamilyTemplate":
        return TEMPLATES[(self.case_id, self.family_index)]

    @property
    def degree(self) -> int:
        return self.template.degree(self.k)


@dataclass(frozen=True)
class FamilyTemplate:
    case_id: int
    family_index: int
    step: int
    offset: int
    shape: Callable[[int], tuple[Groups, ...]]
    tag: str
    criterion: Callable[[int], tuple[bool, dict]]

    @property
    def reason(self) -> str:
        return f"EUCL_C{self.case_id}F{self.family_index}_{self.tag}"

    def degree(self, k: int) -> int:
        return self.step * k + self.offset

    def partitions(self, k: int) -> tuple[Partition, ...] | None:
        """Partitions for parameter ``k``, or None when some group count is negative."""
        parts = []
        for groups in self.shape(k):
            if any(count < 0 for _, count in groups):
                return None
            entries = [value for value, count in groups for _ in range(count)]
            if not entries:
                return None
            parts.append(Partition(entries))
        return canonical_order(parts)

    def instance(self, k: int) -> CandidateCover | None:
        parts = self.partitions(k)
        if parts is None:
            return None
        return CandidateCover(self.degree(k), parts)


def _always(d):
    return True, {}


def _never(d):
    return False, {}


def _multiple(m):
    def check(d):
        return d % m == 0, {}

    return check


def _form(form, scale, constraint=Constraint.NONE):
    def check(d):
        if d % scale:
            return False, {}
        found = represent(form, d // scale, constraint)
        if found is None:
            return False, {}
        return True, {"x": found[0], "y": found[1]}

    return check


_DP = Constraint.DIFFERENT_PARITY
_NBE = Constraint.NOT_BOTH_EVEN
_INC = Constraint.INCONGRUENT_MOD_3
_SQ = FormId.X2_Y2
_LO = FormId.X2_XY_Y2
_Q3 = FormId.X2_3XY_3Y2


def _t(case, fam, step, offset, shape, tag, criterion):
    return FamilyTemplate(case, fam, step, offset, shape, tag, criterion)


_TEMPLATE_LIST = [
    # torus source
    _t(0, 2, 2, 0, lambda k: (((2, k),),) * 4, "TORUS", _always),
    _t(0, 3, 3, 0, lambda k: (((3, k),),) * 3, "TORUS", _always),
    _t(0, 4, 4, 0, lambda k: (((2, 2 * k),), ((4, k),), ((4, k),)), "TORUS", _always),
    _t(0, 5, 6, 0, lambda k: (((2, 3 * k),), ((3, 2 * k),), ((6, k),)), "TORUS", _always),
    # S(2,4,4) over S(2,4,4)
    _t(1, 1, 4, 1, lambda k: (((2, 2 * k), (1, 1)), ((4, k), (1, 1)), ((4, k), (1, 1))),
       "SUM2SQ", _form(_SQ, 1, _DP)),
    _t(1, 2, 4, 2, lambda k: (((2, 2 * k + 1),), ((4, k), (2, 1)), ((4, k), (1, 2))),
       "TWICE_SUM2SQ", _form(_SQ, 2, _DP)),
    _t(1, 3, 4, 4, lambda k: (((2, 2 * k + 2),), ((4, k + 1),), ((4, k), (2, 1), (1, 2))),
       "FOUR_SUM2SQ", _form(_SQ, 4)),
    # S(2,3,6) over S(2,3,6)
    _t(2, 1, 6, 1, lambda k: (((2, 3 * k), (1, 1)), ((3, 2 * k), (1, 1)), ((6, k), (1, 1))),
       "LOESCHIAN", _form(_LO, 1, _NBE | _INC)),
    _t(2, 2, 6, 3, lambda k: (((2, 3 * k + 1), (1, 1)), ((3, 2 * k + 1),), ((6, k), (2, 1), (1, 1))),
       "THREE_Q", _form(_Q3, 3, _NBE)),
    _t(2, 3, 6, 4, lambda k: (((2, 3 * k + 2),), ((3, 2 * k + 1), (1, 1)), ((6, k), (3, 1), (1, 1))),
       "FOUR_LOESCHIAN", _form(_LO, 4, _INC)),
    _t(2, 4, 6, 6,
       lambda k: (((2, 3 * k + 3),), ((3, 2 * k + 2),), ((6, k), (3, 1), (2, 1), (1, 1))),
       "TWELVE_Q", _form(_Q3, 12)),
    # S(3,3,3) over S(3,3,3)
    _t(3, 1, 3, 1, lambda k: (((3, k), (1, 1)),) * 3, "LOESCHIAN", _form(_LO, 1, _INC)),
    _t(3, 2, 3, 3, lambda k: (((3, k + 1),), ((3, k + 1),), ((3, k), (1, 3))),
       "THREE_Q", _form(_Q3, 3)),
    # S(2,2,2,2) over S(2,2,2,2)
    _t(4, 1, 2, 1, lambda k: (((2, k), (1, 1)),) * 4, "ALWAYS", _always),
    _t(4, 2, 2, 2, lambda k: (((2, k), (1, 2)),) * 2 + (((2, k + 1),),) * 2, "ALWAYS", _always),
    _t(4, 3, 2, 4, lambda k: (((2, k), (1, 4)),) + (((2, k + 2),),) * 3, "MULT4", _multiple(4)),
    # S(3,3,3) over S(2,3,6)
    _t(5, 1, 6, 0, lambda k: (((2, 3 * k),), ((3, 2 * k - 1), (1, 3)), ((6, k),)),
       "SIX_Q", _form(_Q3, 6)),
    _t(5, 2, 6, 2, lambda k: (((2, 3 * k + 1),), ((3, 2 * k), (1, 2)), ((6, k), (2, 1))),
       "TWICE_LOESCHIAN", _form(_LO, 2, _INC)),
    _t(5, 3, 6, 4, lambda k: (((2, 3 * k + 2),), ((3, 2 * k + 1), (1, 1)), ((6, k), (2, 2))),
       "NEVER", _never),
    _t(5, 4, 6, 6, lambda k: (((2, 3 * k + 3),), ((3, 2 * k + 2),), ((6, k), (2, 3))),
       "SIX_Q", _form(_Q3, 6)),
    # S(2,2,2,2) over S(2,4,4)
    _t(6, 1, 4, 4, lambda k: (((2, 2 * k), (1, 4)), ((4, k + 1),), ((4, k + 1),)),
       "ALWAYS", _always),
    _t(6, 2, 4, 4, lambda k: (((2, 2 * k + 1), (1, 2)), ((4, k), (2, 2)), ((4, k + 1),)),
       "ALWAYS", _always),
    _t(6, 3, 4, 2, lambda k: (((2, 2 * k), (1, 2)), ((4, k), (2, 1)), ((4, k), (2, 1))),
       "ALWAYS", _always),
    _t(6, 4, 4, 4, lambda k: (((2, 2 * k + 2),), ((4, k), (2, 2)), ((4, k), (2, 2))),
       "ALWAYS", _always),
    _t(6, 5, 4, 6, lambda k: (((2, 2 * k + 3),), ((4, k), (2, 3)), ((4, k + 1), (2, 1))),
       "NEVER", _never),
    _t(6, 6, 4, 8, lambda k: (((2, 2 * k + 4),), ((4, k), (2, 4)), ((4, k + 2),)),
       "MULT8", _multiple(8)),
    # S(2,2,2,2) over S(2,3,6)
    _t(7, 1, 6, 0, lambda k: (((2, 3 * k - 2), (1, 4)), ((3, 2 * k),), ((6, k),)),
       "ALWAYS", _always),
    _t(7, 2, 6, 3, lambda k: (((2, 3 * k), (1, 3)), ((3, 2 * k + 1),), ((6, k), (3, 1))),
       "ALWAYS", _always),
    _t(7, 3, 6, 6, lambda k: (((2, 3 * k + 2), (1, 2)), ((3, 2 * k + 2),), ((6, k), (3, 2))),
       "ALWAYS", _always),
    _t(7, 4, 6, 9, lambda k: (((2, 3 * k + 4), (1, 1)), ((3, 2 * k + 3),), ((6, k), (3, 3))),
       "NEVER", _never),
    _t(7, 5, 6, 12, lambda k: (((2, 3 * k + 6),), ((3, 2 * k + 4),), ((6, k), (3, 4))),
       "MULT12", _multiple(12)),
]

TEMPLATES = {(t.case_id, t.family_index): t for t in _TEMPLATE_LIST}

_TORUS_TARGETS = {"S(2,2,2,2)": 2, "S(3,3,3)": 3, "S(2,4,4)": 4, "S(2,3,6)": 5}


def euclidean_case(oc: OrbifoldCover) -> int | None:
    """Case number of a cover between Euclidean orbifolds, or None if unlisted."""
    source, target = format_orbifold(oc.source), format_orbifold(oc.target)
    if source == "T" and target in _TORUS_TARGETS:
        return 0
    for case, pair in SOURCE_TARGET.items():
        if pair == (source, target):
            return case
    return None


def templates_for_case(case_id: int) -> list[FamilyTemplate]:
    return [t for t in _TEMPLATE_LIST if t.case_id == case_id]


def family_instances(template: FamilyTemplate, dmax: int) -> list[tuple[int, CandidateCover]]:
    """Every ``(k, candidate)`` with ``k >= 0`` and degree ``<= dmax`` that realizes the
    template as a valid candidate inducing the template's Euclidean case."""
    from .euler import validate_candidate

    out = []
    k = 0
    while template.degree(k) <= dmax:
        c = template.instance(k)
        if c is not None and c.degree >= 2 and validate_candidate(c).ok:
            if euclidean_case(induced_orbifold_cover(c)) == template.case_id:
                out.append((k, c))
        k += 1
    return out


def match_euclidean_family(c: CandidateCover) -> EuclideanFamily:
    oc = induced_orbifold_cover(c)
    case = euclidean_case(oc)
    if case is None:
        raise NoFamilyMatch(f"{c}: induced cover {oc} is not one of the Euclidean cases")
    if case == 0:
        target = format_orbifold(oc.target)
        template = TEMPLATES[(0, _TORUS_TARGETS[target])]
        return EuclideanFamily(0, template.family_index, c.degree // template.step)
    for template in templates_for_case(case):
        k, rem = divmod(c.degree - template.offset, template.step)
        if rem or k < 0:
            continue
        if template.partitions(k) == c.partitions:
            return EuclideanFamily(case, template.family_index, k)
    raise NoFamilyMatch(f"{c}: no family of case {case} matches")


# ---------------------------------------------------------------------------
# decision procedures

_CITE_KNOWN = "positive-genus base: every candidate is realizable"
_CITE_POSITIVE = "positive orbifold characteristic: exceptional iff bad source over spherical target"
_CITE_EUCLIDEAN = "Euclidean covers: affine lattice maps"
_CITE_HYPERBOLIC = "hyperbolic triangular covers: nine-row census"


def decide_positive(oc: OrbifoldCover) -> Decision:
    if orbifold_euler_characteristic(oc.target) <= 0:
        raise ValueError("decide_positive needs a target with positive orbifold characteristic")
    source, target = geometry_class(oc.source), geometry_class(oc.target)
    evidence = {"source": format_orbifold(oc.source), "target": format_orbifold(oc.target)}
    if source is GeometryClass.BAD and target is GeometryClass.SPHERICAL:
        return Decision(Verdict.EXCEPTIONAL, "POS_BAD_OVER_SPHERICAL", _CITE_POSITIVE, evidence)
    return Decision(Verdict.REALIZABLE, "POS_GOOD_SOURCE", _CITE_POSITIVE, evidence)


def decide_euclidean(c: CandidateCover) -> Decision:
    family = match_euclidean_family(c)
    template = family.template
    ok, found = template.criterion(c.degree)
    verdict = Verdict.REALIZABLE if ok else Verdict.EXCEPTIONAL
    return Decision(verdict, template.reason, _CITE_EUCLIDEAN, found)


HYPERBOLIC_ROWS = (
    "6: (5,1)(4,1,1)(2,2,2)",
    "8: (5,1,1,1)(4,4)(2,2,2,2)",
    "8: (7,1)(3,3,1,1)(2,2,2,2)",
    "9: (7,1,1)(3,3,3)(2,2,2,2,1)",
    "10: (8,1,1)(3,3,3,1)(2,2,2,2,2)",
    "12: (8,2,1,1)(3,3,3,3)(2,2,2,2,2,2)",
    "12: (9,1,1,1)(3,3,3,3)(2,2,2,2,2,2)",
    "16: (7,7,1,1)(3,3,3,3,3,1)(2,2,2,2,2,2,2,2)",
    "24: (7,7,7,1,1,1)(3,3,3,3,3,3,3,3)(2,2,2,2,2,2,2,2,2,2,2,2)",
)
EXCEPTIONAL_ROWS = frozenset({2, 8})


@dataclass(frozen=True)
class HypTableRow:
    index: int
    candidate: CandidateCover
    verdict: Verdict


def hyperbolic_table() -> list[HypTableRow]:
    rows = []
    for i, text in enumerate(HYPERBOLIC_ROWS, start=1):
        verdict = Verdict.EXCEPTIONAL if i in EXCEPTIONAL_ROWS else Verdict.REALIZABLE
        rows.append(HypTableRow(i, parse_candidate(text), verdict))
    return rows


def _triangular(x: Orbifold) -> bool:
    return x.genus == 0 and len(x.cone_orders) == 3


def decide_hyperbolic_triangular(c: CandidateCover) -> Decision:
    oc = induced_orbifold_cover(c)
    if not (_triangular(oc.source) and _triangular(oc.target)):
        raise ValueError("both orbifolds must be triangular")
    if orbifold_euler_characteristic(oc.target) >= 0:
        raise ValueError("the induced orbifolds must be hyperbolic")
    for row in hyperbolic_table():
        if row.candidate == c:
            return Decision(row.verdict, f"HYP_ROW_{row.index}", _CITE_HYPERBOLIC)
    return Decision(Verdict.UNDECIDED, "HYP_TRIANGULAR_UNLISTED", _CITE_HYPERBOLIC)


def decide(c: CandidateCover) -> Decision:
    """Decide a validated candidate.

    >>> decide(parse_candidate("5: (2,2,1)(4,1)(4,1)")).summary()
    'REALIZABLE EUCL_C1F1_SUM2SQ x=1 y=2'
    """
    if c.base_genus > 0:
        return Decision(Verdict.REALIZABLE, "BASE_POSITIVE_GENUS", _CITE_KNOWN)
    oc = induced_orbifold_cover(c)
    chi = orbifold_euler_characteristic(oc.target)
    if chi > 0:
        return decide_positive(oc)
    if chi == 0:
        return decide_euclidean(c)
    if _triangular(oc.source) and _triangular(oc.target):
        return decide_hyperbolic_triangular(c)
    return Decision(
        Verdict.UNDECIDED,
        "HYPERBOLIC_NONRIGID",
        "hyperbolic covers with flexible orbifolds are not decided geometrically",
    )
