"""Invariant suites run by ``branchcover selfcheck``."""

from __future__ import annotations

import itertools

from . import enumeration, oracle, quadform
from .decide import HYPERBOLIC_ROWS, decide, hyperbolic_table
from .model import Verdict, integer_partitions, parse_candidate
from .witness import construct_witness, verify_witness


def _census():
    found = set(enumeration.hyperbolic_triangular_census())
    expected = {parse_candidate(t) for t in HYPERBOLIC_ROWS}
    return found == expected, f"{len(found)} candidates"


def _hyperbolic_rows_by_oracle():
    wrong = []
    for row in hyperbolic_table():
        result = oracle.count_decide(row.candidate)
        truth = Verdict.REALIZABLE if result.outcome is oracle.Outcome.REALIZABLE else Verdict.EXCEPTIONAL
        if truth is not row.verdict or decide(row.candidate).verdict is not row.verdict:
            wrong.append(row.index)
    return not wrong, f"mismatched rows {wrong}" if wrong else "9 rows"


def _euclidean_witnesses(dmax):
    def check():
        bad = []
        instances = enumeration.euclidean_template_instances(dmax)
        for key, c in instances:
            if key[0] == 0:
                continue
            realizable = decide(c).verdict is Verdict.REALIZABLE
            w = construct_witness(c)
            if (w is not None) != realizable or (w is not None and not verify_witness(c, w).ok):
                bad.append(str(c))
        return not bad, f"{len(instances)} instances" + (f", failing {bad[:3]}" if bad else "")

    return check


def _oracle_agreement(dmax):
    def check():
        bad = []
        total = 0
        for d in range(2, dmax + 1):
            for c in enumeration.all_candidates_n3(d, cover_genus=None):
                total += 1
                exhaustive = oracle.exhaustive_decide(c).outcome is oracle.Outcome.REALIZABLE
                counted = oracle.count_transitive(c.types(), d) > 0
                if exhaustive != counted:
                    bad.append(str(c))
                elif decide(c).verdict is not Verdict.UNDECIDED:
                    if (decide(c).verdict is Verdict.REALIZABLE) != counted:
                        bad.append(str(c))
        return not bad, f"{total} candidates" + (f", failing {bad[:3]}" if bad else "")

    return check


def _frobenius_vs_direct(dmax):
    def check():
        bad = []
        for d in range(2, dmax + 1):
            direct = oracle.direct_triple_counts(d)
            for types in itertools.product(list(integer_partitions(d)), repeat=3):
                n, t = direct.get(types, (0, 0))
                if oracle.count_tuples(types, d) != n or oracle.count_transitive(types, d) != t:
                    bad.append((d, types))
        return not bad, f"degrees <= {dmax}" + (f", failing {bad[:3]}" if bad else "")

    return check


def _congruences(limit):
    def check():
        identities = [
            (quadform.FormId.X2_Y2, quadform.Constraint.DIFFERENT_PARITY, 1, 4),
            (quadform.FormId.X2_XY_Y2, quadform.Constraint.NOT_BOTH_EVEN | quadform.Constraint.INCONGRUENT_MOD_3, 1, 6),
            (quadform.FormId.X2_XY_Y2, quadform.Constraint.INCONGRUENT_MOD_3, 1, 3),
        ]
        bad = [
            (form.value, r, m)
            for form, con, r, m in identities
            if quadform.congruence_equivalence(form, con, r, m, limit)
        ]
        return not bad, f"up to {limit}" + (f", failing {bad}" if bad else "")

    return check


def run_checks(quick: bool = False) -> list[tuple[str, bool, str]]:
    checks = [
        ("census", _census),
        ("hyperbolic rows by counting", _hyperbolic_rows_by_oracle),
        ("euclidean witnesses", _euclidean_witnesses(40 if quick else 100)),
        ("oracle agreement", _oracle_agreement(6 if quick else 8)),
        ("frobenius vs direct", _frobenius_vs_direct(4 if quick else 5)),
        ("congruence identities", _congruences(1000 if quick else 10_000)),
    ]
    results = []
    for name, check in checks:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"raised {exc!r}"
        results.append((name, ok, detail))
    return results
