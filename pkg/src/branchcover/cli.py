"""Command-line front end.

Exit codes: 0 success or Realizable, 1 Exceptional, 2 Undecided or budget
exceeded, 64 usage error, 65 malformed or inconsistent candidate, 70 internal
disagreement between the decision procedures and the oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import enumeration, oracle, quadform
from .decide import NoFamilyMatch, decide, euclidean_case, match_euclidean_family
from .euler import (
    geometry_class,
    induced_orbifold_cover,
    orbifold_euler_characteristic,
    validate_candidate,
)
from .model import (
    CandidateError,
    ParseError,
    Verdict,
    format_candidate,
    format_orbifold,
    parse_candidate,
)
from .witness import construct_witness, cone_images, torus_witness

EXIT_OK = 0
EXIT_EXCEPTIONAL = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_SOFTWARE = 70

_VERDICT_EXIT = {
    Verdict.REALIZABLE: EXIT_OK,
    Verdict.EXCEPTIONAL: EXIT_EXCEPTIONAL,
    Verdict.UNDECIDED: EXIT_UNDECIDED,
}
_OUTCOME_EXIT = {
    oracle.Outcome.REALIZABLE: EXIT_OK,
    oracle.Outcome.EXCEPTIONAL: EXIT_EXCEPTIONAL,
    oracle.Outcome.BUDGET_EXCEEDED: EXIT_UNDECIDED,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Output:
    def __init__(self, as_json: bool, stream):
        self.as_json = as_json
        self.stream = stream

    def emit(self, text: str, payload: dict):
        if self.as_json:
            self.stream.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _budget(args) -> oracle.SearchBudget:
    mode = oracle.Mode(getattr(args, "mode", "search"))
    return oracle.SearchBudget(max_nodes=args.budget, seed=args.seed, mode=mode)


def _oracle_payload(result: oracle.OracleResult) -> dict:
    return {
        "outcome": result.outcome.value,
        "nodes": result.nodes,
        "note": result.note,
        "witness": result.witness.render().splitlines() if result.witness else None,
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out: Output) -> int:
    c = parse_candidate(args.candidate, validate=False)
    report = validate_candidate(c)
    payload = {
        "candidate": format_candidate(c),
        "ok": report.ok,
        "checks": [{"name": k.name, "passed": k.passed, "detail": k.detail} for k in report.checks],
    }
    out.emit(report.render(), payload)
    return EXIT_OK if report.ok else EXIT_DATAERR


def cmd_induce(args, out: Output) -> int:
    c = parse_candidate(args.candidate)
    oc = induced_orbifold_cover(c)
    lines = [f"{format_orbifold(oc.source)} ~{oc.degree}~> {format_orbifold(oc.target)}"]
    lines += [f"  {i}" for i in oc.instructions]
    payload = {
        "candidate": format_candidate(c),
        "source": format_orbifold(oc.source),
        "target": format_orbifold(oc.target),
        "degree": oc.degree,
        "instructions": [{"target": i.target, "source": list(i.source)} for i in oc.instructions],
    }
    out.emit("\n".join(lines), payload)
    return EXIT_OK


def cmd_classify(args, out: Output) -> int:
    c = parse_candidate(args.candidate)
    oc = induced_orbifold_cover(c)
    payload = {"candidate": format_candidate(c)}
    lines = []
    for role, x in (("source", oc.source), ("target", oc.target)):
        chi = orbifold_euler_characteristic(x)
        cls = geometry_class(x)
        payload[role] = {"orbifold": format_orbifold(x), "chi": str(chi), "geometry": cls.value}
        lines.append(f"{role} {format_orbifold(x)} chi={chi} {cls.value}")
    if orbifold_euler_characteristic(oc.target) == 0 and c.base_genus == 0:
        try:
            fam = match_euclidean_family(c)
            lines.append(f"euclidean case={fam.case_id} family={fam.family_index} k={fam.k}")
            payload["euclidean"] = {"case": fam.case_id, "family": fam.family_index, "k": fam.k}
        except NoFamilyMatch:
            lines.append(f"euclidean case={euclidean_case(oc)} family=none")
    out.emit("\n".join(lines), payload)
    return EXIT_OK


def cmd_decide(args, out: Output) -> int:
    c = parse_candidate(args.candidate)
    decision = decide(c)
    text = decision.summary()
    payload = {
        "candidate": format_candidate(c),
        "verdict": decision.verdict.value,
        "reason": decision.reason,
        "evidence": {k: v for k, v in decision.evidence.items()},
        "oracle": None,
    }
    code = _VERDICT_EXIT[decision.verdict]
    if args.with_oracle:
        result = oracle.find_witness(c, _budget(args))
        payload["oracle"] = _oracle_payload(result)
        text += "\noracle " + result.summary()
        agree = {
            oracle.Outcome.REALIZABLE: Verdict.REALIZABLE,
            oracle.Outcome.EXCEPTIONAL: Verdict.EXCEPTIONAL,
        }.get(result.outcome)
        if agree is not None and decision.verdict is not Verdict.UNDECIDED and agree is not decision.verdict:
            text += "\nDISAGREEMENT"
            code = EXIT_SOFTWARE
    out.emit(text, payload)
    return code


def cmd_witness(args, out: Output) -> int:
    c = parse_candidate(args.candidate)
    payload = {"candidate": format_candidate(c), "witness": None, "reason": ""}
    try:
        family = match_euclidean_family(c)
    except NoFamilyMatch as exc:
        payload["reason"] = f"not a Euclidean candidate: {exc}"
        out.emit("none: " + payload["reason"], payload)
        return EXIT_UNDECIDED
    if family.case_id == 0:
        tw = torus_witness(c)
        payload["witness"] = {"case": 0, "target": tw.target, "index": tw.index, "k": tw.k,
                              "basis": [str(v) for v in tw.basis]}
        out.emit(tw.describe(), payload)
        return EXIT_OK
    w = construct_witness(c)
    if w is None:
        payload["reason"] = f"{family.template.reason} criterion fails for d={c.degree}"
        out.emit("none: " + payload["reason"], payload)
        return EXIT_EXCEPTIONAL
    images = cone_images(w)
    lines = [w.describe()] + [f"  {label} -> {cls} at {pt}" for label, cls, pt in images]
    lines += [f"  note: {n}" for n in w.notes]
    payload["witness"] = {
        "case": w.case_id,
        "family": w.family_index,
        "parameters": dict(w.parameters),
        "mu": str(w.mu),
        "degree": w.lambda_squared,
        "origin": w.origin,
        "images": [{"source": label, "target": cls, "point": str(pt)} for label, cls, pt in images],
    }
    out.emit("\n".join(lines), payload)
    return EXIT_OK


def cmd_oracle(args, out: Output) -> int:
    c = parse_candidate(args.candidate)
    budget = _budget(args)
    if budget.mode is oracle.Mode.CHARACTER_COUNT:
        types = [p.entries for p in c.partitions]
        result = oracle.count_decide(c)
        payload = {"candidate": format_candidate(c), "oracle": _oracle_payload(result)}
        if c.base_genus == 0:
            payload["tuples"] = oracle.count_tuples(types, c.degree)
            payload["transitive"] = oracle.count_transitive(types, c.degree)
            text = f"{result.outcome.name} tuples={payload['tuples']} transitive={payload['transitive']}"
        else:
            text = result.summary()
        out.emit(text, payload)
        return _OUTCOME_EXIT[result.outcome]
    result = oracle.find_witness(c, budget)
    text = result.summary()
    if result.witness is not None:
        text += "\n" + result.witness.render()
    out.emit(text, {"candidate": format_candidate(c), "oracle": _oracle_payload(result)})
    return _OUTCOME_EXIT[result.outcome]


def _enumerate_degree(kind: str, d: int, genus) -> list[str]:
    if kind == "triangular":
        cands = enumeration.triangular_candidates(d)
    elif kind == "n3":
        cands = enumeration.all_candidates_n3(d, genus)
    elif kind == "positive-chi":
        cands = enumeration.positive_chi_candidates(d, d)
    elif kind == "euclidean":
        cands = enumeration.euclidean_candidates(d, d)
    else:
        cands = enumeration.hyperbolic_triangular(d)
    return [format_candidate(c) for c in cands]


def cmd_enum(args, out: Output) -> int:
    kind = args.kind
    if kind == "census":
        top = args.degree if args.degree is not None else enumeration.census_degree_bound()
        degrees = list(range(2, top + 1))
    else:
        if args.degree is None:
            raise _UsageError("enum needs --degree")
        degrees = list(range(2, args.degree + 1)) if args.up_to else [args.degree]
    genus = None if args.all_genera else args.genus
    if args.jobs > 1 and len(degrees) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_enumerate_degree, [kind] * len(degrees), degrees, [genus] * len(degrees)))
    else:
        chunks = [_enumerate_degree(kind, d, genus) for d in degrees]
    lines = [line for chunk in chunks for line in chunk]
    out.emit("\n".join(lines), {"kind": kind, "candidates": lines})
    return EXIT_OK


_FORMS = {
    "x2+y2": quadform.FormId.X2_Y2,
    "x2+xy+y2": quadform.FormId.X2_XY_Y2,
    "x2+3xy+3y2": quadform.FormId.X2_3XY_3Y2,
}
_CONSTRAINTS = {
    "none": quadform.Constraint.NONE,
    "different-parity": quadform.Constraint.DIFFERENT_PARITY,
    "not-both-even": quadform.Constraint.NOT_BOTH_EVEN,
    "incongruent-mod-3": quadform.Constraint.INCONGRUENT_MOD_3,
}


def _form(name: str) -> quadform.FormId:
    key = name.replace("^", "").replace(" ", "").lower()
    if key in _FORMS:
        return _FORMS[key]
    try:
        return quadform.FormId[name.upper()]
    except KeyError:
        raise _UsageError(f"unknown form {name!r}; use one of {', '.join(_FORMS)}") from None


def _constraint(names) -> quadform.Constraint:
    flag = quadform.Constraint.NONE
    for name in names or ():
        if name not in _CONSTRAINTS:
            raise _UsageError(f"unknown constraint {name!r}; use one of {', '.join(_CONSTRAINTS)}")
        flag |= _CONSTRAINTS[name]
    return flag


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise _UsageError(f"quadform --op {args.op} needs " + ", ".join("--" + n for n in missing))


def cmd_quadform(args, out: Output) -> int:
    form = _form(args.form)
    constraint = _constraint(args.constraint)
    payload = {"form": form.value, "op": args.op}
    if args.op == "represent":
        _require(args, "value")
        found = quadform.represent(form, args.value, constraint)
        payload["result"] = list(found) if found else None
        text = "none" if found is None else f"x={found[0]} y={found[1]}"
        out.emit(text, payload)
        return EXIT_OK if found else EXIT_EXCEPTIONAL
    if args.op == "density":
        _require(args, "limit")
        value = quadform.density(form, args.limit)
        payload["result"] = str(value)
        out.emit(f"{value} ~ {float(value):.6f}", payload)
        return EXIT_OK
    _require(args, "limit", "residue", "modulus")
    if args.op == "primes":
        misses = quadform.prime_support(form, args.residue, args.modulus, args.limit)
    else:
        misses = quadform.congruence_equivalence(form, constraint, args.residue, args.modulus, args.limit)
    payload["result"] = misses
    out.emit("none" if not misses else " ".join(map(str, misses)), payload)
    return EXIT_OK if not misses else EXIT_EXCEPTIONAL


def cmd_tables(args, out: Output) -> int:
    text = enumeration.render_defect_table() if args.table == 1 else enumeration.render_triangular_table()
    out.emit(text, {"table": args.table, "text": text})
    return EXIT_OK


def cmd_selfcheck(args, out: Output) -> int:
    from .selfcheck import run_checks

    results = run_checks(quick=args.quick)
    lines = [f"{'PASS' if ok else 'FAIL'} {name} {detail}".rstrip() for name, ok, detail in results]
    payload = {"checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results]}
    out.emit("\n".join(lines), payload)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_EXCEPTIONAL


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="branchcover",
        description="Decide realizability of candidate branched covers of the sphere.",
        epilog="exit codes: 0 ok/realizable, 1 exceptional, 2 undecided or budget exceeded, "
        "64 usage, 65 bad candidate, 70 decision/oracle disagreement",
    )
    parser.add_argument("--json", action="store_true", help="emit one JSON object per command")
    # --json is accepted after the subcommand as well; SUPPRESS keeps the global value otherwise.
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kwargs):
        return _add(name, parents=[shared], **kwargs)

    sub.add_parser = add_parser

    def candidate_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("candidate", help='candidate such as "5: (2,2,1)(4,1)(4,1)"')
        p.set_defaults(func=func)
        return p

    def budget_options(p):
        p.add_argument("--budget", type=int, default=10**7, help="node budget (default 10^7)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    candidate_command("validate", cmd_validate, "Riemann-Hurwitz and well-formedness checks")
    candidate_command("induce", cmd_induce, "induced orbifold cover and covering instructions")
    candidate_command("classify", cmd_classify, "geometry of the induced orbifolds")
    p = candidate_command("decide", cmd_decide, "decide realizability")
    p.add_argument("--with-oracle", action="store_true", help="cross-check with the permutation oracle")
    budget_options(p)
    candidate_command("witness", cmd_witness, "affine witness for a Euclidean candidate")
    p = candidate_command("oracle", cmd_oracle, "permutation factorization oracle")
    p.add_argument("--mode", choices=[m.value for m in oracle.Mode], default="search")
    budget_options(p)

    p = sub.add_parser("enum", help="list candidates")
    p.set_defaults(func=cmd_enum)
    p.add_argument("--degree", type=int)
    kinds = p.add_mutually_exclusive_group(required=True)
    for kind in ("triangular", "positive-chi", "euclidean", "census", "n3"):
        kinds.add_argument(f"--{kind}", dest="kind", action="store_const", const=kind)
    p.add_argument("--up-to", action="store_true", help="all degrees from 2 to --degree")
    p.add_argument("--genus", type=int, default=0, help="cover genus for --n3 (default 0)")
    p.add_argument("--all-genera", action="store_true", help="every cover genus for --n3")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for multi-degree sweeps")

    p = sub.add_parser("quadform", help="representability by binary quadratic forms")
    p.set_defaults(func=cmd_quadform)
    p.add_argument("--form", required=True, help=", ".join(_FORMS))
    p.add_argument("--op", required=True, choices=["represent", "density", "primes", "congruence"])
    p.add_argument("--value", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--residue", type=int)
    p.add_argument("--modulus", type=int)
    p.add_argument("--constraint", action="append", help=", ".join(_CONSTRAINTS))

    p = sub.add_parser("tables", help="reproduce the degree-8 tables")
    p.set_defaults(func=cmd_tables)
    p.add_argument("--table", type=int, choices=[1, 2], required=True)

    p = sub.add_parser("selfcheck", help="run the invariant suites")
    p.set_defaults(func=cmd_selfcheck)
    p.add_argument("--quick", action="store_true")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    out = Output(args.json, stdout)
    try:
        return args.func(args, out)
    except (ParseError, CandidateError) as exc:
        stderr.write(f"branchcover: {exc}\n")
        return EXIT_DATAERR
    except _UsageError as exc:
        stderr.write(f"branchcover: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
