"""Riemann-Hurwitz bookkeeping, orbifold Euler characteristics and induced covers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    CandidateCover,
    GeometryClass,
    Instruction,
    Orbifold,
    OrbifoldCover,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [f"{c.name}: {c.detail}" for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        lines = ["ok" if self.ok else "FAILED"]
        for c in self.checks:
            lines.append(f"  {'pass' if c.passed else 'fail'} {c.name} {c.detail}".rstrip())
        return "\n".join(lines)


def cover_euler_characteristic(c: CandidateCover) -> int:
    """Euler characteristic forced on the covering surface by Riemann-Hurwitz."""
    return c.total_length + c.degree * (2 - 2 * c.base_genus - c.n)


def validate_candidate(c: CandidateCover) -> ValidationReport:
    checks = [Check("degree", c.degree >= 2, f"d={c.degree}")]
    checks.append(Check("branching points", c.n >= 1, f"n={c.n}"))
    bad_sums = [str(p) for p in c.partitions if p.total != c.degree]
    checks.append(Check("partition sums", not bad_sums, " ".join(bad_sums)))
    trivial = [str(p) for p in c.partitions if p.is_trivial()]
    checks.append(Check("nontrivial partitions", not trivial, " ".join(trivial)))
    chi = cover_euler_characteristic(c)
    checks.append(Check("euler parity", chi % 2 == 0, f"chi={chi}"))
    checks.append(Check("euler bound", chi <= 2, f"chi={chi}"))
    if c.base_genus == 0 and c.n == 3:
        length = c.total_length
        checks.append(
            Check(
                "sphere cover",
                True,
                f"length={length} d+2={c.degree + 2} {'yes' if length == c.degree + 2 else 'no'}",
            )
        )
    return ValidationReport(tuple(checks))


def orbifold_euler_characteristic(x: Orbifold) -> Fraction:
    """Exact orbifold Euler characteristic.

    >>> orbifold_euler_characteristic(Orbifold(0, (2, 3, 7)))
    Fraction(-1, 42)
    """
    return 2 - 2 * x.genus - sum((1 - Fraction(1, p) for p in x.cone_orders), Fraction(0))


def is_bad(x: Orbifold) -> bool:
    cones = x.cone_orders
    return x.genus == 0 and (len(cones) == 1 or (len(cones) == 2 and cones[0] != cones[1]))


def geometry_class(x: Orbifold) -> GeometryClass:
    if is_bad(x):
        return GeometryClass.BAD
    chi = orbifold_euler_characteristic(x)
    if chi > 0:
        return GeometryClass.SPHERICAL
    if chi == 0:
        return GeometryClass.EUCLIDEAN
    return GeometryClass.HYPERBOLIC


def induced_orbifold_cover(c: CandidateCover) -> OrbifoldCover:
    """Orbifold cover obtained by giving each branching point the lcm of its partition."""
    instructions = []
    source_cones = []
    for part in c.partitions:
        top = part.lcm
        orders = tuple(top // e for e in part.entries)
        instructions.append(Instruction(top, orders))
        source_cones.extend(q for q in orders if q > 1)
    target = Orbifold(c.base_genus, [i.target for i in instructions if i.target > 1])
    source = Orbifold(c.cover_genus, source_cones)
    return OrbifoldCover(source, target, c.degree, tuple(instructions))


def validate_orbifold_cover(oc: OrbifoldCover) -> ValidationReport:
    checks = []
    divides = all(i.target % q == 0 for i in oc.instructions for q in i.source)
    checks.append(Check("divisibility", divides))
    sums = [sum(i.target // q for q in i.source) for i in oc.instructions]
    checks.append(Check("degree sums", all(s == oc.degree for s in sums), f"sums={sums}"))
    listed = sorted(q for i in oc.instructions for q in i.source if q > 1)
    checks.append(
        Check("source cones", listed == list(oc.source.cone_orders), f"{listed}")
    )
    targets = sorted(i.target for i in oc.instructions if i.target > 1)
    checks.append(Check("target cones", targets == list(oc.target.cone_orders), f"{targets}"))
    lhs = orbifold_euler_characteristic(oc.source)
    rhs = oc.degree * orbifold_euler_characteristic(oc.target)
    checks.append(Check("multiplicativity", lhs == rhs, f"{lhs} vs {rhs}"))
    return ValidationReport(tuple(checks))
