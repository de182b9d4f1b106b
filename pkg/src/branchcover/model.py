"""Domain types and the text grammar for candidate covers and orbifolds.

A candidate is written as::

    [g=<cover genus> ->] [g=<base genus>] <degree>: (<partition>)(<partition>)...

for example ``"8: (5,1,1,1)(4,4)(2,2,2,2)"`` or ``"g=1 -> g=0 4: (2,2)(2,2)(2,2)(2,2)"``.
Orbifolds are written ``S(2,3,6)``, ``S``, ``T`` or ``G2(3,3)`` (genus 2, two cone
points of order 3).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Any, Mapping


class ParseError(ValueError):
    """Raised when text does not follow the candidate or orbifold grammar."""


class CandidateError(ValueError):
    """Raised when well-formed text describes an inconsistent candidate."""


@dataclass(frozen=True, order=True)
class Partition:
    entries: tuple[int, ...]

    def __init__(self, entries):
        values = tuple(sorted((int(e) for e in entries), reverse=True))
        if not values:
            raise CandidateError("a partition needs at least one entry")
        if values[-1] < 1:
            raise CandidateError(f"partition entries must be positive: {values}")
        object.__setattr__(self, "entries", values)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    @property
    def lcm(self) -> int:
        return math.lcm(*self.entries)

    @property
    def defect(self) -> int:
        top = self.lcm
        return sum(1 for e in self.entries if e != top)

    def is_trivial(self) -> bool:
        """True when every entry is 1, i.e. the point is not a branching point."""
        return self.entries[0] == 1

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"


@dataclass(frozen=True)
class PartitionStats:
    sum: int
    length: int
    lcm: int
    defect: int


def partition_stats(p: Partition) -> PartitionStats:
    """Length, lcm and number of entries differing from the lcm.

    >>> partition_stats(Partition((5, 2, 1)))
    PartitionStats(sum=8, length=3, lcm=10, defect=3)
    """
    return PartitionStats(p.total, len(p), p.lcm, p.defect)


def integer_partitions(n: int, largest: int | None = None):
    """Yield the partitions of ``n`` as descending tuples, largest first.

    >>> list(integer_partitions(4))
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def _partition_key(p: Partition):
    return (-p.entries[0], len(p), tuple(-e for e in p.entries))


def canonical_order(partitions) -> tuple[Partition, ...]:
    """Order partitions by largest entry (descending), then length, then entries."""
    return tuple(sorted(partitions, key=_partition_key))


@dataclass(frozen=True)
class CandidateCover:
    """A degree, a base genus and one partition of the degree per branching point.

    The cover genus is not stored: it is always recomputed from the
    Riemann-Hurwitz formula (see :attr:`cover_genus`).
    """

    degree: int
    partitions: tuple[Partition, ...]
    base_genus: int = 0

    def __init__(self, degree: int, partitions, base_genus: int = 0):
        parts = canonical_order(p if isinstance(p, Partition) else Partition(p) for p in partitions)
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "partitions", parts)
        object.__setattr__(self, "base_genus", int(base_genus))

    @property
    def n(self) -> int:
        return len(self.partitions)

    @property
    def total_length(self) -> int:
        return sum(len(p) for p in self.partitions)

    @property
    def cover_euler(self) -> int:
        return self.total_length + self.degree * (2 - 2 * self.base_genus - self.n)

    @property
    def cover_genus(self) -> int:
        chi = self.cover_euler
        if chi % 2 or chi > 2:
            raise CandidateError(f"no surface has Euler characteristic {chi}")
        return (2 - chi) // 2

    def types(self) -> list[tuple[int, ...]]:
        return [p.entries for p in self.partitions]

    def __str__(self):
        return format_candidate(self)


@dataclass(frozen=True)
class Orbifold:
    genus: int
    cone_orders: tuple[int, ...] = ()

    def __init__(self, genus: int, cone_orders=()):
        orders = tuple(sorted(int(p) for p in cone_orders))
        if genus < 0:
            raise CandidateError("genus must be non-negative")
        if orders and orders[0] < 2:
            raise CandidateError(f"cone orders must be at least 2: {orders}")
        object.__setattr__(self, "genus", int(genus))
        object.__setattr__(self, "cone_orders", orders)

    def __str__(self):
        return format_orbifold(self)


@dataclass(frozen=True)
class Instruction:
    """Cone orders of the source points lying over one target point of order ``target``.

    Entries equal to 1 stand for regular source points and are kept so that
    the partition ``target // order`` can be read back.
    """

    target: int
    source: tuple[int, ...]

    def partition(self) -> Partition:
        return Partition(self.target // q for q in self.source)

    def __str__(self):
        return "(" + ",".join(map(str, self.source)) + f")~>{self.target}"


@dataclass(frozen=True)
class OrbifoldCover:
    source: Orbifold
    target: Orbifold
    degree: int
    instructions: tuple[Instruction, ...]

    def __str__(self):
        return f"{self.source} ~{self.degree}~> {self.target}"


class GeometryClass(enum.Enum):
    BAD = "bad"
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


class Verdict(enum.Enum):
    REALIZABLE = "realizable"
    EXCEPTIONAL = "exceptional"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    reason: str
    citation: str = ""
    evidence: Mapping[str, Any] = field(default_factory=dict)

    def summary(self) -> str:
        words = [self.verdict.name, self.reason]
        words += [f"{k}={v}" for k, v in self.evidence.items()]
        return " ".join(words)


_GENUS = r"g\s*=\s*(\d+)"
_CANDIDATE = re.compile(
    rf"^\s*(?:{_GENUS}\s*->\s*)?(?:{_GENUS}\s+)?(\d+)\s*:\s*((?:\(\s*\d+(?:\s*,\s*\d+)*\s*\)\s*)+)$"
)
_PARTITION = re.compile(r"\(([^)]*)\)")


def parse_candidate(text: str, validate: bool = True) -> CandidateCover:
    """Parse a candidate and, unless ``validate`` is false, check Riemann-Hurwitz.

    >>> str(parse_candidate("8:(4,4)(5,1,1,1)(2,2,2,2)"))
    '8: (5,1,1,1)(4,4)(2,2,2,2)'
    """
    match = _CANDIDATE.match(text)
    if not match:
        raise ParseError(f"cannot parse candidate {text!r}")
    cover_genus, base_genus, degree, body = match.groups()
    parts = [
        [int(x) for x in chunk.split(",")] for chunk in _PARTITION.findall(body)
    ]
    candidate = CandidateCover(int(degree), parts, int(base_genus or 0))
    if not validate:
        return candidate

    from .euler import validate_candidate

    report = validate_candidate(candidate)
    if not report.ok:
        raise CandidateError(f"invalid candidate {text!r}: {report.failures()}")
    if cover_genus is not None and int(cover_genus) != candidate.cover_genus:
        raise CandidateError(
            f"cover genus {cover_genus} disagrees with Riemann-Hurwitz ({candidate.cover_genus})"
        )
    return candidate


def format_candidate(c: CandidateCover) -> str:
    prefix = f"g={c.base_genus} " if c.base_genus else ""
    return f"{prefix}{c.degree}: " + "".join(str(p) for p in c.partitions)


_ORBIFOLD = re.compile(r"^\s*(S|T|G\s*(\d+))\s*(?:\(\s*([^)]*)\))?\s*$")


def parse_orbifold(text: str) -> Orbifold:
    """Parse ``S(...)``, ``T`` or ``G<genus>(...)``.

    >>> parse_orbifold("S(6,2,3)")
    Orbifold(genus=0, cone_orders=(2, 3, 6))
    """
    match = _ORBIFOLD.match(text)
    if not match:
        raise ParseError(f"cannot parse orbifold {text!r}")
    head, genus, cones = match.groups()
    if head == "S":
        g = 0
    elif head == "T":
        g = 1
    else:
        g = int(genus)
    orders = []
    if cones is not None and cones.strip():
        try:
            orders = [int(x) for x in cones.split(",")]
        except ValueError as exc:
            raise ParseError(f"cannot parse cone orders in {text!r}") from exc
    if any(p < 2 for p in orders):
        raise ParseError(f"cone orders must be at least 2 in {text!r}")
    return Orbifold(g, orders)


def format_orbifold(x: Orbifold) -> str:
    cones = "(" + ",".join(map(str, x.cone_orders)) + ")" if x.cone_orders else ""
    if x.genus == 0:
        return "S" + cones
    if x.genus == 1 and not cones:
        return "T"
    return f"G{x.genus}{cones}"
