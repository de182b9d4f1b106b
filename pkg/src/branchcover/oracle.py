"""Ground truth by permutation factorization.

A candidate over the sphere with partitions ``P1..Pn`` of ``d`` is realizable
exactly when there are permutations ``s1..sn`` of ``{0..d-1}`` with cycle types
``P1..Pn``, whose product is the identity and which generate a transitive
group.  Permutations are tuples ``p`` with ``p[x]`` the image of ``x``; products
apply the first factor first, so the condition reads ``sn(...s2(s1(x))) == x``.

Three independent routes are offered: a randomized backtracking search, a
complete backtracking refutation, and exact counting with the Frobenius
character formula followed by a sieve that removes intransitive tuples.
"""

from __future__ import annotations

import enum
import math
import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as _all_permutations, product

from .model import CandidateCover, integer_partitions

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutation helpers


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def compose(first: Perm, then: Perm) -> Perm:
    """The permutation ``x -> then(first(x))``."""
    return tuple(then[x] for x in first)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def identity(d: int) -> Perm:
    return tuple(range(d))


def canonical_permutation(ptype) -> Perm:
    """Consecutive cycles ``(0 1 .. l1-1)(l1 ..)...`` of the given lengths."""
    p = []
    start = 0
    for length in ptype:
        p.extend(start + (i + 1) % length for i in range(length))
        start += length
    return tuple(p)


def is_transitive(perms, d: int) -> bool:
    if d == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for p in perms:
            y = p[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == d


def format_cycles(p: Perm) -> str:
    """One-line cycle notation on ``1..d``, fixed points included."""
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles(p))


def parse_cycles(text: str, d: int) -> Perm:
    p = list(range(d))
    for chunk in text.replace(")", "").split("("):
        pts = [int(v) - 1 for v in chunk.split()]
        for i, x in enumerate(pts):
            p[x] = pts[(i + 1) % len(pts)]
    return tuple(p)


# ---------------------------------------------------------------------------
# witnesses and results


@dataclass(frozen=True)
class PermutationWitness:
    degree: int
    permutations: tuple[Perm, ...]

    def render(self) -> str:
        return "\n".join(format_cycles(p) for p in self.permutations)


def verify_permutation_witness(c: CandidateCover, w: PermutationWitness) -> bool:
    """Check cycle types, identity product and transitivity exactly."""
    if w.degree != c.degree or len(w.permutations) != c.n:
        raise ValueError("witness size does not match the candidate")
    d = c.degree
    if any(sorted(p) != list(range(d)) for p in w.permutations):
        raise ValueError("witness entries are not permutations of the right size")
    if any(cycle_type(p) != part.entries for p, part in zip(w.permutations, c.partitions)):
        return False
    total = identity(d)
    for p in w.permutations:
        total = compose(total, p)
    return total == identity(d) and is_transitive(w.permutations, d)


class Mode(enum.Enum):
    RANDOMIZED = "search"
    BACKTRACKING = "exhaustive"
    CHARACTER_COUNT = "count"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10**7
    max_seconds: float | None = None
    seed: int = 0
    mode: Mode = Mode.RANDOMIZED


class Outcome(enum.Enum):
    REALIZABLE = "realizable"
    EXCEPTIONAL = "exceptional"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class OracleResult:
    outcome: Outcome
    witness: PermutationWitness | None = None
    nodes: int = 0
    note: str = ""

    def summary(self) -> str:
        words = [self.outcome.name, f"nodes={self.nodes}"]
        if self.note:
            words.append(self.note)
        return " ".join(words)


class _Stop(Exception):
    pass


class _Counter:
    def __init__(self, limit: int, deadline: float | None):
        self.used = 0
        self.limit = limit
        self.deadline = deadline

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise _Stop
        if self.deadline is not None and self.used % 4096 == 0 and time.monotonic() > self.deadline:
            raise _Stop


# ---------------------------------------------------------------------------
# pointwise backtracking for the last two permutations


class _PairSearch:
    """Find ``a`` of type ``type_a`` and ``b`` of type ``type_b`` with ``b(a(P(x))) == x``.

    ``a`` is built one value at a time; each choice ``a(y) = z`` forces
    ``b(z) = P^-1(y)``.  Partial chains of both maps are checked against the
    remaining cycle lengths, and a component that has closed up without
    reaching every point is abandoned.  With ``symmetric=True`` the fixed
    product is taken to be the canonical first permutation, and target points
    in untouched cycles of it are tried once per cycle length.
    """

    def __init__(self, d, fixed, links, type_a, type_b, counter, rng=None, symmetric=False):
        self.d = d
        self.P = fixed
        self.Pinv = inverse(fixed)
        self.links = [p for q in links for p in (q, inverse(q))]
        self.rem_a = [0] * (d + 1)
        self.rem_b = [0] * (d + 1)
        for length in type_a:
            self.rem_a[length] += 1
        for length in type_b:
            self.rem_b[length] += 1
        self.a = [-1] * d
        self.a_pre = [-1] * d
        self.b = [-1] * d
        self.b_pre = [-1] * d
        self.counter = counter
        self.rng = rng
        self.symmetric = symmetric
        self.cycle_of = [0] * d
        self.cycle_len = []
        for cid, cyc in enumerate(cycles(fixed)):
            self.cycle_len.append(len(cyc))
            for x in cyc:
                self.cycle_of[x] = cid
        self.touched = [0] * len(self.cycle_len)

    # chain walks ----------------------------------------------------------

    def _back(self, pre, y):
        h, n = y, 1
        while pre[h] != -1:
            h = pre[h]
            n += 1
        return h, n

    def _forward(self, img, z):
        n = 1
        while img[z] != -1:
            z = img[z]
            n += 1
        return n

    @staticmethod
    def _max_rem(rem):
        for length in range(len(rem) - 1, 0, -1):
            if rem[length]:
                return length
        return 0

    def _link(self, img, pre, rem, src, dst):
        """Try ``img[src] = dst``; return the closed cycle length, 0 for a merge, -1 if infeasible."""
        head, n_src = self._back(pre, src)
        if head == dst:
            return n_src if rem[n_src] else -1
        merged = n_src + self._forward(img, dst)
        return 0 if merged <= self._max_rem(rem) else -1

    # search ---------------------------------------------------------------

    def _candidates(self, y):
        free = [z for z in range(self.d) if self.a_pre[z] == -1]
        if self.rng is not None:
            self.rng.shuffle(free)
        if not self.symmetric:
            return free
        own = self.cycle_of[y]
        seen = set()
        out = []
        for z in free:
            cid = self.cycle_of[z]
            if cid != own and not self.touched[cid]:
                length = self.cycle_len[cid]
                if length in seen:
                    continue
                seen.add(length)
            out.append(z)
        return out

    def _closed_short(self, y):
        seen = {y}
        stack = [y]
        while stack:
            x = stack.pop()
            if self.a[x] == -1 or self.a_pre[x] == -1:
                return False
            for nxt in (self.a[x], self.a_pre[x], *(p[x] for p in self.links)):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) < self.d

    def run(self, prev=-1) -> bool:
        if prev != -1 and self.a[prev] == -1:
            y = prev
        else:
            y = next((v for v in range(self.d) if self.a[v] == -1), -1)
            if y == -1:
                return is_transitive(self.links + [tuple(self.a)], self.d)
        x = self.Pinv[y]
        for z in self._candidates(y):
            self.counter.tick()
            close_a = self._link(self.a, self.a_pre, self.rem_a, y, z)
            if close_a < 0:
                continue
            close_b = self._link(self.b, self.b_pre, self.rem_b, z, x)
            if close_b < 0:
                continue
            self.a[y], self.a_pre[z], self.b[z], self.b_pre[x] = z, y, x, z
            self.rem_a[close_a] -= bool(close_a)
            self.rem_b[close_b] -= bool(close_b)
            cy, cz = self.cycle_of[y], self.cycle_of[z]
            self.touched[cy] += 1
            self.touched[cz] += 1
            if not (close_a and self._closed_short(y)) and self.run(z):
                return True
            self.touched[cy] -= 1
            self.touched[cz] -= 1
            self.rem_a[close_a] += bool(close_a)
            self.rem_b[close_b] += bool(close_b)
            self.a[y], self.a_pre[z], self.b[z], self.b_pre[x] = -1, -1, -1, -1
        return False

    def solution(self) -> tuple[Perm, Perm]:
        return tuple(self.a), tuple(self.b)


def permutations_of_type(ptype, d: int, rng=None):
    """Every permutation of ``{0..d-1}`` with the given cycle type."""
    need = Counter(ptype)
    p = [-1] * d

    def rec():
        start = next((v for v in range(d) if p[v] == -1), -1)
        if start == -1:
            yield tuple(p)
            return
        lengths = [length for length in sorted(need) if need[length]]
        if rng is not None:
            rng.shuffle(lengths)
        for length in lengths:
            need[length] -= 1
            others = [v for v in range(d) if p[v] == -1 and v != start]
            for chosen in _all_permutations(others, length - 1):
                cyc = (start,) + chosen
                for i, v in enumerate(cyc):
                    p[v] = cyc[(i + 1) % length]
                yield from rec()
                for v in cyc:
                    p[v] = -1
            need[length] += 1

    yield from rec()


# ---------------------------------------------------------------------------
# ordering the factors


def _class_size(ptype) -> int:
    z = 1
    for length, mult in Counter(ptype).items():
        z *= length**mult * math.factorial(mult)
    return math.factorial(sum(ptype)) // z


def _search_order(types) -> list[int]:
    """Largest class first (fixed), then the smallest classes, the pointwise pair last."""
    idx = sorted(range(len(types)), key=lambda i: (-_class_size(types[i]), i))
    first, rest = idx[0], sorted(idx[1:], key=lambda i: (_class_size(types[i]), i))
    if len(rest) == 2:
        return [first] + rest
    return [first] + rest[:-2] + rest[-2:]


def restore_order(perms, order) -> tuple[Perm, ...]:
    """Reorder a factorization by braid moves so position ``i`` holds original factor ``i``.

    ``perms[j]`` has the type of original factor ``order[j]``.  Swapping
    neighbours ``(x, y)`` into ``(x^-1 y x, x)`` keeps the product and the
    generated group.
    """
    perms = list(perms)
    labels = list(order)
    for i in range(len(labels)):
        for j in range(len(labels) - 1 - i):
            if labels[j] > labels[j + 1]:
                x, y = perms[j], perms[j + 1]
                perms[j] = compose(compose(x, y), inverse(x))
                perms[j + 1] = x
                labels[j], labels[j + 1] = labels[j + 1], labels[j]
    return tuple(perms)


def _backtrack(types, d, counter, rng) -> tuple[Perm, ...] | None:
    """Complete search over factorizations with the first factor canonical."""
    order = _search_order(types)
    ordered = [types[i] for i in order]
    first = canonical_permutation(ordered[0])
    middle = ordered[1:-2]
    type_a, type_b = ordered[-2], ordered[-1]

    def rec(prefix, fixed):
        if len(prefix) == 1 + len(middle):
            search = _PairSearch(d, fixed, prefix, type_a, type_b, counter, rng, symmetric=not middle)
            if search.run():
                return prefix + list(search.solution())
            return None
        for p in permutations_of_type(middle[len(prefix) - 1], d, rng):
            counter.tick()
            found = rec(prefix + [p], compose(fixed, p))
            if found is not None:
                return found
        return None

    found = rec([first], first)
    if found is None:
        return None
    return restore_order(found, order)


def _small_cases(c: CandidateCover):
    """Direct answers for one or two branching points, or None."""
    d = c.degree
    if c.n == 1:
        return None if d > 1 else (identity(d),)
    if c.n == 2:
        if c.partitions[0].entries == c.partitions[1].entries == (d,):
            cyc = canonical_permutation((d,))
            return (cyc, inverse(cyc))
        return None
    return "search"


def _run(c: CandidateCover, budget: SearchBudget, randomized: bool) -> OracleResult:
    if c.base_genus > 0:
        return OracleResult(Outcome.REALIZABLE, None, 0, "BASE_POSITIVE_GENUS known result, no witness")
    d = c.degree
    small = _small_cases(c)
    if small != "search":
        if small is None:
            return OracleResult(Outcome.EXCEPTIONAL, None, 0)
        return OracleResult(Outcome.REALIZABLE, PermutationWitness(d, small), 0)
    types = [p.entries for p in c.partitions]
    deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
    counter = _Counter(budget.max_nodes, deadline)
    rng = random.Random(budget.seed) if randomized else None
    cap = 2000
    while True:
        counter.limit = min(budget.max_nodes, counter.used + cap) if randomized else budget.max_nodes
        try:
            found = _backtrack(types, d, counter, rng)
        except _Stop:
            if counter.used >= budget.max_nodes or (
                deadline is not None and time.monotonic() > deadline
            ):
                return OracleResult(Outcome.BUDGET_EXCEEDED, None, counter.used)
            cap *= 2
            continue
        if found is None:
            return OracleResult(Outcome.EXCEPTIONAL, None, counter.used)
        return OracleResult(Outcome.REALIZABLE, PermutationWitness(d, found), counter.used)


def find_witness(c: CandidateCover, budget: SearchBudget | None = None) -> OracleResult:
    """Randomized restarts of the backtracking search with doubling node caps.

    A restart that finishes its whole tree is a proof of non-existence, so the
    outcome can be EXCEPTIONAL; running out of budget gives BUDGET_EXCEEDED.
    """
    budget = budget or SearchBudget()
    if budget.mode is Mode.BACKTRACKING:
        return exhaustive_decide(c, budget)
    if budget.mode is Mode.CHARACTER_COUNT:
        return count_decide(c)
    return _run(c, budget, randomized=True)


def exhaustive_decide(c: CandidateCover, budget: SearchBudget | None = None) -> OracleResult:
    """Deterministic complete search; EXCEPTIONAL only once the whole tree is exhausted."""
    return _run(c, budget or SearchBudget(mode=Mode.BACKTRACKING), randomized=False)


def count_decide(c: CandidateCover) -> OracleResult:
    """Realizability read off the number of transitive factorizations."""
    if c.base_genus > 0:
        return OracleResult(Outcome.REALIZABLE, None, 0, "BASE_POSITIVE_GENUS known result, no witness")
    total = count_transitive([p.entries for p in c.partitions], c.degree)
    outcome = Outcome.REALIZABLE if total > 0 else Outcome.EXCEPTIONAL
    return OracleResult(outcome, None, 0, f"transitive={total}")


# ---------------------------------------------------------------------------
# counting


def hook_dimension(shape: tuple[int, ...]) -> int:
    """Degree of the irreducible character, by the hook length formula."""
    n = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return math.factorial(n) // hooks


@lru_cache(maxsize=None)
def character(shape: tuple[int, ...], cycle_lengths: tuple[int, ...]) -> int:
    """Irreducible character of ``S_n`` at a conjugacy class (Murnaghan-Nakayama).

    ``cycle_lengths`` must be sorted in descending order.

    >>> character((2, 1), (3,))
    -1
    >>> character((3, 1), (2, 1, 1))
    1
    """
    if not cycle_lengths:
        return 1
    if cycle_lengths[0] == 1:
        return hook_dimension(shape)
    r, rest = cycle_lengths[0], cycle_lengths[1:]
    rows = len(shape)
    beta = [shape[i] + rows - 1 - i for i in range(rows)]
    beads = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beads:
            continue
        sign = -1 if sum(1 for v in beta if target < v < b) % 2 else 1
        new_beta = sorted((beads - {b}) | {target}, reverse=True)
        new_shape = tuple(v for v in (new_beta[i] - (rows - 1 - i) for i in range(rows)) if v > 0)
        total += sign * character(new_shape, rest)
    return total


def class_size(ptype) -> int:
    return _class_size(tuple(ptype))


def _check_types(types, d):
    for t in types:
        if sum(t) != d or any(v < 1 for v in t):
            raise ValueError(f"{t} is not a partition of {d}")


@lru_cache(maxsize=None)
def _count_tuples(types: tuple[tuple[int, ...], ...], d: int) -> int:
    n = len(types)
    if d == 0:
        return 1
    acc = Fraction(0)
    for shape in integer_partitions(d):
        term = Fraction(1)
        for t in types:
            value = character(shape, t)
            if value == 0:
                term = Fraction(0)
                break
            term *= value
        if term:
            acc += term / Fraction(hook_dimension(shape)) ** (n - 2)
    sizes = math.prod(class_size(t) for t in types)
    result = acc * sizes / math.factorial(d)
    assert result.denominator == 1, f"non-integral Frobenius count {result} for {types}"
    return int(result)


def count_tuples(types, d: int) -> int:
    """Number of tuples with the given cycle types and product the identity.

    >>> count_tuples([(3,), (3,), (3,)], 3)
    2
    """
    key = tuple(sorted(tuple(sorted(t, reverse=True)) for t in types))
    _check_types(key, d)
    return _count_tuples(key, d)


def _splits(ptype: tuple[int, ...], s: int):
    """Ways to split a cycle type into a part of size ``s`` and the rest, as multisets."""
    counts = sorted(Counter(ptype).items(), reverse=True)
    out = []

    def rec(i, left, chosen):
        if i == len(counts):
            if left == 0:
                rest = []
                for (length, mult), k in zip(counts, chosen):
                    rest += [length] * (mult - k)
                taken = [length for (length, _), k in zip(counts, chosen) for _ in range(k)]
                out.append((tuple(taken), tuple(rest)))
            return
        length, mult = counts[i]
        for k in range(min(mult, left // length) + 1):
            rec(i + 1, left - k * length, chosen + [k])

    rec(0, s, [])
    return out


@lru_cache(maxsize=None)
def _count_transitive(types: tuple[tuple[int, ...], ...], d: int) -> int:
    total = _count_tuples(types, d)
    for s in range(1, d):
        weight = math.comb(d - 1, s - 1)
        options = [_splits(t, s) for t in types]
        if any(not o for o in options):
            continue
        for combo in product(*options):
            inner = tuple(sorted(a for a, _ in combo))
            outer = tuple(sorted(b for _, b in combo))
            rest = _count_tuples(outer, d - s)
            if rest:
                total -= weight * _count_transitive(inner, s) * rest
    return total


def count_transitive(types, d: int) -> int:
    """Number of tuples counted by :func:`count_tuples` that generate a transitive group.

    >>> count_transitive([(2, 2), (2, 2), (3, 1)], 4)
    0
    """
    key = tuple(sorted(tuple(sorted(t, reverse=True)) for t in types))
    _check_types(key, d)
    return _count_transitive(key, d)


# ---------------------------------------------------------------------------
# brute force, for cross-checking at small degree


def direct_triple_counts(d: int) -> dict[tuple, tuple[int, int]]:
    """``(type1, type2, type3) -> (tuples, transitive tuples)`` by running over all of ``S_d^2``."""
    perms = list(_all_permutations(range(d)))
    types = {p: cycle_type(p) for p in perms}
    tally: dict[tuple, list[int]] = {}
    for s1 in perms:
        t1 = types[s1]
        for s2 in perms:
            s3 = inverse(compose(s1, s2))
            key = (t1, types[s2], types[s3])
            entry = tally.setdefault(key, [0, 0])
            entry[0] += 1
            if is_transitive((s1, s2), d):
                entry[1] += 1
    return {k: (v[0], v[1]) for k, v in tally.items()}
