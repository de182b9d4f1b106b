"""Representability of integers by three positive binary quadratic forms.

Variables always range over the non-negative integers (0 included).
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import isqrt


class FormId(enum.Enum):
    X2_Y2 = "x^2+y^2"
    X2_XY_Y2 = "x^2+xy+y^2"
    X2_3XY_3Y2 = "x^2+3xy+3y^2"

    def __call__(self, x: int, y: int) -> int:
        if self is FormId.X2_Y2:
            return x * x + y * y
        if self is FormId.X2_XY_Y2:
            return x * x + x * y + y * y
        return x * x + 3 * x * y + 3 * y * y


class Constraint(enum.Flag):
    NONE = 0
    DIFFERENT_PARITY = enum.auto()
    NOT_BOTH_EVEN = enum.auto()
    INCONGRUENT_MOD_3 = enum.auto()

    def holds(self, x: int, y: int) -> bool:
        if Constraint.DIFFERENT_PARITY in self and (x - y) % 2 == 0:
            return False
        if Constraint.NOT_BOTH_EVEN in self and x % 2 == 0 and y % 2 == 0:
            return False
        if Constraint.INCONGRUENT_MOD_3 in self and (x - y) % 3 == 0:
            return False
        return True


def _solve_y(form: FormId, x: int, target: int) -> int | None:
    # Each form is strictly increasing in y >= 0, so y is determined by x.
    if form is FormId.X2_Y2:
        rest = target - x * x
        if rest < 0:
            return None
        y = isqrt(rest)
    elif form is FormId.X2_XY_Y2:
        disc = 4 * target - 3 * x * x
        if disc < 0:
            return None
        y = (isqrt(disc) - x) // 2
    else:
        disc = 12 * target - 3 * x * x
        if disc < 0:
            return None
        y = (isqrt(disc) - 3 * x) // 6
    if y >= 0 and form(x, y) == target:
        return y
    return None


def represent(form: FormId, target: int, constraint: Constraint = Constraint.NONE):
    """Lexicographically smallest ``(x, y)`` with ``form(x, y) == target``, or None.

    >>> represent(FormId.X2_Y2, 5, Constraint.DIFFERENT_PARITY)
    (1, 2)
    >>> represent(FormId.X2_Y2, 21) is None
    True
    """
    if target < 0:
        raise ValueError("target must be non-negative")
    for x in range(isqrt(target) + 1):
        y = _solve_y(form, x, target)
        if y is not None and constraint.holds(x, y):
            return (x, y)
    return None


def representable_table(form: FormId, limit: int, constraint: Constraint = Constraint.NONE) -> bytearray:
    """Flags ``t[v] == 1`` for every ``0 <= v <= limit`` represented under ``constraint``."""
    table = bytearray(limit + 1)
    x = 0
    while form(x, 0) <= limit:
        y = 0
        while True:
            v = form(x, y)
            if v > limit:
                break
            if constraint.holds(x, y):
                table[v] = 1
            y += 1
        x += 1
    return table


def congruence_equivalence(
    form: FormId, constraint: Constraint, residue: int, modulus: int, limit: int
) -> list[int]:
    """Degrees ``d <= limit`` where the constrained representation set differs from
    ``{d = residue mod modulus} & {d represented without constraint}``."""
    constrained = representable_table(form, limit, constraint)
    free = representable_table(form, limit)
    return [
        d
        for d in range(1, limit + 1)
        if bool(constrained[d]) != (d % modulus == residue % modulus and bool(free[d]))
    ]


def density(form: FormId, limit: int) -> Fraction:
    """Proportion of ``1 <= d <= limit`` represented by ``form``.

    >>> density(FormId.X2_Y2, 10)
    Fraction(7, 10)
    """
    table = representable_table(form, limit)
    return Fraction(sum(table[1:]), limit)


def primes_up_to(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"[: min(2, limit + 1)]
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [p for p in range(limit + 1) if sieve[p]]


def prime_support(form: FormId, residue: int, modulus: int, limit: int) -> list[int]:
    """Primes ``p <= limit`` with ``p = residue mod modulus`` that ``form`` misses."""
    table = representable_table(form, limit)
    return [p for p in primes_up_to(limit) if p % modulus == residue % modulus and not table[p]]
