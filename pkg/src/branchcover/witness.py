"""Affine certificates for covers between Euclidean orbifolds.

A realization of a Euclidean candidate lifts to an affine map ``z -> lam*z + mu``
of the plane that carries the deck group of the source into the deck group of
the target.  Everything here is exact: points of the square tiling are Gaussian
integers ``a + ib`` and points of the hexagonal tiling are stored in doubled
Eisenstein coordinates ``(a, b)`` meaning ``(a + b*w) / 2`` with ``w = (1 + i*sqrt3)/2``.
Every map is described by the integer images of a few marked points, so no
irrational scale factor is ever evaluated.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .decide import EuclideanFamily, TEMPLATES, match_euclidean_family
from .euler import Check, ValidationReport, induced_orbifold_cover
from .model import CandidateCover, format_orbifold


class Frame(enum.Enum):
    SQUARE = "square"
    HEX = "hex"


@dataclass(frozen=True)
class LatticePoint:
    frame: Frame
    a: int
    b: int

    @classmethod
    def gauss(cls, a: int, b: int) -> "LatticePoint":
        """The Gaussian integer ``a + ib``."""
        return cls(Frame.SQUARE, a, b)

    @classmethod
    def eisenstein(cls, a: int, b: int) -> "LatticePoint":
        """The Eisenstein integer ``a + b*w``."""
        return cls(Frame.HEX, 2 * a, 2 * b)

    @classmethod
    def half_eisenstein(cls, a: int, b: int) -> "LatticePoint":
        """The point ``(a + b*w) / 2``."""
        return cls(Frame.HEX, a, b)

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        if self.frame is not other.frame:
            raise ValueError("cannot add points of different frames")
        return LatticePoint(self.frame, self.a + other.a, self.b + other.b)

    def __str__(self):
        if self.frame is Frame.SQUARE:
            return f"{self.a}{self.b:+d}i"
        return f"({self.a}{self.b:+d}w)/2"


NOT_A_LIFT = "NotALift"

EUCLIDEAN_IDS = ("S(2,4,4)", "S(2,2,2,2)", "S(2,3,6)", "S(3,3,3)")
FRAME_OF = {
    "S(2,4,4)": Frame.SQUARE,
    "S(2,2,2,2)": Frame.SQUARE,
    "S(2,3,6)": Frame.HEX,
    "S(3,3,3)": Frame.HEX,
}
CONE_ORDER = {
    "A2": 2, "B2": 2, "C2": 2, "D2": 2,
    "B4": 4, "C4": 4,
    "A3": 3, "B3": 3, "C3": 3,
    "C6": 6,
}
TARGET_CLASSES = {
    "S(2,4,4)": ("A2", "B4", "C4"),
    "S(2,2,2,2)": ("A2", "B2", "C2", "D2"),
    "S(2,3,6)": ("A2", "B3", "C6"),
    "S(3,3,3)": ("A3", "B3", "C3"),
}


def lift_class(orbifold: str, point: LatticePoint) -> str:
    """Which cone point of ``orbifold`` the plane point lies over.

    >>> lift_class("S(2,4,4)", LatticePoint.gauss(2, 1))
    'A2'
    >>> lift_class("S(3,3,3)", LatticePoint.eisenstein(1, 2))
    'C3'
    """
    if FRAME_OF.get(orbifold) is not point.frame:
        raise ValueError(f"{orbifold} does not use the {point.frame.value} frame")
    a, b = point.a, point.b
    if orbifold == "S(2,4,4)":
        if (a - b) % 2:
            return "A2"
        return "B4" if a % 2 == 0 else "C4"
    if orbifold == "S(2,2,2,2)":
        return ("A2", "D2", "B2", "C2")[2 * (a % 2) + (b % 2)]
    even = a % 2 == 0 and b % 2 == 0
    if orbifold == "S(2,3,6)":
        if not even:
            return "A2" if (a - b) % 3 == 1 else NOT_A_LIFT
        return "C6" if (a // 2 - b // 2) % 3 == 2 else "B3"
    if not even:
        return NOT_A_LIFT
    return ("A3", "B3", "C3")[(a // 2 - b // 2) % 3]


# ---------------------------------------------------------------------------
# exact arithmetic in Q(i, sqrt3), used for the lattice inclusion test


@dataclass(frozen=True)
class Cyclotomic:
    """``re + im*i + r3*sqrt3 + ir3*i*sqrt3`` with rational coefficients."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)
    r3: Fraction = Fraction(0)
    ir3: Fraction = Fraction(0)

    def __mul__(self, o: "Cyclotomic") -> "Cyclotomic":
        a, b, c, d = self.re, self.im, self.r3, self.ir3
        e, f, g, h = o.re, o.im, o.r3, o.ir3
        return Cyclotomic(
            a * e - b * f + 3 * c * g - 3 * d * h,
            a * f + b * e + 3 * c * h + 3 * d * g,
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )

    def __add__(self, o: "Cyclotomic") -> "Cyclotomic":
        return Cyclotomic(self.re + o.re, self.im + o.im, self.r3 + o.r3, self.ir3 + o.ir3)

    def norm(self) -> Fraction:
        """``|z|^2`` when the value is rational, which it is for lattice scalings."""
        conj = Cyclotomic(self.re, -self.im, self.r3, -self.ir3)
        prod = self * conj
        if prod.im or prod.r3 or prod.ir3:
            raise ValueError("norm is not rational")
        return prod.re


def _c(re=0, im=0, r3=0, ir3=0) -> Cyclotomic:
    return Cyclotomic(Fraction(re), Fraction(im), Fraction(r3), Fraction(ir3))


OMEGA = _c(Fraction(1, 2), 0, 0, Fraction(1, 2))


def gaussian(a: int, b: int) -> Cyclotomic:
    return _c(a, b)


def eisenstein(a: int, b: int) -> Cyclotomic:
    """``a + b*w``."""
    return _c(a) + _c(b) * OMEGA


SQUARE_LATTICE = (_c(2), _c(0, 2))
HEX_LATTICE = (_c(0, 0, 0, 1), _c(Fraction(3, 2), 0, 0, Fraction(1, 2)))


def in_lattice(v: Cyclotomic, lattice) -> bool:
    """Whether ``v`` is an integer combination of the two generators."""
    if lattice is SQUARE_LATTICE:
        if v.r3 or v.ir3:
            return False
        return (v.re / 2).denominator == 1 and (v.im / 2).denominator == 1
    # generators i*sqrt3 and (3 + i*sqrt3)/2: the real part fixes the second coefficient
    if v.r3 or v.im:
        return False
    beta = 2 * v.re / 3
    alpha = v.ir3 - beta / 2
    return beta.denominator == 1 and alpha.denominator == 1


def lattice_inclusion_check(case_id: int, params=None, lam: Cyclotomic | None = None) -> bool:
    """Whether ``lam`` maps the source translation lattice into the target one.

    Cases 1, 2, 3 and 5 accept either integer parameters or an explicit scale
    ``lam`` (for case 5 the factor sqrt2 is divided out).  In cases 4, 6 and 7
    the parameters already are the lattice coordinates of the images, so the
    test reduces to integrality and a positive degree.
    """
    case = CASES[case_id]
    if case_id in (4, 6, 7):
        values = [params[k] for k in case.params]
        return all(isinstance(v, int) for v in values) and case.degree(params) > 0
    if lam is None:
        lam = case.scale(params)
    lattice = SQUARE_LATTICE if case.frame is Frame.SQUARE else HEX_LATTICE
    return all(in_lattice(lam * u, lattice) for u in lattice)


# ---------------------------------------------------------------------------
# the seven cases between genus-zero Euclidean orbifolds


@dataclass(frozen=True)
class Marked:
    """A marked source cone point and its image under the affine map."""

    label: str
    order: int
    image: LatticePoint


def _sq(a, b):
    return LatticePoint(Frame.SQUARE, a, b)


def _hx(a, b):
    return LatticePoint(Frame.HEX, a, b)


def _images_1(p, mu):
    n, m = p["n"], p["m"]
    return [Marked("A", 2, _sq(n, m) + mu), Marked("B", 4, mu), Marked("C", 4, _sq(n - m, n + m) + mu)]


def _images_2(p, mu):
    n, m = p["n"], p["m"]
    return [
        Marked("A", 2, _hx(n + m, -m) + mu),
        Marked("B", 3, mu),
        Marked("C", 6, _hx(2 * m, 2 * n) + mu),
    ]


def _images_333(p, mu):
    n, m = p["n"], p["m"]
    return [
        Marked("A", 3, mu),
        Marked("B", 3, _hx(2 * (n + m), -2 * m) + mu),
        Marked("C", 3, _hx(2 * m, 2 * n) + mu),
    ]


def _images_square_2222(p, mu):
    n, m, pp, q = p["n"], p["m"], p["p"], p["q"]
    return [
        Marked("A", 2, mu),
        Marked("B", 2, _sq(pp, q) + mu),
        Marked("C", 2, _sq(n + pp, m + q) + mu),
        Marked("D", 2, _sq(n, m) + mu),
    ]


def _images_7(p, mu):
    n, m, pp, q = p["n"], p["m"], p["p"], p["q"]
    b = _hx(q - pp, q + 2 * pp)
    d = _hx(m - n, m + 2 * n)
    return [
        Marked("A", 2, mu),
        Marked("B", 2, b + mu),
        Marked("C", 2, b + d + mu),
        Marked("D", 2, d + mu),
    ]


def _hex_scale(p):
    return eisenstein(p["n"] + p["m"], -p["m"])


@dataclass(frozen=True)
class EuclideanCase:
    case_id: int
    source: str
    target: str
    params: tuple[str, ...]
    degree_of: object
    images_of: object
    scale_of: object = None

    @property
    def frame(self) -> Frame:
        return FRAME_OF[self.target]

    @property
    def modulus(self) -> int:
        return 2 if self.frame is Frame.SQUARE else 6

    def degree(self, params) -> int:
        return self.degree_of(params)

    def images(self, params, mu: LatticePoint) -> list[Marked]:
        return self.images_of(params, mu)

    def scale(self, params) -> Cyclotomic:
        return self.scale_of(params)


def _loeschian(p):
    return p["n"] ** 2 + p["n"] * p["m"] + p["m"] ** 2


CASES = {
    1: EuclideanCase(1, "S(2,4,4)", "S(2,4,4)", ("n", "m"),
                     lambda p: p["n"] ** 2 + p["m"] ** 2, _images_1,
                     lambda p: gaussian(p["n"], p["m"])),
    2: EuclideanCase(2, "S(2,3,6)", "S(2,3,6)", ("n", "m"), _loeschian, _images_2, _hex_scale),
    3: EuclideanCase(3, "S(3,3,3)", "S(3,3,3)", ("n", "m"), _loeschian, _images_333, _hex_scale),
    4: EuclideanCase(4, "S(2,2,2,2)", "S(2,2,2,2)", ("n", "m", "p", "q"),
                     lambda p: p["p"] * p["m"] - p["q"] * p["n"], _images_square_2222),
    5: EuclideanCase(5, "S(3,3,3)", "S(2,3,6)", ("n", "m"),
                     lambda p: 2 * _loeschian(p), _images_333, _hex_scale),
    6: EuclideanCase(6, "S(2,2,2,2)", "S(2,4,4)", ("n", "m", "p", "q"),
                     lambda p: 2 * (p["p"] * p["m"] - p["q"] * p["n"]), _images_square_2222),
    7: EuclideanCase(7, "S(2,2,2,2)", "S(2,3,6)", ("n", "m", "p", "q"),
                     lambda p: 3 * (p["q"] * p["n"] - p["p"] * p["m"]), _images_7),
}


def mu_options(target: str) -> list[LatticePoint]:
    """One representative of every cone-point lift modulo the target lattice."""
    if FRAME_OF[target] is Frame.SQUARE:
        return [_sq(a, b) for a in (0, 1) for b in (0, 1)]
    points = [_hx(a, b) for b in (0, 1) for a in range(6)]
    return [pt for pt in points if lift_class(target, pt) != NOT_A_LIFT]


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class AffineWitness:
    case_id: int
    family_index: int
    parameters: dict
    mu: LatticePoint | None
    lambda_squared: int
    origin: str = "recipe"
    notes: tuple[str, ...] = field(default=())

    def describe(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        mu = f" mu={self.mu}" if self.mu is not None else ""
        return (
            f"case={self.case_id} family={self.family_index} {params}{mu} "
            f"d={self.lambda_squared} origin={self.origin}"
        )


def _instruction_match(c: CandidateCover, case: EuclideanCase, marked: list[Marked]) -> tuple[bool, str]:
    """Do the images of the marked points reproduce the candidate's covering instructions?"""
    oc = induced_orbifold_cover(c)
    landed: dict[str, list[int]] = {}
    for mk in marked:
        cls = lift_class(case.target, mk.image)
        if cls == NOT_A_LIFT:
            return False, f"{mk.label} maps to a regular point {mk.image}"
        order = CONE_ORDER[cls]
        if order % mk.order:
            return False, f"{mk.label} of order {mk.order} maps to {cls}"
        landed.setdefault(cls, []).append(mk.order)
    classes = TARGET_CLASSES[case.target]
    wanted = [sorted(q for q in i.source if q > 1) for i in oc.instructions]
    orders = [i.target for i in oc.instructions]
    if len(orders) != len(classes):
        return False, "branching point count differs from the cone point count"
    for perm in itertools.permutations(classes):
        if all(CONE_ORDER[cls] == o for cls, o in zip(perm, orders)) and all(
            sorted(landed.get(cls, [])) == w for cls, w in zip(perm, wanted)
        ):
            assignment = ", ".join(f"{cls}<-{mk_list}" for cls, mk_list in sorted(landed.items()))
            return True, assignment
    return False, f"images {sorted(landed.items())} do not fit {wanted}"


def verify_witness(c: CandidateCover, w: AffineWitness) -> ValidationReport:
    """Exact re-check of a witness against a candidate."""
    checks = []
    oc = induced_orbifold_cover(c)
    sums = [sum(i.target // q for q in i.source) for i in oc.instructions]
    if w.case_id == 0:
        k, index = w.parameters["k"], w.parameters["index"]
        checks.append(Check("degree", k >= 1 and k * index == c.degree, f"{k}*{index} vs {c.degree}"))
        checks.append(Check("torus source", format_orbifold(oc.source) == "T", format_orbifold(oc.source)))
        checks.append(Check("instruction sums", all(s == c.degree for s in sums), f"{sums}"))
        return ValidationReport(tuple(checks))
    case = CASES[w.case_id]
    d = case.degree(w.parameters)
    checks.append(Check("degree", d == c.degree and d > 0 and w.lambda_squared == d, f"{d} vs {c.degree}"))
    checks.append(Check("lattice", lattice_inclusion_check(w.case_id, w.parameters)))
    same = format_orbifold(oc.source) == case.source and format_orbifold(oc.target) == case.target
    checks.append(Check("orbifolds", same, f"{oc.source} -> {oc.target}"))
    if same:
        ok, detail = _instruction_match(c, case, case.images(w.parameters, w.mu))
        checks.append(Check("cone images", ok, detail))
    checks.append(Check("instruction sums", all(s == c.degree for s in sums), f"{sums}"))
    return ValidationReport(tuple(checks))


def cone_images(w: AffineWitness) -> list[tuple[str, str, LatticePoint]]:
    """``(source label, target class, image)`` for each marked source point."""
    case = CASES[w.case_id]
    return [(mk.label, lift_class(case.target, mk.image), mk.image) for mk in case.images(w.parameters, w.mu)]


# ---------------------------------------------------------------------------
# closed-form constructions

_ZERO_SQ = _sq(0, 0)
_ONE_SQ = _sq(1, 0)
_ZERO_HX = _hx(0, 0)
_HALF = _hx(1, 0)
_OMEGA = _hx(0, 2)


def _signed_mod3(x, y, residue):
    """``(x, y)`` or ``(-x, -y)``, whichever has difference ``residue`` mod 3."""
    return (x, y) if (x - y) % 3 == residue else (-x, -y)


def _recipe(family: EuclideanFamily, d: int, ev: dict):
    """Parameters and translation prescribed by the constructive half of each criterion."""
    case, fam, k = family.case_id, family.family_index, family.k
    x, y = ev.get("x"), ev.get("y")
    if case == 1:
        lam = {1: (x, y), 2: (None if x is None else (x + y, x - y)), 3: (None if x is None else (2 * x, 2 * y))}[fam]
        return {"n": lam[0], "m": lam[1]}, _ZERO_SQ
    if case == 2:
        if fam == 1:
            n, m = _signed_mod3(x, y, 1)
            return {"n": n, "m": m}, _ZERO_HX
        if fam == 2:
            return {"n": x, "m": x + 3 * y}, _OMEGA
        if fam == 3:
            n, m = _signed_mod3(x, y, 2)
            return {"n": 2 * n, "m": 2 * m}, _ZERO_HX
        return {"n": 2 * x, "m": 2 * (x + 3 * y)}, _OMEGA
    if case == 3:
        if fam == 1:
            n, m = _signed_mod3(x, y, 1)
            return {"n": n, "m": m}, _ZERO_HX
        return {"n": x, "m": x + 3 * y}, _ZERO_HX
    if case == 4:
        if fam == 1:
            sign = 1 if d % 4 == 1 else -1
            a = (d - sign) // 4
            return {"n": 2 * a, "m": 1, "p": sign, "q": -2}, _ZERO_SQ
        if fam == 2:
            sign = 1 if d % 4 == 2 else -1
            a = (d - 1 - sign) // 4
            return {"n": 2 * a, "m": 1 + sign, "p": 1, "q": -2}, _ZERO_SQ
        a = d // 4
        return {"n": 2, "m": 2, "p": 2 * (a + 1), "q": 2}, _ZERO_SQ
    if case == 5:
        if fam == 2:
            n, m = _signed_mod3(x, y, 2)
            return {"n": n, "m": m}, _ZERO_HX
        return {"n": x, "m": x + 3 * y}, (_OMEGA if fam == 4 else _ZERO_HX)
    if case == 6:
        table = {
            1: ((k + 1, k + 1, 1, -1), _ONE_SQ),
            2: ((k, k + 1, 2, 0), _ZERO_SQ),
            3: ((k, k + 1, 1, -1), _ZERO_SQ),
            4: ((k, k + 1, 2, 0), _ZERO_SQ),
        }
        if fam == 6:
            return {"n": 0, "m": 2, "p": d // 4, "q": 0}, _ZERO_SQ
        (n, m, p, q), mu = table[fam]
        return {"n": n, "m": m, "p": p, "q": q}, mu
    if case == 7:
        if fam == 1:
            return {"n": k + 1, "m": 1, "p": 2, "q": 2}, _HALF
        if fam == 2:
            q, p = (k, -1) if k % 2 else (k + 1, 1)
            return {"n": 2, "m": 1, "p": p, "q": q}, _HALF
        if fam == 3:
            n, p = (k, -1) if k % 2 == 0 else (k + 1, 1)
            return {"n": n, "m": 2, "p": p, "q": 2}, _HALF
        h = (d - 12) // 12
        return {"n": 2, "m": 2, "p": -2, "q": 2 * h}, _OMEGA
    raise ValueError(f"no construction for case {case}")


def _ordered(bound: int):
    yield 0
    for v in range(1, bound + 1):
        yield v
        yield -v


def search_witness(c: CandidateCover, family: EuclideanFamily, bound: int | None = None):
    """Exhaustive parameter search with every entry bounded by ``bound`` (default 4*sqrt(d))."""
    case = CASES[family.case_id]
    d = c.degree
    if bound is None:
        bound = 4 * isqrt(d) + 4
    for mu in mu_options(case.target):
        for params in _parameter_candidates(c, case, mu, d, bound):
            w = AffineWitness(case.case_id, family.family_index, params, mu, d, "search")
            if verify_witness(c, w).ok:
                return w
    return None


def _parameter_candidates(c, case, mu, d, bound):
    if len(case.params) == 2:
        for n in _ordered(bound):
            for m in _ordered(bound):
                p = {"n": n, "m": m}
                if case.degree(p) == d:
                    yield p
        return
    allowed = _allowed_residues(c, case, mu)
    if not allowed:
        return
    mod = case.modulus
    prefixes = {r[:3] for r in allowed}
    # degree = coef * (p*m - q*n)
    coef, sign = {4: (1, 1), 6: (2, 1), 7: (3, -1)}[case.case_id]
    if d % coef:
        return
    target = sign * (d // coef)
    for n in _ordered(bound):
        for m in _ordered(bound):
            for p in _ordered(bound):
                if (n % mod, m % mod, p % mod) not in prefixes:
                    continue
                if n:
                    num = p * m - target
                    if num % n:
                        continue
                    qs = [num // n] if abs(num // n) <= bound else []
                else:
                    qs = list(_ordered(bound)) if p * m == target else []
                for q in qs:
                    if (n % mod, m % mod, p % mod, q % mod) in allowed:
                        yield {"n": n, "m": m, "p": p, "q": q}


_RESIDUE_CACHE: dict = {}


def _allowed_residues(c, case, mu):
    """Residue classes of ``(n, m, p, q)`` whose marked images fit the instructions.

    Lift classes depend only on coordinates modulo 2 (square) or 6 (hexagonal),
    and the images are integer-linear in the parameters, so this is exact.
    """
    key = (case.case_id, c.partitions, mu)
    if key not in _RESIDUE_CACHE:
        mod = case.modulus
        allowed = set()
        for r in itertools.product(range(mod), repeat=4):
            params = dict(zip(case.params, r))
            if _instruction_match(c, case, case.images(params, mu))[0]:
                allowed.add(r)
        _RESIDUE_CACHE[key] = frozenset(allowed)
    return _RESIDUE_CACHE[key]


def construct_witness(c: CandidateCover) -> AffineWitness | None:
    """Build and self-verify a witness, or return None when the family criterion fails."""
    family = match_euclidean_family(c)
    template = TEMPLATES[(family.case_id, family.family_index)]
    if family.case_id == 0:
        tw = torus_witness(c)
        return AffineWitness(0, family.family_index, {"k": tw.k, "index": tw.index}, None, c.degree)
    ok, evidence = template.criterion(c.degree)
    if not ok:
        return None
    params, mu = _recipe(family, c.degree, evidence)
    if None not in params.values():
        w = AffineWitness(family.case_id, family.family_index, params, mu, c.degree)
        if verify_witness(c, w).ok:
            return w
    found = search_witness(c, family)
    if found is None:
        return None
    return AffineWitness(
        found.case_id, found.family_index, found.parameters, found.mu, found.lambda_squared,
        "search", (f"recipe parameters {params} mu={mu} failed verification",),
    )


# ---------------------------------------------------------------------------
# torus sources


@dataclass(frozen=True)
class TorusWitness:
    target: str
    k: int
    index: int
    basis: tuple[LatticePoint, LatticePoint]

    def describe(self) -> str:
        return f"target={self.target} index={self.index} k={self.k} basis={self.basis[0]},{self.basis[1]}"


_TORUS_LATTICE = {
    "T": (1, _sq(1, 0), _sq(0, 1)),
    "S(2,2,2,2)": (2, _sq(2, 0), _sq(0, 2)),
    "S(3,3,3)": (3, _hx(2, 2), _hx(-2, 4)),
    "S(2,4,4)": (4, _sq(2, 0), _sq(0, 2)),
    "S(2,3,6)": (6, _hx(2, 2), _hx(-2, 4)),
}


def torus_sublattice(target: str, degree: int) -> TorusWitness:
    """Index-``k`` sublattice ``<k*u1, u2>`` of the translation lattice of ``target``."""
    index, u1, u2 = _TORUS_LATTICE[target]
    k, rem = divmod(degree, index)
    if rem or k < 1:
        raise ValueError(f"degree {degree} is not a multiple of {index}")
    return TorusWitness(target, k, index, (LatticePoint(u1.frame, k * u1.a, k * u1.b), u2))


def torus_witness(c: CandidateCover) -> TorusWitness:
    oc = induced_orbifold_cover(c)
    if format_orbifold(oc.source) != "T":
        raise ValueError(f"{c} does not have a torus source")
    return torus_sublattice(format_orbifold(oc.target), c.degree)
