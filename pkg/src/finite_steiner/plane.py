"""The Miquelian Moebius plane M(q): points GF(q^2) + {inf} and two circle types.

Circles of the first type ``B1(s, c)`` are ``N(z - s) = c`` with ``c != 0``.
Circles of the second type ``B2(s, c)`` are ``Tr(conj(s) z) = c`` plus the
point at infinity; ``(s, c)`` is only defined up to a nonzero base-field
factor and is kept in canonical form (``c = 1`` when ``c != 0``, otherwise
the first nonzero of ``s.re``, ``s.im`` equals 1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

from .errors import BadIncidence, DuplicatePoints, SameCircle, WrongType
from .gf import ExtElem, ExtField, FieldElem

__all__ = [
    "INF",
    "Infinity",
    "Point",
    "Circle",
    "Circle1",
    "Circle2",
    "MoebiusMap",
    "Plane",
    "contains",
    "circle_points",
    "circle_through",
    "tangent_circle_through",
    "intersect",
    "intersect_concentric",
    "moebius_apply_point",
    "moebius_apply_circle",
    "invert_circle",
    "all_circles",
    "plane_counts",
    "format_point",
    "parse_point",
    "format_circle",
    "parse_circle",
    "circle_to_json",
    "circle_from_json",
    "point_key",
]


class Infinity:
    """The point at infinity (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()
Point = Union[ExtElem, Infinity]


def point_key(P: Point):
    """Sort key: finite points in canonical order, infinity last."""
    return (1,) if P is INF else (0, P.key)


@dataclass(frozen=True)
class Circle1:
    """``(z - s)(conj(z) - conj(s)) = c``, c a nonzero base element."""

    s: ExtElem
    c: FieldElem

    def __post_init__(self):
        if not self.c:
            raise ValueError("first-type circle needs c != 0")
        if not isinstance(self.c, FieldElem):
            object.__setattr__(self, "c", self.s.E.F(self.c))

    @property
    def kind(self) -> int:
        return 1

    @property
    def E(self) -> ExtField:
        return self.s.E

    def __str__(self):
        return format_circle(self)


@dataclass(frozen=True)
class Circle2:
    """``conj(s) z + s conj(z) = c`` together with infinity; stored canonically."""

    s: ExtElem
    c: FieldElem

    def __post_init__(self):
        s, c = self.s, self.s.E.F(self.c)
        if not s:
            raise ValueError("second-type circle needs s != 0")
        if c:
            lam = c.inv()
        elif s.a:
            lam = s.re.inv()
        else:
            lam = s.im.inv()
        object.__setattr__(self, "s", s * lam)
        object.__setattr__(self, "c", c * lam)

    @property
    def kind(self) -> int:
        return 2

    @property
    def E(self) -> ExtField:
        return self.s.E

    def __str__(self):
        return format_circle(self)


Circle = Union[Circle1, Circle2]


@dataclass(frozen=True)
class MoebiusMap:
    """``z -> (a z + b) / (c z + d)`` over GF(q^2), ``a d - b c != 0``."""

    a: ExtElem
    b: ExtElem
    c: ExtElem
    d: ExtElem

    def __post_init__(self):
        E = self.a.E
        for name in "abcd":
            object.__setattr__(self, name, E(getattr(self, name)))
        if not (self.a * self.d - self.b * self.c):
            raise ValueError("Moebius map needs ad - bc != 0")

    @classmethod
    def identity(cls, E: ExtField) -> MoebiusMap:
        return cls(E.one, E.zero, E.zero, E.one)

    @classmethod
    def translation(cls, t: ExtElem) -> MoebiusMap:
        E = t.E
        return cls(E.one, t, E.zero, E.one)

    @classmethod
    def scaling(cls, lam: ExtElem) -> MoebiusMap:
        E = lam.E
        return cls(E(lam), E.zero, E.zero, E.one)

    @classmethod
    def inversion(cls, E: ExtField) -> MoebiusMap:
        return cls(E.zero, E.one, E.one, E.zero)

    @classmethod
    def from_points(cls, src, dst) -> MoebiusMap:
        """The unique map sending the triple ``src`` to the triple ``dst``."""
        return _to_standard(*dst).inverse() @ _to_standard(*src)

    def __call__(self, P: Point) -> Point:
        return moebius_apply_point(self, P)

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        """Composition: ``(self @ other)(z) == self(other(z))``."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def normalized(self) -> tuple:
        """Projective key: coefficients scaled so the first nonzero one is 1."""
        coeffs = (self.a, self.b, self.c, self.d)
        lead = next(x for x in coeffs if x)
        inv = lead.inv()
        return tuple((x * inv).key for x in coeffs)

    @property
    def is_affine(self) -> bool:
        return not self.c

    @property
    def det(self) -> ExtElem:
        return self.a * self.d - self.b * self.c


def _to_standard(z1: Point, z2: Point, z3: Point) -> MoebiusMap:
    # sends z1 -> 0, z2 -> 1, z3 -> inf
    E = next(z for z in (z1, z2, z3) if z is not INF).E
    one, zero = E.one, E.zero
    if len({point_key(z) for z in (z1, z2, z3)}) < 3:
        raise DuplicatePoints("need three distinct points")
    if z1 is INF:
        return MoebiusMap(zero, z2 - z3, one, -z3)
    if z2 is INF:
        return MoebiusMap(one, -z1, one, -z3)
    if z3 is INF:
        return MoebiusMap(one, -z1, zero, z2 - z1)
    u, v = z2 - z3, z2 - z1
    return MoebiusMap(u, -z1 * u, v, -z3 * v)


# -- incidence --------------------------------------------------------------

def contains(B: Circle, P: Point) -> bool:
    if P is INF:
        return B.kind == 2
    if B.kind == 1:
        return (P - B.s).norm() == B.c
    w = B.s.conj() * P
    return w.trace() == B.c


def circle_points(B: Circle) -> frozenset:
    return frozenset(_points_list(B))


def _points_list(B: Circle) -> list:
    E = B.E
    if B.kind == 1:
        return [B.s + w for w in E.norm_fibers[B.c.n]]
    # conj(s) z = c/2 + t*alpha, t ranging over the base field
    F = E.F
    half_c = B.c / 2
    sbar_inv = B.s.conj().inv()
    pts = [(E(half_c, t) * sbar_inv) for t in F.elements]
    pts.append(INF)
    return pts


def sorted_points(points) -> list:
    return sorted(points, key=point_key)


def circle_through(P: Point, Q: Point, R: Point) -> Circle:
    """Unique circle through three distinct points (axiom M1)."""
    pts = (P, Q, R)
    if len({point_key(z) for z in pts}) < 3:
        raise DuplicatePoints("circle_through needs three distinct points")
    finite = [z for z in pts if z is not INF]
    if len(finite) == 2:
        return _line(*finite)
    z1, z2, z3 = finite
    line = _line(z1, z2)
    if contains(line, z3):
        return line
    # N(z_i - s) equal for all i  <=>  Tr(conj(s) (z_i - z3)) = N(z_i) - N(z3)
    E = z1.E
    x = E.x
    w1, w2 = z1 - z3, z2 - z3
    n1 = z1.norm() - z3.norm()
    n2 = z2.norm() - z3.norm()
    # with s = u + v*alpha: Tr(conj(s) w) = 2(u w.re - x v w.im)
    a11, a12 = 2 * w1.re, -2 * x * w1.im
    a21, a22 = 2 * w2.re, -2 * x * w2.im
    det = a11 * a22 - a12 * a21
    u = (n1 * a22 - a12 * n2) / det
    v = (a11 * n2 - n1 * a21) / det
    s = E(u, v)
    return Circle1(s, (z1 - s).norm())


def _line(z1: ExtElem, z2: ExtElem) -> Circle2:
    # conj(s) (z1 - z2) must have zero trace: take conj(s) = alpha / (z1 - z2)
    E = z1.E
    sbar = E.alpha / (z1 - z2)
    s = sbar.conj()
    return Circle2(s, (sbar * z1).trace())


def tangent_circle_through(g: Circle, P: Point, Q: Point) -> Circle:
    """Unique circle through P and Q meeting g only in P (axiom M2)."""
    if not contains(g, P) or contains(g, Q):
        raise BadIncidence("need P on g and Q off g")
    E = g.E
    if P is INF:
        T = MoebiusMap.identity(E)
    else:
        T = MoebiusMap(E.zero, E.one, E.one, -P)
    g2 = moebius_apply_circle(T, g)
    Q2 = T(Q)
    # parallel line through Q2 touches g2 only at infinity
    h2 = Circle2(g2.s, (g2.s.conj() * Q2).trace())
    return moebius_apply_circle(T.inverse(), h2)


def intersect(g: Circle, h: Circle) -> frozenset:
    if g == h:
        raise SameCircle("cannot intersect a circle with itself")
    return circle_points(g) & circle_points(h)


def intersect_concentric(B: Circle1, a: FieldElem) -> frozenset:
    """Points of ``B`` on ``N(z) = a`` via ``conj(s) z^2 + (c - a - N(s)) z + s a = 0``."""
    E = B.E
    a = E.F(a)
    s, c = B.s, B.c
    if not s:
        return frozenset() if c != a else circle_points(B)
    A, Bc, C = s.conj(), E(c - a - s.norm()), s * a
    disc = Bc * Bc - 4 * A * C
    roots = {(-Bc + r) / (2 * A) for r in E.sqrt(disc)}
    return frozenset(z for z in roots if z.norm() == a and (z - s).norm() == c)


# -- Moebius maps -----------------------------------------------------------

def moebius_apply_point(phi: MoebiusMap, P: Point) -> Point:
    if P is INF:
        return phi.a / phi.c if phi.c else INF
    den = phi.c * P + phi.d
    if not den:
        return INF
    return (phi.a * P + phi.b) / den


def moebius_apply_circle(phi: MoebiusMap, B: Circle, verify: bool = False) -> Circle:
    """Image circle of ``B``.

    Affine maps and the plain inversion use closed forms; everything else maps
    three points and rebuilds the circle.  ``verify`` checks the whole point set.
    """
    if phi.is_affine:
        out = _apply_affine(phi, B)
    elif not phi.a and not phi.d and phi.b == phi.c:
        out = invert_circle(B)
    else:
        pts = _points_list(B)[:3]
        out = circle_through(*(phi(P) for P in pts))
    if verify:
        image = frozenset(phi(P) for P in _points_list(B))
        if image != circle_points(out):
            raise AssertionError(f"image of {B} under {phi} is not {out}")
    return out


def _apply_affine(phi: MoebiusMap, B: Circle) -> Circle:
    lam = phi.a / phi.d
    t = phi.b / phi.d
    if B.kind == 1:
        return Circle1(lam * B.s + t, lam.norm() * B.c)
    # w = lam z + t  =>  Tr(conj(s/conj(lam)) w) = c + Tr(conj(s) t / lam)
    s_new = B.s / lam.conj()
    return Circle2(s_new, B.c + (B.s.conj() * t / lam).trace())


def invert_circle(B: Circle) -> Circle:
    """Image under ``z -> 1/z`` by the closed-form case split."""
    s, c = B.s, B.c
    if B.kind == 1:
        n = s.norm()
        if n != c:
            d = n - c
            return Circle1(s.conj() / d, c / (d * d))
        return Circle2(s.conj(), 1)
    if c:
        return Circle1(s.conj() / c, s.norm() / (c * c))
    return Circle2(s.conj(), 0)


# -- enumeration ------------------------------------------------------------

def all_circles(E: ExtField) -> Iterator[Circle]:
    """Every circle exactly once: q^2 (q - 1) of the first type, q (q + 1) of the second."""
    F = E.F
    for s in E.elements:
        for c in F.nonzero:
            yield Circle1(s, c)
    for s in E.elements:
        if s:
            yield Circle2(s, 1)
    for t in F.elements:
        yield Circle2(E(1, t), 0)
    yield Circle2(E.alpha, 0)


def plane_counts(E: ExtField) -> dict:
    counts = {"q": E.q, "points": E.q ** 2 + 1, "type1": 0, "type2": 0}
    for B in all_circles(E):
        counts["type1" if B.kind == 1 else "type2"] += 1
    counts["circles"] = counts["type1"] + counts["type2"]
    return counts


class Plane:
    """M(q) over a fixed quadratic extension, with memoized enumerations."""

    def __init__(self, E: ExtField):
        self.E = E
        self.F = E.F
        self.q = E.q

    @classmethod
    def create(cls, p: int, m: int = 1, modulus=None, x=None) -> Plane:
        from .gf import ext_create, field_create

        return cls(ext_create(field_create(p, m, modulus), x))

    @cached_property
    def points(self) -> tuple:
        return tuple(self.E.elements) + (INF,)

    @cached_property
    def circles(self) -> tuple:
        return tuple(all_circles(self.E))

    @cached_property
    def point_sets(self) -> dict:
        return {B: circle_points(B) for B in self.circles}

    def points_of(self, B: Circle) -> frozenset:
        try:
            return self.point_sets[B]
        except KeyError:
            return circle_points(B)

    def unit_circle(self) -> Circle1:
        return Circle1(self.E.zero, self.F.one)

    def concentric(self, a) -> Circle1:
        return Circle1(self.E.zero, self.F(a))

    def counts(self) -> dict:
        return plane_counts(self.E)

    def __repr__(self):
        return f"Plane(M({self.q}), x={self.E.x})"


# -- text and JSON forms ----------------------------------------------------

def format_point(P: Point) -> str:
    return "inf" if P is INF else str(P)


def parse_point(text: str, E: ExtField) -> Point:
    t = text.strip()
    if t.lower() in ("inf", "∞"):
        return INF
    return E.parse(t)


def format_circle(B: Circle) -> str:
    return f"B{B.kind}[s={B.s},c={B.c}]"


_CIRCLE_RE = re.compile(r"^\s*B([12])\s*\[\s*s\s*=\s*([^,\]]+?)\s*,\s*c\s*=\s*([^\]]+?)\s*\]\s*$")


def parse_circle(text: str, E: ExtField) -> Circle:
    mt = _CIRCLE_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse circle {text!r}; expected B1[s=..,c=..] or B2[s=..,c=..]")
    kind, s_text, c_text = mt.groups()
    s, c = E.parse(s_text), E.F.parse(c_text)
    if kind == "1":
        return Circle1(s, c)
    return Circle2(s, c)


def circle_to_json(B: Circle) -> dict:
    return {"type": B.kind, "s": {"re": B.s.a, "im": B.s.b}, "c": B.c.n}


def circle_from_json(data: dict, E: ExtField) -> Circle:
    F = E.F
    s = E(F.from_code(data["s"]["re"]), F.from_code(data["s"]["im"]))
    c = F.from_code(data["c"])
    if data["type"] == 1:
        return Circle1(s, c)
    if data["type"] == 2:
        return Circle2(s, c)
    raise WrongType(f"unknown circle type {data['type']!r}")
