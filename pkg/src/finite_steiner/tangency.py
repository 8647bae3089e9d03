"""Tangent circles of two concentric circles ``B_a = {N(z) = a}`` and ``B_b``.

All operations assume the common center is 0; recenter with
``MoebiusMap.translation`` first.  With ``mu**2 = b/a`` the common tangents
form two families indexed by the points P of ``B_a``::

    B1(s P, a c)    touching B_a at P and B_b at  mu P,  s = (1+mu)/2,  c = ((1-mu)/2)**2
    B1(s' P, a c')  touching B_a at P and B_b at -mu P,  s' = (1-mu)/2, c' = ((1+mu)/2)**2
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadIncidence,
    DegenerateMu,
    EqualCircles,
    NonSquareRatio,
    NotTangent,
    WrongType,
    ZeroRadiusParam,
)
from .gf import ExtElem, ExtField, FieldElem
from .plane import Circle, Circle1, Point, circle_points

__all__ = [
    "TangentFamily",
    "is_tangent_concentric",
    "common_tangents",
    "family_params",
    "tangent_families",
    "tangent_point",
    "tangent_pair_at",
    "opposite_circle",
    "same_or_opposite_test",
    "ratio_root",
    "is_member_of",
]


def _nonzero(F, a) -> FieldElem:
    a = F(a)
    if not a:
        raise ZeroRadiusParam("radius parameter must be nonzero")
    return a


def is_tangent_concentric(B: Circle, a) -> bool:
    """Discriminant test for ``|B ∩ B_a| = 1``."""
    F = B.E.F
    a = _nonzero(F, a)
    ns = B.s.norm()
    if B.kind == 1:
        if not ns and B.c == a:
            return False  # B is B_a itself
        lhs = B.c - a - ns
        return lhs * lhs == 4 * ns * a
    return B.c * B.c == 4 * ns * a


def family_params(mu) -> tuple[tuple[FieldElem, FieldElem], tuple[FieldElem, FieldElem]]:
    """``((s, c), (s', c'))`` for the unit circle and ``B_{mu^2}``."""
    if not mu or mu == 1 or mu == -1:
        raise DegenerateMu(f"mu={mu} must avoid 0 and ±1")
    s = (1 + mu) / 2
    c = ((1 - mu) / 2) ** 2
    s2 = (1 - mu) / 2
    c2 = ((1 + mu) / 2) ** 2
    return (s, c), (s2, c2)


def ratio_root(a: FieldElem, b: FieldElem) -> FieldElem:
    """The canonical square root mu of b/a; raises when there is none."""
    F = a.F
    a, b = _nonzero(F, a), _nonzero(F, b)
    if a == b:
        raise EqualCircles("B_a and B_b coincide")
    roots = F.sqrt(b / a)
    if not roots:
        raise NonSquareRatio(f"b/a = {b / a} is a non-square")
    return roots[0]


@dataclass(frozen=True)
class TangentFamily:
    """One of the two families of common tangents of ``B_a`` and ``B_b``."""

    a: FieldElem
    mu: FieldElem
    s: ExtElem
    c: FieldElem

    def member(self, P: ExtElem) -> Circle1:
        if P.norm() != self.a:
            raise BadIncidence(f"{P} is not on B_{self.a}")
        return Circle1(self.s * P, self.a * self.c)

    @property
    def members(self) -> dict:
        E = self.s.E
        return {P: self.member(P) for P in E.norm_fibers[self.a.n]}

    def outer_point(self, P: ExtElem) -> ExtElem:
        """Where ``member(P)`` touches ``B_b`` (``mu P`` for this family's mu)."""
        return self.mu * P


def tangent_families(E: ExtField, a, b, mu=None) -> tuple[TangentFamily, TangentFamily]:
    """The two families; the second one is the first built from ``-mu``."""
    F = E.F
    a, b = F(a), F(b)
    if mu is None:
        mu = ratio_root(a, b)
    elif mu * mu != b / a:
        raise NonSquareRatio(f"mu={mu} does not square to b/a")
    (s, c), (s2, c2) = family_params(mu)
    return (TangentFamily(a, mu, E(s), c), TangentFamily(a, -mu, E(s2), c2))


def common_tangents(E: ExtField, a, b) -> list[Circle1]:
    """All 2(q+1) common tangents of B_a and B_b, or [] when b/a is a non-square."""
    F = E.F
    a, b = _nonzero(F, a), _nonzero(F, b)
    if a == b:
        raise EqualCircles("B_a and B_b coincide")
    if not F.is_square(b / a):
        return []
    out = []
    for fam in tangent_families(E, a, b):
        out.extend(fam.members.values())
    return out


def tangent_point(B: Circle, a) -> Point:
    """The single point of ``B ∩ B_a``."""
    if not is_tangent_concentric(B, a):
        raise NotTangent(f"{B} is not tangent to B_{a}")
    if B.kind == 2:
        (P,) = circle_points(B) & circle_points(Circle1(B.E.zero, a))
        return P
    F = B.E.F
    a = F(a)
    s, c = B.s, B.c
    return (-c + a + s.norm()) / (2 * s.conj())


def tangent_pair_at(P: ExtElem, a, b) -> tuple[Circle1, Circle1]:
    """The two common tangents touching B_a at P: at mu P and at -mu P on B_b."""
    E = P.E
    F = E.F
    a = _nonzero(F, a)
    if P.norm() != a:
        raise BadIncidence(f"{P} is not on B_{a}")
    g, h = tangent_families(E, a, b)
    return g.member(P), h.member(P)


def opposite_circle(B: Circle) -> Circle1:
    if B.kind != 1:
        raise WrongType("opposite circle is defined for first-type circles")
    return Circle1(-B.s, B.c)


def same_or_opposite_test(B1: Circle, B2: Circle) -> bool:
    """True iff the two tangents touch B_a at the same or at opposite points."""
    w = B1.s * B2.s.conj()
    return w.in_base() and bool(w)


def is_member_of(B: Circle, a, b) -> bool:
    """Membership in tau(a, b) by the discriminant tests."""
    return is_tangent_concentric(B, a) and is_tangent_concentric(B, b)

