"""Steiner chains between the unit circle and ``B_b``, and the capacitance invariant.

A proper chain of the family ``B1(s P, c)`` (``s = (1+mu)/2``,
``c = ((1-mu)/2)**2``) steps its centers by a unit-norm rotor

    P1 = ((-mu^2 + 6 mu - 1) + 4 (mu - 1) sqrt(-mu)) / (1 + mu)^2

which lives outside the base field exactly when ``-mu`` is a non-square.
The chain length is the multiplicative order of P1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegenerateMu,
    NoChain,
    NonSquareDiscriminant,
    NotConcyclic,
    NotDisjoint,
    NotUnitNorm,
    UnsupportedK,
)
from .gf import ExtElem, ExtField, Field, FieldElem, ext_create, mult_order
from .plane import (
    Circle,
    Circle1,
    MoebiusMap,
    circle_from_json,
    circle_points,
    circle_through,
    circle_to_json,
    contains,
    format_circle,
    moebius_apply_circle,
    sorted_points,
)
from .tangency import family_params, is_member_of

__all__ = [
    "Chain",
    "step_tangency_holds",
    "chain_rotors",
    "chain_length",
    "build_chain",
    "mutual_points_circle",
    "closed_form_mu",
    "closed_form_candidates",
    "search_mu",
    "proper_lengths",
    "capacitance",
    "cap_to_radius",
    "concentric_reduction",
    "general_criterion",
    "coords_in_basis",
    "chain_to_dot",
    "SUPPORTED_K",
]

SUPPORTED_K = (3, 4, 5, 6, 8)


@dataclass(frozen=True)
class Chain:
    """A Steiner chain around ``B_1`` and ``B_b``.

    ``circles[i] = B1(s * rotor**i * start, c)``; ``inner[i]``/``outer[i]`` are
    its contact points with ``B_1``/``B_b`` and ``mutual[i]`` the contact point
    of ``circles[i]`` and ``circles[i+1]`` (cyclically).
    """

    b: FieldElem
    mu: FieldElem
    rotor: ExtElem
    start: ExtElem
    circles: tuple
    inner: tuple
    outer: tuple
    mutual: tuple
    proper: bool = True

    @property
    def length(self) -> int:
        return len(self.circles)

    k = length

    def contact_points(self) -> set:
        return set(self.inner) | set(self.outer) | set(self.mutual)

    def to_dict(self) -> dict:
        return {
            "b": self.b.n,
            "mu": self.mu.n,
            "rotor": str(self.rotor),
            "start": str(self.start),
            "k": self.length,
            "proper": self.proper,
            "circles": [circle_to_json(B) for B in self.circles],
            "touch_points": {
                "inner": [str(P) for P in self.inner],
                "outer": [str(P) for P in self.outer],
                "mutual": [str(P) for P in self.mutual],
            },
        }

    @classmethod
    def from_dict(cls, data: dict, E: ExtField) -> Chain:
        F = E.F
        tp = data["touch_points"]
        return cls(
            b=F.from_code(data["b"]),
            mu=F.from_code(data["mu"]),
            rotor=E.parse(data["rotor"]),
            start=E.parse(data["start"]),
            circles=tuple(circle_from_json(c, E) for c in data["circles"]),
            inner=tuple(E.parse(t) for t in tp["inner"]),
            outer=tuple(E.parse(t) for t in tp["outer"]),
            mutual=tuple(E.parse(t) for t in tp["mutual"]),
            proper=data["proper"],
        )


def step_tangency_holds(s: ExtElem, c, P: ExtElem) -> bool:
    """``B1(s, c)`` and ``B1(s P, c)`` touch  iff  N(s (P - 1)) = 4c."""
    if P.norm() != 1:
        raise NotUnitNorm(f"{P} has norm {P.norm()}")
    return (s * (P - 1)).norm() == 4 * c


def _check_mu(mu: FieldElem):
    if not mu or mu == 1 or mu == -1:
        raise DegenerateMu(f"mu={mu} must avoid 0 and ±1")


def chain_rotors(mu: FieldElem, E: ExtField | None = None) -> tuple[ExtElem, ExtElem] | None:
    """``(P1, P2)`` with ``P2 = conj(P1) = 1/P1``, or None when -mu is a square."""
    _check_mu(mu)
    F = mu.F
    if F.is_square(-mu):
        return None
    if E is None:
        E = ext_create(F)
    # -mu and x are both non-squares, so -mu/x has a root r and sqrt(-mu) = r*alpha
    r = F.sqrt(-mu / E.x)[0]
    root = E(0, r)
    P1 = (E(-mu * mu + 6 * mu - 1) + root * (4 * (mu - 1))) / ((1 + mu) ** 2)
    return P1, P1.conj()


def chain_length(mu: FieldElem, E: ExtField | None = None) -> int | None:
    """Multiplicative order of the rotor, None when no rotor exists."""
    rotors = chain_rotors(mu, E)
    if rotors is None:
        return None
    return mult_order(rotors[0])


def _admissible_mus(b: FieldElem) -> list[FieldElem]:
    F = b.F
    return [mu for mu in F.sqrt(b) if mu and mu != 1 and mu != -1 and not F.is_square(-mu)]


def build_chain(b, start: ExtElem, *, mu: FieldElem | None = None, which: int = 1) -> Chain:
    """The proper chain through ``B1(s*start, c)`` stepping by rotor P1 (``which=1``) or P2.

    ``mu`` picks the family (a square root of b); by default the first admissible
    root in canonical order.
    """
    E = start.E
    F = E.F
    b = F(b)
    if start.norm() != 1:
        raise NotUnitNorm(f"start {start} is not on the unit circle")
    if not F.is_square(b) or b == 1 or not b:
        raise NoChain(f"b={b} is not a square different from 0 and 1")
    if mu is None:
        mus = _admissible_mus(b)
        if not mus:
            raise NoChain(f"-mu is a square for every root mu of b={b}")
        mu = mus[0]
    else:
        mu = F(mu)
        if mu * mu != b:
            raise NoChain(f"mu={mu} is not a square root of b={b}")
    rotors = chain_rotors(mu, E)
    if rotors is None:
        raise NoChain(f"-mu={-mu} is a square; only degenerate chains exist")
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    P = rotors[which - 1]
    k = mult_order(P)
    if k < 3:
        raise NoChain(f"rotor order {k} is below 3", order=k)
    (s, c), _ = family_params(mu)
    s = E(s)
    centers_dir = [start]
    for _ in range(k - 1):
        centers_dir.append(centers_dir[-1] * P)
    circles = tuple(Circle1(s * R, c) for R in centers_dir)
    inner = tuple(centers_dir)
    outer = tuple(mu * R for R in centers_dir)
    mutual = []
    for i, B in enumerate(circles):
        nxt = circles[(i + 1) % k]
        pts = circle_points(B) & circle_points(nxt)
        if len(pts) != 1:
            raise AssertionError(f"consecutive circles {B}, {nxt} meet in {len(pts)} points")
        mutual.append(next(iter(pts)))
        if not is_member_of(B, 1, b):
            raise AssertionError(f"{B} is not a common tangent of B_1 and B_{b}")
    proper = len(set(inner) | set(outer) | set(mutual)) == 3 * k
    return Chain(b, mu, P, start, circles, inner, outer, tuple(mutual), proper)


def mutual_points_circle(chain: Chain) -> Circle:
    """The circle through all mutual contact points of a chain."""
    pts = chain.mutual
    if len(pts) < 3:
        raise NotConcyclic("need at least three points")
    B = circle_through(*pts[:3])
    for P in pts[3:]:
        if not contains(B, P):
            raise NotConcyclic(f"{P} is not on {format_circle(B)}")
    return B


# -- chain lengths ------------------------------------------------------------

def _radical_candidates(k: int, F: Field) -> list[FieldElem]:
    sq = F.sqrt
    out = []
    if k == 3:
        out = [7 + 4 * r for r in sq(F(3))]
    elif k == 4:
        out = [3 + 2 * r for r in sq(F(2))]
    elif k == 5:
        for r in sq(F(5)):
            out += [11 - 4 * r + 2 * t for t in sq(50 - 22 * r)]
    elif k == 6:
        out = [F(3)]
        if F(3):
            out.append(F(3).inv())
    elif k == 8:
        for r in sq(F(2)):
            out += [7 - 4 * r + 2 * t for t in sq(2 * (10 - 7 * r))]
    else:
        raise UnsupportedK(f"no closed form for k={k}; use search_mu")
    return out


def closed_form_candidates(k: int, F: Field) -> list[tuple[FieldElem, int | None, bool]]:
    """Every radical branch as ``(mu, rotor order or None, accepted)``."""
    E = ext_create(F)
    rows = []
    for mu in _radical_candidates(k, F):
        if not mu or mu == 1 or mu == -1:
            rows.append((mu, None, False))
            continue
        order = chain_length(mu, E)
        rows.append((mu, order, order == k))
    return rows


def closed_form_mu(k: int, F: Field) -> frozenset:
    """Values of mu from the radical formulas for lengths 3, 4, 5, 6 and 8 valid in F."""
    return frozenset(mu for mu, _, ok in closed_form_candidates(k, F) if ok)


def search_mu(k: int, F: Field) -> frozenset:
    """Exhaustive: all mu with -mu a non-square and rotor order exactly k."""
    E = ext_create(F)
    out = set()
    for mu in F.elements:
        if not mu or mu == 1 or mu == -1:
            continue
        if chain_length(mu, E) == k:
            out.add(mu)
    return frozenset(out)


def proper_lengths(b, F: Field | None = None) -> set[int]:
    """Lengths of proper chains carried by ``B_1`` and ``B_b``."""
    if F is not None:
        b = F(b)
    out = set()
    for mu in _admissible_mus(b):
        k = chain_length(mu)
        if k is not None and k >= 3:
            out.add(k)
    return out


# -- capacitance --------------------------------------------------------------

def capacitance(B: Circle, Bt: Circle) -> FieldElem:
    """Moebius-invariant base-field number attached to a pair of circles."""
    if B.kind == 2 and Bt.kind == 1:
        B, Bt = Bt, B
    s1, c1, s2, c2 = B.s, B.c, Bt.s, Bt.c
    if B.kind == 1 and Bt.kind == 1:
        t = c1 + c2 - (s1 - s2).norm()
        return t * t / (c1 * c2)
    if B.kind == 1:
        t = (s1 * s2.conj()).trace() - c2
        return t * t / (c1 * s2.norm())
    t = (s1 * s2.conj()).trace()
    return t * t / (s1.norm() * s2.norm())


def cap_to_radius(cap: FieldElem) -> FieldElem:
    """``b = (c - 2 + sqrt(c (c - 4))) / 2`` with the canonical root as the plus branch."""
    roots = cap.F.sqrt(cap * (cap - 4))
    if not roots:
        raise NonSquareDiscriminant(f"c(c-4) is a non-square for capacitance {cap}")
    return (cap - 2 + roots[0]) / 2


def _require_disjoint(B: Circle, Bt: Circle):
    if B == Bt or circle_points(B) & circle_points(Bt):
        raise NotDisjoint(f"{format_circle(B)} and {format_circle(Bt)} intersect")


def concentric_reduction(B: Circle, Bt: Circle) -> tuple[MoebiusMap, FieldElem]:
    """A map sending ``B`` to the unit circle and ``Bt`` to ``B_b``.

    ``b`` follows the plus-branch convention of :func:`cap_to_radius`; an extra
    inversion is appended when the geometric construction lands on ``1/b``.
    """
    _require_disjoint(B, Bt)
    E = B.E
    unit = sorted_points(E.unit_circle)
    src = sorted_points(circle_points(B))[:3]
    phi0 = MoebiusMap.from_points(src, unit[:3])
    image0 = moebius_apply_circle(phi0, Bt)
    for a in E.elements:
        if a.norm() == 1:
            continue
        # z -> (z - a) / (1 - conj(a) z) keeps the unit circle and moves a to 0
        phi_a = MoebiusMap(E.one, -a, -a.conj(), E.one)
        image = moebius_apply_circle(phi_a, image0)
        if image.kind == 1 and not image.s:
            break
    else:
        raise AssertionError(f"no centering map found for {format_circle(Bt)}")
    phi = phi_a @ phi0
    b = cap_to_radius(capacitance(B, Bt))
    if b != image.c:
        if b != image.c.inv():
            raise AssertionError(f"capacitance radius {b} disagrees with {image.c}")
        phi = MoebiusMap.inversion(E) @ phi
    unit_circle = Circle1(E.zero, E.F.one)
    if moebius_apply_circle(phi, B, verify=True) != unit_circle:
        raise AssertionError("reduction does not map B to the unit circle")
    if moebius_apply_circle(phi, Bt, verify=True) != Circle1(E.zero, b):
        raise AssertionError("reduction does not map the second circle to B_b")
    return phi, b


def general_criterion(B: Circle, Bt: Circle, k: int) -> bool:
    """Whether two disjoint circles carry a proper Steiner chain of length k."""
    _require_disjoint(B, Bt)
    b = cap_to_radius(capacitance(B, Bt))
    if not b or b == 1:
        return False
    return any(chain_length(mu) == k for mu in _admissible_mus(b))


# -- odds and ends ------------------------------------------------------------

def coords_in_basis(z: ExtElem, beta: ExtElem) -> tuple[FieldElem, FieldElem]:
    """``(u, v)`` with ``z = u + v beta``; ``beta`` must lie outside the base field."""
    if beta.in_base():
        raise ValueError("basis element must lie outside the base field")
    v = z.im / beta.im
    u = (z - beta * v).re
    return u, v


def chain_to_dot(chain: Chain, name: str = "chain") -> str:
    lines = [f"graph {name} {{"]
    for B in chain.circles:
        lines.append(f'  "{format_circle(B)}";')
    k = chain.length
    for i, B in enumerate(chain.circles):
        nxt = chain.circles[(i + 1) % k]
        lines.append(f'  "{format_circle(B)}" -- "{format_circle(nxt)}" [label="{chain.mutual[i]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
