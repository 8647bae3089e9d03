"""Brute-force oracles over the enumerated plane.

Nothing here uses the tangency or chain formulas: incidences come from
explicit point sets, tangency from ``|g ∩ h| = 1``, and chains from cycles
in a tangency graph.  That keeps these checks independent of the code they
are used to validate.
"""

from __future__ import annotations

import itertools
import os
import random
import warnings
from collections import Counter
from dataclasses import asdict, dataclass, field

from .errors import FixtureMismatch, NonSquareRatio, VerificationError
from .gf import ExtField
from .plane import (
    Circle,
    Circle1,
    MoebiusMap,
    Plane,
    circle_through,
    format_circle,
    format_point,
    moebius_apply_circle,
    point_key,
)

__all__ = [
    "Incidence",
    "AxiomReport",
    "PlaneReport",
    "CensusCycle",
    "ChainCensus",
    "check_axioms",
    "count_report",
    "expected_counts",
    "unit_stabilizer",
    "stabilizer_orbit_counts",
    "chain_census",
    "m5_fixture",
    "replay_m5",
    "max_q",
]

ABSOLUTE_MAX_Q = 27


def max_q() -> int:
    """Configured plane-size bound for the exhaustive checks (env override)."""
    return int(os.environ.get("FINITE_STEINER_MAX_Q", "13"))


def _check_bound(q: int):
    if q > ABSOLUTE_MAX_Q:
        raise ValueError(f"q={q} exceeds the verification limit {ABSOLUTE_MAX_Q}")
    if q > max_q():
        warnings.warn(f"verifying M({q}) above the configured bound {max_q()} may take a while")


@dataclass
class Incidence:
    """Points and blocks as plain sets, with a point -> block index."""

    points: tuple
    blocks: tuple

    @classmethod
    def from_plane(cls, plane: Plane) -> Incidence:
        return cls(plane.points, tuple(plane.point_sets[B] for B in plane.circles))

    def __post_init__(self):
        index: dict = {P: set() for P in self.points}
        for i, blk in enumerate(self.blocks):
            for P in blk:
                index[P].add(i)
        self.index = {P: frozenset(ids) for P, ids in index.items()}

    def blocks_through(self, *pts) -> frozenset:
        ids = self.index[pts[0]]
        for P in pts[1:]:
            ids = ids & self.index[P]
        return ids


@dataclass
class AxiomReport:
    q: int
    m1: bool
    m2: bool
    m3: bool
    m1_checked: int
    m2_checked: int
    exhaustive: bool
    seed: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.m1 and self.m2 and self.m3

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> AxiomReport:
        return cls(**data)


def check_axioms(plane, *, exhaustive: bool | None = None, samples: int = 10_000,
                 seed: int = 0, max_failures: int = 5) -> AxiomReport:
    """Check M1-M3 on ``plane`` (a :class:`Plane` or an :class:`Incidence`).

    Exhaustive by default for planes of order <= 7; otherwise ``samples``
    seeded random triples for M1 and random flags for M2.
    """
    if isinstance(plane, Plane):
        _check_bound(plane.q)
        inc = Incidence.from_plane(plane)
    else:
        inc = plane
    n = len(inc.points)
    q = round((n - 1) ** 0.5)
    if exhaustive is None:
        exhaustive = q <= 7
    rng = random.Random(seed)
    failures: list[str] = []

    def fail(msg):
        if len(failures) < max_failures:
            failures.append(msg)

    # M1: each triple of distinct points lies on exactly one block
    m1 = True
    if exhaustive:
        cover = Counter()
        for blk in inc.blocks:
            for tri in itertools.combinations(sorted(blk, key=point_key), 3):
                cover[tri] += 1
        total = n * (n - 1) * (n - 2) // 6
        m1_checked = total
        bad = [t for t, v in cover.items() if v != 1]
        if bad or len(cover) != total:
            m1 = False
            if bad:
                fail(f"M1: triple {tuple(map(format_point, bad[0]))} lies on {cover[bad[0]]} blocks")
            if len(cover) != total:
                fail(f"M1: {total - len(cover)} triples lie on no block")
    else:
        m1_checked = samples
        for _ in range(samples):
            tri = rng.sample(inc.points, 3)
            hits = len(inc.blocks_through(*tri))
            if hits != 1:
                m1 = False
                fail(f"M1: triple {tuple(map(format_point, tri))} lies on {hits} blocks")

    # M2: unique tangent block through P on g and Q off g
    def m2_ok(gi, P, Q):
        g = inc.blocks[gi]
        hits = [h for h in inc.blocks_through(P, Q) if inc.blocks[h] & g == {P}]
        return len(hits) == 1

    m2 = True
    m2_checked = 0
    if exhaustive:
        for gi, g in enumerate(inc.blocks):
            for P in g:
                for Q in inc.points:
                    if Q in g:
                        continue
                    m2_checked += 1
                    if not m2_ok(gi, P, Q):
                        m2 = False
                        fail(f"M2: no unique tangent at {format_point(P)} through {format_point(Q)}")
    else:
        for _ in range(samples):
            gi = rng.randrange(len(inc.blocks))
            g = inc.blocks[gi]
            P = rng.choice(sorted(g, key=point_key))
            Q = rng.choice(inc.points)
            while Q in g:
                Q = rng.choice(inc.points)
            m2_checked += 1
            if not m2_ok(gi, P, Q):
                m2 = False
                fail(f"M2: no unique tangent at {format_point(P)} through {format_point(Q)}")

    # M3: four points on no common block
    m3 = any(not inc.blocks_through(*quad)
             for quad in itertools.islice(itertools.combinations(inc.points, 4), 10_000))
    if not m3:
        fail("M3: no witness quadruple found")
    return AxiomReport(q, m1, m2, m3, m1_checked, m2_checked, exhaustive, seed, failures)


# -- counting ------------------------------------------------------------------

def expected_counts(q: int) -> dict:
    return {
        "points": q * q + 1,
        "circles_total": q ** 3 + q,
        "type1": q * q * (q - 1),
        "type2": q * (q + 1),
        "tangent": q * q - 1,
        "secant": q * q * (q + 1) // 2,
        "disjoint": (q ** 3 - 3 * q * q + 2 * q) // 2,
    }


@dataclass
class PlaneReport:
    q: int
    points: int
    circles_total: int
    type1: int
    type2: int
    size_histogram: dict
    reference: str
    tangent: int
    secant: int
    disjoint: int
    axioms: dict | None = None
    stabilizer_size: int | None = None
    anomalies: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["size_histogram"] = {str(k): v for k, v in self.size_histogram.items()}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> PlaneReport:
        data = dict(data)
        data["size_histogram"] = {int(k): v for k, v in data["size_histogram"].items()}
        return cls(**data)


def count_report(plane: Plane, reference: Circle | None = None) -> PlaneReport:
    """Partition all other circles by how many points they share with ``reference``."""
    _check_bound(plane.q)
    if reference is None:
        reference = plane.unit_circle()
    ref_pts = plane.points_of(reference)
    hist = Counter(len(s) for s in plane.point_sets.values())
    kinds = Counter(B.kind for B in plane.circles)
    by_meet = Counter(len(ref_pts & pts) for B, pts in plane.point_sets.items() if B != reference)
    rep = PlaneReport(
        q=plane.q,
        points=len(plane.points),
        circles_total=len(plane.circles),
        type1=kinds[1],
        type2=kinds[2],
        size_histogram=dict(hist),
        reference=format_circle(reference),
        tangent=by_meet[1],
        secant=by_meet[2],
        disjoint=by_meet[0],
    )
    if set(by_meet) - {0, 1, 2}:
        rep.anomalies.append(f"circles meeting the reference in {sorted(set(by_meet) - {0, 1, 2})} points")
    for name, want in expected_counts(plane.q).items():
        got = getattr(rep, name)
        if got != want:
            rep.anomalies.append(f"{name}: expected {want}, got {got}")
    return rep


# -- unit-circle stabilizer ------------------------------------------------------

def unit_stabilizer(plane: Plane | ExtField) -> list[MoebiusMap]:
    """All q^3 - q maps fixing the unit circle: (b z - b a)/(-conj(a) z + 1) and b/z."""
    E = plane.E if isinstance(plane, Plane) else plane
    units = E.unit_circle
    maps = []
    for b in units:
        for a in E.elements:
            if a.norm() != 1:
                maps.append(MoebiusMap(b, -b * a, -a.conj(), E.one))
        maps.append(MoebiusMap(E.zero, b, E.one, E.zero))
    unit_set = frozenset(units)
    for phi in maps:
        if frozenset(phi(P) for P in units) != unit_set:
            raise VerificationError(f"{phi} does not fix the unit circle")
    q = E.q
    if len({phi.normalized() for phi in maps}) != q ** 3 - q:
        raise VerificationError("stabilizer maps are not pairwise distinct")
    return maps


def stabilizer_orbit_counts(plane: Plane) -> Counter:
    """How often each circle arises as an image of some B_c (c != 0, 1) under the stabilizer."""
    E, F = plane.E, plane.F
    counts: Counter = Counter()
    maps = unit_stabilizer(plane)
    for c in F.nonzero:
        if c == 1:
            continue
        B = Circle1(E.zero, c)
        for phi in maps:
            counts[moebius_apply_circle(phi, B)] += 1
    return counts


# -- chain census ---------------------------------------------------------------

@dataclass(frozen=True)
class CensusCycle:
    circles: tuple
    mutual: tuple
    proper: bool

    @property
    def length(self) -> int:
        return len(self.circles)


@dataclass
class ChainCensus:
    a: object
    b: object
    nodes: list
    edges: dict
    cycles: list

    def proper_lengths(self) -> set:
        return {c.length for c in self.cycles if c.proper}

    def to_dict(self) -> dict:
        return {
            "a": self.a.n,
            "b": self.b.n,
            "nodes": [format_circle(B) for B in self.nodes],
            "cycles": [
                {"k": c.length, "proper": c.proper,
                 "circles": [format_circle(B) for B in c.circles],
                 "mutual": [format_point(P) for P in c.mutual]}
                for c in self.cycles
            ],
        }

    def to_dot(self) -> str:
        lines = ["graph tangency {"]
        for B in self.nodes:
            lines.append(f'  "{format_circle(B)}";')
        for (i, j), P in sorted(self.edges.items()):
            lines.append(f'  "{format_circle(self.nodes[i])}" -- "{format_circle(self.nodes[j])}"'
                         f' [label="{format_point(P)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def chain_census(plane: Plane, a, b, *, proper_only: bool = False) -> ChainCensus:
    """All cycles of mutually tangent common tangents of B_a and B_b.

    Common tangents are found by scanning every circle; edges join tangents
    touching each other off both base circles.  Cycles are listed once up to
    rotation and reflection.  A cycle is proper when its 3k contact points
    are pairwise distinct.
    """
    F = plane.F
    a, b = F(a), F(b)
    if a == b or not a or not b or not F.is_square(b / a):
        raise NonSquareRatio(f"b/a = {b}/{a} must be a square different from 1")
    Ba, Bb = plane.points_of(plane.concentric(a)), plane.points_of(plane.concentric(b))
    base = Ba | Bb
    nodes, inner, outer = [], [], []
    for B in plane.circles:
        pts = plane.point_sets[B]
        ia, ib = pts & Ba, pts & Bb
        if len(ia) == 1 and len(ib) == 1:
            nodes.append(B)
            inner.append(next(iter(ia)))
            outer.append(next(iter(ib)))
    edges: dict = {}
    adj: dict = {i: [] for i in range(len(nodes))}
    for i, j in itertools.combinations(range(len(nodes)), 2):
        meet = plane.point_sets[nodes[i]] & plane.point_sets[nodes[j]]
        if len(meet) == 1:
            (P,) = meet
            if P not in base:
                edges[(i, j)] = P
                adj[i].append(j)
                adj[j].append(i)

    def mutual_point(i, j):
        return edges[(i, j)] if i < j else edges[(j, i)]

    cycles = []

    def record(path):
        k = len(path)
        mutual = tuple(mutual_point(path[t], path[(t + 1) % k]) for t in range(k))
        contacts = {inner[v] for v in path} | {outer[v] for v in path} | set(mutual)
        proper = len(contacts) == 3 * k
        if proper or not proper_only:
            cycles.append(CensusCycle(tuple(nodes[v] for v in path), mutual, proper))

    def dfs(start, path, used, seen):
        last = path[-1]
        for nxt in adj[last]:
            if nxt == start and len(path) >= 3 and path[1] < path[-1]:
                if not proper_only or mutual_point(last, start) not in used:
                    record(path)
                continue
            if nxt <= start or nxt in seen:
                continue
            new = (inner[nxt], outer[nxt], mutual_point(last, nxt))
            if proper_only and (len(set(new)) < 3 or any(P in used for P in new)):
                continue
            seen.add(nxt)
            path.append(nxt)
            dfs(start, path, used | set(new), seen)
            path.pop()
            seen.discard(nxt)

    for v in range(len(nodes)):
        dfs(v, [v], {inner[v], outer[v]}, {v})
    return ChainCensus(a, b, nodes, edges, cycles)


# -- the M(5) example --------------------------------------------------------------

def m5_fixture() -> dict:
    """Golden data for M(5) with alpha^2 = 3, written as in the worked example."""
    return {
        "p": 5,
        "x": 3,
        "B1": ["1", "4", "2+a", "3+a", "2+4a", "3+4a"],
        "disjoint_to_B1": 30,
        "with_common_tangents": 10,
        "common_tangent_count": 12,
        "B4": ["2", "3", "1+2a", "4+2a", "1+3a", "4+3a"],
        "T": {
            "T1": ("B1[s=4,c=4]", ["1", "2", "2a", "3+2a", "3a", "3+3a"]),
            "T2": ("B1[s=2+a,c=4]", ["a", "4+a", "1+3a", "3+3a", "1+4a", "3+4a"]),
            "T3": ("B1[s=3+a,c=4]", ["a", "1+a", "2+3a", "4+3a", "2+4a", "4+4a"]),
            "T4": ("B1[s=1,c=4]", ["3", "4", "2a", "2+2a", "3a", "2+3a"]),
            "T5": ("B1[s=3+4a,c=4]", ["2+a", "4+a", "2+2a", "4+2a", "4a", "1+4a"]),
            "T6": ("B1[s=2+4a,c=4]", ["1+a", "3+a", "1+2a", "3+2a", "4a", "4+4a"]),
            "T7": ("B1[s=1+3a,c=1]", ["3+2a", "4+2a", "3a", "2+3a", "3+4a", "4+4a"]),
            "T8": ("B1[s=4+3a,c=1]", ["1+2a", "2+2a", "3a", "3+3a", "1+4a", "2+4a"]),
            "T9": ("B1[s=3,c=1]", ["2", "4", "a", "1+a", "4a", "1+4a"]),
            "T10": ("B1[s=4+2a,c=1]", ["1+a", "2+a", "2a", "3+2a", "1+3a", "2+3a"]),
            "T11": ("B1[s=1+2a,c=1]", ["3+a", "4+a", "2a", "2+2a", "3+3a", "4+3a"]),
            "T12": ("B1[s=2,c=1]", ["1", "3", "a", "4+a", "4a", "4+4a"]),
        },
        "T1_touch": {"B1": "1", "B4": "2"},
        "T2_touch": {"B1": "3+4a", "B4": "1+3a"},
        "chains": [
            {"circles": ["T1", "T2", "T3", "T4", "T5", "T6"],
             "mutual": ["3+3a", "a", "2+3a", "2+2a", "4a", "3+2a"],
             "start": "1", "mu": 2, "on": "B2"},
            {"circles": ["T7", "T8", "T9", "T10", "T11", "T12"],
             "mutual": ["3a", "1+4a", "1+a", "2a", "4+a", "4+4a"],
             "start": "3+4a", "mu": 3, "on": "B3"},
        ],
        "B2": ("B1[s=0,c=2]", ["a", "2+2a", "3+2a", "2+3a", "3+3a", "4a"]),
        "B3": ("B1[s=0,c=3]", ["1+a", "4+a", "2a", "3a", "1+4a", "4+4a"]),
        "S": {
            "S1": ("B1[s=1+a,c=2]", ["1", "1+2a", "3+3a", "4+3a", "3+4a", "4+4a"]),
            "S2": ("B1[s=2a,c=2]", ["2", "3", "a", "3a", "2+4a", "3+4a"]),
            "S3": ("B1[s=4+a,c=2]", ["4", "4+2a", "1+3a", "2+3a", "1+4a", "2+4a"]),
            "S4": ("B1[s=4+4a,c=2]", ["4", "1+a", "2+a", "1+2a", "2+2a", "4+3a"]),
            "S5": ("B1[s=3a,c=2]", ["2", "3", "2+a", "3+a", "2a", "4a"]),
            "S6": ("B1[s=1+4a,c=2]", ["1", "3+a", "4+a", "3+2a", "4+2a", "1+3a"]),
        },
        "tangent_to_all_S": ["B1[s=0,c=2]", "B1[s=0,c=3]"],
    }


def _pts(plane, names) -> frozenset:
    return frozenset(plane.E.parse(t) for t in names)


def _show(points) -> list:
    return sorted(format_point(P) for P in points)


def replay_m5(plane: Plane, fixture: dict | None = None) -> bool:
    """Recompute the worked M(5) example and compare item by item."""
    from .steiner import build_chain, mutual_points_circle
    from .tangency import common_tangents, tangent_point
    from .plane import parse_circle

    fx = fixture or m5_fixture()
    E = plane.E

    def expect(item, want, got):
        if want != got:
            if isinstance(want, frozenset) and isinstance(got, frozenset):
                want, got = _show(want), _show(got)
            raise FixtureMismatch(item, want, got)

    expect("field", (fx["p"], 1), (plane.F.p, plane.F.m))
    B1, B4 = plane.unit_circle(), plane.concentric(4)
    expect("B1 points", _pts(plane, fx["B1"]), plane.points_of(B1))
    expect("B4 points", _pts(plane, fx["B4"]), plane.points_of(B4))

    b1 = plane.points_of(B1)
    disjoint = [B for B, s in plane.point_sets.items() if B != B1 and not s & b1]
    expect("disjoint to B1", fx["disjoint_to_B1"], len(disjoint))
    tangent_b1 = {B for B, s in plane.point_sets.items() if len(s & b1) == 1}
    with_ct = []
    for D in disjoint:
        d = plane.point_sets[D]
        common = [B for B in tangent_b1 if len(plane.point_sets[B] & d) == 1]
        if common:
            with_ct.append(len(common))
    expect("disjoint circles with common tangents", fx["with_common_tangents"], len(with_ct))
    expect("common tangents per such circle", {fx["common_tangent_count"]}, set(with_ct))

    T = {}
    for name, (text, pts) in fx["T"].items():
        circ = parse_circle(text, E)
        expect(f"{name} points", _pts(plane, pts), plane.points_of(circ))
        T[name] = circ
    expect("common tangents of B1, B4", set(T.values()), set(common_tangents(E, 1, 4)))
    for name in ("T1", "T2"):
        touch = fx[f"{name}_touch"]
        expect(f"{name} touches B1", E.parse(touch["B1"]), tangent_point(T[name], 1))
        expect(f"{name} touches B4", E.parse(touch["B4"]), tangent_point(T[name], 4))

    chains = []
    for i, row in enumerate(fx["chains"], 1):
        ch = build_chain(4, E.parse(row["start"]), mu=plane.F(row["mu"]), which=2)
        expect(f"chain {i} circles", [T[n] for n in row["circles"]], list(ch.circles))
        expect(f"chain {i} mutual points", [E.parse(t) for t in row["mutual"]], list(ch.mutual))
        want_text, want_pts = fx[row["on"]]
        on = mutual_points_circle(ch)
        expect(f"chain {i} mutual-point circle", parse_circle(want_text, E), on)
        expect(f"{row['on']} points", _pts(plane, want_pts), plane.points_of(on))
        chains.append(ch)

    # circles through consecutive inner contacts and the mutual point between them
    ch = chains[0]
    k = ch.length
    S = [circle_through(ch.inner[i], ch.inner[(i + 1) % k], ch.mutual[i]) for i in range(k)]
    for i, (name, (text, pts)) in enumerate(fx["S"].items()):
        expect(f"{name}", parse_circle(text, E), S[i])
        expect(f"{name} points", _pts(plane, pts), plane.points_of(S[i]))
    B2 = plane.points_of(plane.concentric(2))
    expect("S circles tangent to B2", [1] * k, [len(plane.points_of(s) & B2) for s in S])
    expect("S circles form a chain", [1] * k,
           [len(plane.points_of(S[i]) & plane.points_of(S[(i + 1) % k])) for i in range(k)])
    touching_all = sorted(format_circle(B) for B, pts in plane.point_sets.items()
                          if all(len(pts & plane.points_of(s)) == 1 for s in S))
    expect("circles tangent to all S", sorted(fx["tangent_to_all_S"]), touching_all)

    # the same step on B3 recovers the second chain
    B3 = plane.points_of(plane.concentric(3))
    on3 = [next(iter(plane.points_of(s) & B3)) for s in S]
    s_mutual = [next(iter(plane.points_of(S[i]) & plane.points_of(S[(i + 1) % k]))) for i in range(k)]
    R = [circle_through(on3[i], on3[(i + 1) % k], s_mutual[i]) for i in range(k)]
    expect("second round circles", set(chains[1].circles), set(R))

    census = chain_census(plane, 1, 4)
    proper = sorted(frozenset(c.circles) for c in census.cycles if c.proper)
    expect("census proper cycles", sorted(frozenset(c.circles) for c in chains), proper)
    return True

