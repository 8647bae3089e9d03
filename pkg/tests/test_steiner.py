import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from finite_steiner.errors import NoChain, NotDisjoint, NotUnitNorm, UnsupportedK
from finite_steiner.gf import field_create, mult_order
from finite_steiner.plane import Circle1, Circle2, MoebiusMap, moebius_apply_circle
from finite_steiner.steiner import (
    Chain,
    build_chain,
    cap_to_radius,
    capacitance,
    chain_length,
    chain_rotors,
    chain_to_dot,
    closed_form_candidates,
    closed_form_mu,
    concentric_reduction,
    coords_in_basis,
    general_criterion,
    mutual_points_circle,
    proper_lengths,
    search_mu,
    step_tangency_holds,
)
from finite_steiner.verify import chain_census

from oracles import brute_ext_order, get_plane

FIELDS_Q13 = [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)]


def admissible(F):
    """(b, mu) with b a square != 0, 1, mu a root of b and -mu a non-square."""
    for mu in F.nonzero:
        if mu == 1 or mu == -1 or F.is_square(-mu):
            continue
        yield mu * mu, mu


def test_m5_chain_matches_worked_example():
    E = get_plane(5, x=3).E
    ch = build_chain(4, E.one, which=2)
    assert ch.mu == 2 and ch.length == 6 and ch.proper
    assert [str(B) for B in ch.circles] == [
        "B1[s=4,c=4]", "B1[s=2+a,c=4]", "B1[s=3+a,c=4]",
        "B1[s=1,c=4]", "B1[s=3+4a,c=4]", "B1[s=2+4a,c=4]",
    ]
    assert [str(P) for P in ch.mutual] == ["3+3a", "a", "2+3a", "2+2a", "4a", "3+2a"]
    assert mutual_points_circle(ch) == Circle1(E.zero, 2)


def test_rotor_directions_reverse_each_other():
    E = get_plane(5, x=3).E
    fwd = build_chain(4, E.one, which=1)
    back = build_chain(4, E.one, which=2)
    assert fwd.circles[0] == back.circles[0]
    assert list(fwd.circles[1:]) == list(reversed(back.circles[1:]))


@pytest.mark.parametrize("p,m", FIELDS_Q13)
def test_rotor_identities(p, m):
    E = get_plane(p, m).E
    F = E.F
    for _, mu in admissible(F):
        P1, P2 = chain_rotors(mu, E)
        assert P1.norm() == 1
        assert P2 == P1.conj() == P1.inv()
        assert not P1.in_base()
        # (-mu^2 + 6mu - 1)^2 + 16 mu (mu - 1)^2 = (1 + mu)^4
        assert (-mu * mu + 6 * mu - 1) ** 2 + 16 * mu * (mu - 1) ** 2 == (1 + mu) ** 4


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_chain_length_is_rotor_order(p):
    E = get_plane(p).E
    x = E.x.n
    for _, mu in admissible(E.F):
        P1, _ = chain_rotors(mu, E)
        assert chain_length(mu, E) == brute_ext_order((P1.a, P1.b), x, p)


def test_square_minus_mu_has_no_rotor():
    F = field_create(13)
    # -4 = 9 is a square mod 13 but -2 = 11 is not
    assert chain_rotors(F(4)) is None
    assert chain_length(F(4)) is None
    assert chain_rotors(F(2)) is not None


@pytest.mark.parametrize("p,m", FIELDS_Q13)
def test_proper_lengths_match_census(p, m):
    plane = get_plane(p, m)
    F = plane.F
    for b in F.nonzero:
        if b == 1 or not F.is_square(b):
            continue
        census = chain_census(plane, 1, b)
        assert census.proper_lengths() == proper_lengths(b)
        # proper cycles partition the 2(q+1) tangents into cycles of one length
        proper = [c for c in census.cycles if c.proper]
        for k in census.proper_lengths():
            of_k = [c for c in proper if c.length == k]
            covered = [B for c in of_k for B in c.circles]
            assert len(covered) == len(set(covered))
        if proper:
            assert len({c.length for c in proper}) == 1 or len(proper_lengths(b)) == 2


@pytest.mark.parametrize("p,m", [(5, 1), (7, 1), (11, 1), (3, 2)])
def test_built_chains_are_valid(p, m):
    plane = get_plane(p, m)
    F, E = plane.F, plane.E
    B1 = plane.points_of(plane.unit_circle())
    for b, mu in admissible(F):
        k = chain_length(mu, E)
        if k < 3:
            continue
        for which in (1, 2):
            ch = build_chain(b, E.one, mu=mu, which=which)
            Bb = plane.points_of(plane.concentric(b))
            assert ch.length == k
            for i, B in enumerate(ch.circles):
                pts = plane.points_of(B)
                nxt = plane.points_of(ch.circles[(i + 1) % k])
                assert pts & B1 == {ch.inner[i]} and pts & Bb == {ch.outer[i]}
                assert pts & nxt == {ch.mutual[i]}
            assert len(ch.contact_points()) == 3 * k == 3 * ch.length
            assert ch.proper


@pytest.mark.parametrize("p", [5, 7, 11])
def test_rotation_invariance(p):
    E = get_plane(p).E
    for b, mu in admissible(E.F):
        base = build_chain(b, E.one, mu=mu)
        for R in E.unit_circle:
            moved = build_chain(b, R, mu=mu)
            assert [B.s for B in moved.circles] == [B.s * R for B in base.circles]


def test_chain_errors():
    E = get_plane(5, x=3).E
    with pytest.raises(NoChain):
        build_chain(2, E.one)  # non-square
    with pytest.raises(NoChain):
        build_chain(1, E.one)
    with pytest.raises(NotUnitNorm):
        build_chain(4, E(2))
    with pytest.raises(NoChain):
        build_chain(4, E.one, mu=E.F(1))


def test_step_tangency():
    E = get_plane(5, x=3).E
    ch = build_chain(4, E.one, which=2)
    s, c = ch.circles[0].s, ch.circles[0].c
    assert step_tangency_holds(s, c, ch.rotor)
    assert not step_tangency_holds(s, c, E.one * -1)


def test_known_mu_values():
    F7, F11, F5 = field_create(7), field_create(11), field_create(5)
    assert {m.n for m in closed_form_mu(4, F7)} == {2, 4}  # 3 + 2*3 = 2, 3 - 6 = 4 mod 7
    assert {(m * m).n for m in closed_form_mu(3, F11)} == {3, 4}
    assert {m.n for m in closed_form_mu(6, F5)} == {2, 3}
    assert closed_form_mu(4, F11) == frozenset()  # 2 is a non-square mod 11
    with pytest.raises(UnsupportedK):
        closed_form_mu(7, F7)


def test_closed_form_rejects_wrong_branches():
    # some radical branch must be filtered out somewhere, otherwise the check is vacuous
    rejected = 0
    for p in (7, 17, 23, 31):
        for k in (3, 4, 5, 8):
            rejected += sum(1 for _, _, ok in closed_form_candidates(k, field_create(p)) if not ok)
    assert rejected > 0


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_search_mu_partitions_by_length(p):
    F = field_create(p)
    seen = set()
    for k in range(3, p + 2):
        mus = search_mu(k, F)
        assert not mus & seen
        seen |= mus
        for mu in mus:
            assert (p + 1) % k == 0
    assert seen == {mu for _, mu in admissible(F)}


# -- capacitance ----------------------------------------------------------------

def test_capacitance_examples():
    E = get_plane(5, x=3).E
    assert capacitance(Circle1(E.zero, 1), Circle1(E.zero, 4)) == 0
    assert capacitance(Circle2(E.one, 0), Circle2(E.alpha, 0)) == 0
    B = Circle1(E(1, 2), 3)
    assert capacitance(B, B) == 4
    L = Circle2(E(1, 3), 1)
    assert capacitance(B, L) == capacitance(L, B)


def _random_map(E, rng):
    elems = list(E.elements)
    while True:
        a, b, c, d = (rng.choice(elems) for _ in range(4))
        if a * d - b * c:
            return MoebiusMap(a, b, c, d)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FIELDS_Q13), st.integers(0, 2 ** 32))
def test_capacitance_invariance_property(pm, seed):
    rng = random.Random(seed)
    plane = get_plane(*pm)
    B, Bt = rng.sample(plane.circles, 2)
    phi = _random_map(plane.E, rng)
    assert capacitance(B, Bt) == capacitance(moebius_apply_circle(phi, B),
                                             moebius_apply_circle(phi, Bt))


@pytest.mark.parametrize("p,m", [(5, 1), (7, 1), (3, 2), (11, 1)])
def test_disjoint_discriminant_is_square(p, m):
    # c(c - 4) is always a square for disjoint circles, so cap_to_radius never fails on them
    plane = get_plane(p, m)
    U = plane.unit_circle()
    u = plane.points_of(U)
    seen = set()
    for B, pts in plane.point_sets.items():
        if pts & u:
            continue
        c = capacitance(U, B)
        assert plane.F.is_square(c * (c - 4))
        seen.add(cap_to_radius(c))
    assert plane.F.one not in seen


def test_concentric_reduction_examples():
    plane = get_plane(5, x=3)
    E = plane.E
    phi, b = concentric_reduction(plane.unit_circle(), plane.concentric(4))
    assert b == 4
    phi, b = concentric_reduction(Circle1(E.one, 1), Circle1(E.one, 4))
    assert b == 4
    with pytest.raises(NotDisjoint):
        concentric_reduction(plane.unit_circle(), Circle1(E.one, 1))


@pytest.mark.parametrize("p,m", [(5, 1), (3, 2)])
def test_concentric_reduction_pointwise(p, m):
    plane = get_plane(p, m)
    rng = random.Random(5)
    disjoint = [(g, h) for g, h in (rng.sample(plane.circles, 2) for _ in range(3000))
                if not plane.point_sets[g] & plane.point_sets[h]][:80]
    assert disjoint
    for g, h in disjoint:
        phi, b = concentric_reduction(g, h)
        assert frozenset(phi(P) for P in plane.point_sets[g]) == plane.points_of(plane.unit_circle())
        assert frozenset(phi(P) for P in plane.point_sets[h]) == plane.points_of(plane.concentric(b))


def test_general_criterion_examples():
    p5, p11 = get_plane(5, x=3), get_plane(11)
    assert general_criterion(p5.unit_circle(), p5.concentric(4), 6)
    assert not general_criterion(p5.unit_circle(), p5.concentric(4), 3)
    assert general_criterion(p11.unit_circle(), p11.concentric(3), 3)
    with pytest.raises(NotDisjoint):
        general_criterion(p5.unit_circle(), p5.unit_circle(), 3)


@pytest.mark.parametrize("p,m", FIELDS_Q13)
def test_doubling_identities(p, m):
    E = get_plane(p, m).E
    F = E.F
    betas = [E(0, r) for r in F.nonzero]  # every element outside GF(q) with zero real part
    for P in E.unit_circle:
        a, b = P.re, P.im
        assert (P * P).re == 2 * a * a - 1
        for beta in betas[:3]:
            u, v = coords_in_basis(P, beta)
            u2, v2 = coords_in_basis(P * P, beta)
            assert u2 == 2 * u * u - 1 and v2 == 2 * u * v
        assert mult_order(P) in [d for d in range(1, E.q + 2) if (E.q + 1) % d == 0]
        assert b == P.im


def test_chain_json_and_dot():
    E = get_plane(7).E
    for b, mu in admissible(E.F):
        ch = build_chain(b, E.one, mu=mu)
        data = json.loads(json.dumps(ch.to_dict()))
        assert Chain.from_dict(data, E) == ch
        assert set(data) == {"b", "mu", "rotor", "start", "k", "proper", "circles", "touch_points"}
        dot = chain_to_dot(ch)
        assert dot.count(" -- ") == ch.length
        assert dot.count(";") - dot.count(" -- ") == ch.length
