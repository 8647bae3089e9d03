import doctest

import pytest
from hypothesis import given, settings, strategies as st

import finite_steiner.gf as gf
from finite_steiner.errors import (
    CompositeModulus,
    DivisionByZero,
    NonPrime,
    SquareGenerator,
    ZeroElement,
)
from finite_steiner.gf import ExtField, Field, ext_create, field_create, mult_order

from oracles import (
    all_tuples,
    brute_ext_order,
    brute_order_mod,
    brute_sqrt_mod,
    code,
    ext_mul,
    nonsquares_mod,
    poly_add,
    poly_mul,
)

PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2)]


def test_module_doctests():
    assert doctest.testmod(gf).failed == 0


@pytest.mark.parametrize("p", [2, 4, 9, 15, 1, 0])
def test_rejects_non_primes(p):
    with pytest.raises(NonPrime):
        field_create(p)


def test_rejects_reducible_modulus():
    # x^2 + 1 = (x - 2)(x + 2) over GF(5)
    with pytest.raises(CompositeModulus):
        field_create(5, 2, (1, 0, 1))
    with pytest.raises(CompositeModulus):
        field_create(3, 2, (1, 0, 2))  # not monic


def test_default_modulus_is_irreducible_and_smallest():
    F = field_create(3, 2)
    assert F.modulus == (1, 0, 1)  # x^2 + 1, irreducible since -1 is a non-square mod 3
    assert gf.is_irreducible(F.modulus, 3)


@pytest.mark.parametrize("p", PRIMES)
def test_prime_field_matches_integers_mod_p(p):
    F = field_create(p)
    for a in range(p):
        for b in range(p):
            assert (F(a) + F(b)).n == (a + b) % p
            assert (F(a) * F(b)).n == (a * b) % p
            assert (F(a) - F(b)).n == (a - b) % p
            if b:
                assert (F(a) / F(b)).n * b % p == a


@pytest.mark.parametrize("p,m", [(3, 2), (5, 2), (3, 3), (7, 2)])
def test_extension_field_matches_polynomial_oracle(p, m):
    F = field_create(p, m)
    tuples = all_tuples(p, m)
    for a in tuples:
        for b in tuples:
            fa, fb = F.from_coeffs(a), F.from_coeffs(b)
            assert (fa * fb).n == code(poly_mul(a, b, F.modulus, p), p)
            assert (fa + fb).n == code(poly_add(a, b, p), p)


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_canonical_order_is_lexicographic_constant_first(p, m):
    F = field_create(p, m)
    coeffs = [tuple(e.coeffs) for e in F.elements]
    assert coeffs == sorted(all_tuples(p, m))
    assert len(set(coeffs)) == p ** m


@pytest.mark.parametrize("p", PRIMES)
def test_sqrt_matches_scan(p):
    F = field_create(p)
    for n in range(p):
        got = [r.n for r in F.sqrt(F(n))]
        assert sorted(got) == brute_sqrt_mod(n, p)
        assert F.is_square(F(n)) == bool(brute_sqrt_mod(n, p))
        if len(got) == 2:
            assert got[0] < got[1]  # canonical order picks the smaller residue first


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_sqrt_any_field(p, m):
    F = field_create(p, m)
    squares = {(e * e).n for e in F.elements}
    for e in F.elements:
        roots = F.sqrt(e)
        assert all(r * r == e for r in roots)
        assert (len(roots) > 0) == (e.n in squares)
        assert len(roots) in (0, 1, 2)


@pytest.mark.parametrize("p", PRIMES)
def test_smallest_nonsquare(p):
    assert field_create(p).smallest_nonsquare.n == nonsquares_mod(p)[0]


def test_sqrt_of_minus_one():
    F = field_create(5)
    assert [r.n for r in F.sqrt(F(4))] == [2, 3]
    assert F.sqrt(F(2)) == ()
    assert F.sqrt(F(0)) == (F.zero,)
    assert field_create(7).sqrt(field_create(7)(6)) == ()  # 7 = 3 mod 4


@pytest.mark.parametrize("p", PRIMES[:6])
def test_mult_order_matches_scan(p):
    F = field_create(p)
    for n in range(1, p):
        assert mult_order(F(n)) == brute_order_mod(n, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_ext_order_matches_scan(p):
    E = ext_create(field_create(p))
    x = E.x.n
    for z in E.elements:
        if z:
            assert mult_order(z) == brute_ext_order((z.a, z.b), x, p)


def test_mult_order_of_zero():
    with pytest.raises(ZeroElement):
        mult_order(field_create(5).zero)


def test_division_by_zero():
    F = field_create(7)
    with pytest.raises(DivisionByZero):
        F(3) / F(0)
    with pytest.raises(ZeroDivisionError):
        F(0).inv()
    E = ext_create(F)
    with pytest.raises(DivisionByZero):
        E.one / E.zero


def test_ext_rejects_square_generator():
    F = field_create(5)
    with pytest.raises(SquareGenerator):
        ext_create(F, 4)
    assert ext_create(F).x.n == 2
    assert ext_create(F, 3).x.n == 3


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_ext_multiplication_matches_oracle(p):
    E = ext_create(field_create(p))
    x = E.x.n
    elems = list(E.elements)
    for u in elems[::3]:
        for v in elems:
            assert ((u * v).a, (u * v).b) == ext_mul((u.a, u.b), (v.a, v.b), x, p)


def test_norm_trace_conj_examples():
    E = ext_create(field_create(5), 3)
    z = E(2, 1)  # 2 + a, a^2 = 3
    assert z.conj() == E(2, 4)
    assert z.norm().n == (4 - 3) % 5
    assert z.trace().n == 4
    assert (z * z.conj()).in_base()


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_norm_fibers_sizes(p, m):
    E = ext_create(field_create(p, m))
    q = p ** m
    fibers = E.norm_fibers
    assert len(fibers[0]) == 1
    assert all(len(fibers[c.n]) == q + 1 for c in E.F.nonzero)
    assert sum(len(v) for v in fibers.values()) == q * q


@pytest.mark.parametrize("p,m", [(5, 1), (7, 1), (3, 2)])
def test_ext_sqrt(p, m):
    E = ext_create(field_create(p, m))
    squares = {(z * z).key for z in E.elements}
    for z in E.elements:
        roots = E.sqrt(z)
        assert all(r * r == z for r in roots)
        assert bool(roots) == (z.key in squares)


def test_text_round_trip():
    E = ext_create(field_create(5), 3)
    for z in E.elements:
        assert E.parse(str(z)) == z
    assert E.parse("3*α") == E(0, 3)
    assert E.parse("a") == E.alpha
    assert E.parse("4") == E(4)
    with pytest.raises(ValueError):
        E.parse("2+b")


@pytest.mark.parametrize("p,m", [(5, 1), (3, 2), (3, 3)])
def test_serialization_round_trip(p, m):
    E = ext_create(field_create(p, m))
    assert ExtField.from_dict(E.to_dict()) == E
    assert Field.from_dict(E.F.to_dict()) == E.F
    for z in list(E.elements)[:20]:
        assert E.parse(E.format(z)) == z


fields = st.sampled_from(SMALL_FIELDS).map(lambda pm: ext_create(field_create(*pm)))


@st.composite
def ext_triples(draw):
    E = draw(fields)
    n = E.q ** 2
    codes = st.integers(0, n - 1)
    elems = list(E.elements)
    return E, elems[draw(codes)], elems[draw(codes)], elems[draw(codes)]


@settings(max_examples=300, deadline=None)
@given(ext_triples())
def test_ext_field_axioms(t):
    E, u, v, w = t
    assert (u + v) + w == u + (v + w)
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w
    assert u * v == v * u
    if u:
        assert u * u.inv() == E.one
    # Frobenius-style properties of the conjugation
    assert (u * v).conj() == u.conj() * v.conj()
    assert (u * v).norm() == u.norm() * v.norm()
    assert u.conj().conj() == u
    assert (u + v).trace() == u.trace() + v.trace()
    assert u.norm().n == (u * u.conj()).a and (u * u.conj()).in_base()
    assert u ** E.q == u.conj()


@settings(max_examples=200, deadline=None)
@given(ext_triples())
def test_pow_matches_repeated_product(t):
    E, u, _, _ = t
    acc = E.one
    for k in range(6):
        assert u ** k == acc
        acc = acc * u


def test_equality_and_hashing_across_levels():
    F = field_create(7)
    E = ext_create(F)
    assert E(3) == F(3)
    assert hash(E(3)) == hash(F(3))
    assert F(3) == 3 and F(3) == 10
    assert len({E(3), F(3)}) == 1
