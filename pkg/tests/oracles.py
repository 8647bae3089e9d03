"""Independent brute-force oracles shared by the tests.

These work on raw integer coordinates and never call the library's field
arithmetic, circle formulas or chain code.
"""

from functools import lru_cache
from itertools import product

from finite_steiner.plane import INF, Plane


@lru_cache(maxsize=None)
def get_plane(p, m=1, x=None):
    plane = Plane.create(p, m, x=x)
    plane.point_sets  # warm the cache once per session
    return plane


# -- GF(p^m) as coefficient tuples -----------------------------------------------

def poly_mul(a, b, modulus, p):
    """Schoolbook product of two constant-first tuples, reduced by a monic modulus."""
    m = len(modulus) - 1
    prod = [0] * (2 * m - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            prod[i + j] = (prod[i + j] + u * v) % p
    for deg in range(len(prod) - 1, m - 1, -1):
        coef = prod[deg]
        if coef:
            for k in range(m + 1):
                prod[deg - m + k] = (prod[deg - m + k] - coef * modulus[k]) % p
    return tuple(prod[:m])


def poly_add(a, b, p):
    return tuple((u + v) % p for u, v in zip(a, b))


def all_tuples(p, m):
    """Every element as a constant-first tuple, in the canonical code order."""
    return [tuple((n // p ** i) % p for i in range(m)) for n in range(p ** m)]


def code(t, p):
    return sum(c * p ** i for i, c in enumerate(t))


def brute_sqrt_mod(n, p):
    return sorted(r for r in range(p) if r * r % p == n % p)


def brute_order_mod(n, p):
    k, acc = 1, n % p
    while acc != 1:
        acc = acc * n % p
        k += 1
    return k


def nonsquares_mod(p):
    sq = {r * r % p for r in range(1, p)}
    return [n for n in range(1, p) if n not in sq]


# -- M(p) on integer coordinates (prime fields only) -------------------------------

def ext_mul(u, v, x, p):
    """(u0 + u1 a)(v0 + v1 a) with a^2 = x."""
    return ((u[0] * v[0] + x * u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)


def ext_norm(u, x, p):
    return (u[0] * u[0] - x * u[1] * u[1]) % p


def ext_pow(u, e, x, p):
    acc = (1, 0)
    for _ in range(e):
        acc = ext_mul(acc, u, x, p)
    return acc


def brute_ext_order(u, x, p):
    k, acc = 1, u
    while acc != (1, 0):
        acc = ext_mul(acc, u, x, p)
        k += 1
    return k


def raw_points_type1(s, c, x, p):
    """All (u, v) with N((u, v) - s) = c."""
    return frozenset(
        (u, v) for u, v in product(range(p), repeat=2)
        if ext_norm(((u - s[0]) % p, (v - s[1]) % p), x, p) == c % p
    )


def raw_points_type2(s, c, x, p):
    """All (u, v) with Tr(conj(s) z) = c, plus infinity."""
    pts = {(u, v) for u, v in product(range(p), repeat=2)
           if (2 * (s[0] * u - x * s[1] * v)) % p == c % p}
    return frozenset(pts | {"inf"})


def raw(P):
    """Library point -> integer coordinates (prime fields only)."""
    return "inf" if P is INF else (P.a, P.b)


def raw_set(points):
    return frozenset(raw(P) for P in points)


def raw_circle_sets(p, x):
    """Every circle of M(p) as a raw point set, built from the defining equations."""
    out = set()
    for s in product(range(p), repeat=2):
        for c in range(1, p):
            out.add(raw_points_type1(s, c, x, p))
        if s != (0, 0):
            for c in range(p):
                out.add(raw_points_type2(s, c, x, p))
    return out


def brute_tangents(plane, g_points, h_points):
    """Circles meeting both point sets in exactly one point."""
    return [B for B, pts in plane.point_sets.items()
            if len(pts & g_points) == 1 and len(pts & h_points) == 1]
