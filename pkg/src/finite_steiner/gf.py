"""Exact arithmetic in GF(p^m) and its quadratic extension GF(p^2m).

Base-field elements are stored as an integer code ``c0 + c1*p + ... +
c_{m-1}*p^(m-1)`` over the polynomial basis; the coefficient vector is
available as :attr:`FieldElem.coeffs`.  Extension elements ``re + im*alpha``
with ``alpha**2 = x`` (``x`` a non-square of the base field) hold two such
codes.

Canonical element order compares coefficient vectors lexicographically,
constant term first.  It fixes the sign returned by :func:`sqrt` and the
default non-square chosen by :func:`ext_create`.

>>> F = field_create(5)
>>> E = ext_create(F, 3)
>>> E(2, 4) * E(3, 1)
ExtElem(3+4a)
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property

from .errors import CompositeModulus, DivisionByZero, NonPrime, SquareGenerator, ZeroElement

__all__ = [
    "Field",
    "FieldElem",
    "ExtField",
    "ExtElem",
    "field_create",
    "ext_create",
    "is_square",
    "sqrt",
    "smallest_nonsquare",
    "conj",
    "trace",
    "norm",
    "in_base",
    "mult_order",
    "factorize",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (group orders here are tiny)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomials over Z_p, coefficient lists constant term first ------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = _ptrim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        k = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - k * fc) % p
        _ptrim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, f, p):
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(f, p: int) -> bool:
    """True iff the polynomial ``f`` (constant term first) is irreducible over Z_p.

    A polynomial of degree m with no irreducible factor of degree <= m/2 is
    irreducible; factors of degree d divide X^(p^d) - X.
    """
    f = _ptrim([c % p for c in f])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    xp = [0, 1]
    for _ in range(m // 2):
        xp = _ppowmod(xp, p, f, p)
        g = _pgcd(f, _psub(xp, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=m):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


# -- base field -----------------------------------------------------------

class Field:
    """The finite field GF(p^m) in a fixed polynomial basis."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p) or p == 2:
            raise NonPrime(f"p={p} is not an odd prime")
        if m < 1:
            raise ValueError(f"m={m} must be positive")
        if modulus is None:
            modulus = _smallest_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise CompositeModulus(f"modulus {list(modulus)} is not monic of degree {m}")
        if not is_irreducible(modulus, p):
            raise CompositeModulus(f"modulus {list(modulus)} is reducible over Z_{p}")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.q = p ** m
        if m > 1:
            self._build_log_tables()
            if self.q <= 729:
                self._build_add_tables()

    def _build_log_tables(self):
        p, q = self.p, self.q
        f = list(self.modulus)
        for code in range(2, q):
            g = self._decode(code)
            exp = [1]
            cur = [1]
            while True:
                cur = _pmod(_pmul(cur, g, p), f, p)
                c = self._encode(cur)
                if c == 1:
                    break
                exp.append(c)
            if len(exp) == q - 1:
                break
        self._exp = exp
        self._log = [0] * q
        for i, c in enumerate(exp):
            self._log[c] = i

    def _build_add_tables(self):
        q = self.q
        add = [self._add(a, b) for a in range(q) for b in range(q)]
        neg = [self._neg(a) for a in range(q)]
        self._add = lambda a, b: add[a * q + b]
        self._neg = neg.__getitem__
        self._sub = lambda a, b: add[a * q + neg[b]]

    def _decode(self, code):
        out = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            out.append(r)
        return _ptrim(out)

    def _encode(self, coeffs):
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + c
        return code

    # raw arithmetic on integer codes
    def _add(self, a, b):
        p = self.p
        if self.m == 1:
            return (a + b) % p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def _neg(self, a):
        p = self.p
        if self.m == 1:
            return -a % p
        out, scale = 0, 1
        while a:
            out += (-(a % p) % p) * scale
            a //= p
            scale *= p
        return out

    def _sub(self, a, b):
        if self.m == 1:
            return (a - b) % self.p
        return self._add(a, self._neg(b))

    def _mul(self, a, b):
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def _pow(self, a, k):
        if k < 0:
            a, k = self._inv(a), -k
        if self.m == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 1 if k == 0 else 0
        return self._exp[self._log[a] * k % (self.q - 1)]

    def _embed(self, n: int):
        return n % self.p

    # construction
    def __call__(self, value) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.F is not self and value.F != self:
                raise TypeError("element of a different field")
            return value
        return FieldElem(self, self._embed(int(value)))

    def from_code(self, code: int) -> FieldElem:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for GF({self.q})")
        return FieldElem(self, code)

    def from_coeffs(self, coeffs) -> FieldElem:
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != self.m or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"need {self.m} residues mod {self.p}, got {coeffs}")
        return FieldElem(self, self._encode(coeffs))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @cached_property
    def elements(self) -> tuple[FieldElem, ...]:
        """All q elements in canonical order."""
        return tuple(sorted((FieldElem(self, c) for c in range(self.q)), key=lambda e: e.key))

    @cached_property
    def nonzero(self) -> tuple[FieldElem, ...]:
        return tuple(e for e in self.elements if e.n)

    def is_square(self, e) -> bool:
        e = self(e)
        if e.n == 0:
            return True
        return self._pow(e.n, (self.q - 1) // 2) == 1

    @cached_property
    def smallest_nonsquare(self) -> FieldElem:
        for e in self.elements:
            if not self.is_square(e):
                return e
        raise AssertionError("odd-order fields contain non-squares")

    def sqrt(self, e) -> tuple[FieldElem, ...]:
        """Square roots of ``e``: ``()``, ``(0,)`` or ``(r, -r)`` with r canonically smaller."""
        e = self(e)
        if e.n == 0:
            return (self.zero,)
        if not self.is_square(e):
            return ()
        q = self.q
        if q % 4 == 3:
            r = self._pow(e.n, (q + 1) // 4)
        else:
            r = self._tonelli_shanks(e.n)
        r = FieldElem(self, r)
        return tuple(sorted((r, -r), key=lambda t: t.key))

    def _tonelli_shanks(self, a):
        q = self.q
        Q, S = q - 1, 0
        while Q % 2 == 0:
            Q //= 2
            S += 1
        z = self.smallest_nonsquare.n
        M = S
        c = self._pow(z, Q)
        t = self._pow(a, Q)
        r = self._pow(a, (Q + 1) // 2)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = self._mul(t2, t2)
                i += 1
            b = c
            for _ in range(M - i - 1):
                b = self._mul(b, b)
            M = i
            c = self._mul(b, b)
            t = self._mul(t, c)
            r = self._mul(r, b)
        return r

    def extension(self, x=None) -> ExtField:
        return ExtField(self, x)

    # serialization
    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data) -> Field:
        return cls(data["p"], data["m"], data.get("modulus"))

    def format(self, e: FieldElem) -> str:
        return str(e.n)

    def parse(self, text: str) -> FieldElem:
        """Base elements are written as their integer code (the residue when m = 1)."""
        n = int(text.strip())
        if self.m == 1:
            return self(n)
        return self.from_code(n)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


class FieldElem:
    """Element of GF(p^m); immutable."""

    __slots__ = ("F", "n")

    def __init__(self, F: Field, n: int):
        self.F = F
        self.n = n

    @property
    def coeffs(self) -> tuple[int, ...]:
        code, out = self.n, []
        for _ in range(self.F.m):
            code, r = divmod(code, self.F.p)
            out.append(r)
        return tuple(out)

    @property
    def key(self):
        return self.coeffs if self.F.m > 1 else self.n

    def _other(self, other):
        if isinstance(other, FieldElem):
            return other.n
        if isinstance(other, int):
            return self.F._embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.F, self.F._add(self.n, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.F, self.F._sub(self.n, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.F, self.F._sub(o, self.n))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.F, self.F._mul(self.n, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.F, self.F._mul(self.n, self.F._inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.F, self.F._mul(o, self.F._inv(self.n)))

    def __neg__(self):
        return FieldElem(self.F, self.F._neg(self.n))

    def __pow__(self, k: int):
        return FieldElem(self.F, self.F._pow(self.n, k))

    def inv(self) -> FieldElem:
        return FieldElem(self.F, self.F._inv(self.n))

    def __bool__(self):
        return self.n != 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.n == other.n and self.F == other.F
        if isinstance(other, int):
            return self.n == self.F._embed(other)
        if isinstance(other, ExtElem):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash(("F", self.n))

    def __lt__(self, other):
        return self.key < other.key

    def __int__(self):
        return self.n

    def __repr__(self):
        return f"FieldElem({self.n})"

    def __str__(self):
        return str(self.n)


# -- quadratic extension -----------------------------------------------------

class ExtField:
    """GF(q)(alpha) with alpha**2 = x for a non-square x of the base field."""

    def __init__(self, base: Field, x=None):
        if x is None:
            x = base.smallest_nonsquare
        x = base(x)
        if base.is_square(x):
            raise SquareGenerator(f"x={x} is a square in {base}")
        self.F = base
        self.x = x
        self.q = base.q

    def __call__(self, re=0, im=0) -> ExtElem:
        if isinstance(re, ExtElem):
            return re
        return ExtElem(self, self.F(re).n, self.F(im).n)

    @property
    def alpha(self) -> ExtElem:
        return ExtElem(self, 0, 1)

    @property
    def zero(self) -> ExtElem:
        return ExtElem(self, 0, 0)

    @property
    def one(self) -> ExtElem:
        return ExtElem(self, 1, 0)

    @cached_property
    def elements(self) -> tuple[ExtElem, ...]:
        """All q^2 elements in canonical order (re first, then im)."""
        base = self.F.elements
        return tuple(ExtElem(self, a.n, b.n) for a in base for b in base)

    @cached_property
    def norm_fibers(self) -> dict[int, tuple[ExtElem, ...]]:
        """Map base code c -> all z with N(z) = c, canonical order."""
        fibers: dict[int, list[ExtElem]] = {}
        for z in self.elements:
            fibers.setdefault(z.norm().n, []).append(z)
        return {c: tuple(v) for c, v in fibers.items()}

    @cached_property
    def unit_circle(self) -> tuple[ExtElem, ...]:
        return self.norm_fibers[1]

    def format(self, z: ExtElem) -> str:
        return str(z)

    _TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*([aα]?)\s*")

    def parse(self, text: str) -> ExtElem:
        """Parse ``"2+4a"``, ``"3*α"``, ``"a"``, ``"4"``; integers are base codes."""
        s = text.strip()
        if not s:
            raise ValueError("empty element text")
        re_part, im_part = self.F.zero, self.F.zero
        pos = 0
        while pos < len(s):
            mt = self._TERM.match(s, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"cannot parse element {text!r}")
            sign, digits, a = mt.groups()
            if not digits and not a:
                raise ValueError(f"cannot parse element {text!r}")
            val = self.F.parse(digits) if digits else self.F.one
            if sign == "-":
                val = -val
            if a:
                im_part = im_part + val
            else:
                re_part = re_part + val
            pos = mt.end()
        return ExtElem(self, re_part.n, im_part.n)

    def sqrt(self, z: ExtElem) -> tuple[ExtElem, ...]:
        """Square roots in GF(q^2), same conventions as :meth:`Field.sqrt`."""
        z = self(z)
        if not z:
            return (self.zero,)
        Q, S = self.q ** 2 - 1, 0
        while Q % 2 == 0:
            Q //= 2
            S += 1
        if z ** ((self.q ** 2 - 1) // 2) != 1:
            return ()
        c = self._nonsquare ** Q
        t = z ** Q
        r = z ** ((Q + 1) // 2)
        M = S
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2
                i += 1
            b = c
            for _ in range(M - i - 1):
                b = b * b
            M, c = i, b * b
            t = t * c
            r = r * b
        return tuple(sorted((r, -r), key=lambda e: e.key))

    @cached_property
    def _nonsquare(self) -> ExtElem:
        half = (self.q ** 2 - 1) // 2
        for z in self.elements:
            if z and z ** half != 1:
                return z
        raise AssertionError("unreachable")

    def to_dict(self) -> dict:
        return {**self.F.to_dict(), "x": self.x.n}

    @classmethod
    def from_dict(cls, data) -> ExtField:
        F = Field.from_dict(data)
        return cls(F, F.from_code(data["x"]))

    def __eq__(self, other):
        return isinstance(other, ExtField) and self.F == other.F and self.x.n == other.x.n

    def __hash__(self):
        return hash((self.F, self.x.n))

    def __repr__(self):
        return f"{self.F}(a), a^2={self.x}"


class ExtElem:
    """Element ``re + im*alpha`` of GF(q^2); immutable."""

    __slots__ = ("E", "a", "b")

    def __init__(self, E: ExtField, a: int, b: int):
        self.E = E
        self.a = a
        self.b = b

    @property
    def re(self) -> FieldElem:
        return FieldElem(self.E.F, self.a)

    @property
    def im(self) -> FieldElem:
        return FieldElem(self.E.F, self.b)

    @property
    def key(self):
        return (self.re.key, self.im.key)

    def _other(self, other):
        if isinstance(other, ExtElem):
            return other.a, other.b
        if isinstance(other, FieldElem):
            return other.n, 0
        if isinstance(other, int):
            return self.E.F._embed(other), 0
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        F = self.E.F
        return ExtElem(self.E, F._add(self.a, o[0]), F._add(self.b, o[1]))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        F = self.E.F
        return ExtElem(self.E, F._sub(self.a, o[0]), F._sub(self.b, o[1]))

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        F = self.E.F
        return ExtElem(self.E, F._neg(self.a), F._neg(self.b))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        F = self.E.F
        a, b = self.a, self.b
        c, d = o
        if F.m == 1:
            p = F.p
            return ExtElem(self.E, (a * c + self.E.x.n * b * d) % p, (a * d + b * c) % p)
        m = F._mul
        return ExtElem(self.E, F._add(m(a, c), m(self.E.x.n, m(b, d))), F._add(m(a, d), m(b, c)))

    __rmul__ = __mul__

    def conj(self) -> ExtElem:
        return ExtElem(self.E, self.a, self.E.F._neg(self.b))

    def norm(self) -> FieldElem:
        F = self.E.F
        return FieldElem(F, F._sub(F._mul(self.a, self.a), F._mul(self.E.x.n, F._mul(self.b, self.b))))

    def trace(self) -> FieldElem:
        F = self.E.F
        return FieldElem(F, F._add(self.a, self.a))

    def in_base(self) -> bool:
        return self.b == 0

    def inv(self) -> ExtElem:
        n = self.norm()
        if n.n == 0:
            raise DivisionByZero("inverse of zero")
        ni = n.inv()
        return self.conj() * ni

    def __truediv__(self, other):
        if isinstance(other, (FieldElem, int)):
            return self * self.E.F(other).inv()
        if isinstance(other, ExtElem):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElem(self.E, *o) * self.inv()

    def __pow__(self, k: int):
        base = self
        if k < 0:
            base, k = self.inv(), -k
        result = self.E.one
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, ExtElem):
            return self.a == other.a and self.b == other.b and self.E == other.E
        if isinstance(other, FieldElem):
            return self.b == 0 and self.a == other.n
        if isinstance(other, int):
            return self.b == 0 and self.a == self.E.F._embed(other)
        return NotImplemented

    def __hash__(self):
        # agree with FieldElem hashing on the embedded base field
        return hash(("F", self.a)) if self.b == 0 else hash((self.a, self.b))

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        im = "a" if self.b == 1 else f"{self.b}a"
        return im if self.a == 0 else f"{self.a}+{im}"

    def __repr__(self):
        return f"ExtElem({self})"


# -- functional API -------------------------------------------------------

def field_create(p: int, m: int = 1, modulus=None) -> Field:
    return Field(p, m, modulus)


def ext_create(base: Field, x=None) -> ExtField:
    return ExtField(base, x)


def smallest_nonsquare(F: Field) -> FieldElem:
    return F.smallest_nonsquare


def is_square(e: FieldElem) -> bool:
    return e.F.is_square(e)


def sqrt(e: FieldElem) -> tuple[FieldElem, ...]:
    return e.F.sqrt(e)


def conj(z: ExtElem) -> ExtElem:
    return z.conj()


def trace(z: ExtElem) -> FieldElem:
    return z.trace()


def norm(z: ExtElem) -> FieldElem:
    return z.norm()


def in_base(z: ExtElem) -> bool:
    return z.in_base()


def mult_order(z) -> int:
    """Least k >= 1 with z**k == 1, found by descending through divisors of the group order."""
    if not z:
        raise ZeroElement("zero has no multiplicative order")
    if isinstance(z, FieldElem):
        n = z.F.q - 1
    elif z.norm() == 1:
        n = z.E.q + 1
    else:
        n = z.E.q ** 2 - 1
    order = n
    for prime in factorize(n):
        while order % prime == 0 and z ** (order // prime) == 1:
            order //= prime
    return order
