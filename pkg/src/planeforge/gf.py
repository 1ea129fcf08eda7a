"""Finite fields GF(p^k) in polynomial (coefficient vector) representation.

Elements are stored as tuples of ``k`` residues mod ``p``, constant term first.
Every element also has an integer code ``sum(c_i * p**i)`` which fixes a total
order on the field; planes use that order to assign ids deterministically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DivisionByZero, NotPrime, TooLarge

MAX_FIELD_SIZE = 2 ** 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` for prime ``p``, else ``None``."""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


# polynomials over GF(p): tuples of residues, constant term first, no trailing zeros
def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mod(a, m, p):
    a = list(_trim(a))
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        factor = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * mc) % p
        a = list(_trim(a))
    return tuple(a)


def _monic_polys(p, deg):
    """All monic polynomials of degree ``deg``, lexicographic from the constant term."""
    for low in itertools.product(range(p), repeat=deg):
        yield low + (1,)


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) described by its characteristic and a monic irreducible polynomial."""

    p: int
    k: int
    irreducible: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p ** self.k)

    def element(self, coeffs) -> FieldElement:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) < self.k:
            coeffs += (0,) * (self.k - len(coeffs))
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def from_int(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside GF({self.q})")
        coeffs = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> FieldElement:
        return self.from_int(0)

    @property
    def one(self) -> FieldElement:
        return self.from_int(1)

    def elements(self) -> list[FieldElement]:
        return [self.from_int(i) for i in range(self.q)]

    # integer-code arithmetic, used by the plane builder
    def add_codes(self, a: int, b: int) -> int:
        return self._add_table[a][b]

    def mul_codes(self, a: int, b: int) -> int:
        return self._mul_table[a][b]

    @cached_property
    def _add_table(self):
        els = self.elements()
        return [[add(a, b).code for b in els] for a in els]

    @cached_property
    def _mul_table(self):
        els = self.elements()
        return [[mul(a, b).code for b in els] for a in els]

    def __str__(self):
        return f"GF({self.q})"


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return sum(c * self.field.p ** i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-c) % p for c in self.coeffs))

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return mul(self, inv(other))

    def __repr__(self):
        return f"{self.field}[{self.code}]"


def make_field(p: int, k: int = 1) -> FieldSpec:
    """Build GF(p^k) using the lexicographically smallest monic irreducible.

    Coefficient vectors are compared constant term first. For ``k == 1`` the
    polynomial is ``x``.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** k > MAX_FIELD_SIZE:
        raise TooLarge(f"{p}^{k} exceeds the field size cap {MAX_FIELD_SIZE}")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    for poly in _monic_polys(p, k):
        if is_irreducible(poly, p):
            return FieldSpec(p, k, poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_of_order(q: int) -> FieldSpec:
    pk = prime_power(q)
    if pk is None:
        raise NotPrime(f"{q} is not a prime power")
    return make_field(*pk)


def _check_same(a, b):
    if a.field != b.field:
        raise ValueError(f"elements of {a.field} and {b.field} cannot be combined")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    p = a.field.p
    return FieldElement(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    fs = a.field
    p, k = fs.p, fs.k
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] = (prod[i + j] + x * y) % p
    reduced = _poly_mod(prod, fs.irreducible, p)
    return FieldElement(fs, reduced + (0,) * (k - len(reduced)))


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse as ``a**(q-2)`` (the nonzero elements form a group of order q-1)."""
    if a.is_zero():
        raise DivisionByZero(f"zero has no inverse in {a.field}")
    result, base, e = a.field.one, a, a.field.q - 2
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result
