import itertools

import pytest

from planeforge.errors import DivisionByZero, NotPrime, TooLarge
from planeforge.gf import add, field_of_order, inv, is_irreducible, make_field, mul, prime_power


def _has_root(poly, p):
    return any(sum(c * x ** i for i, c in enumerate(poly)) % p == 0 for x in range(p))


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def test_prime_field_polynomial_is_x():
    F = make_field(2, 1)
    assert F.irreducible == (0, 1)
    assert F.q == 2


def test_gf4_polynomial_has_no_root():
    F = make_field(2, 2)
    assert F.irreducible == (1, 1, 1)  # x^2 + x + 1
    assert not _has_root(F.irreducible, 2)


def test_gf9_polynomial_is_lexicographically_first():
    # a monic quadratic over GF(3) is irreducible iff it has no root
    candidates = [(c0, c1, 1) for c0 in range(3) for c1 in range(3)]
    first = next(c for c in candidates if not _has_root(c, 3))
    assert first == (1, 0, 1)
    assert make_field(3, 2).irreducible == first


@pytest.mark.parametrize("p", [2, 3])
def test_cubic_irreducibility_matches_root_test(p):
    for low in itertools.product(range(p), repeat=3):
        poly = low + (1,)
        assert is_irreducible(poly, p) == (not _has_root(poly, p))


def test_quartics_over_gf2_match_product_enumeration():
    monic = lambda deg: [low + (1,) for low in itertools.product(range(2), repeat=deg)]
    reducible = {_poly_mul(a, b, 2) for a in monic(1) for b in monic(3)}
    reducible |= {_poly_mul(a, b, 2) for a in monic(2) for b in monic(2)}
    for poly in monic(4):
        assert is_irreducible(poly, 2) == (poly not in reducible)


def test_gf4_x_squared_reduces():
    F = make_field(2, 2)
    x = F.element([0, 1])
    assert mul(x, x) == F.element([1, 1])


def test_small_products_and_inverses():
    F2 = make_field(2)
    assert mul(F2.one, F2.one) == F2.one
    F3 = make_field(3)
    assert inv(F3.from_int(2)) == F3.from_int(2)
    with pytest.raises(DivisionByZero):
        inv(F3.zero)


def test_construction_errors():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(TooLarge):
        make_field(2, 17)
    with pytest.raises(NotPrime):
        field_of_order(6)


def test_prime_power_decomposition():
    assert prime_power(9) == (3, 2)
    assert prime_power(16) == (2, 4)
    assert prime_power(12) is None
    assert prime_power(1) is None


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    els = F.elements()
    assert len({e.code for e in els}) == q
    zero, one = F.zero, F.one
    for a in els:
        assert add(a, zero) == a and mul(a, one) == a
        assert add(a, -a) == zero
        if not a.is_zero():
            assert mul(a, inv(a)) == one
    for a, b in itertools.product(els, repeat=2):
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
    for a, b, c in itertools.product(els, repeat=3):
        assert add(add(a, b), c) == add(a, add(b, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


def test_nonzero_elements_have_no_zero_divisors():
    F = field_of_order(8)
    nonzero = [e for e in F.elements() if not e.is_zero()]
    for a in nonzero:
        assert {mul(a, b).code for b in nonzero} == {b.code for b in nonzero}


def test_mixing_fields_is_rejected():
    with pytest.raises(ValueError):
        add(make_field(2, 2).one, make_field(3).one)
