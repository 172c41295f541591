import itertools

import pytest
from hypothesis import given, strategies as st

from multicover.ffield import (extension_make, field_from_json, field_make, field_to_json, gf,
                               primitive_element, prime_power)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


# Oracle: schoolbook polynomial arithmetic on digit lists.
def poly_mul_mod(a, b, mod, p):
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    e = len(mod) - 1
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return prod[:e]


def digits(x, p, e):
    return [(x // p**i) % p for i in range(e)]


def undigits(d, p):
    return sum(c * p**i for i, c in enumerate(d))


@pytest.mark.parametrize("q", SMALL_Q)
def test_mul_matches_polynomial_oracle(q):
    F = gf(q)
    for a, b in itertools.product(range(q), repeat=2):
        want = undigits(poly_mul_mod(digits(a, F.p, F.e), digits(b, F.p, F.e), F.modulus, F.p), F.p)
        assert F.mul(a, b) == want
        assert F.add(a, b) == undigits([(x + y) % F.p for x, y in
                                        zip(digits(a, F.p, F.e), digits(b, F.p, F.e))], F.p)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_field_axioms_exhaustive(q):
    F = gf(q)
    els = range(q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a, b in itertools.product(els, repeat=2):
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a


@pytest.mark.parametrize("q", [16, 25, 27, 49, 81])
def test_inverses_exhaustive(q):
    F = gf(q)
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        F.inv(0)


def test_constructor_errors():
    with pytest.raises(ValueError, match="not prime"):
        field_make(4, 1)
    with pytest.raises(ValueError, match="reducible modulus"):
        field_make(2, 2, [1, 0, 1])
    with pytest.raises(ValueError):
        prime_power(12)


def test_small_values():
    F4 = field_make(2, 2, [1, 1, 1])
    assert F4 == gf(4)
    assert F4.mul(2, 2) == 3  # x*x = x+1
    assert F4.inv(1) == 1
    assert gf(3).pow(2, 2) == 1
    assert primitive_element(gf(2)) == 1
    assert primitive_element(gf(4)) == 2
    assert primitive_element(gf(5)) == 2
    assert gf(9).modulus == (1, 0, 1)  # x^2 + 1 is the smallest irreducible over F_3


@pytest.mark.parametrize("q", SMALL_Q + [49])
def test_primitive_powers_enumerate_units(q):
    F = gf(q)
    g = primitive_element(F)
    seen = {F.pow(g, k) for k in range(q - 1)}
    assert seen == set(range(1, q))
    # smallest with full order
    assert all(F.order_of(a) < q - 1 for a in range(1, g))


@given(st.sampled_from(SMALL_Q), st.data())
def test_pow_matches_repeated_mul(q, data):
    F = gf(q)
    a = data.draw(st.integers(0, q - 1))
    k = data.draw(st.integers(0, 40))
    acc = 1
    for _ in range(k):
        acc = F.mul(acc, a)
    assert F.pow(a, k) == acc


def test_json_roundtrip():
    for q in SMALL_Q:
        F = gf(q)
        assert field_from_json(field_to_json(F)) == F


EXTS = [(2, 2), (2, 3), (3, 2), (4, 2), (5, 2), (3, 3)]


@pytest.mark.parametrize("q,s", EXTS)
def test_extension_embedding_is_homomorphism(q, s):
    ext = extension_make(gf(q), s)
    F, T = ext.base, ext.top
    for a, b in itertools.product(range(q), repeat=2):
        assert ext.to_top(F.add(a, b)) == T.add(ext.to_top(a), ext.to_top(b))
        assert ext.to_top(F.mul(a, b)) == T.mul(ext.to_top(a), ext.to_top(b))
    assert len(set(ext.embed)) == q


@pytest.mark.parametrize("q,s", EXTS)
def test_extension_coords_roundtrip_and_frobenius(q, s):
    ext = extension_make(gf(q), s)
    T = ext.top
    for c in range(T.order):
        assert ext.from_coords(ext.coords(c)) == c
        assert ext.frobenius(c, 0) == c
        assert ext.frobenius(c, s) == c
        assert ext.frobenius(c, 1) == T.pow(c, q)
    assert ext.coords(0) == (0,) * s
    for a, b in itertools.product(range(T.order), repeat=2):
        fa, fb = ext.frobenius(a, 1), ext.frobenius(b, 1)
        assert ext.frobenius(T.add(a, b), 1) == T.add(fa, fb)
        assert ext.frobenius(T.mul(a, b), 1) == T.mul(fa, fb)


def test_extension_f4_over_f2():
    ext = extension_make(gf(2), 2)
    assert ext.ordered_basis == (1, 2)
    assert ext.coords(3) == (1, 1)
    assert ext.frobenius(2, 1) == 3


def test_extension_rejects_dependent_basis():
    with pytest.raises(ValueError):
        extension_make(gf(2), 2, basis=[1, 1])
