import random

import pytest

from tandemnet.gf import IRREDUCIBLE_POLYS, Field, field

sympy = pytest.importorskip("sympy")


SMALL_ORDERS = [2, 3, 5, 7, 11, 13, 4, 8, 9, 16, 25, 27, 49, 64, 81]


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_axioms_sampled(q):
    f = field(q)
    rng = random.Random(q)
    elems = list(f.elements)
    for _ in range(200):
        a, b, c = (rng.choice(elems) for _ in range(3))
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_inverses_exhaustive(q):
    f = field(q)
    for a in range(1, q):
        assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_inverses_large_orders():
    # covers both the table-backed and the table-free extension paths
    for q in (2048, 4096, 3**7, 5**5):
        f = field(q)
        rng = random.Random(q)
        for _ in range(300):
            a = rng.randrange(1, q)
            assert f.mul(a, f.inv(a)) == 1


def test_sub_div_roundtrip():
    f = field(27)
    for a in f.elements:
        for b in range(1, 27):
            assert f.add(f.sub(a, b), b) == a
            assert f.mul(f.div(a, b), b) == a


def test_element_ordering():
    f = field(11)
    assert f.element(1) == 0
    assert f.element(2) == 1
    assert f.element(11) == 10
    with pytest.raises(ValueError):
        f.element(0)
    with pytest.raises(ValueError):
        f.element(12)


def test_rejects_non_prime_power():
    for q in (0, 1, 6, 12, 100):
        with pytest.raises(ValueError):
            Field(q)


def test_elements_out_of_range_rejected():
    f = field(7)
    with pytest.raises(ValueError):
        f.add(7, 0)
    with pytest.raises(ValueError):
        f.mul(0, -1)


@pytest.mark.parametrize("pm", sorted(IRREDUCIBLE_POLYS))
def test_modulus_table_is_irreducible(pm):
    # independent oracle: sympy irreducibility over GF(p)
    p, m = pm
    enc = IRREDUCIBLE_POLYS[pm]
    coeffs = []
    e = enc
    while e:
        coeffs.append(e % p)
        e //= p
    assert len(coeffs) == m + 1 and coeffs[-1] == 1  # monic, degree m
    x = sympy.symbols("x")
    poly = sum(c * x**k for k, c in enumerate(coeffs))
    assert sympy.Poly(poly, x, modulus=p).is_irreducible


def test_char_and_degree():
    f = field(49)
    assert f.char == 7 and f.degree == 2 and f.order == 49
    g = field(13)
    assert g.char == 13 and g.degree == 1


def test_field_cache_returns_same_object():
    assert field(11) is field(11)
