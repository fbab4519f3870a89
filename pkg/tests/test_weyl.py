import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from weylbkk.errors import Mismatch
from weylbkk.scalars import INTEGERS, prime_field, rational_functions
from weylbkk.weyl import (
    WeylElement,
    ad_pow,
    commutator,
    generators,
    lift_to_integers,
    mul,
    mul_naive,
    omega,
    pow as wpow,
    reduce_mod_p,
    total_degree,
)

from conftest import random_weyl, weyl_elements, weyl_triples

Z = INTEGERS


def test_generator_relations_examples():
    x, y = WeylElement.x(1, Z, 1), WeylElement.y(1, Z, 1)
    assert y * x == x * y + 1
    assert commutator(y, x) == WeylElement.constant(1, Z, 1)
    # y^2 x^2 = x^2 y^2 + 4 x y + 2
    assert (y * y) * (x * x) == x * x * y * y + 4 * x * y + 2


def test_small_p_power_fixture():
    F3 = prime_field(3)
    x, y = WeylElement.x(1, F3, 1), WeylElement.y(1, F3, 1)
    assert wpow(y + x * x, 3) == y**3 + x**6 + 2


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("ring", [Z, prime_field(5), rational_functions(3)])
def test_commutators_of_generators(n, ring):
    gens = generators(n, ring)
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            assert commutator(a, b) == WeylElement.constant(n, ring, omega(n, i, j))


def test_ring_mismatch():
    with pytest.raises(Mismatch):
        mul(WeylElement.x(1, Z, 1), WeylElement.x(1, prime_field(5), 1))
    with pytest.raises(Mismatch):
        mul(WeylElement.x(1, Z, 1), WeylElement.x(2, Z, 1))


@given(weyl_triples(max_degree=4))
def test_mul_matches_naive_rewriting(abc):
    a, b, _ = abc
    assert mul(a, b) == mul_naive(a, b)


def _as_operator(a: WeylElement, f, X):
    # A_1 acts on Q[X]: x multiplies, y differentiates; normal order applies y first.
    out = 0
    for (i, j), c in a.terms.items():
        out += c * X**i * sympy.diff(f, X, j)
    return sympy.expand(out)


@given(weyl_elements(n=1, ring=Z, max_degree=5), weyl_elements(n=1, ring=Z, max_degree=5))
@settings(max_examples=40)
def test_mul_matches_differential_operator_action(a, b):
    X = sympy.Symbol("X")
    f = X**7 + 3 * X**4 - X + 2
    assert _as_operator(mul(a, b), f, X) == _as_operator(a, _as_operator(b, f, X), X)


@given(weyl_triples(max_degree=3))
def test_associativity_and_distributivity(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(weyl_triples(max_degree=4))
def test_degree_is_additive(abc):
    a, b, _ = abc
    if a and b:
        assert total_degree(a * b) == total_degree(a) + total_degree(b)


@given(st.integers(1, 2), st.data())
def test_product_of_monomials_has_constant_parity(n, data):
    e1 = tuple(data.draw(st.lists(st.integers(0, 3), min_size=2 * n, max_size=2 * n)))
    e2 = tuple(data.draw(st.lists(st.integers(0, 3), min_size=2 * n, max_size=2 * n)))
    prod = WeylElement.monomial(n, Z, e1) * WeylElement.monomial(n, Z, e2)
    assert {sum(m) % 2 for m in prod.terms} == {(sum(e1) + sum(e2)) % 2}


@given(weyl_elements(max_degree=5), st.data())
def test_ad_nilpotency(y, data):
    i = data.draw(st.integers(0, 2 * y.n - 1))
    z = generators(y.n, y.ring)[i]
    d = int(total_degree(y)) if y else 0
    assert not ad_pow(z, y, d + 1)


@given(weyl_elements(n=1, ring=Z, max_degree=2, max_terms=2), weyl_elements(n=1, ring=Z, max_degree=2, max_terms=2), st.integers(1, 4))
@settings(max_examples=30)
def test_ad_power_binomial_expansion(a, b, m):
    expected = WeylElement.zero(1, Z)
    for l in range(m + 1):
        expected = expected + (-1) ** l * comb(m, l) * (a ** (m - l) * b * a**l)
    assert ad_pow(a, b, m) == expected


@pytest.mark.parametrize("p", [3, 5, 7])
def test_ad_power_collapses_mod_p(p):
    rng = random.Random(p)
    F = prime_field(p)
    for _ in range(5):
        a = random_weyl(rng, 1, F, 2, 2)
        b = random_weyl(rng, 1, F, 2, 2)
        rhs = WeylElement.zero(1, F)
        for l in range(p):
            rhs = rhs + a**l * b * a ** (p - 1 - l)
        assert ad_pow(a, b, p - 1) == rhs


@given(weyl_elements(max_degree=3, max_terms=3), st.integers(0, 6))
@settings(max_examples=40)
def test_pow_methods_agree(a, m):
    assert wpow(a, m, method="binary") == wpow(a, m, method="linear")


@given(weyl_elements(ring=Z, max_degree=3), st.sampled_from([2, 3, 5, 7]))
def test_reduction_is_a_homomorphism(a, p):
    b = a * a + a
    assert reduce_mod_p(b, p) == reduce_mod_p(a, p) * reduce_mod_p(a, p) + reduce_mod_p(a, p)
    assert reduce_mod_p(lift_to_integers(reduce_mod_p(a, p)), p) == reduce_mod_p(a, p)


def test_large_product_uses_vectorized_path_correctly():
    rng = random.Random(11)
    F = prime_field(13)
    a = b = WeylElement.zero(2, F)
    while len(a) < 70:
        a = a + random_weyl(rng, 2, F, 8, 10)
    while len(b) < 70:
        b = b + random_weyl(rng, 2, F, 8, 10)
    assert len(a) * len(b) >= 4096
    assert mul(a, b) == mul_naive(a, b)


def test_printing():
    x, y = WeylElement.x(1, Z, 1), WeylElement.y(1, Z, 1)
    assert str(y * x) == "x1*y1 + 1"
    assert str(WeylElement.zero(1, Z)) == "0"
