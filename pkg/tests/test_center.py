import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylbkk.center import (
    Poly,
    bracket_from_lifts,
    classical_bracket,
    embed,
    extract,
    is_central,
    is_central_by_commutators,
    poisson_bracket,
    random_poly,
    xi,
)
from weylbkk.errors import NotCentral, NotDivisibleByP, NotPositiveCharacteristic
from weylbkk.scalars import INTEGERS, prime_field, rational_functions
from weylbkk.weyl import WeylElement, omega

from conftest import center_triples, random_weyl


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("n", [1, 2])
def test_generator_brackets(n, p):
    F = prime_field(p)
    for i in range(2 * n):
        for j in range(2 * n):
            assert poisson_bracket(xi(n, F, i + 1), xi(n, F, j + 1)) == omega(n, i, j) % p


def test_bracket_examples():
    F = prime_field(5)
    x1, x2 = xi(1, F, 1), xi(1, F, 2)
    # omega_12 = -1 with x's before y's
    assert poisson_bracket(x1, x2) == Poly.constant(2, F, -1)
    assert poisson_bracket(x2, x1) == Poly.constant(2, F, 1)
    assert poisson_bracket(x1 * x1, x2) == -2 * x1


@given(center_triples())
def test_bracket_equals_classical_oracle(abc):
    a, b, _ = abc
    assert poisson_bracket(a, b) == classical_bracket(a, b)


def test_bracket_over_rational_functions_matches_classical():
    rng = random.Random(5)
    for p in (3, 5):
        K = rational_functions(p)
        for _ in range(10):
            a, b = random_poly(rng, 2, K, 3, 3), random_poly(rng, 2, K, 3, 3)
            assert poisson_bracket(a, b) == classical_bracket(a, b)


@given(center_triples(max_degree=2))
def test_antisymmetry_leibniz_jacobi(abc):
    a, b, c = abc
    br = poisson_bracket
    assert br(a, b) == -br(b, a)
    assert br(a, b * c) == br(a, b) * c + b * br(a, c)
    assert not (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b)))


@given(center_triples(max_degree=2), st.integers(0, 2**32))
@settings(max_examples=30)
def test_bracket_independent_of_lifts(abc, seed):
    a, b, _ = abc
    p = a.ring.p
    rng = random.Random(seed)
    n = a.n
    a0 = WeylElement(n, INTEGERS, dict(embed(a).terms)) + p * random_weyl(rng, n, INTEGERS, 3)
    b0 = WeylElement(n, INTEGERS, dict(embed(b).terms)) + p * random_weyl(rng, n, INTEGERS, 3)
    assert bracket_from_lifts(a0, b0, p) == poisson_bracket(a, b)


def test_non_central_lifts_are_rejected():
    x, y = WeylElement.x(1, INTEGERS, 1), WeylElement.y(1, INTEGERS, 1)
    with pytest.raises(NotDivisibleByP):
        bracket_from_lifts(x, y, 5)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 2**32))
def test_central_tests_agree(p, seed):
    rng = random.Random(seed)
    F = prime_field(p)
    a = random_weyl(rng, 1, F, 2 * p, 3)
    if rng.random() < 0.5:
        a = embed(random_poly(rng, 2, F, 2, 3))
    assert is_central(a) == is_central_by_commutators(a)


def test_extract_embed_round_trip_and_errors():
    F = prime_field(3)
    c = xi(1, F, 1) * xi(1, F, 2) + 2
    assert extract(embed(c)) == c
    with pytest.raises(NotCentral):
        extract(WeylElement.x(1, F, 1))
    with pytest.raises(NotPositiveCharacteristic):
        is_central(WeylElement.x(1, INTEGERS, 1))


def test_poly_substitute_and_derivative():
    F = prime_field(7)
    a, b = xi(1, F, 1), xi(1, F, 2)
    f = a * a * b + 3
    assert f.substitute([b, a]) == b * b * a + 3
    assert f.derivative(0) == 2 * a * b
    assert f.total_degree() == 3
    assert f.top_part() == a * a * b
