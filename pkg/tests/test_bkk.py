import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylbkk.bkk import (
    center_restriction,
    crt_map,
    dominant_check,
    frobenius_poly_check,
    frobenius_poly_check_map,
    homomorphism_check,
    independence_report,
    phi_p,
    phi_p_report,
    primes_above,
    subdominant_comparison,
    sufficient_primes,
    untwist,
    verify_symplectic,
)
from weylbkk.center import Poly
from weylbkk.errors import NotInFrobeniusImage, PreconditionViolated
from weylbkk.morphisms import (
    Elementary,
    LinearSymplectic,
    SymplectoMap,
    TameWord,
    classical_symplecto,
    degree,
    elementary,
    elementary_from_gradient,
    identity,
    linear_symplectic,
    random_tame_word,
    word_to_morphism,
)
from weylbkk.scalars import INTEGERS, prime_field, rational_functions

Z = INTEGERS
FOURIER = ((0, 1), (-1, 0))


def xis(ring, n=1):
    return [Poly.variable(2 * n, ring, i) for i in range(2 * n)]


def X1(ring, k, coeff=1):
    return Poly.monomial(1, ring, (k,), coeff)


def test_center_restriction_examples():
    F3 = prime_field(3)
    assert center_restriction(identity(2, F3)) == SymplectoMap.identity(2, F3)
    xi1, xi2 = xis(F3)
    f = elementary_from_gradient([X1(F3, 2)])
    assert center_restriction(f).images == (xi1, xi2 + xi1 * xi1 + 2)


def test_linear_restriction_raises_entries_to_p():
    K = rational_functions(5)
    tt = K.t()
    M = ((K.one, tt), (K.zero, K.one))
    f = linear_symplectic(M, K)
    xi1, xi2 = xis(K)
    t5 = Poly.constant(2, K, K.pow(tt, 5))
    assert center_restriction(f).images == (xi1 + t5 * xi2, xi2)
    assert phi_p(f).images == (xi1 + Poly.constant(2, K, tt) * xi2, xi2)


def test_untwist_examples():
    K = rational_functions(5)
    xi1, xi2 = xis(K)
    t = Poly.constant(2, K, K.t())
    t5 = Poly.constant(2, K, K.pow(K.t(), 5))
    assert untwist(SymplectoMap([xi1, xi2 + t5 * xi1])) == SymplectoMap([xi1, xi2 + t * xi1])
    with pytest.raises(NotInFrobeniusImage):
        untwist(SymplectoMap([xi1, xi2 + t * xi1]))


def test_phi_p_examples():
    F7 = prime_field(7)
    xi1, xi2 = xis(F7)
    f = elementary(X1(F7, 3))
    assert phi_p(f).images == (xi1, xi2 + 3 * xi1 * xi1)
    K = rational_functions(5)
    g = elementary_from_gradient([X1(K, 1, K.t())])
    k1, k2 = xis(K)
    assert phi_p(g).images == (k1, k2 + Poly.constant(2, K, K.t()) * k1)
    _, warnings = phi_p_report(elementary_from_gradient([X1(prime_field(3), 2)]))
    assert warnings


def test_verify_symplectic_examples():
    F7 = prime_field(7)
    assert verify_symplectic(SymplectoMap.identity(1, F7)).passed
    xi1, xi2 = xis(F7)
    rep = verify_symplectic(SymplectoMap([2 * xi1, xi2]))
    assert not rep.passed
    assert rep.witnesses[0]["bracket"] == "5"  # -2 in F_7


@given(st.integers(0, 5000), st.integers(1, 2))
@settings(max_examples=10)
def test_phi_p_of_random_words_is_symplectic(seed, n):
    word = random_tame_word(seed, n, 3, 4, 2, generator_degree=2)
    f = word_to_morphism(word)
    f = f.reduce_mod_p(primes_above(degree(f) + 2, 1)[0])
    assert verify_symplectic(phi_p(f)).passed


def test_dominant_check_examples():
    F7 = prime_field(7)
    rep = dominant_check(elementary(X1(F7, 3)))
    assert rep.passed
    place = [pl for pl in rep.params["places"] if pl["i"] == 2 and pl["place"] == [2, 0]][0]
    assert place["before_untwist"] == "3" and place["after_untwist"] == "3"
    assert dominant_check(identity(1, F7)).passed
    with pytest.raises(PreconditionViolated):
        dominant_check(elementary_from_gradient([X1(prime_field(3), 2)]))


def test_dominant_check_linear_over_parameters():
    K = rational_functions(5)
    M = ((K.one, K.t()), (K.zero, K.one))
    rep = dominant_check(linear_symplectic(M, K))
    assert rep.passed
    entry = [pl for pl in rep.params["places"] if pl["i"] == 1 and pl["place"] == [0, 1]][0]
    assert entry["before_untwist"] == "t^5" and entry["after_untwist"] == "t"


def test_frobenius_poly_check_examples():
    K = rational_functions(5)
    assert frobenius_poly_check(elementary_from_gradient([X1(K, 1, K.t())])).passed
    assert frobenius_poly_check(identity(1, K)).passed
    xi1, xi2 = xis(K)
    fake = SymplectoMap([xi1, xi2 + Poly.constant(2, K, K.t()) * xi1])
    assert not frobenius_poly_check_map(fake).passed


def test_homomorphism_check_examples():
    F7 = prime_field(7)
    f = elementary(X1(F7, 2))
    assert homomorphism_check(f, identity(1, F7)).passed
    A = ((1, 2), (0, 1))
    assert homomorphism_check(linear_symplectic(A, F7), linear_symplectic(FOURIER, F7)).passed
    assert homomorphism_check(linear_symplectic(FOURIER, F7), f).passed


def test_independence_report_examples():
    word = TameWord(1, Z, (Elementary.from_potential(X1(Z, 3)), LinearSymplectic(1, Z, FOURIER)))
    rep = independence_report(word, [11, 13, 17])
    assert rep.all_match and rep.crt_consistent and rep.passed
    assert rep.crt == classical_symplecto(word)
    empty = independence_report(TameWord(1, Z), [5, 7])
    assert empty.passed and empty.tau == SymplectoMap.identity(1, Z)


def test_small_p_fixture_is_flagged():
    word = TameWord(1, Z, (Elementary(1, Z, (X1(Z, 2),)),))
    rep = independence_report(word, [3])
    assert rep.precondition_flags == [3]
    assert not rep.all_match
    F3 = prime_field(3)
    xi1, xi2 = xis(F3)
    assert rep.per_prime[0].computed.images[1] == xi2 + xi1 * xi1 + 2


def test_integer_potentials_do_not_mismatch_at_small_p():
    # (y + F'(x))^p = y^p + F'(x)^p + F^{(p)}(x) and F^{(p)} vanishes mod p for integer F
    word = TameWord(1, Z, (Elementary.from_potential(X1(Z, 3)),))
    rep = independence_report(word, [3])
    assert rep.all_match and rep.precondition_flags == [3]


def test_parallel_report_equals_serial():
    word = random_tame_word(7, 2, 3, 4, 1, generator_degree=2)
    primes = sufficient_primes(word)
    a = independence_report(word, primes, workers=1).to_dict()
    b = independence_report(word, primes, workers=2).to_dict()
    a.pop("timing_ms"), b.pop("timing_ms")
    assert a == b


def test_prime_selection_and_crt():
    assert primes_above(5, 3) == [5, 7, 11]
    word = random_tame_word(23, 2, 4, 9, 1, generator_degree=3)
    primes = sufficient_primes(word)
    assert len(primes) >= 2
    rep = independence_report(word, primes)
    assert rep.crt_range_ok and rep.crt_consistent
    assert crt_map([(r.p, r.computed) for r in rep.per_prime]) == classical_symplecto(word)


def test_subdominant_comparison_is_recorded():
    F7 = prime_field(7)
    rep = subdominant_comparison(elementary(X1(F7, 3)))
    assert rep.params["experimental"] is True
