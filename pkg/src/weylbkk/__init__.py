"""Weyl algebras in characteristic p, their centers, and symplectomorphisms of the center."""

from .bkk import (
    CheckReport,
    IndependenceReport,
    center_restriction,
    dominant_check,
    frobenius_poly_check,
    homomorphism_check,
    independence_report,
    phi_p,
    sufficient_primes,
    untwist,
    verify_symplectic,
)
from .center import Poly, classical_bracket, embed, extract, is_central, poisson_bracket, xi
from .errors import WeylBKKError
from .morphisms import (
    Elementary,
    LinearSymplectic,
    SymplectoMap,
    TameWord,
    WeylMorphism,
    apply,
    classical_symplecto,
    compose,
    random_tame,
    random_tame_word,
    word_to_morphism,
)
from .scalars import INTEGERS, RingDescriptor, RingKind, Scalar, crt_reconstruct, prime_field, rational_functions
from .weyl import WeylElement, ad_pow, commutator, mul, mul_naive

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "Elementary",
    "INTEGERS",
    "IndependenceReport",
    "LinearSymplectic",
    "Poly",
    "RingDescriptor",
    "RingKind",
    "Scalar",
    "SymplectoMap",
    "TameWord",
    "WeylBKKError",
    "WeylElement",
    "WeylMorphism",
    "ad_pow",
    "apply",
    "center_restriction",
    "classical_bracket",
    "classical_symplecto",
    "commutator",
    "compose",
    "crt_reconstruct",
    "dominant_check",
    "embed",
    "extract",
    "frobenius_poly_check",
    "homomorphism_check",
    "independence_report",
    "is_central",
    "mul",
    "mul_naive",
    "phi_p",
    "poisson_bracket",
    "prime_field",
    "random_tame",
    "random_tame_word",
    "rational_functions",
    "sufficient_primes",
    "untwist",
    "verify_symplectic",
    "word_to_morphism",
    "xi",
]
