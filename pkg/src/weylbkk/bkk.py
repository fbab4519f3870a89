"""Center restriction of Weyl automorphisms and its verification at finite primes.

For f over a ring of characteristic p, the restriction to the center is
f^c(xi_i) = f(zeta_i)^p read in xi-coordinates.  ``phi_p`` additionally takes
the p-th root of every coefficient (the untwist).  For a tame word over Z the
untwisted map is expected to coincide with tau(word) mod p for every prime
above the degree bound; :func:`independence_report` checks that per prime and
again through CRT reconstruction.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Any, Sequence

from sympy import isprime, nextprime

from .center import Poly, extract, is_central, poisson_bracket
from .errors import Mismatch, NotCentral, NotInFrobeniusImage, PreconditionViolated
from .io import format_poly, ring_to_dict, word_to_records
from .morphisms import (
    SymplectoMap,
    TameWord,
    WeylMorphism,
    classical_symplecto,
    compose,
    degree,
    word_to_morphism,
)
from .scalars import RingKind, crt_int
from .weyl import WeylElement, omega, pow as weyl_pow


@dataclass
class CheckReport:
    """Outcome of one verification; serialized as {check, params, pass, witnesses, timing_ms}."""

    check: str
    params: dict[str, Any]
    passed: bool
    witnesses: list[Any] = field(default_factory=list)
    timing_ms: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out = {
            "check": self.check,
            "params": self.params,
            "pass": self.passed,
            "witnesses": self.witnesses,
            "timing_ms": round(self.timing_ms, 3),
        }
        if self.warnings:
            out["warnings"] = self.warnings
        return out


def map_to_strings(s: SymplectoMap) -> list[str]:
    return [format_poly(im) for im in s.images]


def _bound_ok(f: WeylMorphism, p: int) -> bool:
    return p >= degree(f) + 2


# -- the maps ---------------------------------------------------------------


def center_restriction(f: WeylMorphism, p: int | None = None) -> SymplectoMap:
    """f -> f^c with f^c(xi_i) = f(zeta_i)^p, no untwist."""
    char = f.ring.require_char_p()
    if p is not None and p != char:
        raise Mismatch(f"morphism over {f.ring} restricted at p={p}")
    images = []
    for i, im in enumerate(f.images):
        power = weyl_pow(im, char)
        if not is_central(power):
            raise NotCentral(power, f"f(z{i + 1})^{char} is not central; f is not an automorphism")
        images.append(extract(power))
    return SymplectoMap(images)


def untwist(s: SymplectoMap) -> SymplectoMap:
    """Inverse Frobenius on every coefficient."""
    s.ring.require_char_p()
    return s.map_coefficients(s.ring.inverse_frobenius)


def phi_p(f: WeylMorphism, p: int | None = None) -> SymplectoMap:
    """untwist(center_restriction(f)).  Use :func:`phi_p_report` to get the bound warning."""
    return untwist(center_restriction(f, p))


def phi_p_report(f: WeylMorphism) -> tuple[SymplectoMap, list[str]]:
    p = f.ring.require_char_p()
    warnings = []
    if not _bound_ok(f, p):
        warnings.append(f"p={p} is below the degree bound Deg f + 2 = {degree(f) + 2}")
    return phi_p(f), warnings


# -- verifications ----------------------------------------------------------


def verify_symplectic(s: SymplectoMap, *, bracket=poisson_bracket) -> CheckReport:
    """{s(xi_i), s(xi_j)} = omega_ij for all i < j, with the lift-commutator bracket."""
    start = time.perf_counter()
    s.ring.require_char_p()
    n, ring = s.n, s.ring
    witnesses = []
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            value = bracket(s.images[i], s.images[j])
            expected = Poly.constant(2 * n, ring, omega(n, i, j))
            if value != expected:
                witnesses.append(
                    {"i": i + 1, "j": j + 1, "bracket": format_poly(value), "expected": format_poly(expected)}
                )
    return CheckReport(
        "verify_symplectic",
        {"n": n, "ring": ring_to_dict(ring), "map": map_to_strings(s)},
        not witnesses,
        witnesses,
        (time.perf_counter() - start) * 1000,
    )


def _top_commutative(w: WeylElement) -> Poly:
    """Top homogeneous part of a Weyl element, read as a commutative polynomial in zeta."""
    if not w.terms:
        return Poly.zero(2 * w.n, w.ring)
    d = max(sum(m) for m in w.terms)
    return Poly(2 * w.n, w.ring, {m: c for m, c in w.terms.items() if sum(m) == d})


def _check_odd_bound(f: WeylMorphism, check: str) -> int:
    p = f.ring.require_char_p()
    if p == 2:
        raise PreconditionViolated(f"{check} needs odd p")
    if not _bound_ok(f, p):
        raise PreconditionViolated(f"{check} needs p >= Deg f + 2 = {degree(f) + 2}, got p={p}")
    return p


def dominant_check(f: WeylMorphism, p: int | None = None) -> CheckReport:
    """Top homogeneous part of f^c(xi_i) equals T_i with coefficients raised to the p-th power.

    T_i is the top homogeneous part of f(zeta_i) read commutatively.  After the
    untwist the dominant coefficients must equal those of f itself.
    """
    start = time.perf_counter()
    char = _check_odd_bound(f, "dominant_check")
    if p is not None and p != char:
        raise Mismatch(f"morphism over {f.ring} checked at p={p}")
    ring = f.ring
    fc = center_restriction(f)
    witnesses = []
    places = []
    for i, im in enumerate(f.images):
        top = _top_commutative(im)
        expected = top.map_coefficients(ring.frobenius)
        actual = fc.images[i].top_part()
        untwisted = actual.map_coefficients(ring.inverse_frobenius)
        for m, c in sorted(top.terms.items()):
            places.append(
                {
                    "i": i + 1,
                    "place": list(m),
                    "coefficient": ring.format(c),
                    "before_untwist": ring.format(actual.terms.get(m, ring.zero)),
                    "after_untwist": ring.format(untwisted.terms.get(m, ring.zero)),
                }
            )
        if actual != expected or untwisted != top:
            witnesses.append(
                {"i": i + 1, "expected": format_poly(expected), "actual": format_poly(actual)}
            )
    report = CheckReport(
        "dominant_check",
        {"n": f.n, "ring": ring_to_dict(ring), "p": char, "degree": degree(f)},
        not witnesses,
        witnesses,
        (time.perf_counter() - start) * 1000,
    )
    report.params["places"] = places
    return report


def subdominant_comparison(f: WeylMorphism) -> CheckReport:
    """Experimental: compare places with |I| = |I_max| - 1 before and after phi_p.

    Recorded as data only; nothing downstream asserts on ``passed``.
    """
    start = time.perf_counter()
    ring = f.ring
    ring.require_char_p()
    s = phi_p(f)
    rows = []
    agree = True
    for i, im in enumerate(f.images):
        d = int(im.total_degree())
        if d < 1:
            continue
        sub = {m: c for m, c in im.terms.items() if sum(m) == d - 1}
        target = s.images[i]
        for m in sorted(set(sub) | {m for m in target.terms if sum(m) == d - 1}):
            a = sub.get(m, ring.zero)
            b = target.terms.get(m, ring.zero)
            rows.append({"i": i + 1, "place": list(m), "f": ring.format(a), "phi_p": ring.format(b)})
            agree = agree and a == b
    report = CheckReport(
        "subdominant_comparison",
        {"n": f.n, "ring": ring_to_dict(ring), "experimental": True, "places": rows},
        agree,
        [],
        (time.perf_counter() - start) * 1000,
    )
    return report


def frobenius_poly_check(f: WeylMorphism, p: int | None = None) -> CheckReport:
    """Every coefficient of f^c is a p-th power (lies in F_p(t^p))."""
    start = time.perf_counter()
    char = f.ring.require_char_p()
    if p is not None and p != char:
        raise Mismatch(f"morphism over {f.ring} checked at p={p}")
    if not _bound_ok(f, char):
        raise PreconditionViolated(f"frobenius_poly_check needs p >= Deg f + 2 = {degree(f) + 2}")
    ring = f.ring
    fc = center_restriction(f)
    witnesses = []
    for i, im in enumerate(fc.images):
        for m, c in sorted(im.terms.items()):
            try:
                ring.inverse_frobenius(c)
            except NotInFrobeniusImage:
                witnesses.append({"i": i + 1, "monomial": list(m), "coefficient": ring.format(c)})
    return CheckReport(
        "frobenius_poly_check",
        {"n": f.n, "ring": ring_to_dict(ring), "p": char, "f_c": map_to_strings(fc)},
        not witnesses,
        witnesses,
        (time.perf_counter() - start) * 1000,
    )


def frobenius_poly_check_map(s: SymplectoMap) -> CheckReport:
    """Same test applied directly to a given map (for hand-built fixtures)."""
    ring = s.ring
    ring.require_char_p()
    witnesses = []
    for i, im in enumerate(s.images):
        for m, c in sorted(im.terms.items()):
            try:
                ring.inverse_frobenius(c)
            except NotInFrobeniusImage:
                witnesses.append({"i": i + 1, "monomial": list(m), "coefficient": ring.format(c)})
    return CheckReport(
        "frobenius_poly_check", {"n": s.n, "ring": ring_to_dict(ring)}, not witnesses, witnesses
    )


def homomorphism_check(f: WeylMorphism, g: WeylMorphism, p: int | None = None) -> CheckReport:
    """phi_p(f o g) == phi_p(f) o phi_p(g)."""
    start = time.perf_counter()
    if f.n != g.n or f.ring != g.ring:
        raise Mismatch("homomorphism_check needs morphisms over one algebra")
    char = f.ring.require_char_p()
    if p is not None and p != char:
        raise Mismatch(f"morphisms over {f.ring} checked at p={p}")
    warnings = []
    if char < degree(f) * degree(g) + 2:
        warnings.append(f"p={char} below the composed degree bound {degree(f) * degree(g) + 2}")
    lhs = phi_p(compose(f, g))
    rhs = phi_p(f).compose(phi_p(g))
    witnesses = []
    if lhs != rhs:
        witnesses.append({"composite": map_to_strings(lhs), "product": map_to_strings(rhs)})
    return CheckReport(
        "homomorphism_check",
        {"n": f.n, "ring": ring_to_dict(f.ring), "p": char},
        lhs == rhs,
        witnesses,
        (time.perf_counter() - start) * 1000,
        warnings,
    )


# -- independence of the prime -------------------------------------------


@dataclass
class PrimeResult:
    p: int
    computed: SymplectoMap
    expected: SymplectoMap
    match: bool
    bound_ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "computed": map_to_strings(self.computed),
            "expected": map_to_strings(self.expected),
            "match": self.match,
            "precondition_ok": self.bound_ok,
        }


@dataclass
class IndependenceReport:
    word: TameWord
    primes: list[int]
    degree: int
    per_prime: list[PrimeResult]
    tau: SymplectoMap
    crt: SymplectoMap | None
    crt_consistent: bool
    crt_range_ok: bool
    timing_ms: float = 0.0

    @property
    def all_match(self) -> bool:
        return all(r.match for r in self.per_prime)

    @property
    def precondition_flags(self) -> list[int]:
        """Primes below the degree bound."""
        return [r.p for r in self.per_prime if not r.bound_ok]

    @property
    def passed(self) -> bool:
        # CRT can only be expected to reproduce tau when the modulus covers it.
        return self.all_match and (self.crt_consistent or not self.crt_range_ok)

    def to_dict(self) -> dict[str, Any]:
        witnesses = [r.to_dict() for r in self.per_prime if not r.match]
        if not self.crt_consistent:
            witnesses.append({"crt": map_to_strings(self.crt) if self.crt else None})
        return {
            "check": "independence_report",
            "params": {
                "n": self.word.n,
                "word": word_to_records(self.word),
                "primes": self.primes,
                "degree": self.degree,
            },
            "pass": self.passed,
            "witnesses": witnesses,
            "per_prime": [r.to_dict() for r in self.per_prime],
            "tau": map_to_strings(self.tau),
            "crt": map_to_strings(self.crt) if self.crt else None,
            "crt_consistent": self.crt_consistent,
            "crt_range_ok": self.crt_range_ok,
            "precondition_violations": self.precondition_flags,
            "timing_ms": round(self.timing_ms, 3),
        }


def _prime_job(args) -> PrimeResult:
    f, tau, p = args
    fp = f.reduce_mod_p(p, check=False)
    computed = phi_p(fp)
    expected = tau.reduce_mod_p(p)
    return PrimeResult(p, computed, expected, computed == expected, _bound_ok(f, p))


def crt_map(results: Sequence[tuple[int, SymplectoMap]]) -> SymplectoMap:
    """Coefficientwise symmetric-range CRT of per-prime maps into a map over Z."""
    from .scalars import INTEGERS

    first = results[0][1]
    images = []
    for i in range(2 * first.n):
        monos = set()
        for _, s in results:
            monos |= set(s.images[i].terms)
        terms = {}
        for m in monos:
            terms[m] = crt_int([(s.images[i].terms.get(m, 0), p) for p, s in results])
        images.append(Poly(2 * first.n, INTEGERS, terms))
    return SymplectoMap(images)


def _height(s: SymplectoMap) -> int:
    return max([0] + [abs(c) for im in s.images for c in im.terms.values()])


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("WEYLBKK_THREADS", "1")))
    except ValueError:
        return 1


def primes_above(bound: int, count: int) -> list[int]:
    """The ``count`` smallest primes p with p >= bound."""
    out, p = [], max(2, bound) - 1
    while len(out) < count:
        p = nextprime(p)
        out.append(p)
    return out


def sufficient_primes(word: TameWord, minimum: int = 2) -> list[int]:
    """Smallest primes above the degree bound, at least ``minimum`` of them,
    extended until their product exceeds twice the coefficient height of tau."""
    bound = degree(word_to_morphism(word)) + 2
    target = 2 * _height(classical_symplecto(word))
    primes = primes_above(bound, minimum)
    modulus = prod(primes)
    while modulus <= target:
        primes.append(nextprime(primes[-1]))
        modulus *= primes[-1]
    return primes


def independence_report(word: TameWord, primes: Sequence[int], *, workers: int | None = None) -> IndependenceReport:
    """Compare phi_p(f mod p) with tau(word) mod p for each prime, then CRT across primes."""
    start = time.perf_counter()
    if word.ring.kind is not RingKind.INTEGERS:
        raise Mismatch("independence_report expects a word over Z")
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
    f = word_to_morphism(word)
    tau = classical_symplecto(word)
    jobs = [(f, tau, p) for p in primes]
    workers = workers or _workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_prime_job, jobs))
    else:
        results = [_prime_job(job) for job in jobs]
    crt = crt_map([(r.p, r.computed) for r in results]) if results else None
    modulus = 1
    for p in primes:
        modulus *= p
    return IndependenceReport(
        word=word,
        primes=primes,
        degree=degree(f),
        per_prime=results,
        tau=tau,
        crt=crt,
        crt_consistent=crt == tau if crt is not None else False,
        crt_range_ok=2 * _height(tau) < modulus,
        timing_ms=(time.perf_counter() - start) * 1000,
    )
