"""The characteristic-p center of A_n and its Poisson bracket.

Over F_p the center of A_n is the polynomial ring in xi_i = zeta_i^p.  Central
elements are stored as commutative :class:`Poly` objects in the xi variables
(exponents divided by p).  Two brackets are provided and are expected to agree:

* :func:`poisson_bracket`: lift to Z, commutate, divide by p, reduce, negate;
* :func:`classical_bracket`: sum of omega_ij * d_i a * d_j b.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from .errors import Mismatch, NotCentral, NotCentralResult, NotDivisibleByP
from .scalars import INTEGERS, RingDescriptor, RingKind, Scalar, prime_field
from .weyl import ZERO_DEGREE, WeylElement, commutator, generators, integer_product, omega

Monomial = tuple[int, ...]


class Poly:
    """Immutable sparse commutative polynomial in ``nvars`` variables over ``ring``."""

    __slots__ = ("nvars", "ring", "terms", "_hash")

    def __init__(self, nvars: int, ring: RingDescriptor, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        self.ring = ring
        self.terms = {} if terms is None else {m: c for m, c in terms.items() if not ring.is_zero(c)}
        self._hash = None

    @classmethod
    def _raw(cls, nvars, ring, terms):
        obj = cls.__new__(cls)
        obj.nvars, obj.ring, obj.terms, obj._hash = nvars, ring, terms, None
        return obj

    @classmethod
    def zero(cls, nvars, ring):
        return cls(nvars, ring)

    @classmethod
    def constant(cls, nvars, ring, value=1):
        return cls(nvars, ring, {(0,) * nvars: ring.coerce(value)})

    @classmethod
    def variable(cls, nvars, ring, index: int):
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, ring, {tuple(e): ring.one})

    @classmethod
    def monomial(cls, nvars, ring, exponents: Iterable[int], coeff=1):
        return cls(nvars, ring, {tuple(exponents): ring.coerce(coeff)})

    @property
    def n(self) -> int:
        """Number of Weyl generator pairs when used as a center polynomial."""
        return self.nvars // 2

    def _check(self, other: Poly):
        if self.nvars != other.nvars or self.ring != other.ring:
            raise Mismatch(f"{self.nvars} vars over {self.ring} vs {other.nvars} vars over {other.ring}")

    def _operand(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Scalar)) and not isinstance(other, bool):
            return Poly.constant(self.nvars, self.ring, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self == Poly.constant(self.nvars, self.ring, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        from .io import format_poly

        return f"Poly({format_poly(self)!r}, nvars={self.nvars}, ring={self.ring})"

    def __str__(self):
        from .io import format_poly

        return format_poly(self)

    def coeff(self, exponents: Iterable[int]) -> Scalar:
        return Scalar(self.ring, self.terms.get(tuple(exponents), self.ring.zero))

    def __add__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                s = ring.add(terms[m], c)
                if ring.is_zero(s):
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return Poly._raw(self.nvars, ring, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return Poly._raw(self.nvars, self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._operand(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        add, mul = ring.add, ring.mul
        acc: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(m1, m2))
                v = mul(c1, c2)
                acc[key] = add(acc[key], v) if key in acc else v
        return Poly(self.nvars, ring, acc)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        result, base = Poly.constant(self.nvars, self.ring, 1), self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def total_degree(self):
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(m) for m in self.terms)

    def homogeneous_part(self, degree: int) -> Poly:
        return Poly._raw(self.nvars, self.ring, {m: c for m, c in self.terms.items() if sum(m) == degree})

    def top_part(self) -> Poly:
        """Highest-degree homogeneous component."""
        if not self.terms:
            return self
        return self.homogeneous_part(self.total_degree())

    def derivative(self, var: int) -> Poly:
        scale = self.ring.scale_int
        acc = {}
        for m, c in self.terms.items():
            e = m[var]
            if e:
                acc[m[:var] + (e - 1,) + m[var + 1 :]] = scale(c, e)
        return Poly(self.nvars, self.ring, acc)

    def map_coefficients(self, fn, ring: RingDescriptor | None = None) -> Poly:
        return Poly(self.nvars, ring or self.ring, {m: fn(c) for m, c in self.terms.items()})

    def substitute(self, images: Sequence[Poly]) -> Poly:
        """Evaluate with variable k replaced by images[k] (polynomial composition)."""
        if len(images) != self.nvars:
            raise Mismatch(f"expected {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0]
        for im in images:
            target._check(im)
        if target.ring != self.ring:
            raise Mismatch(f"substituting {target.ring} into {self.ring}")
        powers: list[dict[int, Poly]] = [{0: Poly.constant(target.nvars, self.ring, 1), 1: im} for im in images]

        def power(k: int, e: int) -> Poly:
            cache = powers[k]
            if e not in cache:
                cache[e] = power(k, e // 2) * power(k, e - e // 2)
            return cache[e]

        result = Poly.zero(target.nvars, self.ring)
        for m, c in self.terms.items():
            term = Poly.constant(target.nvars, self.ring, Scalar(self.ring, c))
            for k, e in enumerate(m):
                if e:
                    term = term * power(k, e)
            result = result + term
        return result


CenterPoly = Poly


def xi(n: int, ring: RingDescriptor, i: int) -> Poly:
    """xi_i, 1-based, as a center polynomial in 2n variables."""
    return Poly.variable(2 * n, ring, i - 1)


def is_central(a: WeylElement) -> bool:
    """Exponent-divisibility test: every exponent of every term is a multiple of p."""
    p = a.ring.require_char_p()
    return all(e % p == 0 for m in a.terms for e in m)


def is_central_by_commutators(a: WeylElement) -> bool:
    """Definitional test: a commutes with every generator."""
    a.ring.require_char_p()
    return all(not commutator(g, a) for g in generators(a.n, a.ring))


def extract(a: WeylElement) -> Poly:
    p = a.ring.require_char_p()
    out = {}
    for m, c in a.terms.items():
        if any(e % p for e in m):
            raise NotCentral(a)
        out[tuple(e // p for e in m)] = c
    return Poly._raw(2 * a.n, a.ring, out)


def embed(c: Poly) -> WeylElement:
    p = c.ring.require_char_p()
    if c.nvars % 2:
        raise Mismatch("center polynomials have an even number of variables")
    return WeylElement._raw(c.n, c.ring, {tuple(p * e for e in m): v for m, v in c.terms.items()})


def bracket_from_lifts(a0: WeylElement, b0: WeylElement, p: int) -> Poly:
    """-(1/p)[a0, b0] reduced mod p, for integer lifts a0, b0 of central elements."""
    if a0.ring != INTEGERS or b0.ring != INTEGERS:
        raise Mismatch("lifts must be over the integers")
    comm = commutator(a0, b0)
    terms = {}
    for m, c in comm.terms.items():
        if c % p:
            raise NotDivisibleByP(f"coefficient {c} of monomial {m} in [a0, b0] is not divisible by {p}")
        r = (-(c // p)) % p
        if r:
            terms[m] = r
    reduced = WeylElement._raw(a0.n, prime_field(p), terms)
    if not is_central(reduced):
        raise NotCentralResult(f"bracket value {reduced} is not central")
    return extract(reduced)


def poisson_bracket(a: Poly, b: Poly) -> Poly:
    """{a, b} = -pi([a0, b0] / p) with canonical lifts in [0, p)."""
    a._check(b)
    ring = a.ring
    p = ring.require_char_p()
    if ring.kind is RingKind.PRIME_FIELD:
        a0 = WeylElement._raw(a.n, INTEGERS, dict(embed(a).terms))
        b0 = WeylElement._raw(b.n, INTEGERS, dict(embed(b).terms))
        return bracket_from_lifts(a0, b0, p)
    return _bracket_monomialwise(a, b, p)


def _bracket_monomialwise(a: Poly, b: Poly, p: int) -> Poly:
    # Over F_p(t) the coefficients are carried symbolically: the commutator of
    # two lifted terms c*m and d*m' is c*d*[m, m'], and only the integer
    # structure constants of [m, m'] are divided by p.
    ring, n = a.ring, a.n
    add, mul, scale = ring.add, ring.mul, ring.scale_int
    acc: dict[Monomial, object] = {}
    for m1, c1 in a.terms.items():
        e1 = tuple(p * e for e in m1)
        for m2, c2 in b.terms.items():
            e2 = tuple(p * e for e in m2)
            comm: dict[Monomial, int] = {}
            for m, k in integer_product(n, e1, e2):
                comm[m] = comm.get(m, 0) + k
            for m, k in integer_product(n, e2, e1):
                comm[m] = comm.get(m, 0) - k
            cc = mul(c1, c2)
            for m, k in comm.items():
                if not k:
                    continue
                if k % p:
                    raise NotDivisibleByP(f"structure constant {k} at {m} not divisible by {p}")
                r = (-(k // p)) % p
                if not r:
                    continue
                if any(e % p for e in m):
                    raise NotCentralResult(f"non-central monomial {m} in bracket")
                key = tuple(e // p for e in m)
                v = scale(cc, r)
                acc[key] = add(acc[key], v) if key in acc else v
    return Poly(2 * n, ring, acc)


def classical_bracket(a: Poly, b: Poly) -> Poly:
    """sum_{i,j} omega_ij (da/dxi_i)(db/dxi_j)."""
    a._check(b)
    if a.nvars % 2:
        raise Mismatch("the bracket needs an even number of variables")
    n = a.n
    result = Poly.zero(a.nvars, a.ring)
    da = [a.derivative(i) for i in range(2 * n)]
    db = [b.derivative(j) for j in range(2 * n)]
    for i, j in iproduct(range(2 * n), repeat=2):
        w = omega(n, i, j)
        if w and da[i] and db[j]:
            term = da[i] * db[j]
            result = result + (term if w == 1 else -term)
    return result


def random_poly(rng, nvars: int, ring: RingDescriptor, max_degree: int, max_terms: int = 4) -> Poly:
    """Seeded random polynomial with at most ``max_terms`` terms of degree <= max_degree."""
    from .scalars import random_scalar

    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        e = [0] * nvars
        for _ in range(d):
            e[rng.randrange(nvars)] += 1
        terms[tuple(e)] = random_scalar(rng, ring)
    return Poly(nvars, ring, terms)
