"""Exact coefficient rings: the integers, prime fields F_p and F_p(t).

Every ring is described by a :class:`RingDescriptor`.  Polynomial containers
elsewhere in the package store *raw* values (``int`` for Z and F_p, a
:class:`RationalFunction` for F_p(t)) and do arithmetic through the descriptor,
which avoids wrapping every coefficient.  :class:`Scalar` is the public,
ring-tagged wrapper.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, NamedTuple

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys import galoistools as gf

from .errors import (
    DivisionByZero,
    EmptyInput,
    NoInverse,
    NotInFrobeniusImage,
    NotPositiveCharacteristic,
    RingMismatch,
)


class RingKind(str, enum.Enum):
    INTEGERS = "Integers"
    PRIME_FIELD = "PrimeField"
    RATIONAL_FUNCTIONS = "RationalFunctions"


def _ints(poly) -> tuple[int, ...]:
    return tuple(int(c) for c in poly)


class RationalFunction(NamedTuple):
    """num/den over F_p, dense coefficient tuples, highest degree first.

    Zero is ``((), (1,))``.  Canonical: gcd(num, den) = 1, den monic.
    """

    num: tuple[int, ...]
    den: tuple[int, ...]

    def degree(self) -> int:
        return len(self.num) - 1


@dataclass(frozen=True)
class RingDescriptor:
    kind: RingKind
    p: int | None = None

    def __post_init__(self):
        kind = RingKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is RingKind.INTEGERS:
            if self.p is not None:
                raise ValueError("the integer ring carries no modulus")
        else:
            if self.p is None or not isprime(self.p):
                raise ValueError(f"modulus must be prime, got {self.p!r}")

    def __str__(self) -> str:
        if self.kind is RingKind.INTEGERS:
            return "Z"
        if self.kind is RingKind.PRIME_FIELD:
            return f"F_{self.p}"
        return f"F_{self.p}(t)"

    # -- properties ------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_field(self) -> bool:
        return self.kind is not RingKind.INTEGERS

    @property
    def is_integral(self) -> bool:
        """Raw values are plain ints (Z or F_p)."""
        return self.kind is not RingKind.RATIONAL_FUNCTIONS

    def require_char_p(self) -> int:
        if self.p is None:
            raise NotPositiveCharacteristic(f"{self} has characteristic zero")
        return self.p

    # -- raw arithmetic --------------------------------------------------

    @property
    def zero(self):
        return _RF_ZERO if self.kind is RingKind.RATIONAL_FUNCTIONS else 0

    @property
    def one(self):
        return _RF_ONE if self.kind is RingKind.RATIONAL_FUNCTIONS else 1

    def from_int(self, k: int):
        if self.kind is RingKind.INTEGERS:
            return int(k)
        r = int(k) % self.p
        if self.kind is RingKind.PRIME_FIELD:
            return r
        return RationalFunction((r,), (1,)) if r else _RF_ZERO

    def t(self):
        """The indeterminate of F_p(t)."""
        if self.kind is not RingKind.RATIONAL_FUNCTIONS:
            raise RingMismatch(f"{self} has no indeterminate t")
        return RationalFunction((1, 0), (1,))

    def is_zero(self, a) -> bool:
        if self.kind is RingKind.RATIONAL_FUNCTIONS:
            return not a.num
        return a == 0

    def is_one(self, a) -> bool:
        return a == self.one

    def add(self, a, b):
        if self.kind is RingKind.INTEGERS:
            return a + b
        if self.kind is RingKind.PRIME_FIELD:
            return (a + b) % self.p
        return _rf_add(a, b, self.p)

    def neg(self, a):
        if self.kind is RingKind.INTEGERS:
            return -a
        if self.kind is RingKind.PRIME_FIELD:
            return -a % self.p
        return RationalFunction(_ints(gf.gf_neg(list(a.num), self.p, ZZ)), a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.kind is RingKind.INTEGERS:
            return a * b
        if self.kind is RingKind.PRIME_FIELD:
            return a * b % self.p
        return _rf_mul(a, b, self.p)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero(f"zero has no inverse in {self}")
        if self.kind is RingKind.INTEGERS:
            if a in (1, -1):
                return a
            raise NoInverse(f"{a} is not a unit in Z")
        if self.kind is RingKind.PRIME_FIELD:
            return pow(a, -1, self.p)
        return _rf_normalize(list(a.den), list(a.num), self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, m: int):
        if m < 0:
            return self.pow(self.inv(a), -m)
        if self.kind is RingKind.PRIME_FIELD:
            return pow(a, m, self.p)
        if self.kind is RingKind.INTEGERS:
            return a**m
        result, base = self.one, a
        while m:
            if m & 1:
                result = self.mul(result, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return result

    def scale_int(self, a, k: int):
        """``k * a`` for an integer k (used for structure constants)."""
        if self.kind is RingKind.INTEGERS:
            return a * k
        if self.kind is RingKind.PRIME_FIELD:
            return a * k % self.p
        return _rf_mul(a, self.from_int(k), self.p)

    def coerce(self, value):
        """Canonical raw value from an int, a Scalar of this ring or a raw value."""
        if isinstance(value, Scalar):
            if value.ring != self:
                raise RingMismatch(f"{value.ring} scalar used in {self}")
            return value.value
        if isinstance(value, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, RationalFunction) and self.kind is RingKind.RATIONAL_FUNCTIONS:
            return _rf_normalize(list(value.num), list(value.den), self.p)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    # -- Frobenius ------------------------------------------------------

    def frobenius(self, a):
        p = self.require_char_p()
        if self.kind is RingKind.PRIME_FIELD:
            return a
        return RationalFunction(_spread(a.num, p), _spread(a.den, p))

    def inverse_frobenius(self, a):
        p = self.require_char_p()
        if self.kind is RingKind.PRIME_FIELD:
            return a
        num, den = _contract(a.num, p), _contract(a.den, p)
        if num is None or den is None:
            raise NotInFrobeniusImage(Scalar(self, a))
        return RationalFunction(num, den)

    # -- formatting -----------------------------------------------------

    def format(self, a) -> str:
        if self.kind is not RingKind.RATIONAL_FUNCTIONS:
            return str(a)
        num = _format_upoly(a.num)
        if a.den == (1,):
            return num
        return f"({num})/({_format_upoly(a.den)})"


def _spread(coeffs: tuple[int, ...], p: int) -> tuple[int, ...]:
    """f(t) -> f(t^p), dense, highest first."""
    if not coeffs:
        return coeffs
    out = []
    for c in coeffs[:-1]:
        out.append(c)
        out.extend([0] * (p - 1))
    out.append(coeffs[-1])
    return tuple(out)


def _contract(coeffs: tuple[int, ...], p: int) -> tuple[int, ...] | None:
    """Inverse of _spread, or None if some exponent is not divisible by p."""
    if not coeffs:
        return coeffs
    deg = len(coeffs) - 1
    if deg % p:
        return None
    out = []
    for k, c in enumerate(coeffs):
        if (deg - k) % p:
            if c:
                return None
        else:
            out.append(c)
    return tuple(out)


def _rf_normalize(num: list, den: list, p: int) -> RationalFunction:
    num = gf.gf_strip(list(num))
    den = gf.gf_strip(list(den))
    if not den:
        raise DivisionByZero("rational function with zero denominator")
    if not num:
        return _RF_ZERO
    if len(den) > 1:
        g = gf.gf_gcd(num, den, p, ZZ)
        if len(g) > 1:
            num = gf.gf_quo(num, g, p, ZZ)
            den = gf.gf_quo(den, g, p, ZZ)
    lc = int(den[0])
    if lc != 1:
        inv = pow(lc, -1, p)
        num = gf.gf_mul_ground(num, inv, p, ZZ)
        den = gf.gf_mul_ground(den, inv, p, ZZ)
    return RationalFunction(_ints(num), _ints(den))


def _rf_add(a: RationalFunction, b: RationalFunction, p: int) -> RationalFunction:
    if not a.num:
        return b
    if not b.num:
        return a
    if a.den == b.den:
        num = gf.gf_add(list(a.num), list(b.num), p, ZZ)
        if a.den == (1,):
            return RationalFunction(_ints(num), a.den) if num else _RF_ZERO
        return _rf_normalize(num, list(a.den), p)
    num = gf.gf_add(
        gf.gf_mul(list(a.num), list(b.den), p, ZZ),
        gf.gf_mul(list(b.num), list(a.den), p, ZZ),
        p,
        ZZ,
    )
    den = gf.gf_mul(list(a.den), list(b.den), p, ZZ)
    return _rf_normalize(num, den, p)


def _rf_mul(a: RationalFunction, b: RationalFunction, p: int) -> RationalFunction:
    if not a.num or not b.num:
        return _RF_ZERO
    num = gf.gf_mul(list(a.num), list(b.num), p, ZZ)
    if a.den == (1,) and b.den == (1,):
        return RationalFunction(_ints(num), (1,))
    return _rf_normalize(num, gf.gf_mul(list(a.den), list(b.den), p, ZZ), p)


def _format_upoly(coeffs: tuple[int, ...]) -> str:
    if not coeffs:
        return "0"
    deg = len(coeffs) - 1
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        e = deg - k
        if e == 0:
            parts.append(str(c))
        else:
            mono = "t" if e == 1 else f"t^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts)


_RF_ZERO = RationalFunction((), (1,))
_RF_ONE = RationalFunction((1,), (1,))

INTEGERS = RingDescriptor(RingKind.INTEGERS)


def prime_field(p: int) -> RingDescriptor:
    return RingDescriptor(RingKind.PRIME_FIELD, p)


def rational_functions(p: int) -> RingDescriptor:
    return RingDescriptor(RingKind.RATIONAL_FUNCTIONS, p)


@dataclass(frozen=True)
class Scalar:
    """A ring-tagged exact value.  Arithmetic across rings raises RingMismatch."""

    ring: RingDescriptor
    value: object

    @classmethod
    def of(cls, ring: RingDescriptor, value) -> Scalar:
        return cls(ring, ring.coerce(value))

    def _other(self, other) -> object:
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Scalar(self.ring, self.ring.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Scalar(self.ring, self.ring.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Scalar(self.ring, self.ring.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Scalar(self.ring, self.ring.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Scalar(self.ring, self.ring.div(self.value, b))

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __pow__(self, m: int):
        return Scalar(self.ring, self.ring.pow(self.value, m))

    def inv(self) -> Scalar:
        return Scalar(self.ring, self.ring.inv(self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __str__(self) -> str:
        return self.ring.format(self.value)


def frobenius(a: Scalar) -> Scalar:
    return Scalar(a.ring, a.ring.frobenius(a.value))


def inverse_frobenius(a: Scalar) -> Scalar:
    return Scalar(a.ring, a.ring.inverse_frobenius(a.value))


def reduce_mod_p(a: Scalar, p: int) -> Scalar:
    if a.ring.kind is not RingKind.INTEGERS:
        raise RingMismatch(f"reduce_mod_p expects an integer, got {a.ring}")
    field = prime_field(p)
    return Scalar(field, field.from_int(a.value))


def lift_to_integers(a: Scalar) -> Scalar:
    if a.ring.kind is not RingKind.PRIME_FIELD:
        raise RingMismatch(f"lift_to_integers expects an F_p element, got {a.ring}")
    return Scalar(INTEGERS, int(a.value))


def crt_int(residues: Iterable[tuple[int, int]]) -> int:
    """Symmetric-range CRT on plain (residue, modulus) pairs."""
    pairs = [(int(r) % m, m) for r, m in residues]
    if not pairs:
        raise EmptyInput("crt_reconstruct needs at least one residue")
    moduli = [m for _, m in pairs]
    if len(set(moduli)) != len(moduli):
        raise ValueError("moduli must be pairwise distinct")
    modulus = reduce(lambda a, b: a * b, moduli)
    x = 0
    for r, m in pairs:
        q = modulus // m
        x += r * q * pow(q, -1, m)
    x %= modulus
    return x - modulus if 2 * x > modulus else x


def crt_reconstruct(residues: Iterable[tuple[Scalar, int]]) -> Scalar:
    """The integer in (-M/2, M/2] congruent to every residue, M the product of moduli."""
    pairs = []
    for s, p in residues:
        if s.ring != prime_field(p):
            raise RingMismatch(f"residue in {s.ring} paired with modulus {p}")
        pairs.append((s.value, p))
    return Scalar(INTEGERS, crt_int(pairs))


def random_scalar(rng, ring: RingDescriptor, bound: int = 5):
    """Raw ring value drawn from ``rng``: small integers, residues, or t-polynomials of degree <= 2."""
    if ring.kind is RingKind.INTEGERS:
        return rng.randint(-bound, bound)
    if ring.kind is RingKind.PRIME_FIELD:
        return rng.randrange(ring.p)
    num = ring.zero
    for k in range(3):
        num = ring.add(num, ring.mul(ring.from_int(rng.randrange(ring.p)), ring.pow(ring.t(), k)))
    if rng.random() < 0.3:
        den = ring.add(ring.t(), ring.from_int(rng.randrange(ring.p)))
        num = ring.div(num, den)
    return num
