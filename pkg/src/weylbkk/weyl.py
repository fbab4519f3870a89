"""Normal-ordered arithmetic in the Weyl algebra A_n over an exact ring.

Generators are indexed 0..2n-1: index k < n is x_{k+1}, index n+k is y_{k+1}.
A monomial is an exponent tuple of length 2n read as
x_1^{i_1}...x_n^{i_n} y_1^{i_{n+1}}...y_n^{i_{2n}} (all x's to the left).
The only non-trivial relation is y_k x_k = x_k y_k + 1.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .errors import Mismatch
from .scalars import INTEGERS, RingDescriptor, RingKind, Scalar, prime_field

Monomial = tuple[int, ...]

#: degree of the zero element; absorbs addition so degrees stay additive
ZERO_DEGREE = float("-inf")


def omega(n: int, i: int, j: int) -> int:
    """Standard symplectic form on 0-based generator indices."""
    return (i == n + j) - (i + n == j)


def omega_matrix(n: int) -> list[list[int]]:
    return [[omega(n, i, j) for j in range(2 * n)] for i in range(2 * n)]


class WeylElement:
    """An immutable element of A_n over ``ring``; ``terms`` maps monomials to raw nonzero values."""

    __slots__ = ("n", "ring", "terms", "_hash")

    def __init__(self, n: int, ring: RingDescriptor, terms: Mapping[Monomial, object] | None = None):
        self.n = n
        self.ring = ring
        self.terms = {} if terms is None else {m: c for m, c in terms.items() if not ring.is_zero(c)}
        self._hash = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n, ring):
        return cls(n, ring)

    @classmethod
    def constant(cls, n, ring, value=1):
        c = ring.coerce(value)
        return cls(n, ring, {(0,) * (2 * n): c})

    @classmethod
    def generator(cls, n, ring, index: int):
        e = [0] * (2 * n)
        e[index] = 1
        return cls(n, ring, {tuple(e): ring.one})

    @classmethod
    def x(cls, n, ring, k: int):
        """x_k, 1-based."""
        return cls.generator(n, ring, k - 1)

    @classmethod
    def y(cls, n, ring, k: int):
        """y_k, 1-based."""
        return cls.generator(n, ring, n + k - 1)

    @classmethod
    def monomial(cls, n, ring, exponents: Iterable[int], coeff=1):
        e = tuple(exponents)
        if len(e) != 2 * n:
            raise ValueError(f"expected {2 * n} exponents, got {len(e)}")
        return cls(n, ring, {e: ring.coerce(coeff)})

    @classmethod
    def _raw(cls, n, ring, terms):
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj.n, obj.ring, obj.terms, obj._hash = n, ring, terms, None
        return obj

    # -- basic protocol -------------------------------------------------

    def _check(self, other: WeylElement):
        if self.n != other.n or self.ring != other.ring:
            raise Mismatch(f"A_{self.n} over {self.ring} vs A_{other.n} over {other.ring}")

    def _lift_operand(self, other):
        if isinstance(other, WeylElement):
            self._check(other)
            return other
        if isinstance(other, (int, Scalar)) and not isinstance(other, bool):
            return WeylElement.constant(self.n, self.ring, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.n == other.n and self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self == WeylElement.constant(self.n, self.ring, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        from .io import format_weyl

        return f"WeylElement({format_weyl(self)!r}, n={self.n}, ring={self.ring})"

    def __str__(self):
        from .io import format_weyl

        return format_weyl(self)

    def coeff(self, exponents: Iterable[int]) -> Scalar:
        return Scalar(self.ring, self.terms.get(tuple(exponents), self.ring.zero))

    def items(self):
        """(monomial, Scalar) pairs."""
        return ((m, Scalar(self.ring, c)) for m, c in self.terms.items())

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = self._lift_operand(other)
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
        return WeylElement._raw(self.n, ring, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return WeylElement._raw(self.n, self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift_operand(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift_operand(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> WeylElement:
        c = self.ring.coerce(c)
        if self.ring.is_zero(c):
            return WeylElement.zero(self.n, self.ring)
        mul = self.ring.mul
        return WeylElement(self.n, self.ring, {m: mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return mul(self, other)
        if isinstance(other, (int, Scalar)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, m: int):
        return pow(self, m)

    def map_coefficients(self, fn, ring: RingDescriptor | None = None) -> WeylElement:
        ring = ring or self.ring
        return WeylElement(self.n, ring, {m: fn(c) for m, c in self.terms.items()})

    def total_degree(self):
        return total_degree(self)

    def homogeneous_part(self, degree: int) -> WeylElement:
        return WeylElement._raw(
            self.n, self.ring, {m: c for m, c in self.terms.items() if sum(m) == degree}
        )


# -- multiplication -------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _pair_expansion(b: int, c: int) -> tuple[tuple[int, int], ...]:
    """y^b x^c = sum_s coeff * x^{c-s} y^{b-s}; returns (s, coeff) with coeff = C(b,s) C(c,s) s!."""
    return tuple((s, math.comb(b, s) * math.comb(c, s) * math.factorial(s)) for s in range(min(b, c) + 1))


@lru_cache(maxsize=1 << 16)
def _reorder(n: int, ys: Monomial, xs: Monomial) -> tuple[tuple[Monomial, int], ...]:
    """Normal form of (y-part ys) * (x-part xs) as (shift vector, integer constant) pairs.

    The shift s_k is removed from both x_k and y_k exponents.
    """
    per_pair = [_pair_expansion(ys[k], xs[k]) for k in range(n)]
    if all(len(opts) == 1 for opts in per_pair):
        return (((0,) * n, 1),)
    out = []
    for choice in product(*per_pair):
        const = 1
        for _, c in choice:
            const *= c
        out.append((tuple(s for s, _ in choice), const))
    return tuple(out)


def _check_pair(a: WeylElement, b: WeylElement):
    if a.n != b.n or a.ring != b.ring:
        raise Mismatch(f"A_{a.n} over {a.ring} vs A_{b.n} over {b.ring}")


def integer_product(n: int, I: Monomial, J: Monomial) -> list[tuple[Monomial, int]]:
    """zeta^I * zeta^J as (monomial, integer coefficient) pairs, valid over Z."""
    ys, xs = I[n:], J[:n]
    out = []
    for shift, const in _reorder(n, ys, xs):
        out.append(
            (
                tuple(I[k] + J[k] - shift[k] for k in range(n))
                + tuple(I[n + k] + J[n + k] - shift[k] for k in range(n)),
                const,
            )
        )
    return out


def mul(a: WeylElement, b: WeylElement) -> WeylElement:
    """Normal-ordered product via the closed-form structure constants.

    Integer constants are computed exactly and only then mapped into the ring,
    so factorials past the characteristic are harmless.
    """
    _check_pair(a, b)
    n, ring = a.n, a.ring
    if not a.terms or not b.terms:
        return WeylElement.zero(n, ring)

    # group by the parts that interact: y-exponents of a, x-exponents of b
    left: dict[Monomial, list] = {}
    for m, c in a.terms.items():
        left.setdefault(m[n:], []).append((m[:n], c))
    right: dict[Monomial, list] = {}
    for m, c in b.terms.items():
        right.setdefault(m[:n], []).append((m[n:], c))

    if ring.kind is RingKind.PRIME_FIELD and len(a.terms) * len(b.terms) >= _NUMPY_THRESHOLD:
        terms = _mul_mod_p_numpy(a, b)
        if terms is not None:
            return WeylElement._raw(n, ring, terms)

    if ring.is_integral:
        acc: dict[Monomial, int] = {}
        for ys, lterms in left.items():
            for xs, rterms in right.items():
                for shift, const in _reorder(n, ys, xs):
                    ynew = tuple(ys[k] - shift[k] for k in range(n))
                    xbase = tuple(xs[k] - shift[k] for k in range(n))
                    for ax, ac in lterms:
                        xpart = tuple(ax[k] + xbase[k] for k in range(n))
                        cc = ac * const
                        for by, bc in rterms:
                            key = xpart + tuple(ynew[k] + by[k] for k in range(n))
                            acc[key] = acc.get(key, 0) + cc * bc
        p = ring.p
        if p is None:
            terms = {m: c for m, c in acc.items() if c}
        else:
            terms = {}
            for m, c in acc.items():
                c %= p
                if c:
                    terms[m] = c
        return WeylElement._raw(n, ring, terms)

    add, rmul, scale = ring.add, ring.mul, ring.scale_int
    acc = {}
    for ys, lterms in left.items():
        for xs, rterms in right.items():
            for shift, const in _reorder(n, ys, xs):
                ynew = tuple(ys[k] - shift[k] for k in range(n))
                xbase = tuple(xs[k] - shift[k] for k in range(n))
                for ax, ac in lterms:
                    xpart = tuple(ax[k] + xbase[k] for k in range(n))
                    cc = scale(ac, const)
                    if ring.is_zero(cc):
                        continue
                    for by, bc in rterms:
                        key = xpart + tuple(ynew[k] + by[k] for k in range(n))
                        v = rmul(cc, bc)
                        acc[key] = add(acc[key], v) if key in acc else v
    return WeylElement(n, ring, acc)


_NUMPY_THRESHOLD = 4096


@lru_cache(maxsize=64)
def _binomial_tables(p: int, size: int):
    """C(e, s) mod p and e!/(e-s)! mod p for 0 <= s <= e < size."""
    comb = np.zeros((size, size), dtype=np.int64)
    fall = np.zeros((size, size), dtype=np.int64)
    for e in range(size):
        f = 1
        for s in range(e + 1):
            comb[e, s] = math.comb(e, s) % p
            fall[e, s] = f % p
            f *= e - s
    return comb, fall


def _mul_mod_p_numpy(a: WeylElement, b: WeylElement) -> dict[Monomial, int] | None:
    """Vectorized closed-form product over F_p.

    Uses the equivalent form a*b = sum_s (D_y^(s) a) (d_x^s b) with commutative
    products, where D^(s) is the divided derivative: for one pair the constant
    C(b_y, s) * C(c_x, s) * s! splits as C(b_y, s) times the falling factorial
    c_x!/(c_x - s)!.  Monomials are bit-packed into int64 keys.  Returns None
    when the packing does not fit, and the caller falls back to the dict path.
    """
    n, p = a.n, a.ring.p
    if p >= 1 << 31:
        return None
    top = max(max(m) for m in a.terms) + max(max(m) for m in b.terms)
    bits = max(1, top.bit_length())
    if 2 * n * bits > 62:
        return None
    shifts = np.array([bits * g for g in range(2 * n)], dtype=np.int64)

    ea = np.array(list(a.terms), dtype=np.int64)
    ca = np.array(list(a.terms.values()), dtype=np.int64)
    eb = np.array(list(b.terms), dtype=np.int64)
    cb = np.array(list(b.terms.values()), dtype=np.int64)
    ka = (ea << shifts).sum(axis=1)
    kb = (eb << shifts).sum(axis=1)
    comb, fall = _binomial_tables(p, top + 1)

    ya, xb = ea[:, n:], eb[:, :n]
    ranges = [range(min(int(ya[:, k].max()), int(xb[:, k].max())) + 1) for k in range(n)]
    key_chunks, val_chunks, pending = [], [], 0
    for s in product(*ranges):
        s_arr = np.array(s, dtype=np.int64)
        ma = np.all(ya >= s_arr, axis=1)
        mb = np.all(xb >= s_arr, axis=1)
        if not ma.any() or not mb.any():
            continue
        fa = ca[ma]
        fb = cb[mb]
        for k in range(n):
            if s[k]:
                fa = fa * comb[ya[ma, k], s[k]] % p
                fb = fb * fall[xb[mb, k], s[k]] % p
        nz_a, nz_b = fa != 0, fb != 0
        if not nz_a.any() or not nz_b.any():
            continue
        offset = sum(s[k] << (bits * k) for k in range(n)) + sum(s[k] << (bits * (n + k)) for k in range(n))
        keys = (ka[ma][nz_a][:, None] + kb[mb][nz_b][None, :] - offset).ravel()
        vals = (fa[nz_a][:, None] * fb[nz_b][None, :] % p).ravel()
        key_chunks.append(keys)
        val_chunks.append(vals)
        pending += keys.size
        if pending > 4_000_000:
            keys, vals = _combine(key_chunks, val_chunks, p)
            key_chunks, val_chunks, pending = [keys], [vals], keys.size
    if not key_chunks:
        return {}
    keys, vals = _combine(key_chunks, val_chunks, p)
    mask = (1 << bits) - 1
    cols = [((keys >> (bits * g)) & mask).tolist() for g in range(2 * n)]
    return {tuple(e): int(v) for e, v in zip(zip(*cols), vals.tolist())}


def _combine(key_chunks, val_chunks, p):
    keys = np.concatenate(key_chunks)
    vals = np.concatenate(val_chunks)
    order = np.argsort(keys, kind="stable")
    keys, vals = keys[order], vals[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    sums = np.add.reduceat(vals, starts) % p
    keep = sums != 0
    return keys[starts][keep], sums[keep]


# -- independent rewriting oracle -----------------------------------------


def _word(n: int, m: Monomial) -> tuple[int, ...]:
    out = []
    for g, e in enumerate(m):
        out.extend([g] * e)
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def _rewrite(n: int, word: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Normal form of a generator word by adjacent rewriting, as (sorted word, int) pairs."""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a > b:
            swapped = word[:i] + (b, a) + word[i + 2 :]
            result: dict[tuple[int, ...], int] = dict(_rewrite(n, swapped))
            if a == b + n:  # y_k x_k -> x_k y_k + 1
                for w, c in _rewrite(n, word[:i] + word[i + 2 :]):
                    result[w] = result.get(w, 0) + c
            return tuple((w, c) for w, c in result.items() if c)
    return ((word, 1),)


def mul_naive(a: WeylElement, b: WeylElement) -> WeylElement:
    """Product by repeated rewriting y_k x_k -> x_k y_k + 1 on concatenated words."""
    _check_pair(a, b)
    n, ring = a.n, a.ring
    acc = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            c = ring.mul(c1, c2)
            for w, k in _rewrite(n, _word(n, m1) + _word(n, m2)):
                e = [0] * (2 * n)
                for g in w:
                    e[g] += 1
                key = tuple(e)
                v = ring.scale_int(c, k)
                acc[key] = ring.add(acc[key], v) if key in acc else v
    return WeylElement(n, ring, acc)


# -- derived operations ---------------------------------------------------


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return mul(a, b) - mul(b, a)


def ad_pow(x: WeylElement, y: WeylElement, d: int) -> WeylElement:
    """ad_x^d(y) = [x, [x, ... [x, y]]]."""
    if d < 0:
        raise ValueError("ad power must be nonnegative")
    _check_pair(x, y)
    for _ in range(d):
        if not y:
            break
        y = commutator(x, y)
    return y


def pow(a: WeylElement, m: int, method: str = "auto") -> WeylElement:  # noqa: A001
    """a^m.

    ``method="binary"`` is square-and-multiply.  ``"linear"`` multiplies by
    ``a`` m times; for sparse low-degree bases this is much cheaper, because
    squaring a large intermediate power costs far more than m products with
    the small base.  ``"auto"`` picks linear for bases under 256 terms.
    """
    if m < 0:
        raise ValueError("negative powers are not defined in A_n")
    if method == "auto":
        method = "linear" if len(a.terms) < 256 else "binary"
    result = WeylElement.constant(a.n, a.ring, 1)
    if method == "linear":
        for _ in range(m):
            result = mul(result, a)
        return result
    if method != "binary":
        raise ValueError(f"unknown exponentiation method {method!r}")
    base = a
    while m:
        if m & 1:
            result = mul(result, base)
        m >>= 1
        if m:
            base = mul(base, base)
    return result


def total_degree(a: WeylElement):
    """max |I| over terms; ZERO_DEGREE for the zero element."""
    if not a.terms:
        return ZERO_DEGREE
    return max(sum(m) for m in a.terms)


def reduce_mod_p(a: WeylElement, p: int) -> WeylElement:
    if a.ring.kind is not RingKind.INTEGERS:
        raise Mismatch(f"reduce_mod_p expects an element over Z, got {a.ring}")
    field = prime_field(p)
    return WeylElement(a.n, field, {m: c % p for m, c in a.terms.items()})


def lift_to_integers(a: WeylElement) -> WeylElement:
    if a.ring.kind is not RingKind.PRIME_FIELD:
        raise Mismatch(f"lift_to_integers expects an element over F_p, got {a.ring}")
    return WeylElement._raw(a.n, INTEGERS, dict(a.terms))


def generators(n: int, ring: RingDescriptor) -> list[WeylElement]:
    """zeta_1..zeta_{2n} = x_1..x_n, y_1..y_n."""
    return [WeylElement.generator(n, ring, i) for i in range(2 * n)]
