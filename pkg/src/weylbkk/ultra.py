"""Finite-stage Cantor-set approximation: e(a), the 2-adic metric and nearest points.

Bit strings are tuples of 0/1 of a fixed length L, positions 1..L, with
position 1 the least significant bit.  Strings are implicitly zero beyond L.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Sequence

from .errors import Mismatch, Overflow, PreconditionViolated

BitString = tuple[int, ...]


def e(a: int, length: int) -> BitString:
    """Binary decomposition of a, least significant bit first, in positions 1..length."""
    if a < 0:
        raise ValueError("e is defined on nonnegative integers")
    if a >= 1 << length:
        raise Overflow(f"{a} needs more than {length} bits")
    return tuple((a >> k) & 1 for k in range(length))


def value(x: BitString) -> int:
    """Inverse of e."""
    return sum(bit << k for k, bit in enumerate(x))


def d2(x: BitString, y: BitString) -> Fraction:
    """1/k for the first differing position k (1-based); 0 for equal strings."""
    if len(x) != len(y):
        raise Mismatch("bit strings of different truncation length")
    for k, (a, b) in enumerate(zip(x, y), start=1):
        if a != b:
            return Fraction(1, k)
    return Fraction(0)


def nearest(x: BitString, p: int) -> tuple[int, BitString]:
    """Closest point to x among e(0), ..., e(p-1); ties go to the smallest preimage.

    e(a) agrees with x on positions 1..j exactly when a = value(x) mod 2^j, and
    the least such a is value(x) mod 2^j itself.  So the answer is the residue
    for the largest j whose residue is still below p.
    """
    length = len(x)
    if p > 1 << length:
        raise Overflow(f"p={p} exceeds 2^{length}")
    v = value(x)
    if v < p:
        return v, x
    j = 0
    while j < length and v % (1 << (j + 1)) < p:
        j += 1
    a = v % (1 << j)
    return a, e(a, length)


def nearest_brute(x: BitString, p: int) -> tuple[int, BitString]:
    """Reference implementation by enumeration."""
    length = len(x)
    if p > 1 << length:
        raise Overflow(f"p={p} exceeds 2^{length}")
    best = min(range(p), key=lambda a: (d2(x, e(a, length)), a))
    return best, e(best, length)


def approx_check(x: BitString, p: int, m: int) -> dict:
    """d2(x, nearest(x, p)) < 1/m, valid whenever p > 2^m."""
    start = time.perf_counter()
    if m < 1:
        raise PreconditionViolated("m must be positive")
    if p <= 1 << m:
        raise PreconditionViolated(f"need p > 2^m, got p={p}, 2^m={1 << m}")
    if m > len(x):
        raise PreconditionViolated(f"need 2^m <= 2^L, got m={m}, L={len(x)}")
    a, point = nearest(x, p)
    dist = d2(x, point)
    return {
        "check": "approx_check",
        "params": {"x": list(x), "p": p, "m": m},
        "pass": dist < Fraction(1, m),
        "witnesses": [] if dist < Fraction(1, m) else [{"nearest": a, "distance": str(dist)}],
        "nearest": a,
        "distance": str(dist),
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }


def exhaustive_approx(length: int, primes: Sequence[int]) -> tuple[int, list[tuple]]:
    """Run approx_check for every string of the given length and every admissible (p, m).

    Returns (number of cases, failures).
    """
    cases, failures = 0, []
    for v in range(1 << length):
        x = e(v, length)
        for p in primes:
            m = 1
            while m <= length and p > 1 << m:
                cases += 1
                if not approx_check(x, p, m)["pass"]:
                    failures.append((v, p, m))
                m += 1
    return cases, failures


def bits_from_text(text: str, length: int | None = None) -> BitString:
    """'0110' (position 1 first) or an integer like '6' (decomposed with e)."""
    text = text.strip()
    if text.startswith("b:"):
        bits = tuple(int(ch) for ch in text[2:])
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bit strings contain only 0 and 1")
        if length is not None:
            if len(bits) > length:
                raise Overflow("bit string longer than L")
            bits = bits + (0,) * (length - len(bits))
        return bits
    return e(int(text), length if length is not None else max(1, int(text).bit_length()))
