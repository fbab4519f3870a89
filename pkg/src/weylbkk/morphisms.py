"""Endomorphisms of A_n, tame generators and their classical images.

A morphism is given by the images of zeta_1..zeta_2n.  Composition follows
the algebra convention ``compose(f, g) = f o g`` (apply g first, then f), so
``compose(f, g).images[i] == apply(f, g.images[i])``.  A tame word
``(g_1, ..., g_k)`` denotes ``g_1 o g_2 o ... o g_k``.

Tame generators:

* :class:`Elementary`: x_i -> x_i, y_i -> y_i + g_i(x), where (g_i) is the
  gradient of a potential F(x_1..x_n);
* :class:`LinearSymplectic`: zeta_i -> sum_j M_ij zeta_j with M^T J M = J.

The classical image tau sends these to the same-coefficient maps on the xi
variables; :class:`SymplectoMap` holds such polynomial maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .center import Poly
from .errors import Mismatch, NotSymplectic, RelationViolation
from .scalars import INTEGERS, RingDescriptor, RingKind, Scalar, prime_field
from .weyl import WeylElement, commutator, generators, mul, omega, total_degree

# -- generators -----------------------------------------------------------


def _curl_free(gradient: Sequence[Poly]) -> bool:
    n = len(gradient)
    return all(
        gradient[j].derivative(i) == gradient[i].derivative(j) for i in range(n) for j in range(i + 1, n)
    )


@dataclass(frozen=True)
class Elementary:
    """y_i -> y_i + gradient[i](x); gradient entries are polynomials in x_1..x_n."""

    n: int
    ring: RingDescriptor
    gradient: tuple[Poly, ...]
    potential: Poly | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.gradient) != self.n:
            raise Mismatch(f"gradient needs {self.n} components, got {len(self.gradient)}")
        for g in self.gradient:
            if g.nvars != self.n or g.ring != self.ring:
                raise Mismatch("gradient components must be polynomials in x_1..x_n over the word ring")
        if not _curl_free(self.gradient):
            raise ValueError("gradient components are not the partial derivatives of one potential")

    @classmethod
    def from_potential(cls, potential: Poly) -> Elementary:
        if potential.nvars == 0:
            raise Mismatch("potential needs at least one variable")
        if any(not any(m) for m in potential.terms):
            raise ValueError("potential must have zero constant term")
        n = potential.nvars
        return cls(n, potential.ring, tuple(potential.derivative(i) for i in range(n)), potential)

    @property
    def degree(self) -> int:
        return max([1] + [int(g.total_degree()) for g in self.gradient if g])

    def inverse(self) -> Elementary:
        pot = -self.potential if self.potential is not None else None
        return Elementary(self.n, self.ring, tuple(-g for g in self.gradient), pot)

    def map_ring(self, fn, ring: RingDescriptor) -> Elementary:
        pot = self.potential.map_coefficients(fn, ring) if self.potential is not None else None
        return Elementary(self.n, ring, tuple(g.map_coefficients(fn, ring) for g in self.gradient), pot)

    def weyl_images(self) -> list[WeylElement]:
        n, ring = self.n, self.ring
        gens = generators(n, ring)
        images = gens[:n]
        for i in range(n):
            g = WeylElement(n, ring, {m + (0,) * n: c for m, c in self.gradient[i].terms.items()})
            images.append(gens[n + i] + g)
        return images

    def classical_images(self) -> list[Poly]:
        n, ring = self.n, self.ring
        xis = [Poly.variable(2 * n, ring, i) for i in range(2 * n)]
        images = xis[:n]
        for i in range(n):
            g = Poly(2 * n, ring, {m + (0,) * n: c for m, c in self.gradient[i].terms.items()})
            images.append(xis[n + i] + g)
        return images


def _matmul(ring: RingDescriptor, A, B):
    add, mul = ring.add, ring.mul
    size, inner = len(A), len(B)
    out = []
    for i in range(size):
        row = []
        for j in range(len(B[0])):
            acc = ring.zero
            for k in range(inner):
                acc = add(acc, mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _transpose(M):
    return tuple(zip(*M))


def symplectic_j(n: int, ring: RingDescriptor):
    """The matrix (omega_ij) with entries in ``ring``."""
    return tuple(tuple(ring.from_int(omega(n, i, j)) for j in range(2 * n)) for i in range(2 * n))


def is_symplectic(M, ring: RingDescriptor) -> bool:
    n = len(M) // 2
    J = symplectic_j(n, ring)
    return _matmul(ring, _matmul(ring, _transpose(M), J), M) == J


@dataclass(frozen=True)
class LinearSymplectic:
    """zeta_i -> sum_j matrix[i][j] zeta_j; entries are raw ring values."""

    n: int
    ring: RingDescriptor
    matrix: tuple[tuple, ...]

    def __post_init__(self):
        size = 2 * self.n
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise Mismatch(f"matrix must be {size}x{size}")
        if not is_symplectic(self.matrix, self.ring):
            raise NotSymplectic("M^T J M != J")

    @classmethod
    def of(cls, M, ring: RingDescriptor) -> LinearSymplectic:
        rows = tuple(tuple(ring.coerce(v) for v in row) for row in M)
        if len(rows) % 2:
            raise Mismatch("symplectic matrices have even size")
        return cls(len(rows) // 2, ring, rows)

    @property
    def degree(self) -> int:
        return 1

    def inverse(self) -> LinearSymplectic:
        # J^{-1} = -J
        J = symplectic_j(self.n, self.ring)
        neg = self.ring.neg
        Jinv = tuple(tuple(neg(v) for v in row) for row in J)
        return LinearSymplectic(self.n, self.ring, _matmul(self.ring, _matmul(self.ring, Jinv, _transpose(self.matrix)), J))

    def map_ring(self, fn, ring: RingDescriptor) -> LinearSymplectic:
        return LinearSymplectic(self.n, ring, tuple(tuple(fn(v) for v in row) for row in self.matrix))

    def weyl_images(self) -> list[WeylElement]:
        n, ring = self.n, self.ring
        gens = generators(n, ring)
        out = []
        for row in self.matrix:
            acc = WeylElement.zero(n, ring)
            for j, v in enumerate(row):
                if not ring.is_zero(v):
                    acc = acc + gens[j].scale(Scalar(ring, v))
            out.append(acc)
        return out

    def classical_images(self) -> list[Poly]:
        n, ring = self.n, self.ring
        return [
            Poly(2 * n, ring, {tuple(int(k == j) for k in range(2 * n)): v for j, v in enumerate(row)})
            for row in self.matrix
        ]


Generator = Elementary | LinearSymplectic


@dataclass(frozen=True)
class TameWord:
    """g_1 o g_2 o ... o g_k as an ordered tuple of generators."""

    n: int
    ring: RingDescriptor
    generators: tuple[Generator, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n or g.ring != self.ring:
                raise Mismatch("all generators of a word share n and ring")

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __add__(self, other: TameWord) -> TameWord:
        if (self.n, self.ring) != (other.n, other.ring):
            raise Mismatch("cannot concatenate words over different algebras")
        return TameWord(self.n, self.ring, self.generators + other.generators)

    def inverse(self) -> TameWord:
        return TameWord(self.n, self.ring, tuple(g.inverse() for g in reversed(self.generators)))

    def map_ring(self, fn, ring: RingDescriptor) -> TameWord:
        return TameWord(self.n, ring, tuple(g.map_ring(fn, ring) for g in self.generators))

    def reduce_mod_p(self, p: int) -> TameWord:
        if self.ring.kind is not RingKind.INTEGERS:
            raise Mismatch(f"reduce_mod_p expects a word over Z, got {self.ring}")
        return self.map_ring(lambda c: c % p, prime_field(p))

    def degree_bound(self) -> int:
        """Product of generator degrees; bounds the degree of the word and of its inverse."""
        out = 1
        for g in self.generators:
            out *= g.degree
        return out


# -- morphisms ------------------------------------------------------------


class WeylMorphism:
    """An endomorphism of A_n given by the images of zeta_1..zeta_2n."""

    __slots__ = ("n", "ring", "images", "inverse_images", "word")

    def __init__(self, images, inverse_images=None, word: TameWord | None = None, *, check: bool = True):
        images = tuple(images)
        if not images or len(images) % 2:
            raise Mismatch("a morphism needs 2n images")
        n, ring = images[0].n, images[0].ring
        if len(images) != 2 * n:
            raise Mismatch(f"A_{n} needs {2 * n} images, got {len(images)}")
        for im in images:
            if im.n != n or im.ring != ring:
                raise Mismatch("all images must share n and ring")
        if inverse_images is not None:
            inverse_images = tuple(inverse_images)
            if len(inverse_images) != 2 * n or any(im.n != n or im.ring != ring for im in inverse_images):
                raise Mismatch("inverse images must match the images")
        if word is not None and (word.n != n or word.ring != ring):
            raise Mismatch("provenance word must match the morphism")
        self.n, self.ring = n, ring
        self.images = images
        self.inverse_images = inverse_images
        self.word = word
        if check:
            check_relations(images)

    def __eq__(self, other):
        if not isinstance(other, WeylMorphism):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"WeylMorphism({[str(im) for im in self.images]}, ring={self.ring})"

    @property
    def has_inverse(self) -> bool:
        return self.inverse_images is not None

    def inverse(self) -> WeylMorphism:
        if self.inverse_images is None:
            raise ValueError("no inverse known: build the morphism from a tame word or supply inverse images")
        word = self.word.inverse() if self.word is not None else None
        return WeylMorphism(self.inverse_images, self.images, word, check=False)

    def map_ring(self, fn, ring: RingDescriptor, *, check: bool = True) -> WeylMorphism:
        images = [im.map_coefficients(fn, ring) for im in self.images]
        inv = [im.map_coefficients(fn, ring) for im in self.inverse_images] if self.inverse_images else None
        word = self.word.map_ring(fn, ring) if self.word is not None else None
        return WeylMorphism(images, inv, word, check=check)

    def reduce_mod_p(self, p: int, *, check: bool = True) -> WeylMorphism:
        if self.ring.kind is not RingKind.INTEGERS:
            raise Mismatch(f"reduce_mod_p expects a morphism over Z, got {self.ring}")
        return self.map_ring(lambda c: c % p, prime_field(p), check=check)


def check_relations(images: Sequence[WeylElement]) -> None:
    """Raise RelationViolation unless [images[i], images[j]] = omega_ij for all i < j."""
    n, ring = images[0].n, images[0].ring
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            c = commutator(images[i], images[j])
            if c != WeylElement.constant(n, ring, omega(n, i, j)):
                raise RelationViolation(i, j, c)


def validate(images, inverse_images=None, word: TameWord | None = None) -> WeylMorphism:
    """Build a morphism, checking the Weyl relations and any supplied inverse."""
    f = WeylMorphism(images, inverse_images, word)
    if inverse_images is not None:
        inv = WeylMorphism(inverse_images, check=True)
        gens = generators(f.n, f.ring)
        if [apply(f, w) for w in inv.images] != gens or [apply(inv, w) for w in f.images] != gens:
            raise ValueError("supplied inverse images do not invert the morphism")
    if word is not None and list(word_to_morphism(word).images) != list(f.images):
        raise ValueError("tame word does not reproduce the images")
    return f


def identity(n: int, ring: RingDescriptor) -> WeylMorphism:
    gens = generators(n, ring)
    return WeylMorphism(gens, gens, TameWord(n, ring), check=False)


def apply(f: WeylMorphism, w: WeylElement) -> WeylElement:
    """Substitute images into the normal-ordered monomials of w, multiplying left to right."""
    if f.n != w.n or f.ring != w.ring:
        raise Mismatch(f"morphism on A_{f.n} over {f.ring} applied to A_{w.n} over {w.ring}")
    n, ring = f.n, f.ring
    powers: list[dict[int, WeylElement]] = [{1: im} for im in f.images]

    def power(g: int, e: int) -> WeylElement:
        cache = powers[g]
        if e not in cache:
            cache[e] = mul(power(g, e - 1), f.images[g])
        return cache[e]

    result = WeylElement.zero(n, ring)
    for m, c in w.terms.items():
        term = WeylElement.constant(n, ring, Scalar(ring, c))
        for g, e in enumerate(m):
            if e:
                term = mul(term, power(g, e))
        result = result + term
    return result


def compose(f: WeylMorphism, g: WeylMorphism) -> WeylMorphism:
    """f o g: apply g first, then f."""
    if f.n != g.n or f.ring != g.ring:
        raise Mismatch("composing morphisms over different algebras")
    images = [apply(f, im) for im in g.images]
    inverse_images = None
    if f.inverse_images is not None and g.inverse_images is not None:
        g_inv = WeylMorphism(g.inverse_images, check=False)
        inverse_images = [apply(g_inv, im) for im in f.inverse_images]
    word = f.word + g.word if f.word is not None and g.word is not None else None
    return WeylMorphism(images, inverse_images, word)


def generator_morphism(gen: Generator) -> WeylMorphism:
    word = TameWord(gen.n, gen.ring, (gen,))
    return WeylMorphism(gen.weyl_images(), gen.inverse().weyl_images(), word)


def elementary(potential: Poly) -> WeylMorphism:
    """x_i -> x_i, y_i -> y_i + dF/dx_i for a constant-free potential F(x_1..x_n)."""
    return generator_morphism(Elementary.from_potential(potential))


def elementary_from_gradient(gradient: Sequence[Poly]) -> WeylMorphism:
    """Elementary generator given by its gradient (allows potentials like x^3/3 over Z)."""
    g0 = gradient[0]
    return generator_morphism(Elementary(len(gradient), g0.ring, tuple(gradient)))


def linear_symplectic(M, ring: RingDescriptor) -> WeylMorphism:
    return generator_morphism(LinearSymplectic.of(M, ring))


def word_to_morphism(word: TameWord) -> WeylMorphism:
    result = identity(word.n, word.ring)
    for gen in word.generators:
        result = compose(result, generator_morphism(gen))
    return result


def degree(f: WeylMorphism, *, with_flag: bool = False):
    """max total degree over images and, when known, inverse images.

    With ``with_flag=True`` returns ``(degree, inverse_known)``.
    """
    degs = [total_degree(im) for im in f.images]
    if f.inverse_images is not None:
        degs += [total_degree(im) for im in f.inverse_images]
    d = int(max(degs))
    return (d, f.inverse_images is not None) if with_flag else d


# -- polynomial symplectomorphisms ---------------------------------------


class SymplectoMap:
    """A polynomial map xi_i -> images[i] of the center ring."""

    __slots__ = ("n", "ring", "images")

    def __init__(self, images):
        images = tuple(images)
        if not images or len(images) % 2:
            raise Mismatch("a symplectic map needs 2n images")
        n, ring = len(images) // 2, images[0].ring
        for im in images:
            if im.nvars != 2 * n or im.ring != ring:
                raise Mismatch("all images must be polynomials in 2n variables over one ring")
        self.n, self.ring, self.images = n, ring, images

    @classmethod
    def identity(cls, n: int, ring: RingDescriptor) -> SymplectoMap:
        return cls(Poly.variable(2 * n, ring, i) for i in range(2 * n))

    def __eq__(self, other):
        if not isinstance(other, SymplectoMap):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"SymplectoMap({[str(im) for im in self.images]}, ring={self.ring})"

    def compose(self, other: SymplectoMap) -> SymplectoMap:
        """self o other, in the same convention as morphism composition."""
        if (self.n, self.ring) != (other.n, other.ring):
            raise Mismatch("composing maps over different rings")
        return SymplectoMap(im.substitute(self.images) for im in other.images)

    def map_coefficients(self, fn, ring: RingDescriptor | None = None) -> SymplectoMap:
        return SymplectoMap(im.map_coefficients(fn, ring) for im in self.images)

    def reduce_mod_p(self, p: int) -> SymplectoMap:
        if self.ring.kind is not RingKind.INTEGERS:
            raise Mismatch(f"reduce_mod_p expects a map over Z, got {self.ring}")
        return self.map_coefficients(lambda c: c % p, prime_field(p))

    def degree(self) -> int:
        return int(max(im.total_degree() for im in self.images))


def classical_symplecto(word: TameWord) -> SymplectoMap:
    """tau(word): compose the same-coefficient polynomial maps of the generators."""
    result = SymplectoMap.identity(word.n, word.ring)
    for gen in word.generators:
        result = result.compose(SymplectoMap(gen.classical_images()))
    return result


# -- random tame words ----------------------------------------------------


def _random_symplectic_factor(rng: random.Random, n: int, bound: int):
    size = 2 * n
    kind = rng.choice(["upper", "lower", "block", "swap"] if n > 1 else ["upper", "lower", "swap"])
    M = [[int(i == j) for j in range(size)] for i in range(size)]
    if kind in ("upper", "lower"):
        S = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                S[i][j] = S[j][i] = rng.randint(-bound, bound)
        for i in range(n):
            for j in range(n):
                if kind == "upper":
                    M[i][n + j] = S[i][j]
                else:
                    M[n + i][j] = S[i][j]
    elif kind == "block":
        # diag(A, A^{-T}) with A = I + a*E_{ij}
        i, j = rng.sample(range(n), 2)
        a = rng.choice([v for v in range(-bound, bound + 1) if v])
        M[i][j] = a
        M[n + j][n + i] = -a
    else:
        # partial Fourier transform on one pair: x_k -> y_k, y_k -> -x_k
        k = rng.randrange(n)
        M[k][k] = M[n + k][n + k] = 0
        M[k][n + k] = 1
        M[n + k][k] = -1
    return M


def _random_linear(rng: random.Random, n: int, bound: int) -> LinearSymplectic:
    M = _random_symplectic_factor(rng, n, bound)
    M2 = _random_symplectic_factor(rng, n, bound)
    prod = _matmul(INTEGERS, tuple(map(tuple, M)), tuple(map(tuple, M2)))
    return LinearSymplectic(n, INTEGERS, prod)


def _random_potential(rng: random.Random, n: int, grad_degree: int, bound: int) -> Poly:
    terms: dict[tuple[int, ...], int] = {}
    # one term of the top degree, so the generator has exactly grad_degree
    while True:
        for deg in [grad_degree + 1] + [rng.randint(1, grad_degree + 1) for _ in range(rng.randint(0, 2))]:
            e = [0] * n
            for _ in range(deg):
                e[rng.randrange(n)] += 1
            terms[tuple(e)] = rng.choice([v for v in range(-bound, bound + 1) if v])
        if terms:
            return Poly(n, INTEGERS, terms)


def random_tame_word(
    seed: int,
    n: int,
    word_length: int,
    degree_bound: int,
    coeff_bound: int,
    *,
    generator_degree: int | None = None,
) -> TameWord:
    """A seeded tame word over Z alternating elementary and linear generators.

    Elementary gradient degrees are chosen so that the product of generator
    degrees (a bound for the morphism degree) stays within ``degree_bound``;
    ``generator_degree`` additionally caps each elementary generator.
    """
    if n < 1 or word_length < 0 or degree_bound < 1 or coeff_bound < 1:
        raise ValueError("random_tame needs positive bounds")
    rng = random.Random(seed)
    cap = generator_degree or degree_bound
    gens: list[Generator] = []
    budget = degree_bound
    elementary_turn = rng.random() < 0.5
    for _ in range(word_length):
        if elementary_turn:
            d = rng.randint(1, max(1, min(cap, budget)))
            budget //= d
            gens.append(Elementary.from_potential(_random_potential(rng, n, d, coeff_bound)))
        else:
            gens.append(_random_linear(rng, n, coeff_bound))
        elementary_turn = not elementary_turn
    return TameWord(n, INTEGERS, tuple(gens))


def with_parameter(word: TameWord, ring: RingDescriptor, seed: int = 0) -> TameWord:
    """Map a word over Z into F_p(t), multiplying one potential coefficient by t."""
    if ring.kind is not RingKind.RATIONAL_FUNCTIONS:
        raise Mismatch("parameterized words live over F_p(t)")
    rng = random.Random(seed)
    p = ring.p
    mapped = list(word.map_ring(lambda c: ring.from_int(c), ring).generators)
    candidates = [
        (k, m)
        for k, gen in enumerate(word.generators)
        if isinstance(gen, Elementary) and gen.potential is not None
        for m, c in gen.potential.terms.items()
        if c % p and any(e % p for e in m)
    ]
    if not candidates:
        raise ValueError("word has no elementary coefficient to parameterize")
    k, m = rng.choice(sorted(candidates))
    pot = mapped[k].potential
    terms = dict(pot.terms)
    terms[m] = ring.mul(terms[m], ring.t())
    mapped[k] = Elementary.from_potential(Poly(pot.nvars, ring, terms))
    return TameWord(word.n, ring, tuple(mapped))


def random_tame(
    seed: int,
    n: int,
    word_length: int,
    degree_bound: int,
    coeff_bound: int,
    *,
    generator_degree: int | None = None,
) -> WeylMorphism:
    """Deterministic random tame automorphism over Z with provenance."""
    word = random_tame_word(seed, n, word_length, degree_bound, coeff_bound, generator_degree=generator_degree)
    return word_to_morphism(word)
