"""Text forms: expression grammar, canonical printing, documents and reports.

Expression grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' nat)?
    atom   := int | 't' | gen | '(' expr ')'
    gen    := ('x' | 'y') nat          (Weyl elements)
            | 'xi' nat                 (center polynomials)

Products are evaluated left to right with the Weyl multiplication, so
``y1*x1`` parses to ``x1*y1 + 1``.  Division is only allowed by a nonzero
scalar of a field.  ``t`` is only available over F_p(t).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Callable

from .errors import (
    DivisionByZero,
    IndexOutOfRange,
    LiteralNotInRing,
    NoInverse,
    ParseError,
)
from .scalars import RingDescriptor, RingKind, prime_field, rational_functions, INTEGERS

# -- printing -------------------------------------------------------------


def _term_order(m: tuple[int, ...]):
    # graded lexicographic, highest first
    return (-sum(m), tuple(-e for e in m))


def _format_terms(terms: dict, ring: RingDescriptor, names: list[str]) -> str:
    if not terms:
        return "0"
    pieces: list[tuple[str, str]] = []
    for m in sorted(terms, key=_term_order):
        c = terms[m]
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e
        )
        sign = "+"
        if ring.kind is RingKind.INTEGERS and c < 0:
            sign, c = "-", -c
        if ring.kind is RingKind.RATIONAL_FUNCTIONS:
            text = ring.format(c)
            if text == "1":
                body = mono or "1"
            elif re.fullmatch(r"\d+", text) or re.fullmatch(r"t(\^\d+)?", text):
                body = f"{text}*{mono}" if mono else text
            else:
                if not text.startswith("("):
                    text = f"({text})"
                body = f"{text}*{mono}" if mono else text
        else:
            if c == 1:
                body = mono or "1"
            else:
                body = f"{c}*{mono}" if mono else str(c)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def weyl_names(n: int) -> list[str]:
    return [f"x{k}" for k in range(1, n + 1)] + [f"y{k}" for k in range(1, n + 1)]


def xi_names(nvars: int) -> list[str]:
    return [f"xi{k}" for k in range(1, nvars + 1)]


def format_weyl(a) -> str:
    """Canonical text of a Weyl element; equal elements print identically."""
    return _format_terms(a.terms, a.ring, weyl_names(a.n))


def format_poly(c, names: list[str] | None = None) -> str:
    """Canonical text of a commutative polynomial (xi variables by default)."""
    return _format_terms(c.terms, c.ring, names or xi_names(c.nvars))


def format_scalar(ring: RingDescriptor, value) -> str:
    return ring.format(value)


# -- tokenizer / parser ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(xi|x|y)(\d+)|(t)|([-+*/^()]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int
    index: int = 0


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            toks.append(_Tok("int", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok(m.group(2), m.group(0).strip(), start, int(m.group(3))))
        elif m.group(4):
            toks.append(_Tok("t", "t", start))
        else:
            toks.append(_Tok(m.group(5), m.group(5), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    """Recursive descent over an algebra described by callbacks.

    ``const(raw)`` builds a constant, ``gen(kind, index, pos)`` a generator;
    values must support +, -, * and scaling by raw ring values.
    """

    def __init__(self, text: str, ring: RingDescriptor, const: Callable, gen: Callable, scalar_of: Callable):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.const = const
        self.gen = gen
        self.scalar_of = scalar_of

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Tok:
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.pos)
        self.i += 1
        return tok

    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek().kind in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok.kind == "*":
                value = value * rhs
            else:
                divisor = self.scalar_of(rhs)
                if divisor is None:
                    raise ParseError("can only divide by a scalar", tok.pos)
                try:
                    inv = self.ring.inv(divisor)
                except DivisionByZero as exc:
                    raise ParseError("division by zero", tok.pos) from exc
                except NoInverse as exc:
                    raise LiteralNotInRing(f"{self.ring.format(divisor)} is not invertible in {self.ring}", tok.pos) from exc
                value = value * self.const(inv)
        return value

    def unary(self):
        if self.peek().kind == "-":
            self.take()
            return -self.unary()
        if self.peek().kind == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        base = self.atom()
        if self.peek().kind == "^":
            self.take()
            tok = self.take("int")
            e = int(tok.text)
            result = self.const(self.ring.one)
            for _ in range(e):
                result = result * base
            return result
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.const(self.ring.from_int(int(tok.text)))
        if tok.kind == "t":
            if self.ring.kind is not RingKind.RATIONAL_FUNCTIONS:
                raise LiteralNotInRing(f"'t' is not an element of {self.ring}", tok.pos)
            return self.const(self.ring.t())
        if tok.kind in ("x", "y", "xi"):
            return self.gen(tok.kind, tok.index, tok.pos)
        if tok.kind == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def parse_weyl_expr(text: str, n: int, ring: RingDescriptor):
    """Parse text into a normal-ordered Weyl element of A_n over ``ring``."""
    from .weyl import WeylElement

    def const(raw):
        return WeylElement(n, ring, {(0,) * (2 * n): raw})

    def gen(kind, index, pos):
        if kind == "xi":
            raise ParseError("xi variables are not Weyl generators", pos)
        if not 1 <= index <= n:
            raise IndexOutOfRange(f"generator {kind}{index} out of range for n={n}", pos)
        return WeylElement.generator(n, ring, index - 1 if kind == "x" else n + index - 1)

    def scalar_of(value):
        if not value.terms:
            return ring.zero
        if set(value.terms) == {(0,) * (2 * n)}:
            return value.terms[(0,) * (2 * n)]
        return None

    return _Parser(text, ring, const, gen, scalar_of).parse()


def parse_poly_expr(text: str, nvars: int, ring: RingDescriptor, names: str = "xi"):
    """Parse a commutative polynomial.

    ``names="xi"`` reads xi1..xi{nvars}; ``names="x"`` reads x1..x{nvars}
    (used for potentials and gradients of elementary generators).
    """
    from .center import Poly

    def const(raw):
        return Poly(nvars, ring, {(0,) * nvars: raw})

    def gen(kind, index, pos):
        if kind != names:
            raise ParseError(f"unexpected variable {kind}{index}; expected {names}-variables", pos)
        if not 1 <= index <= nvars:
            raise IndexOutOfRange(f"variable {kind}{index} out of range (1..{nvars})", pos)
        return Poly.variable(nvars, ring, index - 1)

    def scalar_of(value):
        if not value.terms:
            return ring.zero
        if set(value.terms) == {(0,) * nvars}:
            return value.terms[(0,) * nvars]
        return None

    return _Parser(text, ring, const, gen, scalar_of).parse()


def parse_scalar(text: str, ring: RingDescriptor):
    """Raw ring value from text such as ``-3``, ``(t+1)/t``."""
    poly = parse_poly_expr(text, 0, ring)
    return poly.terms.get((), ring.zero)


# -- ring descriptors -----------------------------------------------------


def ring_to_dict(ring: RingDescriptor) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": ring.kind.value}
    if ring.p is not None:
        out["p"] = ring.p
    return out


def ring_from_dict(data: dict[str, Any]) -> RingDescriptor:
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("ring must be an object with a 'kind' field")
    try:
        kind = RingKind(data["kind"])
    except ValueError as exc:
        raise ParseError(f"unknown ring kind {data['kind']!r}") from exc
    try:
        if kind is RingKind.INTEGERS:
            return INTEGERS
        if kind is RingKind.PRIME_FIELD:
            return prime_field(int(data["p"]))
        return rational_functions(int(data["p"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad ring descriptor {data!r}: {exc}") from exc


# -- reports --------------------------------------------------------------


def emit_report(report, *, timing: bool = True) -> str:
    """Deterministic JSON text for a report (sorted keys, stable term order).

    ``report`` is anything with ``to_dict()`` or a plain dict / list.
    """
    data = report.to_dict() if hasattr(report, "to_dict") else report
    if not timing:
        data = strip_timing(data)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def strip_timing(data):
    if isinstance(data, dict):
        return {k: strip_timing(v) for k, v in data.items() if k != "timing_ms"}
    if isinstance(data, list):
        return [strip_timing(v) for v in data]
    return data


# -- tame words and morphism documents -------------------------------------


def _matrix_entry(value, ring: RingDescriptor):
    if isinstance(value, bool):
        raise ParseError(f"bad matrix entry {value!r}")
    if isinstance(value, int):
        return ring.from_int(value)
    if isinstance(value, str):
        return parse_scalar(value, ring)
    raise ParseError(f"bad matrix entry {value!r}")


def _format_entry(value, ring: RingDescriptor):
    return value if ring.is_integral else ring.format(value)


def word_from_records(records, n: int, ring: RingDescriptor):
    """Build a TameWord from generator records.

    Records are ``{"type": "elementary", "potential": "<poly in x>"}``,
    ``{"type": "elementary", "gradient": ["<poly in x>", ...]}`` or
    ``{"type": "linear", "matrix": [[...], ...]}``.
    """
    from .morphisms import Elementary, LinearSymplectic, TameWord

    if not isinstance(records, list):
        raise ParseError("word must be a list of generator records")
    gens = []
    for k, rec in enumerate(records):
        if not isinstance(rec, dict) or "type" not in rec:
            raise ParseError(f"generator record {k} must be an object with a 'type'")
        kind = rec["type"]
        if kind == "elementary":
            if "potential" in rec:
                gens.append(Elementary.from_potential(parse_poly_expr(rec["potential"], n, ring, names="x")))
            elif "gradient" in rec:
                grad = rec["gradient"]
                if not isinstance(grad, list) or len(grad) != n:
                    raise ParseError(f"generator record {k}: gradient needs {n} entries")
                gens.append(Elementary(n, ring, tuple(parse_poly_expr(g, n, ring, names="x") for g in grad)))
            else:
                raise ParseError(f"generator record {k}: elementary needs 'potential' or 'gradient'")
        elif kind == "linear":
            M = rec.get("matrix")
            if not isinstance(M, list) or len(M) != 2 * n or any(not isinstance(r, list) or len(r) != 2 * n for r in M):
                raise ParseError(f"generator record {k}: matrix must be {2 * n}x{2 * n}")
            gens.append(LinearSymplectic(n, ring, tuple(tuple(_matrix_entry(v, ring) for v in row) for row in M)))
        else:
            raise ParseError(f"generator record {k}: unknown type {kind!r}")
    return TameWord(n, ring, tuple(gens))


def word_to_records(word) -> list[dict[str, Any]]:
    from .morphisms import Elementary

    out = []
    for gen in word.generators:
        if isinstance(gen, Elementary):
            names = [f"x{k}" for k in range(1, gen.n + 1)]
            if gen.potential is not None:
                out.append({"type": "elementary", "potential": format_poly(gen.potential, names)})
            else:
                out.append({"type": "elementary", "gradient": [format_poly(g, names) for g in gen.gradient]})
        else:
            out.append(
                {"type": "linear", "matrix": [[_format_entry(v, gen.ring) for v in row] for row in gen.matrix]}
            )
    return out


def _load(document) -> dict[str, Any]:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"document is not valid JSON: {exc.msg}", exc.pos) from exc
    if not isinstance(document, dict):
        raise ParseError("document must be a JSON object")
    return document


def _header(doc: dict[str, Any]) -> tuple[int, RingDescriptor]:
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("'n' must be a positive integer")
    return n, ring_from_dict(doc.get("ring", {"kind": "Integers"}))


def parse_word(document):
    """TameWord from a document with ``n``, ``ring`` and ``word``."""
    doc = _load(document)
    n, ring = _header(doc)
    if "word" not in doc:
        raise ParseError("document has no 'word'")
    return word_from_records(doc["word"], n, ring)


def parse_morphism(document):
    """Validated WeylMorphism from a morphism document (JSON text or dict).

    ``images`` may be omitted when a ``word`` is given; when both are present
    the word must reproduce the images exactly.
    """
    from .morphisms import validate, word_to_morphism

    doc = _load(document)
    n, ring = _header(doc)
    word = word_from_records(doc["word"], n, ring) if "word" in doc else None
    if "images" not in doc:
        if word is None:
            raise ParseError("document needs 'images' or 'word'")
        return word_to_morphism(word)
    images = doc["images"]
    if not isinstance(images, list) or len(images) != 2 * n:
        raise ParseError(f"'images' must list {2 * n} expressions")
    parsed = [parse_weyl_expr(text, n, ring) for text in images]
    inverse = None
    if doc.get("inverse_images") is not None:
        inv = doc["inverse_images"]
        if not isinstance(inv, list) or len(inv) != 2 * n:
            raise ParseError(f"'inverse_images' must list {2 * n} expressions")
        inverse = [parse_weyl_expr(text, n, ring) for text in inv]
    if word is not None and inverse is None:
        from .morphisms import word_to_morphism as _w2m

        inverse = list(_w2m(word).inverse_images)
    return validate(parsed, inverse, word)


def morphism_to_document(f) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "n": f.n,
        "ring": ring_to_dict(f.ring),
        "images": [format_weyl(im) for im in f.images],
    }
    if f.inverse_images is not None:
        doc["inverse_images"] = [format_weyl(im) for im in f.inverse_images]
    if f.word is not None:
        doc["word"] = word_to_records(f.word)
    return doc


def emit_morphism(f) -> str:
    return json.dumps(morphism_to_document(f), sort_keys=True, indent=2, ensure_ascii=False)


def symplecto_to_dict(s) -> dict[str, Any]:
    return {"n": s.n, "ring": ring_to_dict(s.ring), "images": [format_poly(im) for im in s.images]}
