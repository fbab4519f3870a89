import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylbkk.bkk import CheckReport
from weylbkk.center import random_poly
from weylbkk.errors import IndexOutOfRange, LiteralNotInRing, ParseError, RelationViolation
from weylbkk.io import (
    emit_morphism,
    emit_report,
    format_poly,
    format_weyl,
    morphism_to_document,
    parse_morphism,
    parse_poly_expr,
    parse_scalar,
    parse_weyl_expr,
    parse_word,
    strip_timing,
    word_to_records,
)
from weylbkk.morphisms import random_tame_word, word_to_morphism
from weylbkk.scalars import INTEGERS, prime_field, rational_functions
from weylbkk.weyl import WeylElement

from conftest import rings, weyl_elements

Z = INTEGERS


def test_parse_examples():
    x, y = WeylElement.x(1, Z, 1), WeylElement.y(1, Z, 1)
    assert parse_weyl_expr("y1*x1", 1, Z) == x * y + 1
    assert parse_weyl_expr("(x1+y1)^2", 1, Z) == x * x + 2 * x * y + y * y + 1
    with pytest.raises(IndexOutOfRange):
        parse_weyl_expr("x3", 2, Z)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse_weyl_expr("x1 + * y1", 1, Z)
    assert err.value.position == 5
    with pytest.raises(ParseError):
        parse_weyl_expr("(x1", 1, Z)
    with pytest.raises(LiteralNotInRing):
        parse_weyl_expr("t*x1", 1, prime_field(5))
    with pytest.raises(LiteralNotInRing):
        parse_weyl_expr("x1/2", 1, Z)


def test_literals_reduce_in_prime_fields():
    F = prime_field(5)
    assert parse_weyl_expr("-1*x1", 1, F) == 4 * WeylElement.x(1, F, 1)
    assert parse_scalar("7", F) == 2
    K = rational_functions(3)
    assert parse_scalar("(t^2 - 1)/(t + 2)", K) == parse_scalar("t + 1", K)


@given(weyl_elements(max_degree=4))
def test_weyl_round_trip(w):
    assert parse_weyl_expr(format_weyl(w), w.n, w.ring) == w


@given(rings.filter(lambda r: r.characteristic), st.integers(0, 2**32), st.integers(1, 2))
def test_poly_round_trip(ring, seed, n):
    c = random_poly(random.Random(seed), 2 * n, ring, 3, 4)
    assert parse_poly_expr(format_poly(c), 2 * n, ring) == c


def test_printing_is_graded_lex():
    F = prime_field(7)
    w = parse_weyl_expr("1 + y1 + x1 + x1^2", 1, F)
    assert format_weyl(w) == "x1^2 + x1 + y1 + 1"
    assert format_weyl(parse_weyl_expr("1 - x1", 1, Z)) == "-x1 + 1"


def test_morphism_document_examples():
    doc = {"n": 1, "ring": {"kind": "PrimeField", "p": 7}, "images": ["x1", "y1+x1^2"]}
    f = parse_morphism(doc)
    assert f.ring == prime_field(7)
    bad = dict(doc, images=["x1", "y1+y1^2"])
    with pytest.raises(RelationViolation):
        parse_morphism(bad)
    with pytest.raises(ParseError):
        parse_morphism("{not json")
    with pytest.raises(ParseError):
        parse_morphism({"n": 1, "ring": {"kind": "Reals"}, "images": ["x1", "y1"]})


def test_morphism_round_trip_with_word():
    word = random_tame_word(3, 2, 3, 6, 2, generator_degree=3)
    f = word_to_morphism(word)
    text = emit_morphism(f)
    g = parse_morphism(text)
    assert g == f and g.word == word
    assert morphism_to_document(g) == json.loads(text)
    assert parse_word({"n": 2, "word": word_to_records(word)}) == word


def test_word_disagreeing_with_images_is_rejected():
    doc = {"n": 1, "images": ["x1", "y1 + 2*x1"], "word": [{"type": "elementary", "potential": "x1^3"}]}
    with pytest.raises(ValueError):
        parse_morphism(doc)


def test_reports_are_deterministic():
    r1 = CheckReport("c", {"b": 1, "a": [1, 2]}, True, [], 1.5)
    r2 = CheckReport("c", {"a": [1, 2], "b": 1}, True, [], 9.0)
    assert emit_report(r1, timing=False) == emit_report(r2, timing=False)
    data = json.loads(emit_report(r1))
    assert set(data) == {"check", "params", "pass", "witnesses", "timing_ms"}
    assert "timing_ms" not in strip_timing(data)
