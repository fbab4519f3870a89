from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from weylbkk.center import Poly
from weylbkk.scalars import INTEGERS, prime_field, random_scalar, rational_functions
from weylbkk.weyl import WeylElement

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]

rings = st.one_of(
    st.just(INTEGERS),
    st.sampled_from(SMALL_PRIMES).map(prime_field),
    st.sampled_from([2, 3, 5]).map(rational_functions),
)
char_p_rings = st.sampled_from(SMALL_PRIMES).map(prime_field)


def random_weyl(rng: random.Random, n: int, ring, max_degree: int, max_terms: int = 4) -> WeylElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        e = [0] * (2 * n)
        for _ in range(d):
            e[rng.randrange(2 * n)] += 1
        terms[tuple(e)] = random_scalar(rng, ring, 3)
    return WeylElement(n, ring, terms)


@st.composite
def weyl_elements(draw, n=None, ring=None, max_degree=4, max_terms=4):
    n = draw(st.integers(1, 2)) if n is None else n
    ring = draw(rings) if ring is None else ring
    seed = draw(st.integers(0, 2**32))
    return random_weyl(random.Random(seed), n, ring, max_degree, max_terms)


@st.composite
def weyl_triples(draw, max_degree=3):
    n = draw(st.integers(1, 2))
    ring = draw(rings)
    return tuple(draw(weyl_elements(n=n, ring=ring, max_degree=max_degree)) for _ in range(3))


@st.composite
def center_triples(draw, max_degree=3):
    from weylbkk.center import random_poly

    n = draw(st.integers(1, 2))
    ring = draw(char_p_rings)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return tuple(random_poly(rng, 2 * n, ring, max_degree, 3) for _ in range(3))


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split("_")[1]) if s.split("_")[1].isdigit() else 99):
        terminalreporter.write_line(f"{ACCEPTANCE_RESULTS[name]}  {name}")


__all__ = ["Poly", "random_weyl"]
