from __future__ import annotations

from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import strategies as st

from helpkit import cyclo, load
from helpkit.cyclo import Cyclotomic

FIXTURES = ("A5", "He", "ON")


def fixture_path(name: str):
    return resources.files("helpkit") / "data" / f"{name}.ctbl"


@pytest.fixture(scope="session")
def tables():
    return {name: load(str(fixture_path(name))) for name in FIXTURES}


@pytest.fixture(scope="session")
def a5(tables):
    return tables["A5"]


@pytest.fixture(scope="session")
def he(tables):
    return tables["He"]


@pytest.fixture(scope="session")
def on(tables):
    return tables["ON"]


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def cyclotomics(draw, max_conductor: int = 60, max_terms: int = 6, within: int | None = None):
    """Random element; ``within`` restricts the conductor to divisors of it."""
    if within is None:
        n = draw(st.integers(1, max_conductor))
    else:
        n = draw(st.sampled_from([d for d in range(1, within + 1) if within % d == 0]))
    terms = draw(st.dictionaries(st.integers(0, n - 1), rationals, max_size=max_terms))
    return Cyclotomic(n, terms)


@st.composite
def cyclotomic_triples(draw, max_conductor: int = 60):
    """Three elements of one field Q(zeta_N), N <= max_conductor."""
    n = draw(st.integers(1, max_conductor))
    return tuple(draw(cyclotomics(within=n)) for _ in range(3))


def conjugate_sum(a: Cyclotomic) -> Fraction:
    """Trace computed term by term from the Galois conjugates."""
    from math import gcd

    n = a.conductor
    total = Cyclotomic()
    for k in range(1, n + 1):
        if gcd(k, n) == 1:
            total = total + cyclo.galois(a, k)
    return total.to_rational()


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
