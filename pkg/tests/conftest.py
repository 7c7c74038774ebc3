from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from coregkit.linalg import det
from coregkit.polyring import Germ, LinearChange

settings.register_profile("fast", max_examples=40, deadline=None)
settings.load_profile("fast")

small = st.integers(-4, 4)
nonzero = small.filter(bool)


@st.composite
def germs(draw, nvars=2, max_deg=5, order=8, min_terms=0, max_terms=6):
    terms = {}
    for _ in range(draw(st.integers(min_terms, max_terms))):
        exp = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        if sum(exp) <= order:
            terms[exp] = Fraction(draw(nonzero), draw(st.integers(1, 3)))
    return Germ(nvars, terms, order)


def changes(n=2):
    rows = st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
    return rows.filter(lambda m: det(m) != 0).map(LinearChange)


def random_change(rng: random.Random, n: int) -> LinearChange:
    while True:
        m = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if det(m) != 0:
            return LinearChange(m)


def random_curve(rng: random.Random, order: int = 60) -> Germ:
    """Reduced-looking plane curve germ: two pure powers plus random terms."""
    a, b = rng.randint(2, 7), rng.randint(2, 7)
    terms = {(a, 0): rng.choice([1, -1, 2, 3]), (0, b): rng.choice([1, -2, 5])}
    for _ in range(rng.randint(0, 3)):
        i, j = rng.randint(0, 6), rng.randint(0, 6)
        if i + j >= 2:
            terms[(i, j)] = terms.get((i, j), 0) + (rng.randint(-5, 5) or 1)
    return Germ(2, terms, order)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)
