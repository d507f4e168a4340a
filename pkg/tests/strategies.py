"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from instanton_lab.exterior import Form, Vector, multi_indices

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))


@st.composite
def forms(draw, dim, grade, max_terms=6):
    idx = multi_indices(dim, grade)
    chosen = draw(st.lists(st.sampled_from(idx), max_size=min(max_terms, len(idx)), unique=True))
    return Form(dim, grade, {i: draw(rationals) for i in chosen})


@st.composite
def dim_and_grade(draw, min_dim=2, max_dim=8):
    n = draw(st.integers(min_dim, max_dim))
    return n, draw(st.integers(0, n))


@st.composite
def vectors(draw, dim):
    return Vector(draw(st.lists(rationals, min_size=dim, max_size=dim)))
