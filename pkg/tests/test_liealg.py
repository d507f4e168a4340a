from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instanton_lab import tables
from instanton_lab.exterior import Form, Vector, dx, hodge, inner, interior, parse_form, wedge
from instanton_lab.gstruct import phi, spin7_form, structure, su2_forms
from instanton_lab.liealg import (
    SkewEndo,
    bracket,
    derivation,
    format_table,
    in_span,
    iso,
    iso_inverse,
    killing_form,
    parse_matrix_terms,
    project_to_subalgebra,
    same_span,
    stabilizer_algebra,
    table_algebra,
)
from strategies import forms, rationals


def E(n, terms):
    return SkewEndo.from_elementary(n, parse_matrix_terms(terms))


def test_iso_on_elementary_pair():
    assert iso(E(4, "E21-E12")) == dx(4, 1, 2)


def test_skew_endo_rejects_non_skew():
    with pytest.raises(ValueError):
        SkewEndo.from_rows([[0, 1], [1, 0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8).flatmap(lambda n: forms(n, 2)))
def test_iso_inverse_round_trip(beta):
    assert iso(iso_inverse(beta)) == beta


@pytest.mark.parametrize(
    "name, j, scale",
    [("su2", 0, 2), ("g2", 0, 1), ("spin7", 0, 1), ("spin7", 20, 1)],
)
def test_table_scales(name, j, scale):
    g = table_algebra(name)
    assert g.scale[j] == scale
    assert iso(g.basis[j]) * scale == g.forms[j]


def test_g2_first_element():
    g = table_algebra("g2")
    assert g.forms[0] == parse_form("dx23-dx45", 7) * Fraction(-1, 4)
    assert iso(g.basis[0]) == g.forms[0]


class TestSu2Brackets:
    """The printed su(2) matrices close with [e1,e2] = -e3; the elements paired
    with the forms, k_j = iso⁻¹(β_j) = 2 e_j, satisfy [k1,k2] = -2 k3."""

    def test_printed_matrices(self):
        e = table_algebra("su2").basis
        assert bracket(e[0], e[1]) == e[2] * -1
        assert bracket(e[1], e[2]) == e[0] * -1
        assert bracket(e[2], e[0]) == e[1] * -1

    def test_paired_elements(self):
        k = [iso_inverse(F) for F in table_algebra("su2").forms]
        assert bracket(k[0], k[1]) == k[2] * -2
        assert bracket(k[0], k[2]) == k[1] * 2

    def test_self_bracket_vanishes(self):
        e = table_algebra("su2").basis[0]
        assert bracket(e, e).is_zero()


@pytest.mark.parametrize(
    "forms_fn, dim",
    [
        (lambda: list(su2_forms().values()), 3),
        (lambda: [phi()], 14),
        (lambda: [spin7_form()], 21),
        (lambda: list(structure("su3").defining_forms.values()), 8),
        (lambda: [structure("sp", 2).defining_forms[k] for k in ("sigma1", "sigma2", "sigma3")], 10),
    ],
    ids=["su2", "g2", "spin7", "su3", "sp2"],
)
def test_stabilizer_dimension(forms_fn, dim):
    g = stabilizer_algebra(forms_fn())
    assert g.rank == dim
    for F in forms_fn():
        for A in g.basis:
            assert derivation(A, F).is_zero()


def test_stabilizer_rejects_empty():
    with pytest.raises(ValueError):
        stabilizer_algebra([])


@pytest.mark.parametrize("name", ["su2", "g2", "spin7"])
def test_structure_constants_reproduce_brackets(name):
    g = table_algebra(name)
    c = g.structure_constants
    for i, a in enumerate(g.basis):
        for j, b in enumerate(g.basis):
            combo = SkewEndo.zero(g.dim)
            for k, e in enumerate(g.basis):
                if c[i][j][k]:
                    combo = combo + e * c[i][j][k]
            assert bracket(a, b) == combo


@pytest.mark.parametrize("name", ["su2", "g2", "spin7"])
def test_killing_form_negative_definite(name):
    assert np.all(np.linalg.eigvalsh(killing_form(table_algebra(name))) < 0)


@pytest.mark.parametrize("name", ["su2", "g2", "spin7"])
def test_table_span_matches_stabilizer(name):
    defining = {"su2": list(su2_forms().values()), "g2": [phi()], "spin7": [spin7_form()]}[name]
    assert same_span(table_algebra(name), stabilizer_algebra(defining))


def test_g2_membership_conditions():
    star_phi = hodge(phi())
    for beta in table_algebra("g2").forms:
        assert hodge(wedge(phi(), beta)) == -beta
        assert wedge(star_phi, beta).is_zero()


def test_spin7_membership_condition():
    Phi = spin7_form()
    for beta in table_algebra("spin7").forms:
        assert hodge(wedge(Phi, beta)) == -beta


def test_spin7_repairs_are_the_two_misprints():
    g = table_algebra("spin7")
    assert [r.split(":")[0] for r in g.repairs] == ["e3", "e14"]
    assert "self" not in g.repairs[0] and "not skew" in g.repairs[1]
    # the repaired matrices differ from print only in the misprinted entries
    assert g.basis[2].entries[4][5] == -g.basis[2].entries[5][4] != 0
    assert g.basis[13].entries[7][7] == 0 and g.basis[13].entries[6][7] != 0


@st.composite
def g2_candidates(draw):
    g = table_algebra("g2")
    coeffs = draw(st.lists(rationals, min_size=14, max_size=14))
    beta = Form(7, 2)
    for c, F in zip(coeffs, g.forms):
        beta = beta + F * c
    if draw(st.booleans()):
        beta = beta + draw(forms(7, 2, max_terms=3))
    return beta


@settings(max_examples=200, deadline=None)
@given(g2_candidates())
def test_g2_conditions_are_equivalent(beta):
    first = hodge(wedge(phi(), beta)) == -beta
    second = wedge(hodge(phi()), beta).is_zero()
    assert first == second == in_span(beta, table_algebra("g2"))


@pytest.mark.parametrize(
    "omega, inside, outside",
    [
        (parse_form("dx12-dx34", 4), parse_form("dx12-dx34", 4), Form(4, 2)),
        (parse_form("dx12+dx34", 4), Form(4, 2), parse_form("dx12+dx34", 4)),
        (dx(4, 1, 2), parse_form("dx12-dx34", 4) / 2, parse_form("dx12+dx34", 4) / 2),
    ],
)
def test_projection_examples(omega, inside, outside):
    assert project_to_subalgebra(omega, table_algebra("su2")) == (inside, outside)


@settings(max_examples=40, deadline=None)
@given(forms(7, 2, max_terms=8))
def test_projection_idempotent_and_orthogonal(omega):
    g = table_algebra("g2")
    inside, outside = project_to_subalgebra(omega, g)
    assert inside + outside == omega
    assert project_to_subalgebra(inside, g) == (inside, Form(7, 2))
    assert inner(omega, omega) == inner(inside, inside) + inner(outside, outside)
    assert all(inner(outside, F) == 0 for F in g.forms)


def test_format_table_rows():
    text = format_table(table_algebra("g2"))
    lines = text.strip().splitlines()
    assert lines[0].startswith("# algebra=g2 n=7 rank=14")
    assert lines[1].split("\t") == ["index", "radical", "matrix", "form", "scale"]
    assert len(lines) == 2 + 14
    assert lines[3].split("\t")[1] == "sqrt(1/3)"


# --- printed reference-point data -------------------------------------------


def _printed(n, entry, grade=1):
    pre, q, terms = entry
    if terms == "0":
        return q, Form(n, grade)
    return q, parse_form(terms, n) * pre


def _same(qa, A, qb, B):
    """sqrt(qa)·A == sqrt(qb)·B for rational forms A, B."""
    if A.is_zero() or B.is_zero():
        return A.is_zero() and B.is_zero()
    idx, b = next(iter(B.items()))
    s = A[idx] / b
    return A == B * s and s > 0 and s * s == qb / qa


def _table_alpha(name, point):
    g = table_algebra(name)
    v = Vector.basis(g.dim, point)
    return [(q, interior(v, F)) for q, F in zip(g.radicals, g.forms)]


@pytest.mark.parametrize(
    "name, point, printed",
    [("g2", 1, tables.G2_ALPHA_AT_E1), ("spin7", 8, tables.SPIN7_ALPHA_AT_E8)],
)
def test_alpha_at_reference_point(name, point, printed):
    n = table_algebra(name).dim
    for j, ((q, alpha), entry) in enumerate(zip(_table_alpha(name, point), printed), start=1):
        pq, pform = _printed(n, entry)
        assert _same(q, alpha, pq, pform), f"alpha_{j}"


@pytest.mark.parametrize(
    "name, point, printed",
    [("g2", 1, tables.G2_BETA_SPHERE_AT_E1), ("spin7", 8, tables.SPIN7_BETA_SPHERE_AT_E8)],
)
def test_tangential_beta_at_reference_point(name, point, printed):
    g = table_algebra(name)
    for j, (q, F, entry) in enumerate(zip(g.radicals, g.forms, printed), start=1):
        tangential = Form(g.dim, 2, {I: c for I, c in F.items() if point not in I})
        pq, pform = _printed(g.dim, entry, grade=2)
        assert _same(q, tangential, pq, pform), f"beta_{j}|S"
