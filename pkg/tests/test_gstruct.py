from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instanton_lab.exterior import Form, dx, hodge, parse_form, wedge
from instanton_lab.gstruct import (
    c1,
    c2,
    field_residual_ratio,
    fundamental_four_form,
    hodge_matrix,
    is_asd,
    is_instanton,
    is_sd,
    kahler_triple,
    phi,
    quat_asd_predicate,
    quat_sd_predicate,
    spin7_form,
    star_phi_printed,
    structure,
)
from instanton_lab.liealg import table_algebra
from strategies import forms, rationals


@pytest.mark.parametrize(
    "n, first, second",
    [(1, -1, 1), (2, -3, 5), (3, -30, 70)],
)
def test_quaternionic_constants(n, first, second):
    assert c1(n) == first
    assert c2(n) == second


def test_fundamental_four_form_on_r4():
    assert fundamental_four_form(1) == dx(4, 1, 2, 3, 4) * 3


def test_fundamental_four_form_is_self_dual_on_r8():
    S = fundamental_four_form(2)
    assert hodge(S) == S


def test_star_phi_matches_printed():
    assert hodge(phi()) == star_phi_printed()


def test_phi_has_seven_terms():
    assert len(dict(phi().items())) == 7
    assert len(dict(star_phi_printed().items())) == 7


def test_spin7_form_self_dual():
    Phi = spin7_form()
    assert len(dict(Phi.items())) == 14
    assert hodge(Phi) == Phi


def test_kahler_triple_r4():
    s1, s2, s3 = kahler_triple(1)
    assert s1 == parse_form("dx12+dx34", 4)
    assert s2 == parse_form("dx13+dx42", 4)
    assert s3 == parse_form("dx14+dx23", 4)
    assert all(is_sd(s) for s in (s1, s2, s3))


@pytest.mark.parametrize(
    "omega, expected",
    [
        (parse_form("dx12-dx34", 4), (True, 0.0)),
        (parse_form("dx12+dx34", 4), (False, 1.0)),
        (Form(4, 2), (True, 0.0)),
    ],
)
def test_is_instanton_su2_examples(omega, expected):
    assert is_instanton(omega, structure("su2")) == expected


def test_is_instanton_float_path():
    beta = table_algebra("g2").forms[3].to_float()
    noisy = beta + Form(7, 2, {(1, 2): 1e-9})
    ok, ratio = is_instanton(noisy, structure("g2"), tol=1e-6)
    assert ok and 0 < ratio < 1e-6
    assert not is_instanton(noisy, structure("g2"), tol=1e-12)[0]


def test_is_instanton_rejects_wrong_shape():
    with pytest.raises(ValueError):
        is_instanton(dx(4, 1), structure("su2"))
    with pytest.raises(ValueError):
        is_instanton(dx(7, 1, 2), structure("su2"))


def test_is_asd_rejects_other_dimensions():
    with pytest.raises(ValueError):
        is_asd(dx(5, 1, 2))


@st.composite
def r4_two_forms(draw):
    """Random rational 2-forms, half of them forced anti-self-dual."""
    a = draw(forms(4, 2))
    return a - hodge(a) if draw(st.booleans()) else a


@settings(max_examples=200, deadline=None)
@given(r4_two_forms())
def test_asd_iff_su2_instanton(omega):
    assert is_asd(omega) == is_instanton(omega, structure("su2"))[0]


@settings(max_examples=100, deadline=None)
@given(r4_two_forms())
def test_quat_asd_at_n1_is_asd(omega):
    assert quat_asd_predicate(omega, 1) == is_asd(omega)
    assert is_instanton(omega, structure("quatASD", 1))[0] == is_asd(omega)


@settings(max_examples=50, deadline=None)
@given(forms(4, 2))
def test_quat_sd_at_n1_is_sd(omega):
    sd = omega + hodge(omega)
    assert quat_sd_predicate(sd, 1)
    assert quat_sd_predicate(omega, 1) == is_sd(omega)


def test_sigma1_is_quaternionic_sd_on_r8():
    s1 = kahler_triple(2)[0]
    assert quat_sd_predicate(s1, 2)
    assert not quat_asd_predicate(s1, 2)


@st.composite
def sp2_elements(draw):
    g = structure("sp", 2).algebra
    coeffs = draw(st.lists(rationals, min_size=g.rank, max_size=g.rank).filter(any))
    beta = Form(8, 2)
    for c, F in zip(coeffs, g.forms):
        beta = beta + F * c
    return beta


@settings(max_examples=25, deadline=None)
@given(sp2_elements())
def test_sp2_elements_are_quaternionic_asd_not_sd(beta):
    assert quat_asd_predicate(beta, 2)
    assert is_instanton(beta, structure("quatASD", 2))[0]  # also cross-checks the wedge predicate
    assert not quat_sd_predicate(beta, 2)


def test_random_form_on_r8_is_neither():
    omega = parse_form("dx12+2dx35-dx78", 8)
    assert not quat_asd_predicate(omega, 2)
    assert not quat_sd_predicate(omega, 2)


def test_field_residual_ratio_matches_scalar_test():
    g = table_algebra("su2")
    F = np.zeros((4, 4, 2))
    F[..., 0] = parse_form("dx12-dx34", 4).to_array()
    F[..., 1] = parse_form("dx13-dx24", 4).to_array()  # self-dual
    ratio = field_residual_ratio(F, g)
    assert ratio == pytest.approx(np.sqrt(0.5))


def test_hodge_matrix_squares_to_identity_on_r4_two_forms():
    S = hodge_matrix(4, 2)
    assert np.allclose(S @ S, np.eye(6))
