import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instanton_lab.gstruct import field_residual_ratio
from instanton_lab.radial import (
    BASIC_CONSTANT,
    ODE_COEFFICIENT,
    GaugeField,
    RadialProfile,
    SamplePlan,
    component_equations,
    connection_at,
    connection_exact,
    curvature_analytic,
    curvature_energy,
    curvature_fd,
    geometry,
    instanton_ode_residual,
    negative_ansatz_check,
    verify_instanton_field,
)

GEOMS = ["su2", "g2", "spin7"]

# su(2) gauge basis k_j = iso⁻¹(β_j), written out by hand
K1 = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], float)
K2 = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], float)
K3 = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], float)


def su2_field(c=-1, C=1):
    return GaugeField(geometry("su2"), RadialProfile.closed_form(c, C))


def test_basic_constants():
    assert BASIC_CONSTANT == {"su2": -1, "g2": -12, "spin7": Fraction(-2, 3)}


def test_su2_connection_at_e1():
    A = connection_at(su2_field(), [1, 0, 0, 0])
    a1 = -0.5
    assert np.allclose(A[0], 0)
    assert np.allclose(A[1], a1 * K1)
    assert np.allclose(A[2], a1 * K2)
    assert np.allclose(A[3], a1 * K3)


def test_su2_curvature_at_e1_by_hand():
    # b = a/r = -1/2, b' = 1/2 at r = 1:  F_12 = (b' + 2b) k1,  F_34 = -2b(1 + b) k1, etc.
    F = curvature_analytic(su2_field(), [1, 0, 0, 0])
    assert np.allclose(F[0, 1], -0.5 * K1)
    assert np.allclose(F[2, 3], 0.5 * K1)
    assert np.allclose(F[0, 3], -0.5 * K3)
    assert np.allclose(F[1, 2], 0.5 * K3)
    assert np.allclose(F, -F.transpose(1, 0, 2, 3))


def test_zero_profile_gives_zero_field():
    fld = GaugeField(geometry("g2"), RadialProfile.zero())
    x = np.arange(1, 8) / 7
    assert not connection_at(fld, x).any()
    assert not curvature_fd(fld, x).any()
    assert not connection_at(fld, np.zeros(7)).any()


def test_singular_profile_rejected_at_origin():
    prof = RadialProfile.custom(lambda r: 1 / r, lambda r: -1 / r ** 2)
    fld = GaugeField(geometry("su2"), prof)
    with pytest.raises(ValueError, match="singular at the origin"):
        connection_at(fld, np.zeros(4))


@pytest.mark.parametrize("h", [0.0, -1e-5])
def test_nonpositive_fd_step_rejected(h):
    with pytest.raises(ValueError):
        curvature_fd(su2_field(), [1, 0, 0, 0], h)


def test_wrong_point_dimension_rejected():
    with pytest.raises(ValueError):
        connection_at(su2_field(), [1, 0, 0])


def test_closed_form_requires_positive_C():
    with pytest.raises(ValueError, match="C must be positive"):
        RadialProfile.closed_form(-1, 0)


@pytest.mark.parametrize("name", GEOMS)
def test_fd_matches_analytic(name):
    G = geometry(name)
    fld = GaugeField(G, RadialProfile.custom(lambda r: 0.7 / r, lambda r: -0.7 / r ** 2, name="kappa/r"))
    rng = np.random.default_rng(4)
    for _ in range(5):
        x = rng.normal(size=G.dim)
        assert np.allclose(curvature_fd(fld, x, 1e-5), curvature_analytic(fld, x), atol=1e-8)


@pytest.mark.parametrize("name", GEOMS)
@pytest.mark.parametrize("C", [0.5, 1.0, 2.0])
def test_closed_form_solves_ode(name, C):
    c = float(BASIC_CONSTANT[name])
    prof = RadialProfile.closed_form(c, C)
    radii = np.linspace(0.01, 20, 200)
    assert max(abs(instanton_ode_residual(name, prof.a(r), prof.da(r), r)) for r in radii) < 1e-12


@pytest.mark.parametrize("a, da, r, expected", [(0.0, 0.0, 1.0, 0.0), (1.0, 1.0, 1.0, -2.0), (1.0, 0.0, 2.0, -2.5)])
def test_ode_residual_examples_su2(a, da, r, expected):
    assert instanton_ode_residual("su2", a, da, r) == pytest.approx(expected)


@pytest.mark.parametrize("args", [("su2", 1, 1, 0), ("su3", 1, 1, 1)])
def test_ode_residual_rejects(args):
    with pytest.raises(ValueError):
        instanton_ode_residual(*args)


@pytest.mark.parametrize("name", GEOMS)
def test_verify_basic_instanton(name):
    plan = SamplePlan(points=20)
    res = verify_instanton_field(name, RadialProfile.closed_form(BASIC_CONSTANT[name], 1), plan)
    assert res["passed"] and res["max_ratio"] < 1e-6


@pytest.mark.parametrize("name", GEOMS)
def test_linear_profile_is_not_an_instanton(name):
    prof = RadialProfile.custom(lambda r: r, lambda r: 1.0, smooth_at_origin=True, name="linear")
    res = verify_instanton_field(name, prof, SamplePlan(points=10))
    assert not res["passed"] and res["max_ratio"] > 1e-2


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(GEOMS), st.floats(-20, 20).filter(lambda c: abs(c) > 1e-3), st.floats(0.3, 3))
def test_ode_and_field_agree(name, c, C):
    """The field is an instanton exactly when the profile solves the ODE."""
    prof = RadialProfile.closed_form(c, C)
    G = geometry(name)
    x = np.zeros(G.dim)
    x[-1] = math.sqrt(C)
    ratio = field_residual_ratio(curvature_analytic(GaugeField(G, prof), x), G.algebra)
    solves = abs(c - float(BASIC_CONSTANT[name])) < 1e-9
    r = 1.5
    ode = abs(instanton_ode_residual(name, prof.a(r), prof.da(r), r))
    assert (ode < 1e-10) == solves
    if not solves:
        assert ratio > 1e-6


def test_scale_covariance_exact():
    """A_{λ²C}(λx) = A_C(x)/λ, and scaling the forms scales A."""
    G = geometry("g2")
    x = [Fraction(1, 2), 1, 0, Fraction(-1, 3), 2, 0, 1]
    lam = Fraction(3, 2)
    base = connection_exact(GaugeField(G, RadialProfile.closed_form(-12, 1)), x)
    moved = connection_exact(GaugeField(G, RadialProfile.closed_form(-12, lam ** 2)), [lam * c for c in x])
    assert moved == [[[e / lam for e in row] for row in m] for m in base]
    scaled = connection_exact(GaugeField(G, RadialProfile.closed_form(-12, 1)), x, form_scale=lam)
    assert scaled == [[[e * lam for e in row] for row in m] for m in base]


def test_exact_matches_float_connection():
    fld = GaugeField(geometry("spin7"), RadialProfile.closed_form(Fraction(-2, 3), 1))
    x = [1, 0, Fraction(1, 2), 0, 0, 1, 0, -1]
    exact = np.array(connection_exact(fld, x), dtype=float)
    assert np.allclose(exact, connection_at(fld, [float(c) for c in x]), atol=1e-14)


def test_tabulated_profile_tracks_closed_form():
    r = np.linspace(0.05, 6, 400)
    ref = RadialProfile.closed_form(-1, 1)
    tab = RadialProfile.tabulated(r, [ref.a(x) for x in r])
    for x in (0.5, 1.3, 4.2):
        assert tab.a(x) == pytest.approx(ref.a(x), abs=1e-7)
        assert tab.da(x) == pytest.approx(ref.da(x), abs=1e-5)


@pytest.mark.parametrize("name", GEOMS)
def test_component_equations_recover_coefficient(name):
    eqs = component_equations(geometry(name).algebra)
    p0, q0, s0 = eqs[0]
    for p, q, s in eqs:
        assert q == -p
        assert -s / p == ODE_COEFFICIENT[name]
        assert p * q0 == q * p0 and p * s0 == s * p0


@pytest.mark.parametrize("name", ["su3", "sp2"])
def test_negative_geometries_inconsistent(name):
    res = negative_ansatz_check(name)
    assert res["inconsistent"] and res["rank"] == 2
    assert res["gap"] > 1e-8
    assert res["grid_min_ratio"] > 0.05


@pytest.mark.parametrize("name", GEOMS)
def test_positive_controls_consistent(name):
    res = negative_ansatz_check(name, grid={"c": [1.0], "C": [1.0], "t": [1.0]})
    assert res["consistent"] and res["rank"] == 1
    assert res["ode_coefficient"] == pytest.approx(float(ODE_COEFFICIENT[name]), abs=1e-10)


def test_energy_converges_su2():
    prof = RadialProfile.closed_form(-1, 1)
    e100 = curvature_energy("su2", prof, 100.0)
    e200 = curvature_energy("su2", prof, 200.0)
    assert abs(e200["energy"] - e100["energy"]) / e200["energy"] < 1e-6
    assert not e100["divergent"]
    assert e100["energy"] > 0


def test_energy_flags_divergence():
    prof = RadialProfile.custom(lambda r: 1.0, lambda r: 0.0, smooth_at_origin=False, name="const")
    assert curvature_energy("su2", prof, 100.0)["divergent"]


def test_unknown_geometry():
    with pytest.raises(ValueError):
        geometry("e8")
