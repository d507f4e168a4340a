import io

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from instanton_lab.yangmills import (
    YMState,
    integrate_ym,
    state_from_profile,
    uv_rhs,
    write_csv,
    ym_residual,
)


def instanton(C=1.0, c=-1.0):
    a = lambda r: c * r / (r * r + C)
    da = lambda r: c * (C - r * r) / (r * r + C) ** 2
    d2a = lambda r: c * (2 * r ** 3 - 6 * C * r) / (r * r + C) ** 3
    return a, da, d2a


@pytest.mark.parametrize("C", [0.5, 1.0, 2.0])
def test_instanton_solves_yang_mills(C):
    a, da, d2a = instanton(C)
    assert max(abs(ym_residual(a(r), da(r), d2a(r), r)) for r in np.logspace(-2, 2, 300)) < 1e-10


def test_opposite_sign_profile_fails():
    # the equation is not odd in a, so c = +1 is not a solution
    a, da, d2a = instanton(1.0, c=1.0)
    assert abs(ym_residual(a(1.0), da(1.0), d2a(1.0), 1.0)) > 1


@pytest.mark.parametrize("a, da, d2a, r, expected", [(1.0, 1.0, 0.0, 1.0, -20.0), (0.0, 0.0, 0.0, 3.0, 0.0)])
def test_residual_examples(a, da, d2a, r, expected):
    assert ym_residual(a, da, d2a, r) == pytest.approx(expected)


def test_uv_rhs_example():
    assert uv_rhs(YMState(1.0, 2.0, 3.0)) == (11.0, -24.0)


def test_state_requires_positive_radius():
    with pytest.raises(ValueError):
        YMState(0.0, 1.0, 0.0)


def test_instanton_has_zero_v():
    a, da, _ = instanton()
    for r in (0.1, 1.0, 7.0):
        assert abs(state_from_profile(a(r), da(r), r).v) < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=4), st.floats(0.2, 3.0))
def test_first_order_system_equivalent(coeffs, r0):
    """v' + 4 r u v = r² × (Yang–Mills residual), checked symbolically."""
    r = sp.symbols("r", positive=True)
    a = sum(c * r ** k for k, c in enumerate(coeffs, start=1))
    u = a / r
    v = r ** 5 * (sp.diff(u, r) - 2 * r * u ** 2)
    lhs = sp.diff(v, r) + 4 * r * u * v
    E = ym_residual(a, sp.diff(a, r), sp.diff(a, r, 2), r)
    assert sp.expand(lhs - r ** 2 * E) == 0
    # and uv_rhs reproduces u' from the state
    s = state_from_profile(float(a.subs(r, r0)), float(sp.diff(a, r).subs(r, r0)), r0)
    assert uv_rhs(s)[0] == pytest.approx(float(sp.diff(u, r).subs(r, r0)), rel=1e-9, abs=1e-9)


def test_instanton_trajectory():
    traj = integrate_ym(YMState(0.1, -1 / 1.01, 0.0), 50.0, 1e-3)
    assert not traj.blew_up
    assert np.max(np.abs(traj.v)) < 1e-10
    assert np.allclose(traj.u, -1 / (traj.r ** 2 + 1), atol=1e-10)
    assert traj.r[-1] == pytest.approx(50.0, abs=1e-12)


def test_zero_state_stays_zero():
    traj = integrate_ym(YMState(1.0, 0.0, 0.0), 2.0, 0.1)
    assert not traj.u.any() and not traj.v.any()


@pytest.mark.parametrize("v0", [1e-3, -2e-2])
def test_v_tracks_its_equation(v0):
    traj = integrate_ym(YMState(0.5, -0.5, v0), 3.0, 1e-3)
    # v' = -4 r u v  ⇒  v = v0 exp(-∫ 4 r u)
    integral = np.concatenate([[0], np.cumsum(np.diff(traj.r) * 0.5 * (4 * traj.r * traj.u)[1:] +
                                              np.diff(traj.r) * 0.5 * (4 * traj.r * traj.u)[:-1])])
    assert np.allclose(traj.v, v0 * np.exp(-integral), rtol=1e-5)


def test_fourth_order_convergence():
    s0 = YMState(0.5, -1.0, 0.01)
    ref = integrate_ym(s0, 3.0, 1e-4).u[-1]
    e1 = abs(integrate_ym(s0, 3.0, 0.02).u[-1] - ref)
    e2 = abs(integrate_ym(s0, 3.0, 0.01).u[-1] - ref)
    assert 16 * 0.7 < e1 / e2 < 16 * 1.3


def test_blow_up_is_reported():
    traj = integrate_ym(YMState(0.1, 10.0, 0.0), 2.0, 1e-3)
    assert traj.blew_up
    assert traj.r[-1] < 0.4
    # the trajectory ends with the step that tripped the guard
    assert np.all(np.isfinite(traj.u[:-1]))
    assert not np.isfinite(traj.u[-1]) or abs(traj.u[-1]) > 1e100


@pytest.mark.parametrize("r_end, step", [(0.05, 1e-3), (1.0, 0.0)])
def test_integrate_rejects(r_end, step):
    with pytest.raises(ValueError):
        integrate_ym(YMState(0.1, 0.0, 0.0), r_end, step)


def test_local_error_is_small():
    traj = integrate_ym(YMState(0.1, -1 / 1.01, 0.0), 5.0, 1e-2)
    assert 0 < traj.max_local_error < 1e-8


def test_csv_output():
    traj = integrate_ym(YMState(1.0, -0.5, 0.0), 1.5, 0.25)
    buf = io.StringIO()
    write_csv(traj, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "r,u,v,a"
    assert len(lines) == len(traj.r) + 1
    row = [float(x) for x in lines[-1].split(",")]
    assert row == [traj.r[-1], traj.u[-1], traj.v[-1], traj.a[-1]]
