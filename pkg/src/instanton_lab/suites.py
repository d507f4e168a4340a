"""Verification suites behind the command-line interface."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import quat as Q
from .exterior import Form, hodge, multi_indices, wedge
from .gstruct import c1, c2, phi, spin7_form, star_phi_printed, structure, su2_forms
from .liealg import bracket, iso, iso_inverse, parse_matrix_terms, same_span, stabilizer_algebra, table_algebra
from .radial import (
    BASIC_CONSTANT,
    ODE_COEFFICIENT,
    RadialProfile,
    SamplePlan,
    curvature_energy,
    instanton_ode_residual,
    negative_ansatz_check,
    verify_instanton_field,
)
from .report import Check, Report, flag, info
from .tables import TABLES
from .yangmills import YMState, integrate_ym, state_from_profile, ym_residual

INSTANTON_GEOMETRIES = ("su2", "g2", "spin7")
NEGATIVE_GEOMETRIES = ("su3", "sp2")
EXPECTED_DIMS = {"su2": 3, "g2": 14, "spin7": 21, "su3": 8, "sp2": 10}


# ---------------------------------------------------------------------------
# algebra


def membership(name: str, beta: Form) -> bool:
    """The defining exact condition for β to lie in the algebra."""
    if name == "su2":
        f = su2_forms()
        return all(wedge(f[k], beta).is_zero() for k in ("sigma", "psi", "psi_hat"))
    if name == "g2":
        return hodge(wedge(phi(), beta)) == -beta and wedge(hodge(phi()), beta).is_zero()
    if name == "spin7":
        return hodge(wedge(spin7_form(), beta)) == -beta
    raise ValueError(name)


def stabilizer_for(name: str):
    G = structure(*{"su2": ("su2",), "g2": ("g2",), "spin7": ("spin7",), "su3": ("su3",), "sp2": ("sp", 2)}[name])
    if name in ("su3", "sp2"):
        return G.algebra
    return stabilizer_algebra(list(G.defining_forms.values()) if name != "g2" else [phi()], name)


def double_star_ok(max_dim: int = 8) -> bool:
    for n in range(1, max_dim + 1):
        for k in range(n + 1):
            sign = (-1) ** (k * (n - k))
            for idx in multi_indices(n, k):
                e = Form(n, k, {idx: 1})
                if hodge(hodge(e)) != e * sign:
                    return False
    return True


def repairs_consistent(name: str = "spin7") -> tuple[bool, list[str]]:
    """Repaired rows must be exactly e3 and e14, each differing from print in one entry pair."""
    g = table_algebra(name)
    n, rows = TABLES[name]
    repaired = []
    for j, (M, F, s) in enumerate(zip(g.basis, g.forms, g.scale), start=1):
        if iso(M) * s != F:
            return False, [f"e{j} inconsistent"]
        (mp, _, mterms), _ = rows[j - 1]
        printed = {k: mp * c for k, c in parse_matrix_terms(mterms).items()}
        actual = {(a + 1, b + 1): M.entries[a][b] for a in range(n) for b in range(n) if M.entries[a][b]}
        if printed != actual:
            repaired.append(f"e{j}")
    return repaired == ["e3", "e14"], repaired


def algebra_suite() -> Report:
    rep = Report("algebra")
    for name, dim in EXPECTED_DIMS.items():
        g = stabilizer_for(name)
        rep.add(Check(f"stabilizer.{name}.dim", abs(g.rank - dim), 0.5, "<", detail={"dim": g.rank, "expected": dim}))
    for name in INSTANTON_GEOMETRIES:
        t = table_algebra(name)
        bad = [j + 1 for j, F in enumerate(t.forms) if not membership(name, F)]
        rep.add(flag(f"table.{name}.membership", not bad, {"failing": bad}))
        rep.add(flag(f"table.{name}.span", same_span(t, stabilizer_for(name))))
    ok, repaired = repairs_consistent()
    rep.add(flag("table.spin7.repairs", ok, {"repaired": repaired}))
    k = [iso_inverse(F) for F in table_algebra("su2").forms]
    rep.add(flag("table.su2.bracket", bracket(k[0], k[1]) == k[2] * -2, {"relation": "[k1,k2] = -2 k3, k_j = iso^-1(beta_j)"}))
    rep.add(flag("hodge.star_phi", hodge(phi()) == star_phi_printed()))
    rep.add(flag("hodge.double_star", double_star_ok()))
    return rep


# ---------------------------------------------------------------------------
# radial instantons


def instanton_suite(geometry: str, C: float = 1.0, points: int = 100, fd_step: float = 1e-5,
                    tol: float = 1e-4, seed: int = 0, radii: int = 1000) -> Report:
    if geometry not in INSTANTON_GEOMETRIES:
        raise ValueError(f"unsupported geometry {geometry!r}")
    c = BASIC_CONSTANT[geometry]
    prof = RadialProfile.closed_form(c, C)
    rep = Report("instanton", {"geometry": geometry, "C": float(C), "c_n": str(c), "points": points,
                               "fd_step": fd_step, "tolerance": tol, "seed": seed, "ode_radii": radii})
    rs = np.logspace(-2, 3, radii)
    ode = max(abs(instanton_ode_residual(geometry, prof.a(r), prof.da(r), r)) for r in rs)
    rep.add(Check("ode_residual", ode, 1e-12))
    plan = SamplePlan(points=points, h=fd_step, tol=tol, seed=seed)
    field = verify_instanton_field(geometry, prof, plan)
    rep.add(Check("field_ratio", field["max_ratio"], tol, detail={"mean": field["mean_ratio"]}))
    bad = RadialProfile.custom(lambda r: r, lambda r: 1.0, smooth_at_origin=True, name="identity")
    control = verify_instanton_field(geometry, bad, plan)
    rep.add(Check("negative_control", control["max_ratio"], 1e-2, ">"))
    if geometry == "su2":
        rep.extend(energy_suite(C), "energy")
    return rep


def energy_suite(C: float = 1.0) -> Report:
    prof = RadialProfile.closed_form(-1, C)
    e100 = curvature_energy("su2", prof, 100.0)
    e200 = curvature_energy("su2", prof, 200.0)
    rel = abs(e200["energy"] - e100["energy"]) / abs(e200["energy"])
    rep = Report("energy", {"C": float(C)})
    rep.add(Check("convergence", rel, 1e-6, detail={"r_max_100": e100["energy"], "r_max_200": e200["energy"]}))
    rep.add(info("value", e200["energy"]))
    const = curvature_energy("su2", RadialProfile.custom(lambda r: 0.5, lambda r: 0.0), 100.0)
    rep.add(flag("constant_profile_divergent", const["divergent"], {"tail_fraction": const["tail_fraction"]}))
    return rep


def negative_suite(geometries=NEGATIVE_GEOMETRIES, controls: bool = True, floor: float = 0.05) -> Report:
    rep = Report("negative", {"geometries": list(geometries), "controls": controls, "floor": floor})
    for g in geometries:
        if g not in NEGATIVE_GEOMETRIES:
            raise ValueError(f"unsupported geometry {g!r}")
        r = negative_ansatz_check(g, floor)
        rep.add(flag(f"{g}.inconsistent", r["inconsistent"], {"rank": r["rank"], "equations": r["equations"]}))
        rep.add(Check(f"{g}.gap", r["gap"], 1e-8, ">"))
        rep.add(Check(f"{g}.grid_min_ratio", r["grid_min_ratio"], floor, ">", detail=r["grid_argmin"]))
    if controls:
        for g in INSTANTON_GEOMETRIES:
            r = negative_ansatz_check(g)
            k = r["ode_coefficient"]
            err = math.inf if k is None else abs(k - float(ODE_COEFFICIENT[g]))
            rep.add(Check(f"control.{g}.ode_coefficient", err, 1e-10,
                          detail={"recovered": r["ode_coefficient_exact"], "expected": str(ODE_COEFFICIENT[g])}))
    return rep


# ---------------------------------------------------------------------------
# Yang–Mills


def ym_order_ratio() -> float:
    s0 = YMState(0.5, -1.0, 0.01)
    ref = integrate_ym(s0, 3.0, 1e-4)
    d = [abs(integrate_ym(s0, 3.0, h).u[-1] - ref.u[-1]) for h in (0.02, 0.01)]
    return d[0] / d[1]


def ym_suite(r0: float = 0.1, u0: float | None = None, v0: float = 0.0, r_end: float = 50.0,
             step: float = 1e-3) -> tuple[Report, object]:
    if u0 is None:
        u0 = -1.0 / (r0 * r0 + 1.0)
    rep = Report("ym", {"r0": r0, "u0": u0, "v0": v0, "r_end": r_end, "step": step})
    a = lambda r: -r / (r * r + 1)
    da = lambda r: (r * r - 1) / (r * r + 1) ** 2
    d2a = lambda r: -(2 * r ** 3 - 6 * r) / (r * r + 1) ** 3
    res = max(abs(ym_residual(a(r), da(r), d2a(r), r)) for r in np.logspace(-2, 2, 500))
    rep.add(Check("instanton_profile_residual", res, 1e-10))
    traj = integrate_ym(YMState(r0, u0, v0), r_end, step)
    if v0 == 0:
        rep.add(Check("instanton_branch_v", float(np.max(np.abs(traj.v))), 1e-10))
    r, u, v = traj.r, traj.u, traj.v
    if len(r) > 2:
        dv = (v[2:] - v[:-2]) / (r[2:] - r[:-2])
        rhs = -4 * r[1:-1] * u[1:-1] * v[1:-1]
        scale = max(float(np.max(np.abs(rhs))), 1e-300)
        rep.add(Check("dv_consistency", float(np.max(np.abs(dv - rhs))) / scale, 1e-4))
    rep.add(info("blew_up", traj.blew_up, {"r_last": float(r[-1])}))
    rep.add(info("max_local_error", traj.max_local_error))
    ratio = ym_order_ratio()
    rep.add(Check("order_ratio_deviation", abs(ratio / 16 - 1), 0.3, detail={"ratio": ratio}))
    return rep, traj


# ---------------------------------------------------------------------------
# Nahm / quaternionic

# Tabulated T(s) is spline-interpolated, so the Nahm equations (and hence the
# duality of the curvature) hold only to interpolation accuracy.
FILE_TOLERANCE = 1e-6

DEFAULT_FIELDS = {1: "sd:A=1,B1=0.5,C=1", 2: "h2:f1.A=1,f1.A1=0.5,f2.B12=1,C1=1,D2=0.5,E3=-1,F1=0.25"}


def _sample_points(f: Q.ScalarField, sol: Q.NahmSolution, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(100 * count):
        x = rng.standard_normal(f.dim) * 1.5
        try:
            val = f.value(x)
        except ValueError:
            continue
        if sol.contains(val) and np.linalg.norm(x) > 0.2:
            pts.append(x)
            if len(pts) == count:
                break
    if len(pts) < count:
        raise ValueError("could not sample enough points where f lies in the solution interval")
    return np.array(pts)


def nahm_suite(solution: str = "pole", field_spec: str | None = None, dim: int = 1, points: int = 50,
               seed: int = 0, solution_file: str | None = None) -> tuple[Report, Q.NahmSolution]:
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    field_spec = DEFAULT_FIELDS[dim] if field_spec is None else field_spec
    spec = Q.parse_field_spec(field_spec)
    family = spec["family"]
    if (family == "h2") != (dim == 2):
        raise ValueError(f"field family {family!r} does not live on H^{dim}")
    f = Q.example_field_factory(spec)
    if solution == "pole":
        sol = Q.NahmSolution.pole()
    elif solution == "file":
        if not solution_file:
            raise ValueError("--solution file needs --solution-file")
        with open(solution_file, newline="") as fh:
            sol = Q.read_nahm_csv(fh)
    else:
        raise ValueError(f"unknown solution kind {solution!r}")
    sign = 1 if family == "sd" else -1
    rep = Report("nahm", {"solution": solution, "field": field_spec, "dim": dim, "points": points, "seed": seed,
                          "sign": sign})
    if solution == "pole":
        rep.add(Check("nahm_residual_s1", Q.nahm_residual(sol, 1.0), 1e-14))
        grid = np.linspace(0.1, 10.0, 100)
        rel = max(Q.nahm_residual(sol, s) / max(1.0, sol.algebra.norm(sol.dT(s)[0])) for s in grid)
        rep.add(Check("nahm_residual_relative", rel, 1e-12))
    else:
        lo, hi = sol.interval
        grid = np.linspace(lo, hi, 101)[1:-1]
        rel = max(Q.nahm_residual(sol, s) / max(1.0, sol.algebra.norm(sol.dT(s)[0])) for s in grid)
        rep.add(Check("nahm_residual_relative", rel, FILE_TOLERANCE))
    exact_tol = 1e-10 if solution == "pole" else FILE_TOLERANCE
    X = _sample_points(f, sol, points, seed)
    fld = Q.quat_connection(sol, f, sign)
    curvs = [Q.quat_curvature(fld, x) for x in X]
    fd = max(np.linalg.norm(Q.curvature_fd(fld, x) - F) / max(np.linalg.norm(F), 1e-300)
             for x, F in zip(X[:10], curvs[:10]))
    rep.add(Check("fd_agreement", float(fd), 1e-6))
    if dim == 1:
        duality = max(Q.duality_ratio(F, sign) for F in curvs)
        rep.add(Check("self_dual" if sign == 1 else "anti_self_dual", duality, exact_tol))
        if family == "sd":
            rep.add(Check("sd_system", max(Q.sd_system_residual(f, x) for x in X), 1e-12))
        else:
            rep.add(Check("laplacian", max(abs(np.trace(f.hessian(x))) for x in X), 1e-9))
    else:
        rep.add(Check("asd_hn_residual", max(Q.asd_hn_residual(f, 2, x) for x in X), 1e-9))
        rep.add(Check("quat_asd_ratio", max(Q.quat_ratio(F, 2, c1(2)) for F in curvs), exact_tol,
                      detail={"c1": str(c1(2))}))
    return rep, sol


def sd_h2_counterexample(seed: int = 0) -> Report:
    """The SD analogue on H² fails: find a sample with a large defect for c₂."""
    rep = Report("sd_h2", {"c2": str(c2(2)), "seed": seed})
    f = Q.ScalarField.quadratic(np.eye(8), c=1.0, label="x.x+1")
    fld = Q.quat_connection(Q.NahmSolution.pole(), f, 1)
    X = _sample_points(f, fld.solution, 20, seed)
    worst = max(Q.quat_ratio(Q.quat_curvature(fld, x), 2, c2(2)) for x in X)
    rep.add(Check("counterexample", worst, 1e-3, ">"))
    return rep


def all_suite(seed: int = 0) -> Report:
    rep = Report("all", {"seed": seed})
    rep.extend(algebra_suite())
    for g in INSTANTON_GEOMETRIES:
        rep.extend(instanton_suite(g, seed=seed), f"instanton.{g}")
    rep.extend(negative_suite())
    rep.extend(ym_suite()[0])
    rep.extend(nahm_suite(dim=1, seed=seed)[0], "nahm.sd")
    rep.extend(nahm_suite(dim=1, field_spec="asd:A=1,A1=0.5,A2=-0.25,B12=0.3,B34=1,B2=1,C=5", seed=seed)[0], "nahm.asd")
    rep.extend(nahm_suite(dim=2, seed=seed)[0], "nahm.h2")
    rep.extend(sd_h2_counterexample(seed))
    return rep
