"""Flat G-structures on R^n and the instanton conditions on curvature 2-forms.

A 2-form Ω is a G-instanton curvature when it lies in g ⊂ Λ².  The
quantitative defect is the residual ratio ``‖Ω_perp‖ / ‖Ω‖`` where ``Ω_perp`` is
the component orthogonal to g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .exterior import Form, dx, hodge, inner, multi_indices, parse_form, wedge
from .liealg import (
    LieSubalgebra,
    _structure_constants,
    iso_inverse,
    project_to_subalgebra,
    stabilizer_algebra,
    table_algebra,
)

__all__ = [
    "GStructure",
    "su2_forms",
    "phi",
    "star_phi_printed",
    "spin7_form",
    "su3_forms",
    "kahler_triple",
    "fundamental_four_form",
    "c1",
    "c2",
    "structure",
    "is_instanton",
    "is_asd",
    "is_sd",
    "quat_sd_predicate",
    "quat_asd_predicate",
    "quat_operator",
    "field_residual_ratio",
]


@dataclass(frozen=True)
class GStructure:
    name: str
    dim: int
    defining_forms: Mapping[str, Form]
    algebra: LieSubalgebra
    constants: Mapping[str, Fraction] = field(default_factory=dict)

    @property
    def quat_n(self) -> int:
        return self.dim // 4


def c1(n: int) -> Fraction:
    """ASD constant on H^n: -(2n-1)!/2^(n-1)."""
    return Fraction(-math.factorial(2 * n - 1), 2 ** (n - 1))


def c2(n: int) -> Fraction:
    """SD constant on H^n: (2n+1)!/(6n 2^(n-1))."""
    return Fraction(math.factorial(2 * n + 1), 6 * n * 2 ** (n - 1))


def _complex_wedge(a, b):
    (ar, ai), (br, bi) = a, b
    return wedge(ar, br) - wedge(ai, bi), wedge(ar, bi) + wedge(ai, br)


def _holomorphic_volume(m: int) -> tuple[Form, Form]:
    """Real and imaginary parts of (dx1+i dx2)∧...∧(dx_{2m-1}+i dx_{2m}) on R^{2m}."""
    n = 2 * m
    acc = (dx(n, 1), dx(n, 2))
    for k in range(1, m):
        acc = _complex_wedge(acc, (dx(n, 2 * k + 1), dx(n, 2 * k + 2)))
    return acc


def su2_forms() -> dict[str, Form]:
    """σ, ψ = Re Ψ and ψ̂ = Im Ψ on R⁴."""
    psi, psi_hat = _holomorphic_volume(2)
    return {"sigma": parse_form("dx12+dx34", 4), "psi": psi, "psi_hat": psi_hat}


def phi() -> Form:
    """The G2 3-form on R⁷."""
    n = 7
    f = lambda s: parse_form(s, n)
    return (
        dx(n, 1, 2, 3)
        + wedge(dx(n, 1), f("dx45+dx67"))
        + wedge(dx(n, 2), f("dx46+dx75"))
        - wedge(dx(n, 3), f("dx47+dx56"))
    )


def star_phi_printed() -> Form:
    """The dual 4-form as printed, built term by term (independent of :func:`hodge`)."""
    n = 7
    f = lambda s: parse_form(s, n)
    return (
        dx(n, 4, 5, 6, 7)
        + wedge(dx(n, 2, 3), f("dx45+dx67"))
        + wedge(dx(n, 3, 1), f("dx46+dx75"))
        - wedge(dx(n, 1, 2), f("dx47+dx56"))
    )


def _lift(form: Form, n: int) -> Form:
    return Form(n, form.grade, dict(form.items()))


def spin7_form() -> Form:
    """Φ = φ ∧ dx⁸ + *₇φ on R⁸."""
    return wedge(_lift(phi(), 8), dx(8, 8)) + _lift(hodge(phi()), 8)


def su3_forms() -> dict[str, Form]:
    """Kähler form and holomorphic volume form on R⁶ = C³."""
    re_vol, im_vol = _holomorphic_volume(3)
    return {"omega": parse_form("dx12+dx34+dx56", 6), "re_vol": re_vol, "im_vol": im_vol}


def kahler_triple(n: int) -> tuple[Form, Form, Form]:
    """σ₁, σ₂, σ₃ on H^n = R^{4n}."""
    N = 4 * n
    s1, s2, s3 = Form(N, 2), Form(N, 2), Form(N, 2)
    for j in range(n):
        b = 4 * j
        s1 = s1 + dx(N, b + 1, b + 2) + dx(N, b + 3, b + 4)
        s2 = s2 + dx(N, b + 1, b + 3) + dx(N, b + 4, b + 2)
        s3 = s3 + dx(N, b + 1, b + 4) + dx(N, b + 2, b + 3)
    return s1, s2, s3


def fundamental_four_form(n: int) -> Form:
    """Σ = ½(σ₁² + σ₂² + σ₃²)."""
    s1, s2, s3 = kahler_triple(n)
    return (wedge(s1, s1) + wedge(s2, s2) + wedge(s3, s3)) * Fraction(1, 2)


def _span_algebra(forms, name: str) -> LieSubalgebra:
    basis = tuple(iso_inverse(F) for F in forms)
    one = Fraction(1)
    return LieSubalgebra(
        name=name,
        dim=forms[0].dim,
        basis=basis,
        forms=tuple(forms),
        scale=tuple(one for _ in forms),
        radicals=tuple(one for _ in forms),
        structure_constants=_structure_constants(basis),
        source="span",
    )


@lru_cache(maxsize=None)
def structure(name: str, n: int = 1) -> GStructure:
    """Named structure: su2, g2, spin7, su3, sp (uses ``n``), quatASD, quatSD (use ``n``)."""
    if name == "su2":
        forms = su2_forms()
        return GStructure("su2", 4, forms, table_algebra("su2"))
    if name == "g2":
        return GStructure("g2", 7, {"phi": phi(), "star_phi": hodge(phi())}, table_algebra("g2"))
    if name == "spin7":
        return GStructure("spin7", 8, {"Phi": spin7_form()}, table_algebra("spin7"))
    if name == "su3":
        forms = su3_forms()
        return GStructure("su3", 6, forms, stabilizer_algebra(list(forms.values()), "su3"))
    if name in ("sp", "quatASD", "quatSD"):
        s = kahler_triple(n)
        forms = {"sigma1": s[0], "sigma2": s[1], "sigma3": s[2], "Sigma": fundamental_four_form(n)}
        consts = {"c1": c1(n), "c2": c2(n)}
        if name == "quatSD":
            algebra = _span_algebra(list(s), "sp1")
        else:
            algebra = stabilizer_algebra(list(s), f"sp{n}")
        label = "sp" if name == "sp" else name
        return GStructure(label, 4 * n, forms, algebra, consts)
    raise ValueError(f"unknown structure {name!r}")


def _norm_ratio(out_sq, tot_sq) -> float:
    if tot_sq == 0:
        return 0.0
    return math.sqrt(float(out_sq) / float(tot_sq))


@lru_cache(maxsize=None)
def quat_operator(n: int, c: Fraction) -> tuple[tuple[Fraction, ...], ...]:
    """Exact matrix of ``Ω ↦ Ω∧Σ^{n-1} - c *Ω`` on Λ² of R^{4n} (rows: output Λ^{4n-2})."""
    N = 4 * n
    sigma_pow = fundamental_four_form(n) ** (n - 1)
    cols = []
    for idx in multi_indices(N, 2):
        e = Form(N, 2, {idx: 1})
        cols.append((wedge(e, sigma_pow) - hodge(e) * c).vector())
    return tuple(tuple(r) for r in zip(*cols))


def _quat_residual(omega: Form, n: int, c: Fraction, tol: float) -> tuple[bool, float]:
    if omega.dim != 4 * n or omega.grade != 2:
        raise ValueError(f"expected a 2-form on R^{4 * n}")
    M = quat_operator(n, c)
    v = omega.vector()
    if tol == 0 and omega.is_exact():
        out = [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]
        out_sq = sum(x * x for x in out)
        tot_sq = sum(x * x for x in v)
        return out_sq == 0, _norm_ratio(out_sq, tot_sq * c * c)
    Mf = _float_op(n, c)
    vf = np.array([float(x) for x in v])
    nv = np.linalg.norm(vf)
    ratio = 0.0 if nv == 0 else float(np.linalg.norm(Mf @ vf) / (abs(float(c)) * nv))
    return ratio <= tol, ratio


@lru_cache(maxsize=None)
def _float_op(n: int, c: Fraction) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in quat_operator(n, c)])


def quat_asd_predicate(omega: Form, n: int, tol: float = 0) -> bool:
    """Ω∧Σ^{n-1} = c₁ *Ω."""
    return _quat_residual(omega, n, c1(n), tol)[0]


def quat_sd_predicate(omega: Form, n: int, tol: float = 0) -> bool:
    """Ω∧Σ^{n-1} = c₂ *Ω."""
    return _quat_residual(omega, n, c2(n), tol)[0]


def is_instanton(omega: Form, G: GStructure, tol: float = 0) -> tuple[bool, float]:
    """Whether Ω lies in g, with the residual ratio ‖Ω_perp‖/‖Ω‖ (0 for Ω = 0).

    ``tol == 0`` with rational input uses exact arithmetic.  For the
    quaternionic structures the wedge predicate with Σ is evaluated directly and
    must agree with the projection test.
    """
    if omega.grade != 2 or omega.dim != G.dim:
        raise ValueError(f"expected a 2-form on R^{G.dim}, got grade {omega.grade} on R^{omega.dim}")
    exact = tol == 0 and omega.is_exact()
    inside, outside = project_to_subalgebra(omega if exact else omega.to_float(), G.algebra)
    ratio = _norm_ratio(inner(outside, outside), inner(omega, omega))
    ok = outside.is_zero() if exact else ratio <= tol
    if G.name in ("quatASD", "quatSD"):
        n = G.quat_n
        c = c1(n) if G.name == "quatASD" else c2(n)
        direct, _ = _quat_residual(omega, n, c, tol)
        if exact and direct != ok:
            raise AssertionError(f"{G.name}: wedge predicate and projection disagree")
        ok = direct if exact else ok
    return ok, ratio


def _check4(omega: Form):
    if omega.dim != 4 or omega.grade != 2:
        raise ValueError("self-duality is defined here for 2-forms on R^4")


def is_asd(omega: Form, tol: float = 0) -> bool:
    _check4(omega)
    if tol == 0:
        return hodge(omega) == -omega
    d = hodge(omega) + omega
    return math.sqrt(float(inner(d, d))) <= tol * max(math.sqrt(float(inner(omega, omega))), 1e-300)


def is_sd(omega: Form, tol: float = 0) -> bool:
    _check4(omega)
    if tol == 0:
        return hodge(omega) == omega
    d = hodge(omega) - omega
    return math.sqrt(float(inner(d, d))) <= tol * max(math.sqrt(float(inner(omega, omega))), 1e-300)


def field_residual_ratio(F: np.ndarray, algebra: LieSubalgebra) -> float:
    """Residual ratio for a Lie-algebra-valued 2-form.

    ``F[μ, ν, ...]`` is antisymmetric in its first two axes; trailing axes carry
    the gauge-algebra components (matrix entries or coefficients).  Only the
    form slot is projected.
    """
    n = F.shape[0]
    iu = np.triu_indices(n, 1)
    V = F[iu].reshape(len(iu[0]), -1)
    P = algebra.projector()
    perp = V - P @ V
    tot = np.linalg.norm(V)
    return 0.0 if tot == 0 else float(np.linalg.norm(perp) / tot)


def hodge_matrix(n: int, k: int) -> np.ndarray:
    """Float matrix of * from Λ^k to Λ^{n-k} in multi-index coordinates."""
    cols = [hodge(Form(n, k, {idx: 1})).vector(float) for idx in multi_indices(n, k)]
    return np.array(cols).T
