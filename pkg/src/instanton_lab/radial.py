"""Radially symmetric connections built from a Lie subalgebra g ⊂ so(n).

On R^n the connection is

    A(x) = (a(r)/r) Σ_j (x ⌟ β_j) ⊗ e_j ,    r = |x|,

i.e. ``r a(r) Σ α_j ⊗ e_j`` with α_j the pull-back of ``∂_r ⌟ β_j`` to the unit
sphere.  Gauge values are n×n matrices.  Curvature uses
``F_{μν} = ∂_μ A_ν - ∂_ν A_μ + [A_μ, A_ν]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from . import linalg
from .exterior import Form, Vector, flat, interior, multi_indices, wedge
from .gstruct import GStructure, field_residual_ratio, structure
from .liealg import LieSubalgebra

__all__ = [
    "ODE_COEFFICIENT",
    "BASIC_CONSTANT",
    "RadialProfile",
    "GaugeField",
    "SamplePlan",
    "connection_at",
    "connection_exact",
    "curvature_fd",
    "curvature_analytic",
    "instanton_ode_residual",
    "verify_instanton_field",
    "negative_ansatz_check",
    "curvature_energy",
    "reference_point",
]

# da/dr = (a/r)(1 + k a r)
ODE_COEFFICIENT = {"su2": Fraction(2), "g2": Fraction(1, 6), "spin7": Fraction(3)}
# a(r) = c_n r / (r² + C) solves the ODE iff k c_n = -2
BASIC_CONSTANT = {g: -2 / k for g, k in ODE_COEFFICIENT.items()}

_STRUCTURE_FOR = {"su2": ("su2", 1), "g2": ("g2", 1), "spin7": ("spin7", 1), "su3": ("su3", 1), "sp2": ("sp", 2)}


def geometry(name: str) -> GStructure:
    try:
        key, n = _STRUCTURE_FOR[name]
    except KeyError:
        raise ValueError(f"unsupported geometry {name!r}") from None
    return structure(key, n)


@dataclass(frozen=True)
class RadialProfile:
    """Radial function a(r) with derivatives.

    ``a_over_r`` maps r² to a(r)/r and is what the connection actually uses; it
    is exact for closed-form profiles evaluated at rational r².
    """

    kind: str
    a: Callable[[float], float]
    da: Callable[[float], float]
    d2a: Callable[[float], float] | None = None
    a_over_r: Callable | None = None
    smooth_at_origin: bool = False
    params: dict = field(default_factory=dict)

    @classmethod
    def closed_form(cls, c, C) -> "RadialProfile":
        """a(r) = c r / (r² + C) with C > 0."""
        if not C > 0:
            raise ValueError("C must be positive")
        cf, Cf = float(c), float(C)
        return cls(
            kind="closedForm",
            a=lambda r: cf * r / (r * r + Cf),
            da=lambda r: cf * (Cf - r * r) / (r * r + Cf) ** 2,
            d2a=lambda r: cf * (2 * r ** 3 - 6 * Cf * r) / (r * r + Cf) ** 3,
            a_over_r=lambda r2: c / (r2 + C),
            smooth_at_origin=True,
            params={"c": c, "C": C},
        )

    @classmethod
    def custom(cls, a, da, d2a=None, smooth_at_origin=False, name="custom") -> "RadialProfile":
        return cls(kind=name, a=a, da=da, d2a=d2a, smooth_at_origin=smooth_at_origin)

    @classmethod
    def tabulated(cls, r, values) -> "RadialProfile":
        """Cubic-spline profile through samples (r_i, a_i)."""
        spline = CubicSpline(np.asarray(r, float), np.asarray(values, float))
        d1, d2 = spline.derivative(1), spline.derivative(2)
        return cls(kind="tabulated", a=lambda x: float(spline(x)), da=lambda x: float(d1(x)), d2a=lambda x: float(d2(x)))

    @classmethod
    def zero(cls) -> "RadialProfile":
        return cls(kind="zero", a=lambda r: 0.0, da=lambda r: 0.0, d2a=lambda r: 0.0,
                   a_over_r=lambda r2: 0 * r2, smooth_at_origin=True)

    def b(self, r: float) -> float:
        """a(r)/r."""
        if self.a_over_r is not None:
            return float(self.a_over_r(r * r))
        return self.a(r) / r

    def db(self, r: float) -> float:
        """d/dr (a(r)/r)."""
        return self.da(r) / r - self.a(r) / (r * r)


@lru_cache(maxsize=None)
def _pairing_exact(algebra: LieSubalgebra):
    """Exact K[ρ][ν] (n×n matrices) with Σ_j β_j ⊗ e_j = ½ Σ K[ρ][ν] dx^ρ∧dx^ν."""
    n = algebra.dim
    zero = Fraction(0)
    K = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for w, F, M in algebra.pairing():
        for (i, j), c in F.items():
            for a in range(n):
                for b in range(n):
                    m = M.entries[a][b]
                    if m:
                        K[i - 1][j - 1][a][b] += w * c * m
                        K[j - 1][i - 1][a][b] -= w * c * m
    return K


@dataclass(frozen=True)
class GaugeField:
    """Radial-ansatz connection for a structure and profile.

    ``form_scale`` multiplies every β_j (used to test scale covariance).
    """

    geometry: GStructure
    profile: RadialProfile
    form_scale: float = 1.0

    @property
    def dim(self) -> int:
        return self.geometry.dim

    @property
    def K(self) -> np.ndarray:
        return _pairing_float(self.geometry.algebra) * float(self.form_scale)


@lru_cache(maxsize=None)
def _pairing_float(algebra: LieSubalgebra) -> np.ndarray:
    return algebra.pairing_tensor()


def _check_point(field: GaugeField, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (field.dim,):
        raise ValueError(f"point must have {field.dim} coordinates")
    return x


def connection_at(field: GaugeField, x) -> np.ndarray:
    """A(x) as an array ``A[ν]`` of n×n matrices (the dx^ν components)."""
    x = _check_point(field, x)
    r = float(np.linalg.norm(x))
    n = field.dim
    if r == 0:
        if field.profile.smooth_at_origin:
            return np.zeros((n, n, n))
        raise ValueError("profile is singular at the origin")
    return field.profile.b(r) * np.einsum("r,rvab->vab", x, field.K)


def connection_batch(field: GaugeField, X: np.ndarray) -> np.ndarray:
    """A at many points; X has shape (p, n), result (p, n, n, n)."""
    r = np.linalg.norm(X, axis=1)
    if np.any(r == 0) and not field.profile.smooth_at_origin:
        raise ValueError("profile is singular at the origin")
    b = np.array([field.profile.b(ri) if ri > 0 else 0.0 for ri in r])
    return b[:, None, None, None] * np.einsum("pr,rvab->pvab", X, field.K)


def connection_exact(field: GaugeField, x, form_scale=1):
    """Exact A(x) for closed-form profiles at rational points (nested Fraction lists)."""
    if field.profile.a_over_r is None:
        raise ValueError("exact evaluation needs a profile with a rational a(r)/r")
    x = [Fraction(c) for c in x]
    r2 = sum(c * c for c in x)
    if r2 == 0:
        if not field.profile.smooth_at_origin:
            raise ValueError("profile is singular at the origin")
    b = Fraction(field.profile.a_over_r(r2)) if r2 else Fraction(0)
    lam = Fraction(form_scale)
    K = _pairing_exact(field.geometry.algebra)
    n = field.dim
    return [
        [[b * lam * sum((x[p] * K[p][v][a][c] for p in range(n)), Fraction(0)) for c in range(n)] for a in range(n)]
        for v in range(n)
    ]


def _assemble(dA: np.ndarray, A: np.ndarray) -> np.ndarray:
    """F[μ,ν] = dA[μ,ν] - dA[ν,μ] + [A_μ, A_ν] with dA[μ,ν] = ∂_μ A_ν."""
    comm = np.einsum("mab,vbc->mvac", A, A) - np.einsum("vab,mbc->mvac", A, A)
    return dA - dA.transpose(1, 0, 2, 3) + comm


def curvature_fd(field: GaugeField, x, h: float = 1e-5) -> np.ndarray:
    """Curvature by central differences; returns ``F[μ, ν]`` n×n matrices."""
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    x = _check_point(field, x)
    n = field.dim
    shifts = np.eye(n) * h
    X = np.concatenate([x + shifts, x - shifts, x[None, :]])
    vals = connection_batch(field, X)
    dA = (vals[:n] - vals[n:2 * n]) / (2 * h)
    return _assemble(dA, vals[2 * n])


def curvature_analytic(field: GaugeField, x) -> np.ndarray:
    """Closed-form curvature of the ansatz at x ≠ 0."""
    x = _check_point(field, x)
    r = float(np.linalg.norm(x))
    if r == 0:
        raise ValueError("analytic curvature is evaluated away from the origin")
    K = field.K
    theta = np.einsum("r,rvab->vab", x, K)
    b, db = field.profile.b(r), field.profile.db(r)
    dA = (db / r) * np.einsum("m,vab->mvab", x, theta) + b * K
    return _assemble(dA, b * theta)


def instanton_ode_residual(geometry_name: str, a: float, da: float, r: float) -> float:
    """a' - (a/r)(1 + k a r) for the geometry's coefficient k."""
    if not r > 0:
        raise ValueError("r must be positive")
    try:
        k = float(ODE_COEFFICIENT[geometry_name])
    except KeyError:
        raise ValueError(f"no instanton ODE for geometry {geometry_name!r}") from None
    return da - a / r * (1 + k * a * r)


@dataclass(frozen=True)
class SamplePlan:
    points: int = 100
    r_min: float = 0.1
    r_max: float = 5.0
    h: float = 1e-5
    tol: float = 1e-4
    seed: int = 0


def sample_points(n: int, plan: SamplePlan) -> np.ndarray:
    rng = np.random.default_rng(plan.seed)
    d = rng.standard_normal((plan.points, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    radii = rng.uniform(plan.r_min, plan.r_max, plan.points)
    return d * radii[:, None]


def verify_instanton_field(geometry_name: str, profile: RadialProfile, plan: SamplePlan = SamplePlan()) -> dict:
    """Residual ratios of the finite-difference curvature at random points."""
    G = geometry(geometry_name)
    fld = GaugeField(G, profile)
    ratios = [field_residual_ratio(curvature_fd(fld, x, plan.h), G.algebra) for x in sample_points(G.dim, plan)]
    max_ratio = max(ratios)
    return {
        "geometry": geometry_name,
        "points": plan.points,
        "max_ratio": max_ratio,
        "mean_ratio": float(np.mean(ratios)),
        "tolerance": plan.tol,
        "passed": max_ratio < plan.tol,
    }


def reference_point(n: int) -> int:
    """1-based coordinate index used as the reference direction."""
    return 8 if n == 8 else 1


def _pairing_matrix(algebra: LieSubalgebra) -> list[list[Fraction]]:
    """W with Σ_j β_j ⊗ e_j = Σ_ij W_ij forms[i] ⊗ basis[j] (rational parts)."""
    m = algebra.rank
    if algebra.source == "table":
        return [[algebra.radicals[i] * algebra.scale[i] if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    ginv = linalg.inverse(algebra.gram())
    return [[ginv[i][j] * algebra.scale[i] for j in range(m)] for i in range(m)]


def component_equations(algebra: LieSubalgebra, ref: int | None = None) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Exact per-component instanton equations at the reference point.

    At x = r u the curvature is ``(r a' P + a (2Q - P) + r a² R) / r`` with
    fixed algebra-valued 2-forms P, Q, R.  Projecting onto g^⊥ (for each
    algebra basis component and each g^⊥ basis direction) gives equations
    ``p r a' + q a + s r a² = 0``; the triples (p, q, s) are returned, zero
    triples dropped.
    """
    n, m = algebra.dim, algebra.rank
    ref = reference_point(n) if ref is None else ref
    u = Vector.basis(n, ref)
    W = _pairing_matrix(algebra)
    zero = Fraction(0)
    pairs = multi_indices(n, 2)
    # θ[ν][j]: coefficient of dx^ν ⊗ e_j in u ⌟ Σ β ⊗ e
    contracted = [interior(u, F).vector() for F in algebra.forms]
    theta = [[sum((contracted[i][v] * W[i][j] for i in range(m)), zero) for j in range(m)] for v in range(n)]
    Q = [[sum((algebra.forms[i][pq] * W[i][j] for i in range(m)), zero) for j in range(m)] for pq in pairs]
    P = [[(theta[q - 1][j] if p == ref else zero) - (theta[p - 1][j] if q == ref else zero) for j in range(m)]
         for p, q in pairs]
    c = algebra.structure_constants
    R = []
    for p, q in pairs:
        row = [zero] * m
        for j in range(m):
            tp = theta[p - 1][j]
            tq = theta[q - 1][j]
            if not tp and not tq:
                continue
            for l in range(m):
                coef = tp * theta[q - 1][l] - tq * theta[p - 1][l]
                if coef:
                    # ½ Σ_{jl} θ_j∧θ_l [e_j, e_l] collapses to the antisymmetrised sum
                    for k in range(m):
                        if c[j][l][k]:
                            row[k] += coef * c[j][l][k] / 2
        R.append(row)
    perp = linalg.nullspace([F.vector() for F in algebra.forms], len(pairs))
    out = []
    for w in perp:
        for k in range(m):
            p_ = sum((w[t] * P[t][k] for t in range(len(pairs))), zero)
            q_ = sum((w[t] * (2 * Q[t][k] - P[t][k]) for t in range(len(pairs))), zero)
            s_ = sum((w[t] * R[t][k] for t in range(len(pairs))), zero)
            if p_ or q_ or s_:
                out.append((p_, q_, s_))
    return out


def _unit(row) -> np.ndarray:
    v = np.array([float(x) for x in row])
    v /= np.linalg.norm(v)
    first = next(x for x in v if abs(x) > 0)
    return v if first > 0 else -v


# The ratio of a closed-form profile depends only on c and t = r/√C, and it
# vanishes like t² at the origin for every profile (F ≈ 2aQ with Q ∈ g), so the
# grid samples radii r = t√C with t ≥ 1.
DEFAULT_GRID = {
    "c": tuple(sorted({float(s * x) for s in (-1, 1) for x in np.logspace(-2, 2, 41)} | {-12.0, -2.0, -1.0, -2 / 3})),
    "C": (0.5, 1.0, 2.0),
    "t": (1.0, 2.0, 4.0, 8.0),
}


def negative_ansatz_check(geometry_name: str, floor: float = 0.05, grid=None) -> dict:
    """Test whether the radial ansatz can produce instantons for a geometry.

    Reports the rank of the exact component-equation system (consistent iff
    rank 1 with p ≠ 0), the largest gap between normalised component
    equations, the recovered ODE coefficient when consistent, and the minimum
    residual ratio over a grid of closed-form profiles.  ``grid`` has keys
    ``c``, ``C`` and ``t`` (radii are ``t √C``).
    """
    G = geometry(geometry_name)
    eqs = component_equations(G.algebra)
    rank = linalg.rank([list(e) for e in eqs]) if eqs else 0
    units = [_unit(e) for e in eqs]
    gap = 0.0
    if rank > 1:
        gap = max(float(np.linalg.norm(a - b)) for i, a in enumerate(units) for b in units[i + 1:])
    consistent = rank == 1 and eqs[0][0] != 0
    k = None
    if consistent:
        p, q, s = eqs[0]
        if q != -p:
            consistent = False
        else:
            k = -s / p
    grid = DEFAULT_GRID if grid is None else grid
    n = G.dim
    u = np.zeros(n)
    u[reference_point(n) - 1] = 1.0
    min_ratio, argmin = math.inf, None
    for cc in grid["c"]:
        for CC in grid["C"]:
            fld = GaugeField(G, RadialProfile.closed_form(cc, CC))
            for t in grid["t"]:
                r = t * math.sqrt(CC)
                ratio = field_residual_ratio(curvature_analytic(fld, r * u), G.algebra)
                if ratio < min_ratio:
                    min_ratio, argmin = ratio, {"c": float(cc), "C": float(CC), "r": r}
    return {
        "geometry": geometry_name,
        "algebra_dim": G.algebra.rank,
        "equations": len(eqs),
        "rank": rank,
        "consistent": consistent,
        "inconsistent": not consistent,
        "gap": gap,
        "ode_coefficient": None if k is None else float(k),
        "ode_coefficient_exact": None if k is None else str(k),
        "grid_min_ratio": float(min_ratio),
        "grid_argmin": argmin,
        "floor": floor,
        "grid_above_floor": min_ratio > floor,
    }


def _sphere_volume(n: int) -> float:
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def curvature_energy(geometry_name: str, profile: RadialProfile, r_max: float = 100.0, rel_tol: float = 1e-12) -> dict:
    """Radial quadrature of ∫ ‖F‖² over the ball of radius r_max.

    ‖F‖² sums squared Frobenius norms of F_{μν} over μ < ν and is constant on
    spheres (the ansatz is equivariant), so it is evaluated on the reference
    ray.  A tail check compares the integral up to r_max and r_max/2.
    """
    G = geometry(geometry_name)
    fld = GaugeField(G, profile)
    n = G.dim
    u = np.zeros(n)
    u[reference_point(n) - 1] = 1.0
    iu = np.triu_indices(n, 1)

    def integrand(r):
        if r == 0:
            r = 1e-12
        F = curvature_analytic(fld, r * u)
        return float(np.sum(F[iu] ** 2)) * r ** (n - 1)

    def integral(upper):
        knots = [0.0] + [k for k in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0) if k < upper] + [upper]
        total, err = 0.0, 0.0
        for lo, hi in zip(knots[:-1], knots[1:]):
            val, e = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200)
            total += val
            err += e
        return total, err

    value, err = integral(r_max)
    half, _ = integral(r_max / 2)
    vol = _sphere_volume(n)
    tail = (value - half) / value if value else 0.0
    return {
        "geometry": geometry_name,
        "r_max": r_max,
        "energy": vol * value,
        "quad_error": vol * err,
        "tail_fraction": tail,
        "divergent": tail > 1e-3,
    }
