"""Nahm's equations and the quaternionic connection ansatz on H^n = R^{4n}.

Given T = (T₁, T₂, T₃) with values in a gauge algebra k and a scalar function
f, the connection is ``ω = sign · Σ_i T_i(f) J^i(df)``.  Gauge values are
coordinate vectors in a basis of k; brackets use stored structure constants,
so abstract algebras work as well as matrix ones.

Curvature convention: ``F_{μν} = ∂_μ A_ν - ∂_ν A_μ + [A_μ, A_ν]``.  For the
ansatz this is

    sign Σ_i (T_i'(f) df∧θ_i + T_i(f) dθ_i) + Σ_cyclic [T_j, T_k] θ_j∧θ_k,

with θ_i = J^i(df) and ``(dθ_i)_{μν} = (J^i H)_{νμ} - (J^i H)_{μν}``.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Mapping, Sequence, TextIO

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import kernels
from .exterior import Form, multi_indices
from .gstruct import c1, c2, fundamental_four_form, hodge_matrix, kahler_triple, quat_operator
from .liealg import iso_inverse, table_algebra

__all__ = [
    "GaugeAlgebra",
    "NahmSolution",
    "nahm_residual",
    "integrate_nahm",
    "QuatStructure",
    "quat_structure",
    "j_action",
    "ScalarField",
    "example_field_factory",
    "parse_field_spec",
    "QuatField",
    "quat_connection",
    "quat_curvature",
    "curvature_fd",
    "sd_system_residual",
    "asd_hn_residual",
    "duality_ratio",
    "write_nahm_csv",
    "read_nahm_csv",
    "quat_ratio",
]

_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


# ---------------------------------------------------------------------------
# gauge algebra


@dataclass(frozen=True, eq=False)
class GaugeAlgebra:
    """Basis {k_a} with ``[k_a, k_b] = Σ_c c[a,b,c] k_c``; matrices optional."""

    structure_constants: np.ndarray
    matrices: np.ndarray | None = None
    name: str = "k"

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    @classmethod
    def from_matrices(cls, mats, name="k") -> "GaugeAlgebra":
        mats = np.asarray(mats, dtype=float)
        m = len(mats)
        B = mats.reshape(m, -1).T
        c = np.empty((m, m, m))
        for a in range(m):
            for b in range(m):
                comm = (mats[a] @ mats[b] - mats[b] @ mats[a]).ravel()
                coef, *_ = np.linalg.lstsq(B, comm, rcond=None)
                if np.linalg.norm(B @ coef - comm) > 1e-10 * max(1.0, np.linalg.norm(comm)):
                    raise ValueError("matrices do not span a Lie algebra")
                c[a, b] = coef
        return cls(c, mats, name)

    @classmethod
    def su2(cls) -> "GaugeAlgebra":
        """k_j = the endomorphisms paired with β_j on R⁴; [k₁, k₂] = -2 k₃ cyclically."""
        g = table_algebra("su2")
        mats = [iso_inverse(F).to_array() for F in g.forms]
        return cls.from_matrices(mats, "su2")

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("a,b,abc->c", x, y, self.structure_constants)

    def to_matrix(self, x) -> np.ndarray:
        if self.matrices is None:
            raise ValueError("algebra has no matrix realisation")
        return np.tensordot(x, self.matrices, axes=1)

    def norm(self, x) -> float:
        """Frobenius norm of the matrix when available, else the coordinate norm."""
        x = np.asarray(x, dtype=float)
        if self.matrices is not None:
            return float(np.linalg.norm(self.to_matrix(x)))
        return float(np.linalg.norm(x))

    @cached_property
    def killing(self) -> np.ndarray:
        """B(k_a, k_b) = tr(ad k_a ad k_b)."""
        c = self.structure_constants
        return np.einsum("alk,bkl->ab", c, c)


# ---------------------------------------------------------------------------
# Nahm's equations


def _nahm_rhs(T: np.ndarray, alg: GaugeAlgebra) -> np.ndarray:
    return np.stack([alg.bracket(T[j], T[k]) for _, j, k in _CYCLIC])


@dataclass(frozen=True)
class NahmSolution:
    """T(s) and T'(s) as (3, m) coordinate arrays on the interval ``(lo, hi)``.

    ``closed`` says whether the interval endpoints belong to the domain.
    """

    kind: str
    algebra: GaugeAlgebra
    T: Callable[[float], np.ndarray]
    dT: Callable[[float], np.ndarray]
    interval: tuple[float, float]
    closed: bool = False
    samples: dict | None = None

    def contains(self, s: float) -> bool:
        lo, hi = self.interval
        return (lo <= s <= hi) if self.closed else (lo < s < hi)

    def check(self, s: float) -> None:
        if not self.contains(s):
            raise ValueError(f"s = {s!r} lies outside the solution interval {self.interval}")

    @classmethod
    def pole(cls, algebra: GaugeAlgebra | None = None) -> "NahmSolution":
        """T_i(s) = k_i / (2s) on (0, ∞); needs [k₁, k₂] = -2 k₃ cyclically."""
        algebra = GaugeAlgebra.su2() if algebra is None else algebra
        E = np.zeros((3, algebra.dim))
        E[0, 0] = E[1, 1] = E[2, 2] = 1.0
        return cls("pole", algebra, lambda s: E / (2 * s), lambda s: -E / (2 * s * s), (0.0, math.inf))

    @classmethod
    def constant(cls, T0, algebra: GaugeAlgebra) -> "NahmSolution":
        T0 = np.asarray(T0, dtype=float)
        return cls("custom", algebra, lambda s: T0, lambda s: np.zeros_like(T0), (-math.inf, math.inf))

    @classmethod
    def custom(cls, T, dT, algebra: GaugeAlgebra, interval=(-math.inf, math.inf), closed=False) -> "NahmSolution":
        return cls("custom", algebra, T, dT, tuple(interval), closed)


def nahm_residual(sol: NahmSolution, s: float) -> float:
    """max over cyclic (ijk) of ‖T_i'(s) - [T_j(s), T_k(s)]‖."""
    sol.check(s)
    T, dT = np.asarray(sol.T(s)), np.asarray(sol.dT(s))
    rhs = _nahm_rhs(T, sol.algebra)
    return max(sol.algebra.norm(dT[i] - rhs[i]) for i in range(3))


def trace_invariants(T: np.ndarray, alg: GaugeAlgebra) -> np.ndarray:
    """Killing-form pairings B(T₁,T₂), B(T₂,T₃), B(T₃,T₁), B(T₁,T₁)-B(T₂,T₂), B(T₂,T₂)-B(T₃,T₃)."""
    B = alg.killing
    g = lambda x, y: float(x @ B @ y)
    return np.array([
        g(T[0], T[1]), g(T[1], T[2]), g(T[2], T[0]),
        g(T[0], T[0]) - g(T[1], T[1]), g(T[1], T[1]) - g(T[2], T[2]),
    ])


def integrate_nahm(T0, interval: tuple[float, float], algebra: GaugeAlgebra | None = None,
                   step: float = 1e-3, guard: float = 1e8) -> NahmSolution:
    """Fixed-step RK4 for Nahm's equations starting at ``interval[0]``.

    On blow-up the returned solution's interval ends at the last finite
    sample and ``samples["blew_up"]`` is set.  ``samples["invariant_drift"]``
    is the largest change of the Killing-form invariants.
    """
    algebra = GaugeAlgebra.su2() if algebra is None else algebra
    s0, s1 = interval
    if not (step > 0 and s1 > s0):
        raise ValueError("need step > 0 and a non-empty interval")
    T0 = np.asarray(T0, dtype=float).reshape(3, algebra.dim)
    nsteps = max(1, math.ceil((s1 - s0) / step - 1e-9))
    h = (s1 - s0) / nsteps
    traj, err, stopped = kernels.nahm_rk4(T0, algebra.structure_constants, h, nsteps, guard)
    traj = np.asarray(traj)
    blew_up = stopped >= 0
    if blew_up:
        traj = traj[:-1]
    s = s0 + h * np.arange(len(traj))
    inv = np.array([trace_invariants(T, algebra) for T in traj])
    drift = float(np.max(np.abs(inv - inv[0]))) if len(inv) else 0.0
    derivs = np.array([_nahm_rhs(T, algebra) for T in traj])
    samples = {
        "s": s,
        "T": traj,
        "local_error": np.asarray(err)[: len(traj)],
        "blew_up": blew_up,
        "invariants": inv,
        "invariant_drift": drift,
        "backend": kernels.BACKEND,
    }
    if len(traj) < 2:
        T = lambda x: traj[0]
        dT = lambda x: derivs[0]
    else:
        spline = CubicHermiteSpline(s, traj.reshape(len(s), -1), derivs.reshape(len(s), -1))
        d1 = spline.derivative()
        shape = traj.shape[1:]
        T = lambda x: spline(x).reshape(shape)
        dT = lambda x: d1(x).reshape(shape)
    return NahmSolution("integrated", algebra, T, dT, (s0, float(s[-1])), True, samples)


def write_nahm_csv(sol: NahmSolution, stream: TextIO, s_values: Sequence[float] | None = None) -> None:
    """CSV with columns s, T1_1..T1_m, T2_1.., T3_1..."""
    m = sol.algebra.dim
    if s_values is None:
        if sol.samples is None:
            raise ValueError("sample points are required for this solution")
        s_values = sol.samples["s"]
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["s"] + [f"T{i + 1}_{a + 1}" for i in range(3) for a in range(m)])
    for s in s_values:
        T = np.asarray(sol.T(s)).ravel()
        w.writerow([repr(float(s))] + [repr(float(x)) for x in T])


def read_nahm_csv(stream: TextIO, algebra: GaugeAlgebra | None = None) -> NahmSolution:
    """Load a sampled trajectory written by :func:`write_nahm_csv`.

    T is a cubic spline through the samples and T' its derivative, so the Nahm
    residual measures how well the data solve the equations.
    """
    from scipy.interpolate import CubicSpline

    rows = list(csv.reader(stream))
    if not rows or rows[0][0] != "s" or (len(rows[0]) - 1) % 3:
        raise ValueError("expected a header 's,T1_1,...' with 3m value columns")
    m = (len(rows[0]) - 1) // 3
    algebra = GaugeAlgebra.su2() if algebra is None else algebra
    if algebra.dim != m:
        raise ValueError(f"file has {m} coordinates per T_i but the algebra has dimension {algebra.dim}")
    data = np.array([[float(x) for x in r] for r in rows[1:] if r])
    if len(data) < 4:
        raise ValueError("need at least four samples")
    s = data[:, 0]
    spline = CubicSpline(s, data[:, 1:])
    d1 = spline.derivative()
    return NahmSolution("integrated", algebra, lambda x: spline(x).reshape(3, m), lambda x: d1(x).reshape(3, m),
                        (float(s[0]), float(s[-1])), True, {"s": s, "T": data[:, 1:].reshape(-1, 3, m)})


# ---------------------------------------------------------------------------
# quaternionic structure

# (target, source, sign) within a block: J^i(df) = Σ sign f_source dx_target
J_BLOCKS = (
    ((1, 2, -1), (2, 1, 1), (3, 4, -1), (4, 3, 1)),
    ((1, 3, -1), (2, 4, 1), (3, 1, 1), (4, 2, -1)),
    ((1, 4, -1), (2, 3, -1), (3, 2, 1), (4, 1, 1)),
)


@dataclass(frozen=True, eq=False)
class QuatStructure:
    n: int

    @property
    def dim(self) -> int:
        return 4 * self.n

    @cached_property
    def J(self) -> np.ndarray:
        """J[i] acts on coefficient vectors of 1-forms: J^i(df) has coefficients J[i] @ ∇f."""
        N = self.dim
        J = np.zeros((3, N, N))
        for i, table in enumerate(J_BLOCKS):
            for blk in range(self.n):
                for t, s, sign in table:
                    J[i, 4 * blk + t - 1, 4 * blk + s - 1] = sign
        return J

    @cached_property
    def sigmas(self) -> tuple[Form, Form, Form]:
        return kahler_triple(self.n)

    @cached_property
    def Sigma(self) -> Form:
        return fundamental_four_form(self.n)


@lru_cache(maxsize=None)
def quat_structure(n: int) -> QuatStructure:
    return QuatStructure(n)


def j_action(i: int, one_form, Q: QuatStructure):
    """J^i applied to a 1-form given as a coefficient vector or a grade-1 :class:`Form`."""
    if i not in (1, 2, 3):
        raise ValueError("i must be 1, 2 or 3")
    if isinstance(one_form, Form):
        if one_form.grade != 1 or one_form.dim != Q.dim:
            raise ValueError(f"expected a 1-form on R^{Q.dim}")
        v = one_form.vector()
        out = {}
        for blk in range(Q.n):
            for t, s, sign in J_BLOCKS[i - 1]:
                c = v[4 * blk + s - 1]
                if c:
                    out[(4 * blk + t,)] = sign * c
        return Form(Q.dim, 1, out)
    v = np.asarray(one_form, dtype=float)
    if v.shape != (Q.dim,):
        raise ValueError(f"expected {Q.dim} coefficients")
    return Q.J[i - 1] @ v


# ---------------------------------------------------------------------------
# scalar fields


@dataclass(frozen=True)
class ScalarField:
    """f(x) = xᵀ Q x + b·x + c + Σ_B A_B (x_B·x_B)^{-1}.

    ``inverse_square`` maps an index block (0-based tuple) to its coefficient.
    Alternatively ``func`` supplies ``(value, gradient, hessian)`` directly.
    """

    dim: int
    Q: np.ndarray | None = None
    b: np.ndarray | None = None
    c: float = 0.0
    inverse_square: Mapping[tuple[int, ...], float] = field(default_factory=dict)
    func: Callable | None = None
    label: str = ""

    @classmethod
    def quadratic(cls, Q, b=None, c=0.0, inverse_square=None, label="") -> "ScalarField":
        Q = np.asarray(Q, dtype=float)
        Q = (Q + Q.T) / 2
        dim = Q.shape[0]
        b = np.zeros(dim) if b is None else np.asarray(b, dtype=float)
        return cls(dim, Q, b, float(c), dict(inverse_square or {}), None, label)

    @classmethod
    def from_callable(cls, dim, func, label="custom") -> "ScalarField":
        """``func(x) -> (value, gradient, hessian)``."""
        return cls(dim, func=func, label=label)

    @property
    def singular_at_origin(self) -> bool:
        return any(a != 0 for a in self.inverse_square.values())

    def evaluate(self, x) -> tuple[float, np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"point must have {self.dim} coordinates")
        if self.func is not None:
            v, g, H = self.func(x)
            return float(v), np.asarray(g, float), np.asarray(H, float)
        val = float(x @ self.Q @ x + self.b @ x + self.c)
        grad = 2 * self.Q @ x + self.b
        H = 2 * self.Q.copy()
        for blk, A in self.inverse_square.items():
            if A == 0:
                continue
            idx = list(blk)
            xb = x[idx]
            rho = float(xb @ xb)
            if rho == 0:
                raise ValueError("inverse-square term is singular at this point")
            val += A / rho
            grad[idx] += -2 * A * xb / rho ** 2
            H[np.ix_(idx, idx)] += A * (-2 * np.eye(len(idx)) / rho ** 2 + 8 * np.outer(xb, xb) / rho ** 3)
        return val, grad, H

    def value(self, x) -> float:
        return self.evaluate(x)[0]

    def gradient(self, x) -> np.ndarray:
        return self.evaluate(x)[1]

    def hessian(self, x) -> np.ndarray:
        return self.evaluate(x)[2]


_H2_COMPENSATORS = {
    # key: (monomial, defining coefficients with signs, printed constraint)
    "C4": ((3, 7), {"C1": -1, "C2": -1, "C3": -1}, "C4 = -(C1+C2+C3)"),
    "D4": ((3, 6), {"D1": -1, "D2": 1, "D3": 1}, "D4 = -(D1-D2-D3)"),
    "E4": ((3, 5), {"E1": 1, "E2": 1, "E3": -1}, "E4 = E1+E2-E3"),
    "F4": ((3, 4), {"F1": 1, "F2": -1, "F3": 1}, "F4 = F1-F2+F3"),
}
_H2_MONOMIALS = {
    "C1": (0, 4), "C2": (1, 5), "C3": (2, 6),
    "D1": (0, 5), "D2": (1, 4), "D3": (2, 7),
    "E1": (0, 6), "E2": (1, 7), "E3": (2, 4),
    "F1": (0, 7), "F2": (1, 6), "F3": (2, 5),
}


def _num(v) -> float:
    return float(Fraction(v)) if isinstance(v, str) else float(v)


def _check_compensator(spec: Mapping, key: str, expected: float, constraint: str) -> None:
    if key in spec and not math.isclose(_num(spec[key]), expected, rel_tol=1e-12, abs_tol=1e-12):
        raise ValueError(f"coefficient {key} violates the constraint {constraint}")


def _asd_block(spec: Mapping, offset: int, Q: np.ndarray, b: np.ndarray, inv: dict, allowed_extra=()) -> float:
    """Add an ASD-family function on coordinates offset+1..offset+4; returns its constant."""
    allowed = {"A", "A1", "A2", "A3", "A4", "C", "B1", "B2", "B3", "B4"} | {
        f"B{i}{j}" for i in range(1, 5) for j in range(i + 1, 5)} | set(allowed_extra)
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError(f"unknown coefficient(s) for the ASD family: {sorted(unknown)}")
    A = [_num(spec.get(f"A{i}", 0)) for i in (1, 2, 3)]
    a4 = -(A[0] + A[1] + A[2])
    _check_compensator(spec, "A4", a4, "A4 = -(A1+A2+A3)")
    for i, a in enumerate(A + [a4]):
        Q[offset + i, offset + i] += a
    for i in range(1, 5):
        b[offset + i - 1] += _num(spec.get(f"B{i}", 0))
        for j in range(i + 1, 5):
            Bij = _num(spec.get(f"B{i}{j}", 0))
            Q[offset + i - 1, offset + j - 1] += Bij / 2
            Q[offset + j - 1, offset + i - 1] += Bij / 2
    A0 = _num(spec.get("A", 0))
    if A0:
        inv[tuple(range(offset, offset + 4))] = inv.get(tuple(range(offset, offset + 4)), 0.0) + A0
    return _num(spec.get("C", 0))


def example_field_factory(spec: Mapping) -> ScalarField:
    """Build a field from one of the example families.

    ``spec["family"]`` is one of

    * ``"sd"``: f = A x·x + Σ B_j x_j + C on R⁴ (keys A, B1..B4, C);
    * ``"asd"``: f = A (x·x)^{-1} + A1 x1² + A2 x2² + A3 x3² - (A1+A2+A3) x4²
      + Σ B_ij x_i x_j + Σ B_j x_j + C on R⁴;
    * ``"h2"``: f = f₁ + f₂ + cross terms on R⁸, where ``spec["f1"]`` and
      ``spec["f2"]`` are ASD-family specs on the two quaternionic blocks and
      C1..C3, D1..D3, E1..E3, F1..F3 are the cross coefficients.

    Compensating coefficients (A4, C4, D4, E4, F4) are inserted automatically;
    when supplied explicitly they must satisfy their constraint.
    """
    family = spec.get("family")
    coeffs = {k: v for k, v in spec.items() if k != "family"}
    if family == "sd":
        unknown = set(coeffs) - {"A", "B1", "B2", "B3", "B4", "C"}
        if unknown:
            raise ValueError(f"unknown coefficient(s) for the SD family: {sorted(unknown)}")
        A = _num(coeffs.get("A", 0))
        b = [_num(coeffs.get(f"B{j}", 0)) for j in range(1, 5)]
        return ScalarField.quadratic(A * np.eye(4), b, _num(coeffs.get("C", 0)), label="sd")
    if family == "asd":
        Q, b, inv = np.zeros((4, 4)), np.zeros(4), {}
        c = _asd_block(coeffs, 0, Q, b, inv)
        return ScalarField.quadratic(Q, b, c, inv, label="asd")
    if family == "h2":
        Q, b, inv = np.zeros((8, 8)), np.zeros(8), {}
        c = _asd_block(dict(coeffs.get("f1", {})), 0, Q, b, inv)
        c += _asd_block(dict(coeffs.get("f2", {})), 4, Q, b, inv)
        cross = {k: v for k, v in coeffs.items() if k not in ("f1", "f2")}
        unknown = set(cross) - set(_H2_MONOMIALS) - set(_H2_COMPENSATORS)
        if unknown:
            raise ValueError(f"unknown coefficient(s) for the H² family: {sorted(unknown)}")
        for key, (i, j) in _H2_MONOMIALS.items():
            v = _num(cross.get(key, 0))
            Q[i, j] += v / 2
            Q[j, i] += v / 2
        for key, ((i, j), parts, constraint) in _H2_COMPENSATORS.items():
            v = sum(sign * _num(cross.get(k, 0)) for k, sign in parts.items())
            _check_compensator(cross, key, v, constraint)
            Q[i, j] += v / 2
            Q[j, i] += v / 2
        return ScalarField.quadratic(Q, b, c, inv, label="h2")
    raise ValueError(f"unknown field family {family!r}")


_SPEC_ITEM = re.compile(r"^\s*(?:(f[12])\.)?([A-Za-z]\w*)\s*=\s*([-+0-9./eE]+)\s*$")


def parse_field_spec(text: str) -> dict:
    """Parse ``family:key=value,...``; H² block keys are written ``f1.A=1``.

    >>> parse_field_spec("asd:A=1,A1=0.5")
    {'family': 'asd', 'A': 1.0, 'A1': 0.5}
    """
    family, _, rest = text.partition(":")
    spec: dict = {"family": family.strip()}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        m = _SPEC_ITEM.match(item)
        if not m:
            raise ValueError(f"cannot parse field coefficient {item!r}")
        block, key, value = m.groups()
        try:
            val = float(Fraction(value))
        except ValueError:
            val = float(value)
        if block:
            spec.setdefault(block, {})[key] = val
        else:
            spec[key] = val
    return spec


# ---------------------------------------------------------------------------
# connection and curvature


@dataclass(frozen=True)
class QuatField:
    solution: NahmSolution
    f: ScalarField
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.f.dim % 4:
            raise ValueError("the scalar field must live on R^{4n}")

    @property
    def structure(self) -> QuatStructure:
        return quat_structure(self.f.dim // 4)

    @property
    def algebra(self) -> GaugeAlgebra:
        return self.solution.algebra

    def connection_at(self, x) -> np.ndarray:
        """A[μ, a]: coefficient of dx^μ ⊗ k_a."""
        val, grad, _ = self.f.evaluate(x)
        self.solution.check(val)
        theta = np.einsum("iab,b->ia", self.structure.J, grad)
        return self.sign * np.einsum("ia,ic->ac", theta, np.asarray(self.solution.T(val)))


def quat_connection(sol: NahmSolution, f: ScalarField, sign: int = 1) -> QuatField:
    return QuatField(sol, f, sign)


def _wedge1(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.outer(a, b) - np.outer(b, a)


def quat_curvature(field: QuatField, x) -> np.ndarray:
    """Analytic curvature ``F[μ, ν, a]`` from ∇f and the Hessian."""
    val, grad, H = field.f.evaluate(x)
    sol = field.solution
    sol.check(val)
    T, dT = np.asarray(sol.T(val)), np.asarray(sol.dT(val))
    J = field.structure.J
    alg = field.algebra
    theta = np.einsum("iab,b->ia", J, grad)
    JH = np.einsum("iab,bc->iac", J, H)
    dtheta = JH.transpose(0, 2, 1) - JH
    N = field.f.dim
    F = np.zeros((N, N, alg.dim))
    for i, j, k in _CYCLIC:
        F += field.sign * (np.einsum("mn,a->mna", _wedge1(grad, theta[i]), dT[i])
                           + np.einsum("mn,a->mna", dtheta[i], T[i]))
        F += np.einsum("mn,a->mna", _wedge1(theta[j], theta[k]), alg.bracket(T[j], T[k]))
    return F


def curvature_fd(field: QuatField, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference curvature of the assembled connection."""
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    x = np.asarray(x, dtype=float)
    N = len(x)
    dA = np.empty((N, N, field.algebra.dim))
    for mu in range(N):
        e = np.zeros(N)
        e[mu] = h
        dA[mu] = (field.connection_at(x + e) - field.connection_at(x - e)) / (2 * h)
    A = field.connection_at(x)
    comm = np.einsum("ma,nb,abc->mnc", A, A, field.algebra.structure_constants)
    return dA - dA.transpose(1, 0, 2) + comm


def duality_ratio(F: np.ndarray, sign: int) -> float:
    """‖F - sign·*F‖ / ‖F‖ for an algebra-valued 2-form on R⁴ (sign +1: SD, -1: ASD)."""
    n = F.shape[0]
    if n != 4:
        raise ValueError("self-duality is tested on R⁴")
    iu = np.triu_indices(n, 1)
    V = F[iu].reshape(6, -1)
    star = hodge_matrix(4, 2)
    tot = np.linalg.norm(V)
    return 0.0 if tot == 0 else float(np.linalg.norm(V - sign * star @ V) / tot)


def quat_ratio(F: np.ndarray, n: int, c) -> float:
    """Relative defect of ``Ω∧Σ^{n-1} = c *Ω`` for each algebra component of F."""
    N = 4 * n
    iu = np.triu_indices(N, 1)
    V = F[iu].reshape(len(iu[0]), -1)
    M = _float_operator(n, Fraction(c))
    tot = np.linalg.norm(V)
    return 0.0 if tot == 0 else float(np.linalg.norm(M @ V) / (abs(float(c)) * tot))


@lru_cache(maxsize=None)
def _float_operator(n: int, c: Fraction) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in quat_operator(n, c)])


def sd_system_residual(f: ScalarField, x) -> float:
    """max |H_pp - H_qq| and |H_pq| over p < q (R⁴ only)."""
    if f.dim != 4:
        raise ValueError("the SD system is defined on R⁴")
    H = f.hessian(x)
    d = np.diag(H)
    off = H[np.triu_indices(4, 1)]
    return float(max(np.max(np.abs(d[:, None] - d[None, :])), np.max(np.abs(off))))


def _dtheta(f: ScalarField, x, Q: QuatStructure) -> np.ndarray:
    H = f.hessian(x)
    JH = np.einsum("iab,bc->iac", Q.J, H)
    return JH.transpose(0, 2, 1) - JH


def asd_hn_residual(f: ScalarField, n: int, x) -> float:
    """max_i ‖dθ_i∧Σ^{n-1} - c₁ *dθ_i‖ / max(1, ‖dθ_i‖)."""
    if f.dim != 4 * n:
        raise ValueError(f"the field must live on R^{4 * n}")
    Q = quat_structure(n)
    M = _float_operator(n, c1(n))
    iu = np.triu_indices(4 * n, 1)
    worst = 0.0
    for dth in _dtheta(f, x, Q):
        v = dth[iu]
        worst = max(worst, float(np.linalg.norm(M @ v)) / max(1.0, float(np.linalg.norm(v))))
    return worst


def dtheta_forms(f: ScalarField, x, Q: QuatStructure | None = None) -> list[np.ndarray]:
    """The three 2-forms d(J^i(df)) at x as antisymmetric matrices."""
    Q = quat_structure(f.dim // 4) if Q is None else Q
    return list(_dtheta(f, x, Q))


def sd_constant(n: int) -> Fraction:
    return c2(n)


def index_pairs(N: int):
    return multi_indices(N, 2)
