"""Exterior algebra on R^n with exact coefficients.

Forms are stored sparsely as a map from strictly increasing 1-based
multi-indices to scalars.  Scalars are normally :class:`fractions.Fraction`,
which makes every identity checked here exact; floats are accepted as well
and simply flow through the same arithmetic.

The metric is Euclidean and the orientation is ``dx^{1...n}``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "Form",
    "Vector",
    "dx",
    "wedge",
    "hodge",
    "interior",
    "inner",
    "flat",
    "multi_indices",
    "parse_form",
    "form_from_matrix",
]

MAX_DIM = 8


def _parity(seq: Iterable[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (entries distinct)."""
    seq = list(seq)
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def _scalar(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return c


def multi_indices(n: int, k: int) -> list[tuple[int, ...]]:
    """Strictly increasing 1-based multi-indices of length ``k``, lexicographic."""
    return list(combinations(range(1, n + 1), k))


class Form:
    """Alternating ``grade``-form on R^``dim``."""

    __slots__ = ("dim", "grade", "_coeffs", "_hash")

    def __init__(self, dim: int, grade: int, coeffs: Mapping[tuple[int, ...], Number] | None = None):
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"dimension must lie in 1..{MAX_DIM}, got {dim}")
        if grade < 0:
            raise ValueError("grade must be non-negative")
        clean: dict[tuple[int, ...], Number] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != grade:
                raise ValueError(f"multi-index {idx} does not have length {grade}")
            if any(not 1 <= i <= dim for i in idx):
                raise ValueError(f"multi-index {idx} out of range for dimension {dim}")
            if any(idx[m] >= idx[m + 1] for m in range(grade - 1)):
                raise ValueError(f"multi-index {idx} is not strictly increasing")
            if c != 0:
                clean[idx] = _scalar(c)
        self.dim = dim
        self.grade = grade
        self._coeffs = clean
        self._hash = None

    @classmethod
    def zero(cls, dim: int, grade: int) -> "Form":
        return cls(dim, grade)

    @classmethod
    def from_terms(cls, dim: int, grade: int, terms: Iterable[tuple[Iterable[int], Number]]) -> "Form":
        """Build a form from (index sequence, coefficient) pairs.

        Index sequences may be in any order; repeated indices vanish and
        permutations pick up their sign, so ``((4, 2), 1)`` means ``dx^{42} = -dx^{24}``.
        """
        acc: dict[tuple[int, ...], Number] = {}
        for idx, c in terms:
            idx = tuple(idx)
            if len(set(idx)) < len(idx):
                continue
            key = tuple(sorted(idx))
            acc[key] = acc.get(key, 0) + _parity(idx) * _scalar(c)
        return cls(dim, grade, acc)

    @classmethod
    def from_vector(cls, dim: int, grade: int, values: Iterable[Number]) -> "Form":
        basis = multi_indices(dim, grade)
        values = list(values)
        if len(values) != len(basis):
            raise ValueError("component vector has the wrong length")
        return cls(dim, grade, dict(zip(basis, values)))

    @property
    def coeffs(self) -> Mapping[tuple[int, ...], Number]:
        return dict(self._coeffs)

    def __getitem__(self, idx: Iterable[int]) -> Number:
        idx = tuple(idx)
        if len(set(idx)) < len(idx):
            return Fraction(0)
        return _parity(idx) * self._coeffs.get(tuple(sorted(idx)), Fraction(0))

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self._coeffs.values())

    def vector(self, dtype=None) -> list | np.ndarray:
        """Components in :func:`multi_indices` order."""
        comps = [self._coeffs.get(idx, Fraction(0)) for idx in multi_indices(self.dim, self.grade)]
        if dtype is None:
            return comps
        return np.array([float(c) for c in comps], dtype=dtype)

    def to_array(self) -> np.ndarray:
        """Antisymmetric float matrix ``F`` of a 2-form, ``F[i-1, j-1]`` = coefficient of dx^{ij}."""
        if self.grade != 2:
            raise ValueError("to_array is defined for 2-forms only")
        out = np.zeros((self.dim, self.dim))
        for (i, j), c in self._coeffs.items():
            out[i - 1, j - 1] = float(c)
            out[j - 1, i - 1] = -float(c)
        return out

    def to_float(self) -> "Form":
        return Form(self.dim, self.grade, {k: float(v) for k, v in self._coeffs.items()})

    def _check_compatible(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Form") -> "Form":
        if isinstance(other, Number) and other == 0:
            return self
        self._check_compatible(other)
        if other.grade != self.grade:
            raise ValueError(f"cannot add forms of grade {self.grade} and {other.grade}")
        acc = dict(self._coeffs)
        for idx, c in other._coeffs.items():
            acc[idx] = acc.get(idx, 0) + c
        return Form(self.dim, self.grade, acc)

    __radd__ = __add__

    def __neg__(self) -> "Form":
        return Form(self.dim, self.grade, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, scalar: Number) -> "Form":
        if isinstance(scalar, Form):
            return wedge(self, scalar)
        s = _scalar(scalar)
        return Form(self.dim, self.grade, {k: s * v for k, v in self._coeffs.items()})

    def __rmul__(self, scalar: Number) -> "Form":
        return self * scalar

    def __truediv__(self, scalar: Number) -> "Form":
        return self * (1 / _scalar(scalar))

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __pow__(self, k: int) -> "Form":
        """Wedge power; ``a ** 0`` is the constant 1."""
        out = Form(self.dim, 0, {(): 1})
        for _ in range(k):
            out = wedge(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.dim == other.dim and self.grade == other.grade and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self.grade, frozenset(self._coeffs.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Form(dim={self.dim}, grade={self.grade}, {self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for idx in sorted(self._coeffs):
            c = self._coeffs[idx]
            mono = "dx^{" + "".join(str(i) for i in idx) + "}" if idx else "1"
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mag == 1 and idx:
                term = mono
            elif not idx:
                term = str(mag)
            else:
                term = f"{mag} {mono}"
            parts.append((sign, term))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text


class Vector:
    """Constant vector field on R^n with components ``(v_1, ..., v_n)``."""

    __slots__ = ("dim", "components")

    def __init__(self, components: Iterable[Number]):
        comps = tuple(_scalar(c) for c in components)
        if not 1 <= len(comps) <= MAX_DIM:
            raise ValueError(f"dimension must lie in 1..{MAX_DIM}")
        self.dim = len(comps)
        self.components = comps

    @classmethod
    def basis(cls, dim: int, i: int) -> "Vector":
        """The coordinate vector field d/dx_i (1-based)."""
        return cls([1 if j == i else 0 for j in range(1, dim + 1)])

    def __repr__(self) -> str:
        return f"Vector({list(self.components)})"


def dx(dim: int, *indices: int) -> Form:
    """The monomial ``dx^{i j ... k}`` on R^dim (indices in any order)."""
    return Form.from_terms(dim, len(indices), [(indices, 1)])


def wedge(a: Form, b: Form) -> Form:
    a._check_compatible(b)
    n = a.dim
    k = a.grade + b.grade
    if k > n:
        return Form(n, k)
    acc: dict[tuple[int, ...], Number] = {}
    for I, ca in a._coeffs.items():
        set_i = set(I)
        for J, cb in b._coeffs.items():
            if set_i.intersection(J):
                continue
            # sign of merging two sorted sequences = (-1)^{#pairs i in I, j in J, i > j}
            swaps = sum(1 for i in I for j in J if i > j)
            key = tuple(sorted(I + J))
            term = ca * cb
            acc[key] = acc.get(key, 0) + (-term if swaps % 2 else term)
    return Form(n, k, acc)


def hodge(a: Form, orientation: int = 1) -> Form:
    """Euclidean Hodge star with respect to ``dx^{1...n}``."""
    if orientation != 1:
        raise ValueError("only the standard orientation dx^{1...n} is supported")
    n = a.dim
    full = set(range(1, n + 1))
    acc = {}
    for I, c in a._coeffs.items():
        comp = tuple(sorted(full.difference(I)))
        acc[comp] = _parity(I + comp) * c
    return Form(n, n - a.grade, acc)


def interior(v: Vector, a: Form) -> Form:
    """Contraction ``v ⌟ a``; zero for functions."""
    if v.dim != a.dim:
        raise ValueError(f"dimension mismatch: vector {v.dim} vs form {a.dim}")
    if a.grade == 0:
        return Form(a.dim, 0)
    acc: dict[tuple[int, ...], Number] = {}
    for I, c in a._coeffs.items():
        for m, i in enumerate(I):
            vi = v.components[i - 1]
            if vi == 0:
                continue
            key = I[:m] + I[m + 1:]
            term = vi * c
            acc[key] = acc.get(key, 0) + (-term if m % 2 else term)
    return Form(a.dim, a.grade - 1, acc)


def inner(a: Form, b: Form) -> Number:
    """Pointwise inner product on Λ^k, monomials orthonormal."""
    a._check_compatible(b)
    if a.grade != b.grade:
        raise ValueError(f"grade mismatch: {a.grade} vs {b.grade}")
    small, big = (a, b) if len(a._coeffs) <= len(b._coeffs) else (b, a)
    total = Fraction(0)
    for I, c in small._coeffs.items():
        d = big._coeffs.get(I)
        if d is not None:
            total += c * d
    return total


def flat(v: Vector) -> Form:
    """The 1-form metrically dual to ``v``."""
    return Form(v.dim, 1, {(i + 1,): c for i, c in enumerate(v.components)})


def form_from_matrix(F: np.ndarray) -> Form:
    """Float 2-form from an antisymmetric matrix (inverse of :meth:`Form.to_array`)."""
    n = F.shape[0]
    return Form(n, 2, {(i + 1, j + 1): float(F[i, j]) for i in range(n) for j in range(i + 1, n)})


_TERM = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*dx\^?\{?(\d+)\}?\s*"
)


def parse_form(text: str, dim: int) -> Form:
    """Parse a linear combination such as ``"dx^{12} - 2 dx^{34}"`` or ``"dx13-dx42"``.

    Index digits may appear in any order; ``dx42`` is read as ``dx^4 ∧ dx^2``.
    """
    pos = 0
    terms = []
    grade = None
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse form near {text[pos:]!r}")
        sign, coeff, digits = m.groups()
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        idx = tuple(int(ch) for ch in digits)
        if grade is None:
            grade = len(idx)
        elif grade != len(idx):
            raise ValueError("mixed grades in form expression")
        terms.append((idx, c))
        pos = m.end()
    if grade is None:
        raise ValueError("empty form expression")
    return Form.from_terms(dim, grade, terms)
