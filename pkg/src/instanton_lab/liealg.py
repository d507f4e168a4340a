"""Matrix Lie subalgebras of so(n) and their 2-form images.

The identification ``iso: so(n) -> Λ²`` is ``iso(A)(X, Y) = <AX, Y>``, so the
coefficient of ``dx^{ij}`` (i < j) in ``iso(A)`` is ``A[j, i]``.

Subalgebras come from two independent routes: the printed tables in
:mod:`instanton_lab.tables` and :func:`stabilizer_algebra`, which solves for
the annihilator of a set of defining forms exactly.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg, tables
from .exterior import Form, inner, multi_indices, parse_form

__all__ = [
    "SkewEndo",
    "LieSubalgebra",
    "iso",
    "iso_inverse",
    "bracket",
    "derivation",
    "stabilizer_algebra",
    "project_to_subalgebra",
    "in_span",
    "same_span",
    "table_algebra",
    "format_table",
    "parse_matrix_terms",
]


@dataclass(frozen=True)
class SkewEndo:
    """Exact skew-symmetric n×n matrix."""

    dim: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.dim
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError("entries must form an n×n matrix")
        for i in range(n):
            for j in range(i, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise ValueError(f"matrix is not skew at ({i + 1},{j + 1})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SkewEndo":
        return cls(len(rows), tuple(tuple(Fraction(c) for c in row) for row in rows))

    @classmethod
    def from_elementary(cls, dim: int, terms: Mapping[tuple[int, int], Fraction]) -> "SkewEndo":
        """Sum of ``c * E_kl`` over 1-based ``(k, l)``."""
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        for (k, l), c in terms.items():
            rows[k - 1][l - 1] += Fraction(c)
        return cls.from_rows(rows)

    @classmethod
    def zero(cls, dim: int) -> "SkewEndo":
        return cls.from_rows([[0] * dim for _ in range(dim)])

    def __add__(self, other: "SkewEndo") -> "SkewEndo":
        return SkewEndo.from_rows([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "SkewEndo") -> "SkewEndo":
        return self + other * -1

    def __mul__(self, c) -> "SkewEndo":
        c = Fraction(c)
        return SkewEndo.from_rows([[c * a for a in r] for r in self.entries])

    __rmul__ = __mul__

    def matmul(self, other: "SkewEndo") -> list[list[Fraction]]:
        n = self.dim
        A, B = self.entries, other.entries
        return [[sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.entries for c in row)

    def to_array(self) -> np.ndarray:
        return np.array([[float(c) for c in row] for row in self.entries])

    def lower(self) -> list[Fraction]:
        """Entries ``A[j, i]`` for i < j in multi-index order (the iso coordinates)."""
        return [self.entries[j - 1][i - 1] for i, j in multi_indices(self.dim, 2)]


def iso(A: SkewEndo) -> Form:
    return Form.from_vector(A.dim, 2, A.lower())


def iso_inverse(beta: Form) -> SkewEndo:
    if beta.grade != 2:
        raise ValueError("iso_inverse expects a 2-form")
    n = beta.dim
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in beta.items():
        rows[j - 1][i - 1] = c
        rows[i - 1][j - 1] = -c
    return SkewEndo.from_rows(rows)


def bracket(A: SkewEndo, B: SkewEndo) -> SkewEndo:
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    AB, BA = A.matmul(B), B.matmul(A)
    return SkewEndo.from_rows([[x - y for x, y in zip(r, s)] for r, s in zip(AB, BA)])


def derivation(A: SkewEndo, omega: Form) -> Form:
    """Infinitesimal action ``(L_A ω)(X_1, ...) = -Σ ω(..., A X_i, ...)``.

    On 1-forms ``L_A dx^i = -Σ_j A[i, j] dx^j``, extended as a derivation.
    """
    n = omega.dim
    terms = []
    for I, c in omega.items():
        for m, i in enumerate(I):
            for j in range(1, n + 1):
                a = A.entries[i - 1][j - 1]
                if a == 0:
                    continue
                terms.append((I[:m] + (j,) + I[m + 1:], -a * c))
    return Form.from_terms(n, omega.grade, terms)


def _gram(forms: Sequence[Form]) -> list[list[Fraction]]:
    return [[inner(a, b) for b in forms] for a in forms]


@dataclass(frozen=True, eq=False)
class LieSubalgebra:
    """A subalgebra g ⊂ so(n) with paired 2-forms.

    The j-th actual basis element is ``sqrt(radicals[j]) * basis[j]`` and the
    j-th 2-form is ``sqrt(radicals[j]) * forms[j]``; the rational parts obey
    ``forms[j] == scale[j] * iso(basis[j])``.  Structure constants are taken
    with respect to the rational matrices ``basis``.
    """

    name: str
    dim: int
    basis: tuple[SkewEndo, ...]
    forms: tuple[Form, ...]
    scale: tuple[Fraction, ...]
    radicals: tuple[Fraction, ...]
    structure_constants: tuple[tuple[tuple[Fraction, ...], ...], ...]
    source: str = "stabilizer"
    repairs: tuple[str, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> list[list[Fraction]]:
        """Λ² Gram matrix of the rational form parts."""
        return _gram(self.forms)

    def actual_gram(self) -> np.ndarray:
        """Gram matrix of the true (radical-including) 2-forms."""
        g = np.array([[float(c) for c in row] for row in self.gram()])
        s = np.sqrt([float(q) for q in self.radicals])
        return g * np.outer(s, s)

    def pairing(self) -> list[tuple[Fraction, Form, SkewEndo]]:
        """Terms ``(w, F, M)`` with ``Σ_j β_j ⊗ e_j = Σ w F ⊗ M``.

        Printed tables pair β_j with ``scale_j * e_j = iso⁻¹(β_j)``; this is the
        printed element itself except for su(2), whose printed matrices carry
        an extra factor ½ relative to their 2-forms and to the printed bracket
        relations.  Oracle algebras use the basis-independent element
        ``Σ G⁻¹_ij iso(b_i) ⊗ b_j``.
        """
        if self.source == "table":
            return [(q * s, F, M) for q, s, F, M in zip(self.radicals, self.scale, self.forms, self.basis)]
        ginv = linalg.inverse(self.gram())
        out = []
        for i, F in enumerate(self.forms):
            for j, M in enumerate(self.basis):
                if ginv[i][j] != 0:
                    out.append((ginv[i][j] * self.scale[i], F, M))
        return out

    def pairing_tensor(self) -> np.ndarray:
        """Float array ``K[ρ, ν, a, b]`` with ``Σ_j β_j ⊗ e_j = ½ Σ K[ρ,ν] dx^ρ∧dx^ν``."""
        n = self.dim
        K = np.zeros((n, n, n, n))
        for w, F, M in self.pairing():
            K += float(w) * np.einsum("rv,ab->rvab", F.to_array(), M.to_array())
        return K

    def projector(self) -> np.ndarray:
        """Float orthogonal projector onto span(forms) in multi-index coordinates."""
        return _projector(self)

    def coordinates(self, A: SkewEndo) -> list[Fraction]:
        """Exact coordinates of A in ``basis``; raises if A is not in the span."""
        coords = _coords(self.basis, A)
        if coords is None:
            raise ValueError("matrix is not in the subalgebra")
        return coords


def _coords(basis: Sequence[SkewEndo], A: SkewEndo) -> list[Fraction] | None:
    return linalg.span_coordinates([b.lower() for b in basis], [A.lower()])[0]


def _structure_constants(basis: Sequence[SkewEndo]):
    m = len(basis)
    brackets = [bracket(basis[i], basis[j]).lower() for i in range(m) for j in range(m)]
    coords = linalg.span_coordinates([b.lower() for b in basis], brackets)
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            c = coords[i * m + j]
            if c is None:
                raise ValueError(f"basis is not bracket-closed at ({i + 1},{j + 1})")
            row.append(tuple(c))
        out.append(tuple(row))
    return tuple(out)


@lru_cache(maxsize=None)
def _projector(g: LieSubalgebra) -> np.ndarray:
    B = np.array([F.vector(float) for F in g.forms])
    G = B @ B.T
    return B.T @ np.linalg.solve(G, B)


def stabilizer_algebra(defining_forms: Sequence[Form], name: str = "stab") -> LieSubalgebra:
    """Exact basis of ``{A in so(n) : L_A ω = 0 for every defining ω}``."""
    defining_forms = list(defining_forms)
    if not defining_forms:
        raise ValueError("at least one defining form is required")
    n = defining_forms[0].dim
    if any(f.dim != n for f in defining_forms):
        raise ValueError("defining forms live on different R^n")
    pairs = multi_indices(n, 2)
    generators = [iso_inverse(Form(n, 2, {p: 1})) for p in pairs]
    # column c of the system = L_{generator c} applied to each defining form
    columns = []
    for G in generators:
        col = []
        for omega in defining_forms:
            col.extend(derivation(G, omega).vector())
        columns.append(col)
    rows = [list(r) for r in zip(*columns)]
    rows = [r for r in rows if any(c != 0 for c in r)]
    kernel = linalg.nullspace(rows, len(pairs))
    forms = tuple(Form.from_vector(n, 2, v) for v in kernel)
    basis = tuple(iso_inverse(F) for F in forms)
    one = Fraction(1)
    return LieSubalgebra(
        name=name,
        dim=n,
        basis=basis,
        forms=forms,
        scale=tuple(one for _ in basis),
        radicals=tuple(one for _ in basis),
        structure_constants=_structure_constants(basis),
        source="stabilizer",
    )


def project_to_subalgebra(omega: Form, g: LieSubalgebra) -> tuple[Form, Form]:
    """Orthogonal split ``ω = inPart + outPart`` with inPart in span(g.forms)."""
    if omega.grade != 2 or omega.dim != g.dim:
        raise ValueError("expected a 2-form on the algebra's R^n")
    if not omega.is_exact():
        P = g.projector()
        v = omega.vector(float)
        w = P @ v
        inside = Form.from_vector(g.dim, 2, list(w))
        return inside, Form.from_vector(g.dim, 2, list(v - w))
    rhs = [inner(F, omega) for F in g.forms]
    coeffs = linalg.solve(g.gram(), rhs)
    inside = Form(g.dim, 2)
    for c, F in zip(coeffs, g.forms):
        inside = inside + F * c
    return inside, omega - inside


def in_span(omega: Form, g: LieSubalgebra) -> bool:
    return project_to_subalgebra(omega, g)[1].is_zero()


def same_span(a: LieSubalgebra, b: LieSubalgebra) -> bool:
    """Exact equality of the 2-form spans."""
    if a.dim != b.dim:
        return False
    rows_a = [F.vector() for F in a.forms]
    rows_b = [F.vector() for F in b.forms]
    ra, rb = linalg.rank(rows_a), linalg.rank(rows_b)
    return ra == rb == linalg.rank(rows_a + rows_b)


_MTERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*E(\d)(\d)\s*")


def parse_matrix_terms(text: str) -> dict[tuple[int, int], Fraction]:
    """Parse ``"-E12+E21+2E34"`` into ``{(k, l): coefficient}`` (duplicates summed)."""
    out: dict[tuple[int, int], Fraction] = {}
    pos = 0
    while pos < len(text.strip()):
        m = _MTERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse matrix near {text[pos:]!r}")
        sign, coeff, k, l = m.groups()
        c = Fraction(int(coeff) if coeff else 1) * (-1 if sign == "-" else 1)
        key = (int(k), int(l))
        out[key] = out.get(key, Fraction(0)) + c
        pos = m.end()
    return {k: v for k, v in out.items() if v != 0}


def _is_skew(n: int, terms: Mapping[tuple[int, int], Fraction]) -> bool:
    return all(terms.get((l, k), 0) == -c for (k, l), c in terms.items())


@lru_cache(maxsize=None)
def table_algebra(name: str) -> LieSubalgebra:
    """The printed basis for ``su2``, ``g2`` or ``spin7``, with misprints repaired.

    A printed matrix is repaired (replaced by ``iso⁻¹`` of its printed 2-form
    divided by the section's scale) when it is not skew or when its image
    under iso is not proportional to the printed 2-form.
    """
    n, rows = tables.TABLES[name]
    parsed = []
    for (mp, mq, mterms), (fp, fq, fterms) in rows:
        if mq != fq:
            raise ValueError(f"{name}: matrix and form radicals differ")
        M_terms = {k: mp * c for k, c in parse_matrix_terms(mterms).items()}
        F = parse_form(fterms, n) * fp
        parsed.append((M_terms, F, mq))
    # section scale from the first well-formed row
    scales = set()
    for M_terms, F, _ in parsed:
        if _is_skew(n, M_terms):
            img = iso(SkewEndo.from_elementary(n, M_terms))
            s = _ratio(F, img)
            if s is not None:
                scales.add(s)
    if len(scales) != 1:
        raise ValueError(f"{name}: inconsistent table scales {sorted(scales)}")
    scale = scales.pop()
    basis, forms, repairs = [], [], []
    for j, (M_terms, F, q) in enumerate(parsed, start=1):
        ok = _is_skew(n, M_terms) and _ratio(F, iso(SkewEndo.from_elementary(n, M_terms))) == scale
        if ok:
            M = SkewEndo.from_elementary(n, M_terms)
        else:
            M = iso_inverse(F / scale)
            why = "not skew" if not _is_skew(n, M_terms) else "iso image disagrees with printed 2-form"
            repairs.append(f"e{j}: printed matrix {why}; replaced by iso^-1(beta{j})/{scale}")
        basis.append(M)
        forms.append(F)
    radicals = tuple(row[2] for row in parsed)
    return LieSubalgebra(
        name=name,
        dim=n,
        basis=tuple(basis),
        forms=tuple(forms),
        scale=tuple(scale for _ in basis),
        radicals=radicals,
        structure_constants=_structure_constants(basis),
        source="table",
        repairs=tuple(repairs),
    )


def _ratio(F: Form, G: Form) -> Fraction | None:
    """The rational s with F == s * G, or None."""
    if G.is_zero() or F.is_zero():
        return None
    idx, g = next(iter(G.items()))
    s = F[idx] / g
    return s if F == G * s and s != 0 else None


def _radical_str(q: Fraction) -> str:
    if q == 1:
        return "1"
    return f"sqrt({q})"


def format_table(g: LieSubalgebra) -> str:
    """Plain-text table: one row per basis element.

    Columns are tab separated: ``index``, ``radical`` (the element is
    sqrt(radical) times the listed data), ``matrix`` (the rational matrix
    entries row-major, rows separated by ``;``), ``form`` (the rational 2-form in
    dx^{ij} notation) and ``scale`` (form = scale * iso(matrix)).
    """
    lines = [f"# algebra={g.name} n={g.dim} rank={g.rank} source={g.source}", "index\tradical\tmatrix\tform\tscale"]
    for j, (M, F, s, q) in enumerate(zip(g.basis, g.forms, g.scale, g.radicals), start=1):
        mat = ";".join(",".join(str(c) for c in row) for row in M.entries)
        lines.append(f"{j}\t{_radical_str(q)}\t{mat}\t{F}\t{s}")
    return "\n".join(lines) + "\n"


def killing_form(g: LieSubalgebra) -> np.ndarray:
    """Killing form ``tr(ad_i ad_j)`` from the structure constants (rational basis)."""
    c = np.array([[[float(x) for x in cij] for cij in ci] for ci in g.structure_constants])
    # ad_i[k, j] = c[i, j, k]
    return np.einsum("ijk,lkj->il", c, c)


def actual_norm(g: LieSubalgebra, j: int) -> float:
    return math.sqrt(float(g.radicals[j] * inner(g.forms[j], g.forms[j])))
