"""Exact rational linear algebra over QQ (thin wrapper on sympy's DomainMatrix)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Rows = Sequence[Sequence[Fraction]]


def _to_qq(c) -> object:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _from_qq(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _dm(rows: Rows, ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    data = [[_to_qq(c) for c in r] for r in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def nullspace(rows: Rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}`` in reduced (RREF-derived) form."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace().to_Matrix().tolist()
    out = []
    for vec in ns:
        vals = [Fraction(int(c.p), int(c.q)) for c in vec]
        out.append(vals)
    return out


def rank(rows: Rows) -> int:
    if not rows:
        return 0
    return _dm(rows).rank()


def solve(matrix: Rows, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(matrix)
    A = _dm(matrix, n)
    b = DomainMatrix([[_to_qq(c)] for c in rhs], (n, 1), QQ)
    x = A.lu_solve(b)
    return [_from_qq(x.rep.to_ddm()[i][0]) for i in range(n)]


def inverse(matrix: Rows) -> list[list[Fraction]]:
    n = len(matrix)
    inv = _dm(matrix, n).inv().rep.to_ddm()
    return [[_from_qq(inv[i][j]) for j in range(n)] for i in range(n)]


def span_coordinates(basis: Rows, targets: Rows) -> list[list[Fraction] | None]:
    """Exact coordinates of each target row in the row span of ``basis``.

    ``basis`` must have independent rows.  Entries are ``None`` for targets
    outside the span.
    """
    if not targets:
        return []
    B = _dm(basis)
    T = _dm(targets, len(basis[0]))
    gram = B * B.transpose()
    coords = T * B.transpose() * gram.inv()
    recon = coords * B
    c_rows = coords.to_Matrix().tolist()
    r_rows = recon.to_Matrix().tolist()
    t_rows = T.to_Matrix().tolist()
    out = []
    for c, r, t in zip(c_rows, r_rows, t_rows):
        if list(r) != list(t):
            out.append(None)
        else:
            out.append([Fraction(int(x.p), int(x.q)) for x in c])
    return out
