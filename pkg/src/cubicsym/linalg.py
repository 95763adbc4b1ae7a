"""Dense exact linear algebra over any field whose elements support the
usual operators and a truthiness zero test."""

from __future__ import annotations

from typing import Sequence

from .errors import DivisionByZero


def _inv(x):
    inv = getattr(x, "inverse", None)
    return inv() if inv is not None else 1 / x


def rref(rows: Sequence[Sequence], field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = _inv(m[r][col])
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence], field) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence], field, ncols: int | None = None) -> list[list]:
    """Basis of ``{v : rows * v = 0}``."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], field) -> list[list]:
    cols = list(zip(*b))
    out = []
    for row in a:
        out.append([_dot(row, col, field) for col in cols])
    return out


def matvec(a: Sequence[Sequence], v: Sequence, field) -> list:
    return [_dot(row, v, field) for row in a]


def _dot(u, v, field):
    acc = field.zero
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*a)]


def inverse(a: Sequence[Sequence], field) -> list[list]:
    n = len(a)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise DivisionByZero("matrix is singular")
    return [row[n:] for row in m]


def det(a: Sequence[Sequence], field):
    m = [list(r) for r in a]
    n = len(m)
    result = field.one
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result = result * p
        inv = _inv(p)
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return result


def identity(n: int, field) -> list[list]:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
