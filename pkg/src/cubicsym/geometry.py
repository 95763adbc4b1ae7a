"""Points, planes and lines of projective 3-space over an exact field.

Lines use Plücker coordinates ``[p01, p02, p03, p12, p13, p23]`` with
``p_ij = a_i b_j - a_j b_i`` for spanning points ``a`` and ``b``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import linalg
from .errors import (
    CoincidentPoints,
    EqualLines,
    NonUniqueSolution,
    NotInGeneralPosition,
    PostCheckFailed,
    SkewLines,
)
from .field import RATIONALS, MultiPoly, NFElement

PLUCKER_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
COORDS = ("x", "y", "z", "t")


def infer_field(values: Iterable, field=None):
    if field is not None:
        return field
    for v in values:
        if isinstance(v, NFElement):
            return v.field
        f = getattr(v, "field", None)
        if f is not None and not isinstance(v, (int,)):
            raise TypeError("pass the field explicitly for parametric coordinates")
    return RATIONALS


class _Vector4:
    __slots__ = ("field", "coords")

    def __init__(self, coords: Sequence, field=None):
        coords = tuple(coords)
        if len(coords) != 4:
            raise ValueError("expected 4 homogeneous coordinates")
        field = infer_field(coords, field)
        conv = [field.convert(c) for c in coords]
        if not any(conv):
            raise ValueError("all coordinates are zero")
        self.field = field
        self.coords = field.normalize(conv)

    def __eq__(self, other):
        return type(self) is type(other) and self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((type(self).__name__, self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _fmt(self) -> str:
        fmt = self.field.format
        return "[" + ", ".join(fmt(c) for c in self.coords) + "]"


class ProjPoint(_Vector4):
    """A point ``[x, y, z, t]``; equality is proportionality."""

    def __repr__(self):
        return f"ProjPoint{self._fmt()}"


class ProjPlane(_Vector4):
    """A plane given by the coefficients of its linear form."""

    def __repr__(self):
        return f"ProjPlane{self._fmt()}"

    def evaluate(self, point: Sequence):
        acc = self.field.zero
        for a, b in zip(self.coords, point):
            if a and b:
                acc = acc + a * b
        return acc

    def contains(self, point: ProjPoint) -> bool:
        return not self.evaluate(point.coords)

    def linear_form(self) -> MultiPoly:
        return MultiPoly(self.field, COORDS, {tuple(int(i == j) for j in range(4)): c for i, c in enumerate(self.coords)})

    def __str__(self):
        return str(self.linear_form())


class PluckerLine:
    """A line with normalized Plücker vector ``p`` and optional span points.

    Equality compares ``p`` only.
    """

    __slots__ = ("field", "p", "_span")

    def __init__(self, p: Sequence, field=None, span: tuple | None = None, *, check: bool = True):
        p = tuple(p)
        if len(p) != 6:
            raise ValueError("expected 6 Plücker coordinates")
        field = infer_field(p, field)
        conv = [field.convert(c) for c in p]
        if not any(conv):
            raise ValueError("all Plücker coordinates are zero")
        if check and conv[0] * conv[5] - conv[1] * conv[4] + conv[2] * conv[3]:
            raise ValueError("vector violates the Plücker relation")
        self.field = field
        self.p = field.normalize(conv)
        self._span = span

    def __eq__(self, other):
        return isinstance(other, PluckerLine) and self.field == other.field and self.p == other.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return "PluckerLine[" + ", ".join(self.field.format(c) for c in self.p) + "]"

    def matrix(self) -> list[list]:
        """Antisymmetric matrix whose nonzero columns are points of the line."""
        z = self.field.zero
        p01, p02, p03, p12, p13, p23 = self.p
        return [
            [z, p01, p02, p03],
            [-p01, z, p12, p13],
            [-p02, -p12, z, p23],
            [-p03, -p13, -p23, z],
        ]

    def dual_matrix(self) -> list[list]:
        """Matrix whose nonzero rows are planes through the line."""
        z = self.field.zero
        p01, p02, p03, p12, p13, p23 = self.p
        return [
            [z, p23, -p13, p12],
            [-p23, z, p03, -p02],
            [p13, -p03, z, p01],
            [-p12, p02, -p01, z],
        ]

    def points(self) -> tuple[ProjPoint, ProjPoint]:
        if self._span is None:
            cols = linalg.transpose(self.matrix())
            self._span = _two_independent(cols, self.field, ProjPoint)
        return self._span

    def planes(self) -> tuple[ProjPlane, ProjPlane]:
        return _two_independent(self.dual_matrix(), self.field, ProjPlane)

    def contains(self, point: ProjPoint) -> bool:
        return not any(linalg.matvec(self.dual_matrix(), point.coords, self.field))

    def parametrization(self) -> tuple[tuple, tuple]:
        a, b = self.points()
        return a.coords, b.coords


def _two_independent(vectors, field, cls):
    chosen = []
    for v in vectors:
        if not any(v):
            continue
        if not chosen or linalg.rank([chosen[0], v], field) == 2:
            chosen.append(v)
            if len(chosen) == 2:
                return cls(chosen[0], field), cls(chosen[1], field)
    raise ValueError("degenerate Plücker matrix")


def plucker_vector(a: Sequence, b: Sequence) -> list:
    return [a[i] * b[j] - a[j] * b[i] for i, j in PLUCKER_INDEX]


def line_from_points(a: ProjPoint, b: ProjPoint) -> PluckerLine:
    p = plucker_vector(a.coords, b.coords)
    if not any(p):
        raise CoincidentPoints("points coincide")
    return PluckerLine(p, a.field, span=(a, b), check=False)


def line_from_planes(u: ProjPlane, v: ProjPlane) -> PluckerLine:
    ker = linalg.nullspace([list(u.coords), list(v.coords)], u.field, 4)
    if len(ker) != 2:
        raise CoincidentPoints("planes coincide")
    return line_from_points(ProjPoint(ker[0], u.field), ProjPoint(ker[1], u.field))


def line_from_plucker(p: Sequence, field=None) -> PluckerLine:
    return PluckerLine(p, field)


def pairing(p: Sequence, q: Sequence):
    return (
        p[0] * q[5] - p[1] * q[4] + p[2] * q[3] + p[3] * q[2] - p[4] * q[1] + p[5] * q[0]
    )


def lines_meet(l: PluckerLine, m: PluckerLine) -> bool:
    return not pairing(l.p, m.p)


def meet_point(l: PluckerLine, m: PluckerLine) -> ProjPoint:
    if l == m:
        raise EqualLines("lines are equal")
    if not lines_meet(l, m):
        raise SkewLines("lines are skew")
    # L_l * plane through m, for a plane not containing l, is l ∩ m
    lm = l.matrix()
    for plane in m.dual_matrix():
        if any(plane):
            v = linalg.matvec(lm, plane, l.field)
            if any(v):
                return ProjPoint(v, l.field)
    raise ValueError("degenerate line")


def span_plane(l: PluckerLine, m: PluckerLine) -> ProjPlane:
    if l == m:
        raise EqualLines("lines are equal")
    if not lines_meet(l, m):
        raise SkewLines("lines are skew")
    # L*_l * point of m, for a point off l, is the joining plane
    ld = l.dual_matrix()
    for point in linalg.transpose(m.matrix()):
        if any(point):
            v = linalg.matvec(ld, point, l.field)
            if any(v):
                return ProjPlane(v, l.field)
    raise ValueError("degenerate line")


def point_on_line(point: ProjPoint, line: PluckerLine) -> bool:
    return line.contains(point)


# L-set incidence pattern, 0-based
LSET_MEETS = frozenset({(0, 1), (1, 2), (1, 4), (0, 3), (2, 3)})
EXTENDED_MEETS = LSET_MEETS | {(1, 5), (3, 5)}


def incidence_pattern_ok(n: int, meets) -> bool:
    """Check an L-set pattern given a ``meets(i, j)`` predicate on indices."""
    pattern = LSET_MEETS if n == 5 else EXTENDED_MEETS
    for i in range(n):
        for j in range(i + 1, n):
            if meets(i, j) != ((i, j) in pattern):
                return False
    return True


def is_lset(lines: Sequence[PluckerLine]) -> bool:
    lines = list(lines)
    if len(lines) not in (5, 6):
        return False
    if len(set(lines)) != len(lines):
        return False
    return incidence_pattern_ok(len(lines), lambda i, j: lines_meet(lines[i], lines[j]))


class Projectivity:
    """An invertible 4x4 matrix up to scale."""

    __slots__ = ("field", "m", "_inv", "_key")

    def __init__(self, m: Sequence[Sequence], field=None):
        rows = [list(r) for r in m]
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("expected a 4x4 matrix")
        field = infer_field([x for r in rows for x in r], field)
        rows = [[field.convert(x) for x in r] for r in rows]
        if not linalg.det(rows, field):
            raise ValueError("matrix is singular")
        self.field = field
        self.m = rows
        self._inv = None
        self._key = None

    @classmethod
    def identity(cls, field=RATIONALS) -> "Projectivity":
        return cls(linalg.identity(4, field), field)

    def key(self) -> tuple:
        if self._key is None:
            self._key = self.field.normalize([x for r in self.m for x in r])
        return self._key

    def __eq__(self, other):
        return isinstance(other, Projectivity) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        fmt = self.field.format
        return "Projectivity[" + "; ".join(", ".join(fmt(x) for x in r) for r in self.m) + "]"

    def __matmul__(self, other: "Projectivity") -> "Projectivity":
        return Projectivity(linalg.matmul(self.m, other.m, self.field), self.field)

    def inverse_matrix(self) -> list[list]:
        if self._inv is None:
            self._inv = linalg.inverse(self.m, self.field)
        return self._inv

    def inverse(self) -> "Projectivity":
        return Projectivity(self.inverse_matrix(), self.field)

    def is_identity(self) -> bool:
        return self == Projectivity.identity(self.field)

    def proportional_to(self, other: Sequence[Sequence]) -> bool:
        return self.key() == self.field.normalize([self.field.convert(x) for r in other for x in r])

    # actions

    def map_point(self, point: ProjPoint) -> ProjPoint:
        return ProjPoint(linalg.matvec(self.m, point.coords, self.field), self.field)

    def map_plane(self, plane: ProjPlane) -> ProjPlane:
        inv = self.inverse_matrix()
        return ProjPlane(linalg.matvec(linalg.transpose(inv), plane.coords, self.field), self.field)

    def map_line(self, line: PluckerLine) -> PluckerLine:
        a, b = line.points()
        return line_from_points(self.map_point(a), self.map_point(b))

    def pullback(self, form: MultiPoly) -> MultiPoly:
        """``F(M v)``, the form whose zero set is ``M^{-1}(V(F))``."""
        return linear_substitute(form, self.m)

    def map_form(self, form: MultiPoly) -> MultiPoly:
        """``F(M^{-1} v)``, the form defining ``M(V(F))``."""
        return linear_substitute(form, self.inverse_matrix())

    def __call__(self, obj):
        return apply_projectivity(self, obj)


def apply_projectivity(M: Projectivity, obj):
    if isinstance(obj, ProjPoint):
        return M.map_point(obj)
    if isinstance(obj, ProjPlane):
        return M.map_plane(obj)
    if isinstance(obj, PluckerLine):
        return M.map_line(obj)
    if isinstance(obj, MultiPoly):
        return M.map_form(obj)
    raise TypeError(f"cannot apply a projectivity to {type(obj).__name__}")


def linear_substitute(form: MultiPoly, a: Sequence[Sequence]) -> MultiPoly:
    """Substitute ``v_i -> sum_j a[i][j] v_j`` for the coordinates x, y, z, t."""
    field = form.field
    images = {}
    for i, name in enumerate(COORDS):
        terms = {tuple(int(k == j) for k in range(4)): a[i][j] for j in range(4) if a[i][j]}
        images[name] = MultiPoly(field, COORDS, terms, _trusted=True)
    return form.subs(images)


# ---------------------------------------------------------------------------
# projectivity between L-sets


def _frame_points(lines: Sequence[PluckerLine]) -> list[ProjPoint]:
    l1, l2, l3, l4 = lines[:4]
    return [meet_point(l1, l2), meet_point(l2, l3), meet_point(l3, l4), meet_point(l4, l1)]


class FrameSolver:
    """Projectivities out of a fixed source L-set.

    The four points ``l1∩l2, l2∩l3, l3∩l4, l4∩l1`` form a projective frame;
    the map is ``B diag(d) A^{-1}`` where the columns of ``A`` and ``B`` are
    source and target frame points, and ``d`` is fixed by sending ``l5`` to
    its target.
    """

    def __init__(self, source: Sequence[PluckerLine]):
        if not is_lset(source[:5]):
            raise ValueError("source is not an L-set")
        self.field = field = source[0].field
        self.source = list(source[:5])
        frame = _frame_points(self.source)
        a = linalg.transpose([p.coords for p in frame])
        if not linalg.det(a, field):
            raise NotInGeneralPosition("frame points of the source are dependent")
        self.a_inv = linalg.inverse(a, field)
        x, y = self.source[4].points()
        self.u = [linalg.matvec(self.a_inv, x.coords, field), linalg.matvec(self.a_inv, y.coords, field)]

    def solve(self, target: Sequence[PluckerLine], check: bool = True) -> Projectivity:
        field = self.field
        frame = _frame_points(target)
        b = linalg.transpose([p.coords for p in frame])
        if not linalg.det(b, field):
            raise NotInGeneralPosition("frame points of the target are dependent")
        rows = []
        for plane in target[4].planes():
            pq = [plane.evaluate(q.coords) for q in frame]
            for u in self.u:
                rows.append([u[i] * pq[i] for i in range(4)])
        ker = linalg.nullspace(rows, field, 4)
        if len(ker) != 1 or not all(ker[0]):
            raise NonUniqueSolution(f"frame scaling has kernel dimension {len(ker)}")
        d = ker[0]
        bd = [[b[i][j] * d[j] for j in range(4)] for i in range(4)]
        M = Projectivity(linalg.matmul(bd, self.a_inv, field), field)
        if check:
            _post_check(M, self.source, target)
        return M


def _post_check(M: Projectivity, source, target) -> None:
    for k, (l, m) in enumerate(zip(source[:5], target[:5])):
        if M.map_line(l) != m:
            raise PostCheckFailed(f"line {k + 1} is not mapped onto its target")


def _linear_route(source, target) -> Projectivity:
    field = source[0].field
    rows = []
    zero = field.zero

    def row_for(coeffs_by_entry):
        r = [zero] * 16
        for (i, j), c in coeffs_by_entry:
            r[4 * i + j] = r[4 * i + j] + c
        return r

    for p, q in zip(_frame_points(source), _frame_points(target)):
        # (M p)_i q_j - (M p)_j q_i = 0
        for i in range(4):
            for j in range(i + 1, 4):
                entries = [((i, k), p[k] * q[j]) for k in range(4)] + [((j, k), -p[k] * q[i]) for k in range(4)]
                rows.append(row_for(entries))
    for a in source[4].points():
        for plane in target[4].planes():
            entries = [((i, k), plane[i] * a[k]) for i in range(4) for k in range(4)]
            rows.append(row_for(entries))
    ker = linalg.nullspace(rows, field, 16)
    if len(ker) != 1:
        raise NonUniqueSolution(f"linear system has kernel dimension {len(ker)}")
    v = ker[0]
    return Projectivity([v[4 * i : 4 * i + 4] for i in range(4)], field)


def find_projectivity(source: Sequence[PluckerLine], target: Sequence[PluckerLine], method: str = "frame") -> Projectivity:
    """The unique projectivity sending each line of ``source`` onto the
    corresponding line of ``target`` (first five lines are used)."""
    if not is_lset(source[:5]) or not is_lset(target[:5]):
        raise NonUniqueSolution("inputs must be L-sets")
    if method == "frame":
        return FrameSolver(source).solve(target)
    if method == "linear":
        M = _linear_route(source, target)
        _post_check(M, source, target)
        return M
    raise ValueError(f"unknown method {method!r}")


def basic_lset(field=RATIONALS) -> list[PluckerLine]:
    """The five lines ``V(y,z), V(x,y), V(x,t), V(x-t, y-z), V(x-y, z+t)``."""
    pts = [
        ((1, 0, 0, 0), (0, 0, 0, 1)),
        ((0, 0, 1, 0), (0, 0, 0, 1)),
        ((0, 1, 0, 0), (0, 0, 1, 0)),
        ((1, 0, 0, 1), (0, 1, 1, 0)),
        ((1, 1, 0, 0), (0, 0, 1, -1)),
    ]
    return [line_from_points(ProjPoint(a, field), ProjPoint(b, field)) for a, b in pts]
