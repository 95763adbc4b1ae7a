"""Cubic surfaces with their 27 labelled lines.

The residue of two meeting lines ``r`` and ``s`` is computed in plane
coordinates: with ``P0 = r ∩ s``, ``P1`` on ``r`` and ``P2`` on ``s``, the
restriction ``G(p, q, w) = F(p P0 + q P1 + w P2)`` factors as
``q * w * (alpha p + beta q + gamma w)``. The last factor cuts out the third
line of the plane; ``alpha`` vanishes exactly when that line passes through
``P0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .errors import (
    DegenerateParameters,
    DivisionFailed,
    NotCoplanar,
    NotDivisible,
    NotIncident,
    NotOnSurface,
    SingularSurface,
)
from .field import RATIONALS, MultiPoly
from .geometry import (
    COORDS,
    PluckerLine,
    ProjPlane,
    ProjPoint,
    basic_lset,
    line_from_points,
    lines_meet,
    meet_point,
    span_plane,
)
from .lines27 import BASE_SLOTS, INCIDENCE, LABELS, TRIPLES, residuation_slots

PLANE_VARS = ("p", "q", "r")

FAMILY_FORM_TEXT = (
    "b*c*(t-x)*(x*z+y*t) + c^2*(z+t)*(x*z-y*t) - c*d*(y-z)*(x*z+y*t)"
    " + c*(e+f)*(x-y)*(x*z-y*t) - e*f*(2*x^2*y-2*x*y^2+x*z^2-x*z*t+y*z*t-y*t^2)"
)


def family_form() -> MultiPoly:
    """The generic cubic through the basic L-set, in x, y, z, t and b..f."""
    return MultiPoly.parse(FAMILY_FORM_TEXT)


@dataclass
class EckardtPoint:
    triple_id: int
    point: ProjPoint


@dataclass
class CubicSurface:
    form: MultiPoly
    lines: dict[int, PluckerLine] | None = None
    planes: dict[int, ProjPlane] | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.form:
            raise ValueError("the zero form does not define a surface")
        if set(self.form.used_vars()) - set(COORDS):
            raise ValueError("form must only involve x, y, z, t")
        self.form = self.form.with_vars(COORDS)
        self.form.check_homogeneous(3)

    @property
    def field(self):
        return self.form.field

    def contains_point(self, point: ProjPoint) -> bool:
        return not self.form.eval(dict(zip(COORDS, point.coords)))

    def line(self, name: str) -> PluckerLine:
        from .lines27 import index

        if self.lines is None:
            raise ValueError("no lines attached")
        return self.lines[index(name)]

    def attach_lines(self, extended: Sequence[PluckerLine]) -> "CubicSurface":
        self.lines = lines_from_extended(self, extended)
        self.planes = None
        return self

    def tritangent_planes(self) -> dict[int, ProjPlane]:
        if self.planes is None:
            self.planes = tritangent_planes(self)
        return self.planes

    def eckardt_points(self) -> list[EckardtPoint]:
        return eckardt_points(self)

    def eckardt_ids(self) -> list[int]:
        return [e.triple_id for e in eckardt_points(self)]


def _eval_on(form: MultiPoly, coords: Sequence):
    return form.eval(dict(zip(COORDS, coords)))


def line_on_surface(S: CubicSurface | MultiPoly, line: PluckerLine) -> bool:
    """A binary cubic vanishing at four distinct parameters is zero."""
    form = S.form if isinstance(S, CubicSurface) else S
    a, b = line.parametrization()
    for s, u in ((1, 0), (0, 1), (1, 1), (1, 2)):
        pt = [s * x + u * y for x, y in zip(a, b)]
        if _eval_on(form, pt):
            return False
    return True


@dataclass
class ResidueData:
    line: PluckerLine
    alpha: object  # coefficient of p*q*r in the plane restriction
    base: ProjPoint


def _other_point(line: PluckerLine, avoid: ProjPoint) -> ProjPoint:
    for cand in line.points():
        if cand != avoid:
            return cand
    raise ValueError("degenerate span")


def residue_data(S: CubicSurface | MultiPoly, r: PluckerLine, s: PluckerLine, check: bool = True) -> ResidueData:
    form = S.form if isinstance(S, CubicSurface) else S
    fld = form.field
    if r == s:
        raise NotIncident("a line has no residue with itself")
    if not lines_meet(r, s):
        raise NotIncident("lines are skew")
    if check and not (line_on_surface(form, r) and line_on_surface(form, s)):
        raise NotOnSurface("input line does not lie on the surface")
    p0 = meet_point(r, s)
    p1 = _other_point(r, p0)
    p2 = _other_point(s, p0)
    basis = [p0.coords, p1.coords, p2.coords]
    images = {}
    for i, name in enumerate(COORDS):
        terms = {}
        for k in range(3):
            c = basis[k][i]
            if c:
                terms[tuple(int(j == k) for j in range(3))] = c
        images[name] = MultiPoly(fld, PLANE_VARS, terms, _trusted=True)
    g = form.subs(images).with_vars(PLANE_VARS)
    qr = MultiPoly(fld, PLANE_VARS, {(0, 1, 1): fld.one}, _trusted=True)
    try:
        lin = g.exact_div(qr)
    except NotDivisible as exc:
        raise DivisionFailed("plane section is not divisible by the two given lines") from exc
    coeffs = [lin.coefficient({v: 1}) for v in PLANE_VARS]
    if not any(coeffs) or lin.total_degree() != 1:
        raise DivisionFailed("plane section has no residual linear factor")
    ker = _kernel_of_form(coeffs, fld)
    pts = []
    for v in ker:
        pts.append(ProjPoint([sum((v[k] * basis[k][i] for k in range(3)), fld.zero) for i in range(4)], fld))
    return ResidueData(line_from_points(pts[0], pts[1]), coeffs[0], p0)


def _kernel_of_form(coeffs: Sequence, fld) -> list[list]:
    """Two independent solutions of ``a p + b q + c r = 0`` without division."""
    a, b, c = coeffs
    z = fld.zero
    if a:
        return [[-b, a, z], [-c, z, a]]
    if b:
        return [[fld.one, z, z], [z, -c, b]]
    return [[fld.one, z, z], [z, fld.one, z]]


def residue_line(S: CubicSurface | MultiPoly, r: PluckerLine, s: PluckerLine, check: bool = True) -> PluckerLine:
    return residue_data(S, r, s, check).line


def sixth_line_vector(b, c, d, e, f) -> list:
    """Plücker vector of the line completing the basic L-set; exchanging
    ``e`` and ``f`` gives the other completion."""
    u = c * d - c * f - e * f
    v = b * c - c * f + e * f
    w = c * f - e * f - b * c
    return [
        0 * c,
        (f - c) * u * v,
        (c - f) * u * u,
        (c + f) * v * v,
        (c + f) * u * w,
        2 * f * u * w,
    ]


def sixth_line(params: Mapping[str, object], field=RATIONALS, swap: bool = False) -> PluckerLine:
    vals = [field.convert(params[k]) for k in "bcdef"]
    b, c, d, e, f = vals
    if swap:
        e, f = f, e
    vec = sixth_line_vector(b, c, d, e, f)
    if not any(vec):
        raise DegenerateParameters("the sixth-line vector vanishes")
    return PluckerLine(vec, field)


def basic_extended_lines(params: Mapping[str, object], field=RATIONALS, swap: bool = False) -> list[PluckerLine]:
    return basic_lset(field) + [sixth_line(params, field, swap)]


def lines_from_extended(S: CubicSurface, extended: Sequence[PluckerLine]) -> dict[int, PluckerLine]:
    """All 27 lines, labelled by running the residue recipe geometrically."""
    form = S.form
    cache: dict = {}

    def res(a: PluckerLine, b: PluckerLine) -> PluckerLine:
        key = frozenset((a.p, b.p))
        if key not in cache:
            try:
                cache[key] = residue_line(form, a, b, check=False)
            except (NotIncident, DivisionFailed, ValueError) as exc:
                raise SingularSurface(f"residue computation failed: {exc}") from exc
        return cache[key]

    for k, l in enumerate(extended):
        if not line_on_surface(form, l):
            raise NotOnSurface(f"input line {k + 1} is not on the surface")
    slots = residuation_slots(list(extended), res)
    lines = {lab: line for lab, line in zip(BASE_SLOTS, slots)}
    validate_lines(S, lines)
    return dict(sorted(lines.items()))


def validate_lines(S: CubicSurface, lines: Mapping[int, PluckerLine], on_surface: bool = False) -> None:
    """Distinctness and incidence checks.

    Residue lines lie on the surface by exact division, so the membership
    test is optional.
    """
    if len(lines) != 27 or len(set(lines.values())) != 27:
        raise SingularSurface("the construction produced repeated lines")
    if on_surface:
        for lab, line in lines.items():
            if not line_on_surface(S.form, line):
                raise SingularSurface(f"{LABELS[lab]} is not on the surface")
    for a in range(27):
        for b in range(a + 1, 27):
            if lines_meet(lines[a], lines[b]) != bool(INCIDENCE[a, b]):
                raise SingularSurface(f"incidence of {LABELS[a]} and {LABELS[b]} is wrong")


def tritangent_planes(S: CubicSurface) -> dict[int, ProjPlane]:
    if S.lines is None:
        raise ValueError("no lines attached")
    out = {}
    for k, (a, b, c) in enumerate(TRIPLES):
        plane = span_plane(S.lines[a], S.lines[b])
        if not all(plane.contains(pt) for pt in S.lines[c].points()):
            raise NotCoplanar(f"lines of plane {k + 1} are not coplanar")
        out[k + 1] = plane
    return out


def eckardt_points(S: CubicSurface) -> list[EckardtPoint]:
    """Triples whose three lines are concurrent."""
    if S.lines is None:
        raise ValueError("no lines attached")
    out = []
    for k, (a, b, c) in enumerate(TRIPLES):
        pt = meet_point(S.lines[a], S.lines[b])
        if S.lines[c].contains(pt):
            out.append(EckardtPoint(k + 1, pt))
    return out


def concurrency_vector(S: CubicSurface, triple_id: int) -> list:
    """``L*`` of the third line applied to the meet of the first two; it
    vanishes exactly when the three lines of the plane are concurrent."""
    if S.lines is None:
        raise ValueError("no lines attached")
    a, b, c = TRIPLES[triple_id - 1]
    pt = meet_point(S.lines[a], S.lines[b])
    dual = S.lines[c].dual_matrix()
    zero = S.field.zero
    return [sum((row[k] * pt.coords[k] for k in range(4) if row[k] and pt.coords[k]), zero) for row in dual]


def eckardt_alpha(S: CubicSurface, triple_id: int):
    """Scalar vanishing iff the plane's three lines are concurrent."""
    a, b, _ = TRIPLES[triple_id - 1]
    return residue_data(S.form, S.lines[a], S.lines[b], check=False).alpha


def form_over(form: MultiPoly, field, values: Mapping[str, object] | None = None) -> MultiPoly:
    """Turn a polynomial in x, y, z, t and parameters into a form in x, y, z, t
    over ``field``, substituting ``values`` (default: field generators of the
    same name) for the parameters."""
    parts = form.coefficients_in(COORDS)
    gens = getattr(field, "gens", {})
    terms = {}
    for mono, coeff in parts.items():
        vals = {v: (values[v] if values is not None and v in values else gens[v]) for v in coeff.used_vars()}
        c = coeff.eval(vals, field)
        if c:
            terms[mono] = c
    return MultiPoly(field, COORDS, terms, _trusted=True)


def surface_bundle(S: CubicSurface) -> dict:
    """JSON-ready description of a surface with its lines and planes."""
    fmt = S.field.format
    out = {
        "field": repr(S.field),
        "form": str(S.form),
    }
    if S.lines is not None:
        out["lines"] = {LABELS[k]: [fmt(c) for c in l.p] for k, l in S.lines.items()}
        out["planes"] = {str(k): str(p) for k, p in S.tritangent_planes().items()}
        out["eckardt"] = [
            {"plane": e.triple_id, "point": [fmt(c) for c in e.point.coords]} for e in S.eckardt_points()
        ]
    return out
