"""Eckardt families.

Each family is the generic cubic through the basic L-set with some of its
parameters ``b, c, d, e, f`` tied together by substitution rules. Rules are
listed in the order they are stated and applied last-first, so a rule may
use any symbol fixed by a later one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .errors import (
    DenominatorVanishes,
    DivisionByZero,
    MissingParameter,
    ParseError,
    PostCheckFailed,
    SingularMember,
    UnknownFamily,
    UnknownParameter,
)
from .field import RATIONALS, MultiPoly, NumberField, ParamField, eval_expr
from .geometry import COORDS, ProjPlane, ProjPoint, find_projectivity, line_from_points
from .lines27 import TRIPLES, index
from .surface import (
    CubicSurface,
    basic_extended_lines,
    concurrency_vector,
    family_form,
    form_over,
)

PARAMS = ("b", "c", "d", "e", "f")

SIGMA0_FACTORS = (
    "c",
    "c - f",
    "-c + e",
    "c + f",
    "c + e",
    "-e + f",
    "-c*d + c*f + e*f",
    "-c*d + c*e + e*f",
    "-c^2 - c*d + e*f",
    "b*c - c*f + e*f",
    "b*c - c*e + e*f",
    "b*c - c*d + 2*e*f",
    "b*c - c^2 + e*f",
    "b*c^2 + c^2*d + b*c*f - 2*c^2*f - c*d*f + 2*e*f^2",
    "b*c^2 + c^2*d + b*c*e - 2*c^2*e - c*d*e + 2*e^2*f",
    "-b*c^3 - 2*b*c^2*d + c^3*d + b*c^2*e + c^2*d*e + b*c^2*f + c^2*d*f + 3*b*c*e*f"
    " - 4*c^2*e*f - 3*c*d*e*f + 4*e^2*f^2",
)

Q_TEXTS = {
    1: "5*c^2 - c*e - c*f + e*f",
    2: "3*c^2 + c*e + c*f - e*f",
    3: "c^2 + 3*c*e - c*f + e*f",
    4: "c^2 - c*e + 3*c*f + e*f",
    5: "5*c^2 + c*e + c*f + e*f",
    6: "3*c^2 - c*e - c*f - e*f",
    7: "c^2 + c*e - 3*c*f + e*f",
    8: "c^2 - 3*c*e + c*f + e*f",
    9: "c^2 + e*f",
    10: "3*c^2 + e^2",
    11: "3*c^2 + f^2",
    12: "2*c - e + f",
    13: "2*c + e - f",
    14: "e + f",
}

Q_PLANES = {
    1: (1, 11, 18),
    2: (2,),
    3: (4, 28, 35),
    4: (5, 23, 36),
    5: (6, 13, 17),
    6: (8,),
    7: (9, 29, 41),
    8: (10, 24, 44),
    9: (12, 16, 31),
    10: (14, 20, 22, 26, 33, 42),
    11: (15, 19, 21, 27, 32, 45),
    12: (25, 39, 43),
    13: (30, 38, 40),
    14: (37,),
}

# the five planes whose cubes add up to the ten-point surface
PENTAHEDRON = ("y - z", "x - y", "x + t", "x - 2*y + t", "2*x - y + z")


@dataclass(frozen=True)
class QCondition:
    index: int
    poly: MultiPoly
    plane_ids: tuple


@dataclass(frozen=True)
class FamilySpec:
    name: str
    free_params: tuple
    rules: tuple  # ((symbol, expression), ...) in stated order
    eckardt_ids: tuple
    dimension: int
    reference: str  # equation of the family, up to scale
    minpoly: tuple | None = None
    constants: tuple = ()  # ((name, expression in w), ...)
    generator_note: str = ""
    stab_order: int = 1
    structure: str = "1"
    generators: tuple = ()  # ((name, cycle string), ...)
    candidates: int | None = None

    @property
    def field(self) -> NumberField:
        return _field(self.minpoly)

    @property
    def is_rational(self) -> bool:
        return self.minpoly is None

    def constant_values(self, field=None) -> dict:
        field = self.field if field is None else field
        return {k: field.parse(v) for k, v in self.constants}

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "free_params": list(self.free_params),
            "rules": [f"{s} = {e}" for s, e in self.rules],
            "field": None if self.minpoly is None else self.field.minpoly_str("w"),
            "generator": self.generator_note or None,
            "constants": {k: v for k, v in self.constants},
            "eckardt_ids": list(self.eckardt_ids),
            "dimension": self.dimension,
            "equation": self.reference,
            "stabilizer_order": self.stab_order,
            "structure": self.structure,
            "generators": {k: v for k, v in self.generators},
            "candidates": self.candidates,
        }


@lru_cache(maxsize=None)
def _field(minpoly):
    return RATIONALS if minpoly is None else NumberField(minpoly, "w")


L1 = (("b", "-(c^2 + e*f)/c"),)
L2 = L1 + (("d", "(c^2 + e*f)/c"),)
L3 = L1 + (("d", "(3*e*f - c^2 + c*f + c*e)/(2*c)"),)
L4 = L3 + (("f", "c*(3*c - e)/(c + e)"),)
L6 = L3 + (("f", "-c*(5*c + e)/(c + e)"),)
L9 = L3 + (("e", "sqrtm3*c"),)
L1P = L1 + (
    ("e", "(2*i - 1)*c*(5*c - (4*i - 3)*f)/(5*(c - f))"),
    ("d", "(2*i + 1)*(5*c^2 - (4*i + 8)*c*f - 5*f^2)/(5*(f - c))"),
)

G1 = "(2,19)(3,22)(4,7)(5,25)(6,26)(8,13)(9,14)(11,16)(12,17)(18,27)(20,24)(21,23)"
H9 = "(1,9,14)(2,19,10)(3,13,4)(5,21,17)(6,20,16)(7,8,22)(11,24,26)(12,23,25)(15,18,27)"

FAMILIES: dict[str, FamilySpec] = {}


def _register(spec: FamilySpec) -> None:
    FAMILIES[spec.name] = spec


_register(
    FamilySpec(
        "Se0",
        PARAMS,
        (),
        (),
        4,
        "b*c*(t-x)*(x*z+y*t) + c^2*(z+t)*(x*z-y*t) - c*d*(y-z)*(x*z+y*t)"
        " + c*(e+f)*(x-y)*(x*z-y*t) - e*f*(2*x^2*y-2*x*y^2+x*z^2-x*z*t+y*z*t-y*t^2)",
        candidates=25920,
    )
)
_register(
    FamilySpec(
        "Se1",
        ("c", "d", "e", "f"),
        L1,
        (3,),
        3,
        "(-x^2*z - x*z^2 - x*y*t + y*z*t + 2*y*t^2)*c^2 + (x*y*z - x*z^2 + y^2*t - y*z*t)*c*d"
        " - (x^2*z - x*y*z - x*y*t + y^2*t)*c*(e+f)"
        " + (2*x^2*y - 2*x*y^2 - x^2*z + x*z^2 - x*y*t + y*z*t)*e*f",
        stab_order=2,
        structure="C2",
        generators=(("g1", G1),),
        candidates=576,
    )
)
_register(
    FamilySpec(
        "Se1p",
        ("c", "f"),
        L1P,
        (3,),
        1,
        "(x^2*z - (w+1)*x*y*z - x*z^2 - (w+2)*x*y*t + 2*y^2*t + w*y*z*t + (w+1)*y*t^2)*c^2"
        " + (-(w+3)*x^2*y + (w+3)*x*y^2 + 2*x^2*z + (w-2)*x*y*z + x*z^2 + 2*(w+1)*x*y*t"
        " - (w+2)*y^2*t - w*y*z*t - (w+1)*y*t^2)*c*f"
        " + ((w-1)*x^2*y - (w-1)*x*y^2 + x^2*z - x*y*z - w*x*y*t + w*y^2*t)*f^2",
        minpoly=(1, 2, 2),
        constants=(("i", "w + 1"),),
        generator_note="w = sqrt(-1) - 1",
        stab_order=4,
        structure="C4",
        generators=(("g1'", "(2,3,19,22)(4,21,7,23)(5,26,25,6)(8,16,13,11)(9,12,14,17)(18,24,27,20)"),),
        candidates=576,
    )
)
_register(
    FamilySpec(
        "Se1pp",
        (),
        L1P + (("c", "i - sqrt2"), ("f", "3")),
        (3,),
        0,
        "18*x^2*y - 18*x*y^2 - 6*(w+1)*x^2*z - 3*(w^2 - 4*w - 1)*x*y*z + (w^3 - 5*w + 6)*x*z^2"
        " + (w^3 - 3*w^2 + 7*w - 9)*x*y*t - (w^3 + w - 6)*y^2*t + 3*(w^2 - 2*w + 1)*y*z*t"
        " - (w^3 - 3*w^2 + w + 3)*y*t^2",
        minpoly=(1, 0, -2, 0, 9),
        constants=(("i", "(w^3 + w)/6"), ("sqrt2", "(w^3 - 5*w)/6")),
        generator_note="w = sqrt(-1) - sqrt(2)",
        stab_order=8,
        structure="C8",
        generators=(
            ("g1''", "(1,10)(2,11,3,8,19,16,22,13)(4,24,21,27,7,20,23,18)(5,17,26,9,25,12,6,14)"),
        ),
        candidates=576,
    )
)
_register(
    FamilySpec(
        "Se2",
        ("c", "e", "f"),
        L2,
        (3, 8),
        2,
        "(-x^2*z + x*y*z - 2*x*z^2 - x*y*t + y^2*t + 2*y*t^2)*c^2"
        " + (-x^2*z + x*y*z + x*y*t - y^2*t)*c*(e + f)"
        " + (2*x^2*y - 2*x*y^2 - x^2*z + x*y*z - x*y*t + y^2*t)*e*f",
        stab_order=4,
        structure="C2xC2",
        generators=(
            ("g2", "(1,15)(3,22)(4,8)(5,25)(6,26)(7,13)(9,18)(11,20)(12,21)(14,27)(16,24)(17,23)"),
            ("h2", G1),
        ),
        candidates=96,
    )
)
_register(
    FamilySpec(
        "Se3",
        ("c", "e", "f"),
        L3,
        (3, 7, 34),
        2,
        "(2*x^2*z + x*y*z + x*z^2 + 2*x*y*t + y^2*t - 3*y*z*t - 4*y*t^2)*c^2"
        " + (2*x^2*z - 3*x*y*z + x*z^2 - 2*x*y*t + y^2*t + y*z*t)*c*(e+f)"
        " + (-4*x^2*y + 4*x*y^2 + 2*x^2*z - 3*x*y*z + x*z^2 + 2*x*y*t - 3*y^2*t + y*z*t)*e*f",
        stab_order=6,
        structure="S3",
        generators=(("g3", G1), ("h3", H9)),
        candidates=108,
    )
)
_register(
    FamilySpec(
        "Se4",
        ("c", "e"),
        L4,
        (3, 7, 8, 34),
        1,
        "(-2*x^2*z + 2*x*y*z - x*z^2 + x*y*t - y^2*t + y*t^2)*c^2"
        " + (3*x^2*y - 3*x*y^2 - 2*x^2*z + 2*x*y*z - x*z^2 - 2*x*y*t + 2*y^2*t + y*t^2)*c*e"
        " + (-x^2*y + x*y^2 + x*y*t - y^2*t)*e^2",
        stab_order=12,
        structure="C2xS3",
        generators=(
            ("g4", G1),
            ("h4", "(1,18,14,15,9,27)(2,19,10)(3,7,4,22,13,8)(5,12,17,25,21,23)(6,11,16,26,20,24)"),
        ),
        candidates=36,
    )
)
_register(
    FamilySpec(
        "Se6",
        ("c", "e"),
        L6,
        (3, 6, 7, 13, 17, 34),
        1,
        "(2*x^2*z - 4*x*y*z + x*z^2 - 3*x*y*t + y^2*t + 2*y*z*t + y*t^2)*c^2"
        " + (-5*x^2*y + 5*x*y^2 + 2*x^2*z - 4*x*y*z + x*z^2 + 2*x*y*t - 4*y^2*t + 2*y*z*t + y*t^2)*c*e"
        " + (-x^2*y + x*y^2 + x*y*t - y^2*t)*e^2",
        stab_order=24,
        structure="S4",
        generators=(
            ("g6", "(1,13)(2,10)(3,18)(5,20)(6,21)(7,15)(9,22)(11,25)(12,26)(14,27)(16,24)(17,23)"),
            ("h6", "(1,3,15,22)(2,19)(4,13,14,18)(5,6)(7,27,9,8)(11,23,21,16)(12,24,20,17)(25,26)"),
        ),
        candidates=48,
    )
)
_register(
    FamilySpec(
        "Se9",
        ("c", "f"),
        L9,
        (3, 7, 14, 20, 22, 26, 33, 34, 42),
        1,
        "(2*x^2*z - (w+1)*x*y*z + x*z^2 - w*x*y*t + y^2*t + (w-1)*y*z*t + (w-2)*y*t^2)*c"
        " + ((w+2)*x*y*(y-x) + 2*x^2*z - 3*x*y*z + x*z^2 + w*x*y*t - (w+1)*y^2*t + y*z*t)*f",
        minpoly=(1, -2, 4),
        constants=(("sqrtm3", "w - 1"),),
        generator_note="w = sqrt(-3) + 1",
        stab_order=54,
        structure="((C3xC3):C3):C2",
        generators=(
            ("g9", G1),
            ("h9", H9),
            ("k9", "(1,21,3)(2,7,13)(4,27,20)(5,26,19)(6,24,9)(8,12,14)(10,16,23)(11,15,22)(17,25,18)"),
        ),
        candidates=1296,
    )
)
_register(
    FamilySpec(
        "Se9p",
        (),
        L9 + (("f", "(i - sqrt3)^3/4 - (i - sqrt3) - 1"), ("c", "1")),
        (3, 7, 14, 20, 22, 26, 33, 34, 42),
        0,
        "312*x^2*y - 312*x*y^2 + 2*(5*w^3 - 20*w^2 + 8*w - 32)*x^2*z"
        " - (w^3 - 56*w^2 + 64*w - 152)*x*y*z + (5*w^3 - 20*w^2 + 8*w - 32)*x*z^2"
        " + 4*(w^3 + 9*w^2 - 14*w - 48)*x*y*t + (5*w^3 - 20*w^2 + 8*w + 280)*y^2*t"
        " - (9*w^3 + 16*w^2 - 48*w + 88)*y*z*t - 2*(7*w^3 - 2*w^2 - 20*w + 28)*y*t^2",
        minpoly=(1, 0, -4, 0, 16),
        constants=(("i", "w^3/8"), ("sqrt3", "w^3/8 - w"), ("sqrtm3", "1 - w^2/2")),
        generator_note="w = sqrt(-1) - sqrt(3)",
        stab_order=108,
        structure="((C3xC3):C3):C4",
        generators=(
            ("g9'", "(2,3,19,22)(4,20,7,24)(5,6,25,26)(8,17,13,12)(9,11,14,16)(18,23,27,21)"),
            ("h9'", "(1,4,6)(2,3,5)(7,10,12)(8,9,11)(13,22,27)(14,25,21)(15,26,17)(16,19,24)(18,23,20)"),
        ),
        candidates=1296,
    )
)
_register(
    FamilySpec(
        "Se10",
        (),
        L4 + (("e", "(2 - sqrt5)*c"), ("c", "1")),
        (1, 3, 7, 8, 11, 12, 16, 18, 31, 34),
        0,
        "x^2*y - x*y^2 + 2*x^2*z - 2*x*y*z + x*z^2 - 2*x*y*t + 2*y^2*t - y*t^2",
        minpoly=(1, 0, -5),
        constants=(("sqrt5", "w"),),
        generator_note="w = sqrt(5)",
        stab_order=120,
        structure="S5",
        generators=(
            ("g10", "(1,13)(2,9)(4,19)(5,20)(6,21)(7,14)(10,22)(11,23)(12,24)(15,27)(16,26)(17,25)"),
            ("h10", "(1,3,15,8,7)(2,9,22,27,19)(4,13,14,10,18)(5,17,11,24,21)(6,16,12,23,20)"),
        ),
        candidates=120,
    )
)
_register(
    FamilySpec(
        "Se18",
        (),
        L4 + (("e", "sqrtm3*c"), ("c", "1")),
        (2, 3, 7, 8, 14, 15, 19, 20, 21, 22, 26, 27, 32, 33, 34, 37, 42, 45),
        0,
        "3*x^2*y - 3*x*y^2 - 2*x^2*z + 2*x*y*z - x*z^2 - 2*x*y*t + 2*y^2*t + y*t^2",
        minpoly=(1, 0, 3),
        constants=(("sqrtm3", "w"),),
        generator_note="w = sqrt(-3)",
        stab_order=648,
        structure="(C3xC3xC3):S4",
        generators=(
            ("g18", "(1,17)(2,5)(3,4,24,26)(6,14,22,15)(7,9,20,10)(8,19,16,18)(11,25,13,23)(21,27)"),
            ("h18", "(1,26,7)(2,11,20)(3,8,18)(4,17,10)(5,9,23)(6,15,12)(13,16,14)(19,25,22)(21,27,24)"),
        ),
        candidates=648,
    )
)

_ALIASES = {"Se1'": "Se1p", "Se1''": "Se1pp", "Se9'": "Se9p"}


def get_family(name: str | FamilySpec) -> FamilySpec:
    if isinstance(name, FamilySpec):
        return name
    key = _ALIASES.get(name, name)
    if key not in FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}", known=", ".join(FAMILIES))
    return FAMILIES[key]


def family_names() -> list[str]:
    return list(FAMILIES)


# ---------------------------------------------------------------------------
# parameter handling


def parse_params(spec: FamilySpec | str, params: str | Mapping | None, field=None) -> dict:
    """Read ``k=v,...`` (or a mapping) into field elements of the family."""
    spec = get_family(spec)
    field = spec.field if field is None else field
    if params is None or params == "":
        raw: dict = {}
    elif isinstance(params, str):
        raw = {}
        for chunk in params.split(","):
            if not chunk.strip():
                continue
            if "=" not in chunk:
                raise ParseError(f"expected key=value, got {chunk!r}")
            k, v = chunk.split("=", 1)
            raw[k.strip()] = v.strip()
    else:
        raw = dict(params)
    unknown = sorted(set(raw) - set(spec.free_params))
    if unknown:
        raise UnknownParameter(f"{spec.name} has no parameter {unknown[0]!r}", allowed=",".join(spec.free_params))
    missing = [p for p in spec.free_params if p not in raw]
    if missing:
        raise MissingParameter(f"{spec.name} needs a value for {missing[0]!r}", missing=",".join(missing))
    return {k: field.convert(raw[k]) for k in spec.free_params}


def specialize(spec: FamilySpec | str, params: Mapping, field=None, constants: Mapping | None = None) -> dict:
    """Values of all five parameters after applying the family rules."""
    spec = get_family(spec)
    field = spec.field if field is None else field
    env = dict(constants if constants is not None else spec.constant_values(field))
    env.update({k: field.convert(v) for k, v in params.items()})
    for sym, text in reversed(spec.rules):
        try:
            env[sym] = eval_expr(text, env, field.convert)
        except DivisionByZero as exc:
            raise DenominatorVanishes(f"a denominator in '{sym} = {text}' vanishes", rule=sym) from exc
    missing = [p for p in PARAMS if p not in env]
    if missing:
        raise MissingParameter(f"no value for {missing[0]!r}")
    return {p: env[p] for p in PARAMS}


def sigma0_polys() -> list[MultiPoly]:
    return [MultiPoly.parse(t, RATIONALS, PARAMS) for t in SIGMA0_FACTORS]


def smoothness_check(values: Mapping, field) -> None:
    """Raise :class:`SingularMember` if a factor of the generic singular locus vanishes."""
    for text, poly in zip(SIGMA0_FACTORS, sigma0_polys()):
        if not poly.eval(values, field):
            raise SingularMember(f"singular member: {text} vanishes", factor=text)


def family_surface(name, params=None, *, lines: bool = True, field=None) -> CubicSurface:
    """A member of a family with its 27 labelled lines attached."""
    spec = get_family(name)
    field = spec.field if field is None else field
    if isinstance(params, str) or params is None:
        vals = parse_params(spec, params, field)
    else:
        vals = parse_params(spec, dict(params), field)
    values = specialize(spec, vals, field)
    smoothness_check(values, field)
    S = CubicSurface(form_over(family_form(), field, values))
    S.meta.update(family=spec.name, params={k: field.format(v) for k, v in vals.items()}, values=values)
    if lines:
        S.attach_lines(basic_extended_lines(values, field))
    return S


def symbolic_surface(name, lines: bool = True) -> CubicSurface:
    """The generic member over ``Q(free parameters)``; rational families only."""
    spec = get_family(name)
    if not spec.is_rational:
        raise ValueError(f"{spec.name} is not defined over Q")
    P = ParamField(spec.free_params)
    values = specialize(spec, P.gens, P, constants={})
    S = CubicSurface(form_over(family_form(), P, values))
    S.meta.update(family=spec.name, params="generic", values=values)
    if lines:
        S.attach_lines(basic_extended_lines(values, P))
    return S


def sample_params(
    name, rng: random.Random | int = 0, bound: int = 40, tries: int = 1000, generic: bool = True
) -> dict:
    """Small random integers for the free parameters of a smooth member.

    With ``generic`` the draw also avoids every Eckardt condition outside the
    family's own set, so the member has no extra Eckardt points.
    """
    spec = get_family(name)
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    field = spec.field
    extra = [p for t, p in eckardt_conditions().items() if t not in spec.eckardt_ids] if generic else []
    for _ in range(tries):
        vals = {p: field.convert(rng.choice([k for k in range(-bound, bound + 1) if k])) for p in spec.free_params}
        try:
            values = specialize(spec, vals, field)
            smoothness_check(values, field)
        except (SingularMember, DenominatorVanishes):
            continue
        if any(not p.eval(values, field) for p in extra):
            continue
        return vals
    raise SingularMember(f"no smooth member of {spec.name} found")


# ---------------------------------------------------------------------------
# unreduced fractions of polynomials, for symbolic work over number fields


class _Frac:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly):
        self.num = num
        self.den = den

    def _wrap(self, other):
        if isinstance(other, _Frac):
            return other
        return _Frac(self.num * 0 + other, self.den * 0 + 1)

    def __add__(self, other):
        o = self._wrap(other)
        if self.den == o.den:
            return _Frac(self.num + o.num, self.den)
        return _Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return _Frac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) + (-self)

    def __mul__(self, other):
        o = self._wrap(other)
        return _Frac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if not o.num:
            raise DivisionByZero("division by zero")
        return _Frac(self.num * o.den, self.den * o.num)

    def __pow__(self, n: int):
        if n < 0:
            return _Frac(self.den ** (-n), self.num ** (-n))
        return _Frac(self.num**n, self.den**n)

    def __bool__(self):
        return bool(self.num)


def _frac_values(spec: FamilySpec) -> tuple[dict, tuple]:
    field = spec.field
    vars = tuple(spec.free_params)

    def const(v):
        return _Frac(MultiPoly.constant(field, v, vars), MultiPoly.constant(field, 1, vars))

    env = {k: const(v) for k, v in spec.constant_values(field).items()}
    env.update({p: _Frac(MultiPoly.gen(field, p, vars), MultiPoly.constant(field, 1, vars)) for p in vars})
    for sym, text in reversed(spec.rules):
        env[sym] = eval_expr(text, env, lambda n: const(n))
    return {p: env[p] for p in PARAMS}, vars


def symbolic_form(name) -> MultiPoly:
    """The family cubic in x, y, z, t and the free parameters, denominators cleared."""
    spec = get_family(name)
    vals, vars = _frac_values(spec)
    dens: list[MultiPoly] = []
    for v in vals.values():
        if v.den.total_degree() > 0 or v.den != 1:
            if not any(v.den.is_proportional(d) for d in dens):
                dens.append(v.den)
    D = MultiPoly.constant(spec.field, 1, vars)
    for d in dens:
        D = D * d
    polys = {}
    for p, v in vals.items():
        polys[p] = (v.num * D).exact_div(v.den)
    form = MultiPoly.parse(FAMILY_TEXT, spec.field, COORDS + PARAMS)
    return form.subs(polys).with_vars(COORDS + tuple(vars))


FAMILY_TEXT = FAMILIES["Se0"].reference


def reference_form(name) -> MultiPoly:
    spec = get_family(name)
    return MultiPoly.parse(spec.reference, spec.field, COORDS + tuple(spec.free_params))


def matches_reference(name) -> bool:
    """The substituted family cubic agrees with the stated equation up to a
    factor depending only on the parameters."""
    return symbolic_form(name).proportional_over(reference_form(name), COORDS)


def normalize_form(poly: MultiPoly, outer: Sequence[str] = COORDS) -> MultiPoly:
    """Scale so the leading coefficient (as a polynomial in ``outer``) of a
    rational form is a primitive integer polynomial with positive lead."""
    from .field import primitive_rational

    return primitive_rational(poly)


# ---------------------------------------------------------------------------
# singular loci


def _flint_factors(P: ParamField, elem) -> list[MultiPoly]:
    out = []
    for f, _ in P.factor(elem):
        if f.total_degree() > 0:
            out.append(_primitive(f))
    return out


def _primitive(poly: MultiPoly) -> MultiPoly:
    from .field import primitive_rational

    return primitive_rational(poly)


@lru_cache(maxsize=None)
def singular_factors(name) -> tuple[MultiPoly, ...]:
    """Distinct factors of the singular locus of a family.

    Over Q these are irreducible. Over a number field they are the reduced
    numerators of the substituted generic factors, deduplicated up to scale.
    """
    spec = get_family(name)
    if not spec.free_params:
        values = specialize(spec, {}, spec.field)
        smoothness_check(values, spec.field)
        return ()
    polys = sigma0_polys()
    found: list[MultiPoly] = []

    def add(f):
        if f.total_degree() > 0 and not any(f.is_proportional(g) for g in found):
            found.append(f)

    if spec.is_rational:
        P = ParamField(spec.free_params)
        values = specialize(spec, P.gens, P, constants={})
        for poly in polys:
            v = poly.eval(values, P)
            if not v:
                raise SingularMember(f"every member of {spec.name} is singular")
            for f in _flint_factors(P, v):
                add(f.with_vars(spec.free_params))
    else:
        vals, vars = _frac_values(spec)
        for poly in polys:
            v = _reduce_frac(_eval_frac(poly, vals, spec, vars))
            if not v.num:
                raise SingularMember(f"every member of {spec.name} is singular")
            for f in _split_known(v.num, found):
                add(f)
    return tuple(sorted(found, key=lambda f: (f.total_degree(), str(f))))


def singular_locus(name) -> MultiPoly:
    spec = get_family(name)
    out = MultiPoly.constant(spec.field, 1, spec.free_params)
    for f in singular_factors(name):
        out = out * f
    return out


def _eval_frac(poly: MultiPoly, vals: Mapping, spec, vars) -> _Frac:
    field = spec.field
    one = MultiPoly.constant(field, 1, vars)
    acc = _Frac(one * 0, one)
    for e, c in poly.terms.items():
        term = _Frac(one * field.convert(c), one)
        for v, k in zip(poly.vars, e):
            if k:
                term = term * vals[v] ** k
        acc = acc + term
    return acc


def _reduce_frac(v: _Frac) -> _Frac:
    """Cancel the linear factors of the denominator that divide the numerator."""
    num, den = v.num, v.den
    changed = True
    while changed and den.total_degree() > 0:
        changed = False
        for g in _linear_pieces(den):
            q1, q2 = num.try_exact_div(g), den.try_exact_div(g)
            if q1 is not None and q2 is not None:
                num, den, changed = q1, q2, True
                break
    return _Frac(num, den)


def _linear_pieces(poly: MultiPoly) -> list[MultiPoly]:
    """Candidate factors of a product of linear forms: each variable and each
    difference/sum of two variables, tried by exact division."""
    vars = poly.used_vars()
    field = poly.field
    cands = [MultiPoly.gen(field, v, poly.vars) for v in vars]
    for a, b in combinations(vars, 2):
        ga, gb = MultiPoly.gen(field, a, poly.vars), MultiPoly.gen(field, b, poly.vars)
        cands += [ga - gb, ga + gb]
    return [g for g in cands if poly.try_exact_div(g) is not None]


def _monic(poly: MultiPoly) -> MultiPoly:
    _, lc = poly.leading_term()
    return poly.scale(lc.inverse())


def _split_known(num: MultiPoly, known: Sequence[MultiPoly]) -> list[MultiPoly]:
    """Peel off known factors and simple linear ones by exact division; the
    cofactor, if not constant, is kept whole."""
    out = []
    rest = num
    cands = list(known) + _linear_pieces(num)
    for g in cands:
        hit = False
        while rest.total_degree() > 0:
            q = rest.try_exact_div(g)
            if q is None:
                break
            rest, hit = q, True
        if hit:
            out.append(_monic(g))
    if rest.total_degree() > 0:
        out.append(_monic(rest))
    return out


# ---------------------------------------------------------------------------
# Eckardt conditions


@lru_cache(maxsize=None)
def generic_surface() -> CubicSurface:
    return symbolic_surface("Se0")


def strip_factors(P: ParamField, elem, factors: Sequence[MultiPoly]):
    """Remove from a polynomial every irreducible factor proportional to one
    of ``factors`` and normalize the rest; returns a MultiPoly."""
    one = MultiPoly.constant(RATIONALS, 1, P.names)
    out = one
    for f, k in P.factor(elem):
        if f.total_degree() == 0:
            continue
        f = _primitive(f.with_vars(P.names))
        if any(f.is_proportional(g.with_vars(P.names)) for g in factors):
            continue
        out = out * f**k
    return _primitive(out) if out.total_degree() else out


@lru_cache(maxsize=None)
def eckardt_conditions() -> dict[int, MultiPoly]:
    """For each tritangent plane, the polynomial in b..f whose vanishing
    (on smooth members) makes its three lines concurrent."""
    S = generic_surface()
    P = S.field
    sig = [_primitive(p) for p in sigma0_polys()]
    out = {}
    for tid in range(1, 46):
        g = P.gcd(concurrency_vector(S, tid))
        out[tid] = strip_factors(P, g, sig)
    return out


def specialized_conditions(name) -> dict[int, MultiPoly | None]:
    """The generic conditions restricted to a rational family, with factors of
    its singular locus removed; ``None`` marks conditions that vanish."""
    spec = get_family(name)
    P = ParamField(spec.free_params)
    values = specialize(spec, P.gens, P, constants={})
    sig = list(singular_factors(spec.name))
    out = {}
    for tid, poly in eckardt_conditions().items():
        v = poly.eval(values, P)
        out[tid] = None if not v else strip_factors(P, v, sig)
    return out


def q_conditions() -> list[QCondition]:
    return [
        QCondition(k, MultiPoly.parse(Q_TEXTS[k], RATIONALS, ("c", "e", "f")), Q_PLANES[k]) for k in sorted(Q_TEXTS)
    ]


def derive_q_conditions() -> tuple[list[tuple[MultiPoly, tuple]], list[int]]:
    """Group the specialized conditions of the three-point family by equality
    up to scale; returns ``([(poly, plane ids)], vanishing ids)``."""
    groups: list[tuple[MultiPoly, list]] = []
    vanish = []
    for tid, poly in specialized_conditions("Se3").items():
        if poly is None:
            vanish.append(tid)
            continue
        for g, ids in groups:
            if g.is_proportional(poly):
                ids.append(tid)
                break
        else:
            groups.append((poly, [tid]))
    return [(g, tuple(ids)) for g, ids in groups], vanish


# ---------------------------------------------------------------------------
# configuration reports


def _rank(points: Sequence[ProjPoint], field) -> int:
    return linalg.rank([list(p.coords) for p in points], field)


def collinearity_report(S: CubicSurface) -> dict:
    """Maximal collinear sets of at least three Eckardt points, and the plane
    containing all of them when it is unique."""
    eck = S.eckardt_points()
    field = S.field
    pts = [e.point for e in eck]
    ids = [e.triple_id for e in eck]
    groups = []
    for i, j in combinations(range(len(pts)), 2):
        members = tuple(ids[k] for k in range(len(pts)) if _rank([pts[i], pts[j], pts[k]], field) <= 2)
        if len(members) >= 3 and members not in groups:
            groups.append(members)
    plane = None
    if len(pts) >= 3:
        ker = linalg.nullspace([list(p.coords) for p in pts], field, 4)
        if len(ker) == 1:
            plane = ProjPlane(ker[0], field)
    return {"eckardt_ids": ids, "collinear": sorted(groups), "plane": plane}


def sylvester_weights(S: CubicSurface, forms: Sequence[str] = PENTAHEDRON) -> list | None:
    """Nonzero scalars ``w_i`` with ``sum w_i L_i^3`` equal to the surface form,
    or ``None``. Each plane fixes its linear form only up to scale, so this
    is the sum of cubes of suitably rescaled forms."""
    field = S.field
    cubes = [MultiPoly.parse(text, field, COORDS).with_vars(COORDS) ** 3 for text in forms]
    polys = cubes + [S.form]
    monoms = sorted(set().union(*[set(p.terms) for p in polys]))
    rows = [[p.terms.get(m, field.zero) for p in polys] for m in monoms]
    ker = linalg.nullspace(rows, field, len(polys))
    if len(ker) != 1 or not ker[0][-1]:
        return None
    v = ker[0]
    w = [-x / v[-1] for x in v[:-1]]
    return w if all(w) else None


def sylvester_check(S: CubicSurface, forms: Sequence[str] = PENTAHEDRON) -> bool:
    """Whether the surface is a sum of cubes of multiples of ``forms``."""
    return sylvester_weights(S, forms) is not None


def recover_parameters(form: MultiPoly) -> dict:
    """Write a cubic as ``b c U1 + c^2 U2 + c d U3 + c(e+f) U4 + ef U5`` and
    return ``b, d, e+f, ef`` normalized to ``c = 1``."""
    field = form.field
    basis = []
    monos = [("b", "c"), ("c", "c"), ("c", "d"), ("c", "e"), ("e", "f")]
    generic = MultiPoly.parse(FAMILY_TEXT, RATIONALS, COORDS + PARAMS)
    parts = generic.coefficients_in(PARAMS)
    for a, b in monos:
        key = tuple(int(p == a) + int(p == b) for p in PARAMS)
        basis.append(parts[tuple(key)].with_vars(COORDS))
    monoms = sorted(set().union(*[set(u.terms) for u in basis]) | set(form.with_vars(COORDS).terms))
    F = form.with_vars(COORDS)
    rows = []
    for m in monoms:
        rows.append([field.convert(u.terms.get(m, 0)) for u in basis] + [-F.terms.get(m, field.zero)])
    ker = linalg.nullspace(rows, field, 6)
    sol = [v for v in ker if v[5]]
    if len(ker) != 1 or not sol:
        raise ValueError("form is not in the span of the family")
    v = sol[0]
    u = [x / v[5] for x in v[:5]]
    if not u[1]:
        raise ValueError("the c^2 part vanishes")
    b, d, s, p = u[0] / u[1], u[2] / u[1], u[3] / u[1], u[4] / u[1]
    return {"b": b, "c": field.one, "d": d, "e+f": s, "ef": p}


def _in_three_point_family(params: Mapping) -> bool:
    b, c, d, s, p = params["b"], params["c"], params["d"], params["e+f"], params["ef"]
    return b == -(c * c + p) / c and d == (3 * p - c * c + c * s) / (2 * c)


WITNESS_LSETS = {"T0T1": ("G4", "E1", "G3", "E2", "G2"), "Se9pair": ("F46", "G6", "F26", "F15", "E3")}


def t0_member(params: Mapping, field=RATIONALS) -> CubicSurface:
    """Member of the three-point family with ``Q2 = 0`` solved for ``f``."""
    spec = FamilySpec("T0", ("c", "e"), L3 + (("f", "c*(3*c + e)/(e - c)"),), (2, 3, 7, 34), 1, "")
    return _custom_member(spec, params, field)


def t2_member(params: Mapping, field=RATIONALS) -> CubicSurface:
    """Member of the three-point family with ``e + f = 0``."""
    spec = FamilySpec("T2", ("c", "e"), L3 + (("f", "-e"),), (3, 7, 34, 37), 1, "")
    return _custom_member(spec, params, field)


def _custom_member(spec: FamilySpec, params: Mapping, field) -> CubicSurface:
    values = specialize(spec, {k: field.convert(v) for k, v in params.items()}, field, constants={})
    smoothness_check(values, field)
    S = CubicSurface(form_over(family_form(), field, values))
    S.meta.update(family=spec.name, values=values)
    S.attach_lines(basic_extended_lines(values, field))
    return S


def se9_conjugate(params: Mapping, field) -> CubicSurface:
    """Member of the nine-point family built with the other square root of -3."""
    spec = FAMILIES["Se9"]
    consts = spec.constant_values(field)
    consts["sqrtm3"] = -consts["sqrtm3"]
    values = specialize(spec, params, field, constants=consts)
    smoothness_check(values, field)
    S = CubicSurface(form_over(family_form(), field, values))
    S.meta.update(family="Se9-conjugate", values=values)
    return S


def _lset_lines(S: CubicSurface, names: Sequence[str]):
    return [S.lines[index(n)] for n in names]


def equivalence_witness(kind: str, params: Mapping | None = None) -> dict:
    """An explicit projectivity between two subfamilies, post-checked.

    ``T0T1``: from a member of the ``Q2 = 0`` family to the ``Q6 = 0`` family.
    ``T0T2``: from the ``Q2 = 0`` family to the ``e + f = 0`` family.
    ``Se9pair``: between the two nine-point families.
    ``identity``: a member to itself.
    """
    from .lines27 import BASIC_LSET, LABELS, e6_array, triple_images
    from .geometry import Projectivity

    if kind == "Se9pair":
        spec = FAMILIES["Se9"]
        field = spec.field
        vals = parse_params(spec, params, field)
        S = family_surface("Se9", vals)
        M = find_projectivity(_lset_lines(S, WITNESS_LSETS[kind]), [S.lines[i] for i in BASIC_LSET])
        c, f = vals["c"], vals["f"]
        r = spec.constant_values(field)["sqrtm3"]
        target_params = {"c": f - c, "f": -c + 2 * r * c - f}
        T = se9_conjugate(target_params, field)
        image = M.map_form(S.form)
        if image.is_proportional(T.form):
            how = "image"
        elif M.pullback(S.form).is_proportional(T.form):
            how = "preimage"
        else:
            raise PostCheckFailed("the witness does not map the surface onto the conjugate member")
        return {"matrix": M, "source": S, "target": T, "target_params": target_params, "direction": how}
    if kind in ("T0T1", "T0T2"):
        field = RATIONALS
        vals = {k: field.convert(v) for k, v in (params or {"c": 1, "e": 5}).items()}
        S = t0_member(vals, field)
        if kind == "T0T1":
            names = WITNESS_LSETS["T0T1"]
            cond = lambda q: 3 - q["e+f"] - q["ef"]  # noqa: E731  (Q6 with c = 1)
        else:
            # an element of E6 carrying the configuration of e + f = 0 onto that of Q2 = 0
            arr = e6_array()
            img = triple_images(arr)
            src = [k - 1 for k in (3, 7, 34, 37)]
            dst = {k - 1 for k in (2, 3, 7, 34)}
            row = next(r for r in range(len(arr)) if {int(v) for v in img[r, src]} == dst)
            names = [LABELS[int(arr[row][i])] for i in BASIC_LSET]
            cond = lambda q: q["e+f"]  # noqa: E731
        M = find_projectivity(_lset_lines(S, names), [S.lines[i] for i in BASIC_LSET])
        image = M.map_form(S.form)
        q = recover_parameters(image)
        if not _in_three_point_family(q) or cond(q):
            raise PostCheckFailed(f"{kind} witness image is not in the target family")
        return {"matrix": M, "source": S, "image": image, "image_params": q, "lset": tuple(names)}
    if kind == "identity":
        field = RATIONALS
        vals = {k: field.convert(v) for k, v in (params or {"c": 1, "e": 5}).items()}
        S = t0_member(vals, field)
        M = find_projectivity([S.lines[i] for i in BASIC_LSET], [S.lines[i] for i in BASIC_LSET])
        if not M.is_identity():
            raise PostCheckFailed("identity witness is not the identity")
        return {"matrix": M, "source": S}
    raise ValueError(f"unknown witness kind {kind!r}")


def eckardt_plane_values(S: CubicSurface, plane_texts: Sequence[str]) -> list[list[int]]:
    """For each plane (linear form in x, y, z, t), the Eckardt ids it contains."""
    field = S.field
    eck = S.eckardt_points()
    out = []
    for text in plane_texts:
        lin = MultiPoly.parse(text, field, COORDS).with_vars(COORDS)
        out.append([e.triple_id for e in eck if not lin.eval(dict(zip(COORDS, e.point.coords)))])
    return out


def line_through(p: ProjPoint, q: ProjPoint):
    return line_from_points(p, q)


def family_report(name) -> dict:
    return get_family(name).to_dict()


# ---------------------------------------------------------------------------
# the singular boundary


def construction_breaks(values: Mapping, field) -> str | None:
    """Build the cubic and its 27 lines without the smoothness test; return
    the name of the failure, or ``None`` if 27 valid lines come out."""
    from .errors import CubicSymError

    try:
        S = CubicSurface(form_over(family_form(), field, values))
        S.attach_lines(basic_extended_lines(values, field))
    except (CubicSymError, ValueError, ZeroDivisionError) as exc:
        return type(exc).__name__
    return None


def _root_field(coeffs_low: Sequence) -> tuple:
    """A field containing a root of a univariate rational polynomial and the root."""
    import flint

    from .field import to_rational

    poly = flint.fmpq_poly([flint.fmpq(int(q.numerator), int(q.denominator)) for q in map(to_rational, coeffs_low)])
    _, facs = poly.factor()
    facs = sorted((f for f, _ in facs), key=lambda f: f.degree())
    g = facs[0]
    if g.degree() == 1:
        c = g.coeffs()
        root = -c[0] / c[1]
        return RATIONALS, RATIONALS.convert(f"{root.p}/{root.q}")
    lc = g.coeffs()[-1]
    monic = [g.coeffs()[k] / lc for k in range(g.degree(), -1, -1)]
    K = NumberField([f"{q.p}/{q.q}" for q in monic], "w")
    return K, K.gen


def boundary_point(
    factor: MultiPoly, others: Sequence[MultiPoly], rng: random.Random, bound: int = 9, tries: int = 200
) -> tuple[dict, object]:
    """Random parameters on ``factor = 0`` and off every polynomial in ``others``.

    All variables but one get small random integers; the last one is a root
    of the resulting univariate polynomial, adjoined if irrational.
    """
    used = factor.used_vars()
    var = min(used, key=lambda v: (factor.degree_in(v), used.index(v)))
    rest = [v for v in factor.vars if v != var]
    for _ in range(tries):
        vals = {v: RATIONALS.convert(rng.choice([k for k in range(-bound, bound + 1) if k])) for v in rest}
        uni = factor.partial_eval(vals).with_vars((var,))
        deg = uni.degree_in(var)
        if deg < 1:
            continue
        low = [uni.coefficient({var: k}) for k in range(deg + 1)]
        K, root = _root_field(low)
        point = {v: K.convert(x) for v, x in vals.items()}
        point[var] = root
        if not factor.with_vars(factor.vars).map_coefficients(K.convert, K).eval(point, K) == K.zero:
            continue
        if any(not o.map_coefficients(K.convert, K).eval(point, K) for o in others):
            continue
        return point, K
    raise ValueError(f"no point found on {factor}")


def boundary_trials(name: str, factor: MultiPoly, samples: int = 5, seed: int = 0) -> list[str | None]:
    """Outcome of the line construction at points zeroing exactly one factor
    of a family's singular locus."""
    spec = get_family(name)
    factors = sigma0_polys() if spec.name == "Se0" else list(singular_factors(spec.name))
    others = [g for g in factors if not g.is_proportional(factor)]
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        point, K = boundary_point(factor, others, rng)
        try:
            values = specialize(spec, point, K, constants={}) if spec.rules else point
        except DenominatorVanishes:
            out.append("DenominatorVanishes")
            continue
        out.append(construction_breaks(values, K))
    return out
