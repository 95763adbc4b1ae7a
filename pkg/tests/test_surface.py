import random

import pytest

from cubicsym import families as fam
from cubicsym import lines27 as L
from cubicsym.field import RATIONALS, MultiPoly, ParamField
from cubicsym.geometry import PluckerLine, ProjPoint, basic_lset, lines_meet, line_from_points, meet_point, span_plane
from cubicsym.surface import (
    CubicSurface,
    basic_extended_lines,
    family_form,
    line_on_surface,
    residue_line,
    sixth_line,
    validate_lines,
)

E5_EQ8 = (
    "0",
    "(f - c)*(c*d - c*f - e*f)*(b*c - c*f + e*f)",
    "(c - f)*(c*d - c*f - e*f)^2",
    "(c + f)*(b*c - c*f + e*f)^2",
    "(c + f)*(c*d - c*f - e*f)*(c*f - e*f - b*c)",
    "2*f*(c*d - c*f - e*f)*(c*f - e*f - b*c)",
)
SWAP = {"e": MultiPoly.parse("f"), "f": MultiPoly.parse("e")}


@pytest.fixture(scope="module")
def members():
    return [fam.family_surface("Se0", fam.sample_params("Se0", k)) for k in range(3)]


@pytest.fixture(scope="module")
def generic():
    return fam.generic_surface()


def test_basic_lset_on_every_member(members):
    for S in members:
        assert all(line_on_surface(S, l) for l in basic_lset())


def test_line_off_surface(members):
    off = line_from_points(ProjPoint((0, 0, 1, 0)), ProjPoint((0, 1, 0, 1)))  # V(x, y - t)
    for S in members:
        assert not line_on_surface(S, off)
        assert off not in S.lines.values()


def test_line_through_off_surface_points(members):
    S = members[0]
    # a point on E1 and a point on G1 joined; E1 and G1 are skew, so the join
    # meets the surface in finitely many points
    a = S.line("E1").points()[0]
    b = S.line("G1").points()[1]
    assert not line_on_surface(S, line_from_points(a, b))


def test_27_lines(members):
    for S in members:
        validate_lines(S, S.lines, on_surface=True)
        assert len(set(S.lines.values())) == 27
        for a in range(27):
            for b in range(a + 1, 27):
                assert lines_meet(S.lines[a], S.lines[b]) == L.incidence(a, b)
        got = tuple(L.index(n) for n in ("E1", "G4", "E2", "G3", "E3", "E5"))
        assert [S.lines[i] for i in got] == list(basic_extended_lines(S.meta["values"]))


def test_residue_agrees_with_labels(members):
    S = members[1]
    rng = random.Random(4)
    for _ in range(30):
        a = rng.randrange(27)
        b = rng.choice([k for k in range(27) if L.incidence(a, k)])
        r = residue_line(S, S.lines[a], S.lines[b])
        assert r == S.lines[L.res_label(a, b)]
        assert residue_line(S, S.lines[a], r) == S.lines[b]
    assert residue_line(S, S.line("G4"), S.line("E3")) == S.line("F34")


def test_residue_symbolic_f14(generic):
    P = generic.field
    f14 = [P.from_multipoly(MultiPoly.parse(t, RATIONALS, P.names)) for t in
           ("0", "b*c + c^2 + e*f", "-c^2 - c*d + e*f", "0", "0", "c*(-b + e + f)")]
    assert residue_line(generic, generic.line("E1"), generic.line("G4")) == PluckerLine(f14, P)


def test_sixth_line_symbolic():
    P = ParamField(fam.PARAMS)
    vals = {p: P.convert(p) for p in fam.PARAMS}
    expect = [P.from_multipoly(MultiPoly.parse(t, RATIONALS, P.names)) for t in E5_EQ8]
    assert sixth_line(vals, P) == PluckerLine(expect, P)
    swapped = [P.from_multipoly(MultiPoly.parse(t, RATIONALS, P.names).subs(SWAP)) for t in E5_EQ8]
    assert sixth_line(vals, P, swap=True) == PluckerLine(swapped, P)


def test_specialization_commutes(generic):
    P = generic.field
    for k in range(4):
        params = fam.sample_params("Se0", 50 + k)
        S = fam.family_surface("Se0", params)
        for i in range(27):
            vec = [P.evaluate(c, params, RATIONALS) for c in generic.lines[i].p]
            assert PluckerLine(vec, RATIONALS) == S.lines[i]


def test_planes(members):
    S = members[0]
    planes = S.tritangent_planes()
    assert len(planes) == 45 and len(set(planes.values())) == 45
    assert planes[3] == span_plane(S.line("E1"), S.line("G4"))


def test_eckardt_plane_local(members):
    for name in ("Se1", "Se6"):
        S = fam.family_surface(name, fam.sample_params(name, 3))
        found = set(S.eckardt_ids())
        for tid, (a, b, c) in enumerate(L.TRIPLES, start=1):
            p = meet_point(S.lines[a], S.lines[b])
            assert (tid in found) == S.lines[c].contains(p)
    assert members[0].eckardt_ids() == []


def test_eckardt_examples():
    assert fam.family_surface("Se1", fam.sample_params("Se1", 1)).eckardt_ids() == [3]
    assert fam.family_surface("Se6", fam.sample_params("Se6", 1)).eckardt_ids() == [3, 6, 7, 13, 17, 34]
    assert len(fam.family_surface("Se18").eckardt_ids()) == 18


def test_symbolic_conditions():
    cond = fam.eckardt_conditions()
    assert cond[3].is_proportional(MultiPoly.parse("b*c + c^2 + e*f", RATIONALS, fam.PARAMS))
    assert cond[8].is_proportional(MultiPoly.parse("c^2 - c*d + e*f", RATIONALS, fam.PARAMS))


def test_surface_validation():
    with pytest.raises(ValueError):
        CubicSurface(MultiPoly.parse("x^2 + y^2"))
    with pytest.raises(ValueError):
        CubicSurface(MultiPoly.parse("x^3 + b*y^3"))
    assert family_form().used_vars()
