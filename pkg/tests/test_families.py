import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicsym import families as fam
from cubicsym.errors import DenominatorVanishes, MissingParameter, SingularMember, UnknownFamily, UnknownParameter
from cubicsym.field import RATIONALS, MultiPoly
from cubicsym.geometry import line_from_points

SE10_ROW = "x^2*y - x*y^2 + 2*x^2*z - 2*x*y*z + x*z^2 - 2*x*y*t + 2*y^2*t - y*t^2"
TABLE3 = {
    "Se0": [],
    "Se1": [3],
    "Se1p": [3],
    "Se1pp": [3],
    "Se2": [3, 8],
    "Se3": [3, 7, 34],
    "Se4": [3, 7, 8, 34],
    "Se6": [3, 6, 7, 13, 17, 34],
    "Se9": [3, 7, 14, 20, 22, 26, 33, 34, 42],
    "Se9p": [3, 7, 14, 20, 22, 26, 33, 34, 42],
    "Se10": [1, 3, 7, 8, 11, 12, 16, 18, 31, 34],
    "Se18": [2, 3, 7, 8, 14, 15, 19, 20, 21, 22, 26, 27, 32, 33, 34, 37, 42, 45],
}
# independent re-entry of the singular locus of the five-parameter family
SIGMA0 = [
    "c", "c - f", "-c + e", "c + f", "c + e", "-e + f", "-c*d + c*f + e*f", "-c*d + c*e + e*f",
    "-c^2 - c*d + e*f", "b*c - c*f + e*f", "b*c - c*e + e*f", "b*c - c*d + 2*e*f", "b*c - c^2 + e*f",
    "b*c^2 + c^2*d + b*c*f - 2*c^2*f - c*d*f + 2*e*f^2",
    "b*c^2 + c^2*d + b*c*e - 2*c^2*e - c*d*e + 2*e^2*f",
    "-b*c^3 - 2*b*c^2*d + c^3*d + b*c^2*e + c^2*d*e + b*c^2*f + c^2*d*f + 3*b*c*e*f - 4*c^2*e*f - 3*c*d*e*f + 4*e^2*f^2",
]


def P(text, vars=fam.PARAMS):
    return MultiPoly.parse(text, RATIONALS, vars)


def test_registry_and_aliases():
    assert fam.family_names() == list(TABLE3)
    assert fam.get_family("Se1''").name == "Se1pp"
    assert fam.get_family("Se9'").name == "Se9p"
    with pytest.raises(UnknownFamily):
        fam.get_family("Se5")


def test_table3_ids_in_registry():
    assert {n: list(fam.get_family(n).eckardt_ids) for n in TABLE3} == TABLE3


def test_se10_equation():
    S = fam.family_surface("Se10")
    assert S.form.is_proportional(MultiPoly.parse(SE10_ROW, S.field, S.form.vars))


@pytest.mark.parametrize("name", list(TABLE3))
def test_reference_equations(name):
    assert fam.matches_reference(name)


@pytest.mark.parametrize("name", [n for n in TABLE3 if fam.get_family(n).free_params])
def test_eckardt_ids_over_random_members(name):
    rng = random.Random(hash(name) % 1000)
    for _ in range(20):
        S = fam.family_surface(name, fam.sample_params(name, rng))
        assert S.eckardt_ids() == TABLE3[name]


def test_parameter_errors():
    with pytest.raises(SingularMember) as info:
        fam.family_surface("Se6", {"c": 1, "e": 1})
    assert "e" in str(info.value.details.get("factor", ""))
    with pytest.raises(UnknownParameter):
        fam.family_surface("Se6", "c=1,q=2")
    with pytest.raises(MissingParameter):
        fam.family_surface("Se6", "c=1")
    with pytest.raises((DenominatorVanishes, SingularMember)):
        fam.family_surface("Se6", {"c": 1, "e": -1})


def test_number_field_params():
    S = fam.family_surface("Se9", "c=1+w,f=3")
    assert S.eckardt_ids() == TABLE3["Se9"]


class TestConditions:
    def test_q_examples(self):
        q = {c.index: c for c in fam.q_conditions()}
        assert len(q) == 14
        assert q[9].poly.is_proportional(P("c^2 + e*f")) and q[9].plane_ids == (12, 16, 31)
        assert q[14].poly.is_proportional(P("e + f")) and q[14].plane_ids == (37,)

    def test_swap_pairs(self):
        q = {c.index: c.poly for c in fam.q_conditions()}
        swap = {"e": P("f"), "f": P("e")}
        for a, b in ((3, 4), (7, 8), (10, 11), (12, 13)):
            assert q[a].subs(swap).is_proportional(q[b])

    def test_derived_groups_match(self):
        groups, vanish = fam.derive_q_conditions()
        assert sorted(vanish) == [3, 7, 34]
        assert len(groups) == 14
        for c in fam.q_conditions():
            hits = [ids for g, ids in groups if g.is_proportional(c.poly)]
            assert len(hits) == 1 and tuple(sorted(hits[0])) == c.plane_ids

    def test_sigma0(self):
        got = fam.sigma0_polys()
        assert len(got) == 16
        for text in SIGMA0:
            assert sum(g.is_proportional(P(text)) for g in got) == 1

    def test_sigma6(self):
        expect = ["c", "c - e", "3*c + e", "c + e", "5*c^2 + 2*c*e + e^2"]
        got = fam.singular_factors("Se6")
        assert len(got) == 5
        for text in expect:
            assert any(g.is_proportional(P(text, ("c", "e"))) for g in got)
        prod = P("c*(c - e)*(3*c + e)*(c + e)*(5*c^2 + 2*c*e + e^2)", ("c", "e"))
        assert fam.singular_locus("Se6").is_proportional(prod)

    def test_boundary_breaks_construction(self):
        f = P("c - e", ("c", "e"))
        assert fam.boundary_trials("Se6", f, samples=5, seed=3) != [None] * 5
        assert None not in fam.boundary_trials("Se6", f, samples=5, seed=3)


class TestGeometry:
    def test_se3_collinear(self):
        rep = fam.collinearity_report(fam.family_surface("Se3", fam.sample_params("Se3", 4)))
        assert rep["collinear"] == [(3, 7, 34)]

    def test_se1_has_none(self):
        rep = fam.collinearity_report(fam.family_surface("Se1", fam.sample_params("Se1", 4)))
        assert rep["collinear"] == [] and rep["plane"] is None

    def test_se9_plane(self):
        S = fam.family_surface("Se9", fam.sample_params("Se9", 4))
        rep = fam.collinearity_report(S)
        # w = 1 + sqrt(-3), so 1 - sqrt(-3) = 2 - w
        lin = MultiPoly.parse("(2 - w)*x - y + z", S.field, ("x", "y", "z", "t")).with_vars(("x", "y", "z", "t"))
        assert rep["plane"] is not None
        assert tuple(rep["plane"].coords) == S.field.normalize([lin.coefficient({v: 1}) for v in "xyzt"])

    def test_se2_line_is_attached(self):
        for k in range(3):
            S = fam.family_surface("Se2", fam.sample_params("Se2", k))
            a, b = (e.point for e in S.eckardt_points())
            assert line_from_points(a, b) == S.line("G4")

    def test_se3_line_not_attached(self):
        for k in range(3):
            S = fam.family_surface("Se3", fam.sample_params("Se3", k))
            pts = [e.point for e in S.eckardt_points()]
            l = line_from_points(pts[0], pts[1])
            assert l.contains(pts[2])
            assert l not in S.lines.values()

    def test_sylvester(self):
        S10, S18 = fam.family_surface("Se10"), fam.family_surface("Se18")
        assert fam.sylvester_check(S10)
        assert not fam.sylvester_check(S18)
        forms = list(fam.PENTAHEDRON)
        rng = random.Random(1)
        for _ in range(3):
            rng.shuffle(forms)
            assert fam.sylvester_check(S10, forms)
        w = fam.sylvester_weights(S10)
        assert [x / w[0] for x in w] == [1, -8, -1, 1, 1]


class TestWitnesses:
    def test_t0_t1(self):
        w = fam.equivalence_witness("T0T1", {"c": 1, "e": 5})
        q = w["image_params"]
        assert 3 - q["e+f"] - q["ef"] == 0

    def test_t0_t2(self):
        w = fam.equivalence_witness("T0T2", {"c": 1, "e": 7})
        assert w["image_params"]["e+f"] == 0
        assert w["lset"] == ("E2", "F23", "F14", "G4", "G2")

    def test_identity(self):
        assert fam.equivalence_witness("identity")["matrix"].is_identity()

    @given(st.integers(0, 10**6))
    @settings(max_examples=5, deadline=None)
    def test_se9_pair(self, seed):
        w = fam.equivalence_witness("Se9pair", fam.sample_params("Se9", seed))
        assert w["direction"] == "image"
        assert w["matrix"].map_form(w["source"].form).is_proportional(w["target"].form)


@given(st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_three_point_members_property(seed):
    params = fam.sample_params("Se3", seed)
    S = fam.family_surface("Se3", params)
    assert S.eckardt_ids() == [3, 7, 34]
    rec = fam.recover_parameters(S.form)
    v = S.meta["values"]
    c = v["c"]
    assert rec["b"] == v["b"] / c and rec["d"] == v["d"] / c
