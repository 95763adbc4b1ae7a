"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line and then asserts the measured facts
against constants frozen here, independently of the verdict computed in
``cubicsym.verify``.
"""

import pytest

from cubicsym import families as fam
from cubicsym import verify
from cubicsym.field import RATIONALS, MultiPoly

CENSUS = {"lsets": 25920, "extended": 51840, "e6_order": 51840, "closed": True}
CANDIDATES = {"Se1": 576, "Se2": 96, "Se3": 108, "Se4": 36, "Se6": 48, "Se9": 1296, "Se10": 120, "Se18": 648}
ORDERS = {
    "Se1": 2, "Se1p": 4, "Se1pp": 8, "Se2": 4, "Se3": 6, "Se4": 12,
    "Se6": 24, "Se9": 54, "Se9p": 108, "Se10": 120, "Se18": 648,
}
ECKARDT_IDS = {
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


def _report(capsys, res):
    with capsys.disabled():
        print("\n" + res.line())
    return res


def _run(n, capsys):
    return _report(capsys, verify.run_criterion(n, seed=0, jobs=1))


def test_criterion_01_census(capsys):
    r = _run(1, capsys)
    assert r.detail == CENSUS
    assert r.ok


def test_criterion_02_incidence(capsys):
    r = _run(2, capsys)
    assert r.detail == {"degrees": [10], "triangles": 45, "match_triples": True}
    assert r.ok


def test_criterion_03_generic_lines(capsys):
    r = _run(3, capsys)
    assert r.detail == {"valid_members": 10, "residue_matches": 10, "e5_matches": True}
    assert r.ok


def test_criterion_04_eckardt_conditions(capsys):
    r = _run(4, capsys)
    assert r.detail["tau3"] and r.detail["tau8"]
    assert r.detail["distinct"] == 14
    assert r.detail["q_matched"] == 14
    assert r.detail["vanishing"] == [3, 7, 34]
    assert r.ok


def test_criterion_05_family_equations(capsys):
    r = _run(5, capsys)
    assert set(r.detail) == set(ECKARDT_IDS)
    assert all(r.detail.values())
    assert r.ok


def test_criterion_06_eckardt_counts(capsys):
    r = _run(6, capsys)
    assert all(r.detail.values())
    for name, ids in ECKARDT_IDS.items():
        assert list(fam.get_family(name).eckardt_ids) == ids
    assert r.ok


def test_criterion_07_orders(capsys):
    r = _run(7, capsys)
    assert r.detail["candidates"] == CANDIDATES
    assert r.detail["orders"] == ORDERS
    assert r.detail["A6"] == 96
    assert r.detail["Se0"] == 1
    assert r.ok


def test_criterion_08_structures(capsys):
    r = _run(8, capsys)
    assert set(r.detail["labels"]) == set(ORDERS)
    assert all(r.detail["labels"].values())
    assert all(r.detail["cycle_types"].values())
    assert r.ok


def test_criterion_09_geometry(capsys):
    r = _run(9, capsys)
    d = r.detail
    assert d["Se6_on_x"] and d["Se9_on_plane"]
    assert d["Se10_orbit"] and d["Se10_image_order"] == 120 and d["Se10_sylvester"]
    assert d["Se18_per_plane"] == [9, 9, 9, 9] and d["Se18_covered"]
    assert d["Se4_line_orbits"] == [3, 6, 6, 6, 6]
    assert r.ok


def test_criterion_10_boundary(capsys):
    r = _run(10, capsys)
    assert len(r.detail) == 16 + 5
    assert all(v == 5 for v in r.detail.values())
    assert r.ok


def test_criterion_11_witness(capsys):
    r = _run(11, capsys)
    assert r.detail["runs"] == ["image"] * 5
    assert r.ok


@pytest.mark.xfail(strict=True, reason="the printed worked matrix is unipotent and cannot stabilize a surface")
def test_criterion_12_printed_matrix(capsys):
    r = _run(12, capsys)
    assert r.detail["computed_stabilizes"]
    assert r.detail["equals_printed"] and r.detail["printed_stabilizes"]


def test_computed_se6_worked_matrix():
    S, M = verify.computed_se6_matrix()
    P = S.field
    k = "c*(c + e)"
    frozen = [
        [k, "0", "0", "0"],
        ["0", k, "0", "0"],
        ["0", "0", k, "0"],
        ["(c - e)*(3*c + e)", "-c^2 + 4*c*e + e^2", "-2*" + k, "-" + k],
    ]
    expect = [[P.from_multipoly(MultiPoly.parse(x, RATIONALS, P.names)) for x in row] for row in frozen]
    assert M.proportional_to(expect)
    assert M.pullback(S.form).is_proportional(S.form)
    assert M.key() != M.identity(P).key()
    assert (M @ M).is_identity()
