import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cubicsym import linalg
from cubicsym.errors import CoincidentPoints, SkewLines
from cubicsym.field import RATIONALS, MultiPoly, nf_create
from cubicsym.geometry import (
    PluckerLine,
    ProjPlane,
    ProjPoint,
    Projectivity,
    basic_lset,
    find_projectivity,
    is_lset,
    line_from_planes,
    line_from_points,
    lines_meet,
    meet_point,
    pairing,
    span_plane,
)

Q = RATIONALS
entries = st.integers(-4, 4)
matrices = st.lists(st.lists(entries, min_size=4, max_size=4), min_size=4, max_size=4)


def pt(*c):
    return ProjPoint(c, Q)


def plane(*c):
    return ProjPlane(c, Q)


def invertible(m):
    return bool(linalg.det([[Q(x) for x in r] for r in m], Q))


def random_matrix(rng):
    while True:
        m = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        if invertible(m):
            return Projectivity(m, Q)


L1, L2, L3, L4, L5 = basic_lset()


class TestLines:
    def test_l1_and_l2_vectors(self):
        assert line_from_points(pt(1, 0, 0, 0), pt(0, 0, 0, 1)).p == tuple(Q(x) for x in (0, 0, 1, 0, 0, 0))
        assert line_from_points(pt(0, 0, 1, 0), pt(0, 0, 0, 1)).p == tuple(Q(x) for x in (0, 0, 0, 0, 0, 1))

    def test_swap_points(self):
        a, b = pt(1, 2, 3, 4), pt(0, 1, -1, 2)
        assert line_from_points(a, b) == line_from_points(b, a)

    def test_points_and_planes_agree(self):
        assert line_from_planes(plane(0, 1, 0, 0), plane(0, 0, 1, 0)) == L1

    def test_coincident_points(self):
        with pytest.raises(CoincidentPoints):
            line_from_points(pt(1, 2, 3, 4), pt(2, 4, 6, 8))

    def test_not_on_quadric(self):
        with pytest.raises(ValueError):
            PluckerLine([1, 0, 0, 0, 0, 1], Q)

    def test_incidence_examples(self):
        E1 = PluckerLine([0, 0, 1, 0, 0, 0], Q)
        G4 = PluckerLine([0, 0, 0, 0, 0, 1], Q)
        assert lines_meet(E1, G4)
        assert not lines_meet(L1, L3)
        assert pairing(L1.p, L3.p) != 0
        assert lines_meet(L1, L1)

    def test_meet_and_span(self):
        assert meet_point(L1, L2) == pt(0, 0, 0, 1)
        assert span_plane(L1, L2) == plane(0, 1, 0, 0)
        with pytest.raises(SkewLines):
            meet_point(L1, L3)

    @given(matrices, matrices)
    @settings(max_examples=50, deadline=None)
    def test_quadric_and_symmetry(self, a, b):
        pts = [r for r in a + b if any(r)]
        assume(len(pts) >= 4)
        try:
            l = line_from_points(pt(*pts[0]), pt(*pts[1]))
            m = line_from_points(pt(*pts[2]), pt(*pts[3]))
        except CoincidentPoints:
            assume(False)
        assert not pairing(l.p, l.p)
        assert lines_meet(l, m) == lines_meet(m, l)


class TestLSets:
    def test_basic_lset(self):
        assert is_lset(basic_lset())

    def test_broken_patterns(self):
        assert not is_lset([L1, L4, L3, L2, L5])
        assert not is_lset([L1] * 5)

    def test_over_number_field(self):
        F = nf_create("w", [1, 0, 3])
        assert is_lset(basic_lset(F))


class TestProjectivity:
    def test_identity(self):
        M = find_projectivity(basic_lset(), basic_lset())
        assert M.is_identity()
        I = Projectivity.identity()
        for obj in (pt(1, 2, 3, 4), plane(1, -1, 0, 2), L5):
            assert I(obj) == obj
        F = MultiPoly.parse("x^3 + y*z*t")
        assert I(F) == F

    def test_recovers_random_matrices(self):
        rng = random.Random(2024)
        base = basic_lset()
        for _ in range(100):
            M = random_matrix(rng)
            target = [M.map_line(l) for l in base]
            assert find_projectivity(base, target) == M

    def test_frame_and_linear_routes_agree(self):
        rng = random.Random(7)
        base = basic_lset()
        for _ in range(25):
            A, B = random_matrix(rng), random_matrix(rng)
            src = [A.map_line(l) for l in base]
            dst = [B.map_line(l) for l in base]
            frame = find_projectivity(src, dst, method="frame")
            linear = find_projectivity(src, dst, method="linear")
            assert frame == linear
            assert frame == B @ A.inverse()

    def test_inverse_composition(self):
        rng = random.Random(9)
        base = basic_lset()
        M = random_matrix(rng)
        other = [M.map_line(l) for l in base]
        assert (find_projectivity(base, other) @ find_projectivity(other, base)).is_identity()

    @given(matrices, matrices, st.tuples(entries, entries, entries, entries))
    @settings(max_examples=40, deadline=None)
    def test_group_action(self, a, b, p):
        assume(invertible(a) and invertible(b) and any(p))
        M, N = Projectivity(a, Q), Projectivity(b, Q)
        P = pt(*p)
        assert (M @ N)(P) == M(N(P))
        assert (M @ N)(L5) == M(N(L5))
        pl = plane(*p)
        assert (M @ N)(pl) == M(N(pl))
        F = MultiPoly.parse("x^2*y - z^3 + 2*x*y*t")
        assert (M @ N).map_form(F).is_proportional(M.map_form(N.map_form(F)))

    @given(matrices, st.tuples(entries, entries, entries, entries))
    @settings(max_examples=40, deadline=None)
    def test_map_form_moves_zero_set(self, a, p):
        assume(invertible(a) and any(p))
        M = Projectivity(a, Q)
        P = pt(*p)
        F = MultiPoly.parse("x*y*z + y^2*t - t^3")
        val = F.eval(dict(zip("xyzt", P.coords)))
        assert (not M.map_form(F).eval(dict(zip("xyzt", M(P).coords)))) == (not val)

    @given(matrices)
    @settings(max_examples=40, deadline=None)
    def test_frame_points_in_general_position(self, a):
        assume(invertible(a))
        M = Projectivity(a, Q)
        lines = [M.map_line(l) for l in basic_lset()]
        frame = [meet_point(lines[0], lines[1]), meet_point(lines[1], lines[2]),
                 meet_point(lines[2], lines[3]), meet_point(lines[3], lines[0])]
        assert linalg.det([p.coords for p in frame], Q)
