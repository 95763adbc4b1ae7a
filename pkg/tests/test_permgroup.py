from hypothesis import given, settings
from hypothesis import strategies as st

from cubicsym import permgroup as pg

perms5 = st.permutations(list(range(5))).map(tuple)


def test_compose_applies_right_first():
    p = (1, 2, 0)
    q = (0, 2, 1)
    assert pg.compose(p, q) == tuple(p[q[i]] for i in range(3))


def test_cycle_notation_roundtrip():
    p = pg.parse_cycles("(1,3,5)(2,4)", 6)
    assert pg.cycle_notation(p) == "(1,3,5)(2,4)"
    assert pg.cycle_type(p) == (2, 3)
    assert pg.element_order(p) == 6


def test_small_groups():
    s3 = pg.closure([(1, 0, 2), (1, 2, 0)], 3)
    assert len(s3) == 6 and pg.is_closed(s3)
    assert not pg.is_abelian(s3)
    assert len(pg.center(s3)) == 1
    assert len(pg.derived_subgroup(s3)) == 3
    assert pg.order_histogram(s3) == {1: 1, 2: 3, 3: 2}
    assert sorted(map(sorted, pg.orbits(s3, 3))) == [[0, 1, 2]]


def test_regular_representation():
    z4 = list(range(4))
    reg = pg.regular_representation(z4, lambda a, b: (a + b) % 4)
    assert len(set(reg)) == 4 and pg.is_closed(reg)
    assert pg.order_histogram(reg) == {1: 1, 2: 1, 4: 2}


@given(perms5, perms5, perms5)
@settings(max_examples=100)
def test_group_laws(a, b, c):
    assert pg.compose(pg.compose(a, b), c) == pg.compose(a, pg.compose(b, c))
    assert pg.compose(a, pg.inverse(a)) == pg.identity(5)
    assert pg.parse_cycles(pg.cycle_notation(a), 5) == a


@given(st.lists(perms5, min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_closure_is_group(gens):
    G = pg.closure(gens, 5)
    assert pg.is_closed(G)
    assert 120 % len(G) == 0
    assert pg.closure(pg.greedy_generators(G), 5) == G
