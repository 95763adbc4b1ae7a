import random
from itertools import combinations

import pytest

from cubicsym import families as fam
from cubicsym import lines27 as L
from cubicsym import permgroup as pg
from cubicsym import stabilizer as st
from cubicsym.errors import ClosureViolation, UnknownLabel
from cubicsym.geometry import find_projectivity

ORDERS = {"Se1": 2, "Se1p": 4, "Se2": 4, "Se3": 6, "Se4": 12, "Se6": 24, "Se9": 54}
C8_HISTOGRAM = {1: 1, 2: 1, 4: 2, 8: 4}
_CACHE = {}


def stab(name, seed=0):
    if (name, seed) not in _CACHE:
        spec = fam.get_family(name)
        params = fam.sample_params(name, seed) if spec.free_params else None
        _CACHE[name, seed] = st.compute_stabilizer(name, params)
    return _CACHE[name, seed]


def cycle_counts(p):
    return sorted(len(c) for c in pg.cycles(p))


class TestCandidates:
    @pytest.mark.parametrize("name,count", [("Se1", 576), ("Se6", 48), ("Se9", 1296)])
    def test_counts(self, name, count):
        assert len(st.candidate_images(fam.get_family(name).eckardt_ids)) == count

    def test_se6_matrices(self):
        ms = st.candidate_matrices("Se6", fam.sample_params("Se6", 0))
        assert len(ms) == 48 and len({M.key() for M in ms}) == 48


class TestOrders:
    @pytest.mark.parametrize("name", list(ORDERS))
    def test_constant_over_draws(self, name):
        rng = random.Random(31)
        for _ in range(10):
            G = st.compute_stabilizer(name, fam.sample_params(name, rng))
            assert G.order == ORDERS[name]

    def test_rigid_members(self):
        assert stab("Se1pp").order == 8
        assert stab("Se10").order == 120
        assert stab("Se18").order == 648

    def test_generic_member_trivial(self):
        G = st.compute_stabilizer("Se0", fam.sample_params("Se0", 3))
        assert G.order == 1
        assert G.perms == [tuple(range(27))]
        assert all(len(o) == 1 for o in st.line_orbits(G))
        assert not [p for p in G.perms if pg.element_order(p) in (2, 3, 5)]

    def test_parallel_matches_serial(self):
        params = fam.sample_params("Se6", 8)
        a = st.compute_stabilizer("Se6", params, jobs=1)
        b = st.compute_stabilizer("Se6", params, jobs=2)
        assert a.perms == b.perms


class TestStructure:
    def test_fingerprints(self):
        fp1 = st.group_fingerprint(stab("Se1"))
        assert fp1.order == 2 and dict(fp1.histogram) == {1: 1, 2: 1}
        fp8 = st.group_fingerprint(stab("Se1pp"))
        assert dict(fp8.histogram) == C8_HISTOGRAM and fp8.is_abelian
        fp4 = st.group_fingerprint(stab("Se4"))
        assert fp4.order == 12 and not fp4.is_abelian
        assert st.match_structure(stab("Se4"), "C2×S3")

    def test_labels(self):
        assert st.match_structure(stab("Se10"), "S5")
        assert st.match_structure(stab("Se9"), "((C3×C3)⋊C3)⋊C2")
        assert stab("Se9").order == 54
        assert not st.match_structure(stab("Se1"), "C4")
        with pytest.raises(UnknownLabel):
            st.reference_fingerprint("PSL(2,7)")

    def test_models_are_separated(self):
        fps = {lab: st.reference_fingerprint(lab) for lab in st.STRUCTURE_LABELS}
        for a, b in combinations(fps, 2):
            assert fps[a] != fps[b], (a, b)

    def test_models_are_groups(self):
        for lab, build in st._models().items():
            elements = build()
            assert pg.is_closed(elements), lab
            assert len(set(elements)) == st.reference_fingerprint(lab).order


class TestGroupInvariants:
    @pytest.mark.parametrize("name", ["Se3", "Se6", "Se9", "Se10"])
    def test_injective_and_admissible(self, name):
        G = stab(name)
        st.verify_group(G)
        assert len(set(G.perms)) == G.order
        eck = {frozenset(L.TRIPLES[t - 1]) for t in G.surface.eckardt_ids()}
        for p in G.perms:
            assert {frozenset(p[k] for k in tr) for tr in eck} == eck

    @pytest.mark.parametrize("name", ["Se4", "Se6", "Se10"])
    def test_round_trip(self, name):
        G = stab(name)
        S = G.surface
        base = [S.lines[i] for i in L.BASIC_LSET]
        for M, p in G.elements:
            image = [S.lines[p[i]] for i in L.BASIC_LSET]
            assert find_projectivity(base, image) == M

    def test_tampered_group_rejected(self):
        G = stab("Se6")
        bad = st.StabilizerGroup(G.surface, G.elements[:-1], G.candidates, G.family)
        with pytest.raises(ClosureViolation):
            st.verify_group(bad)


class TestOrbits:
    def test_se4_line_orbits(self):
        orbits = st.line_orbits(stab("Se4"))
        assert sorted(len(o) for o in orbits) == [3, 6, 6, 6, 6]
        assert sorted(["E2", "F24", "G4"]) in [sorted(o) for o in orbits]

    def test_se10_plane_orbit(self):
        G = stab("Se10")
        orbit = [2, 6, 13, 17, 37]
        assert orbit in st.plane_orbits(G)
        assert st.orbit_image_order(G, orbit) == 120

    def test_se2_klein_action(self):
        G = stab("Se2")
        quad = [1, 16, 6, 17]
        images = set()
        for p in G.perms:
            q = st.plane_perm(p)
            images.add(tuple(q[k - 1] + 1 for k in quad))
        assert images == {(1, 16, 6, 17), (16, 1, 6, 17), (1, 16, 17, 6), (16, 1, 17, 6)}


class TestGenerators:
    def test_se1_involution(self):
        G = stab("Se1")
        (g,) = [p for p in G.perms if p != tuple(range(27))]
        assert cycle_counts(g) == [2] * 12
        fixed = {L.LABELS[i] for i in range(27) if g[i] == i}
        assert fixed == {"E1", "G4", "F14"}
        assert st.generator_report(G) == [pg.cycle_notation(g)]

    def test_se9_cycle_types(self):
        types = {tuple(cycle_counts(p)) for p in stab("Se9").perms}
        assert tuple([3] * 9) in types
        assert tuple([2] * 12) in types

    def test_se9p_order_four(self):
        G = stab("Se9p")
        assert any(
            pg.element_order(p) == 4 and cycle_counts(pg.compose(p, p)) == [2] * 12 for p in G.perms
        )

    @pytest.mark.parametrize("name", ["Se1", "Se6", "Se9", "Se10"])
    def test_listed_cycle_types(self, name):
        spec = fam.get_family(name)
        chk = st.listed_generator_check(stab(name), spec.generators, spec.eckardt_ids)
        assert all(chk["cycle_types"].values())

    def test_generators_generate(self):
        G = stab("Se6")
        gens = [pg.parse_cycles(s, 27) for s in st.generator_report(G)]
        assert pg.closure(gens, 27) == set(G.perms)
