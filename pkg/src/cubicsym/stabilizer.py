"""Projective stabilizers of family members.

Every element of ``Stab(S)`` permutes the 27 lines and is determined by
where it sends the basic L-set, so the candidates are the projectivities
``L_b -> pi(L_b)`` for admissible ``pi``. A candidate is kept when it maps
each of the 27 lines onto a line of the surface, and then confirmed on the
equation itself.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import permutations, product
from typing import Sequence

from . import linalg
from . import permgroup as pg
from .errors import ClosureViolation, UnknownLabel
from .families import family_surface, get_family, parse_params
from .geometry import FrameSolver, Projectivity, plucker_vector
from .lines27 import (
    BASIC_LSET,
    LABELS,
    TRIPLE_OF_PAIR,
    TRIPLES,
    admissible_subgroup,
    distinct_lset_images,
    e6_index,
)
from .surface import CubicSurface

GROUP_ORDER_BOUND = 2**7 * 3**4 * 5


@dataclass
class StabilizerGroup:
    surface: CubicSurface
    elements: list  # [(Projectivity, perm)] with the identity first
    candidates: int = 0
    family: str | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def perms(self) -> list[tuple]:
        return [p for _, p in self.elements]

    @property
    def matrices(self) -> list[Projectivity]:
        return [m for m, _ in self.elements]


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    histogram: tuple  # ((element order, count), ...)
    is_abelian: bool
    center_order: int
    derived_order: int

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "element_orders": {str(k): v for k, v in self.histogram},
            "abelian": self.is_abelian,
            "center_order": self.center_order,
            "derived_order": self.derived_order,
        }


# ---------------------------------------------------------------------------
# candidates and filtering


class _LineIndex:
    """Maps a projectivity to the induced permutation of the 27 lines."""

    def __init__(self, S: CubicSurface):
        self.field = S.field
        self.lookup = {S.lines[i].p: i for i in range(27)}
        self.points = [S.lines[i].points() for i in range(27)]

    def image(self, M: Projectivity, i: int) -> int | None:
        a, b = self.points[i]
        f = self.field
        pa = linalg.matvec(M.m, a.coords, f)
        pb = linalg.matvec(M.m, b.coords, f)
        return self.lookup.get(f.normalize(plucker_vector(pa, pb)))

    def perm(self, M: Projectivity, order: Sequence[int] = range(27)) -> tuple | None:
        out = [0] * 27
        for i in order:
            j = self.image(M, i)
            if j is None:
                return None
            out[i] = j
        return tuple(out)


# lines outside L_b first: they reject most candidates at once
_CHECK_ORDER = [i for i in range(27) if i not in BASIC_LSET] + list(BASIC_LSET)


def candidate_images(eckardt_ids: Sequence[int]) -> list[tuple]:
    """Distinct images of ``L_b`` under the admissible permutations."""
    return distinct_lset_images(admissible_subgroup(eckardt_ids))


def _resolve(target, params) -> tuple[CubicSurface, Sequence[int]]:
    if isinstance(target, CubicSurface):
        return target, target.eckardt_ids()
    spec = get_family(target)
    return family_surface(spec.name, params), spec.eckardt_ids


def candidate_matrices(target, params=None, check: bool = False) -> list[Projectivity]:
    """``M(L_b, image)`` for every distinct admissible image of ``L_b``; the
    target lines are taken from the 27 lines attached to the surface."""
    S, ids = _resolve(target, params)
    solver = FrameSolver([S.lines[i] for i in BASIC_LSET])
    return [solver.solve([S.lines[i] for i in img], check=check) for img in candidate_images(ids)]


def _filter_chunk(S: CubicSurface, images: Sequence[tuple]) -> list[tuple]:
    solver = FrameSolver([S.lines[i] for i in BASIC_LSET])
    index = _LineIndex(S)
    found = []
    for img in images:
        M = solver.solve([S.lines[i] for i in img], check=False)
        perm = index.perm(M, _CHECK_ORDER)
        if perm is not None and M.pullback(S.form).is_proportional(S.form):
            found.append((img, M, perm))
    return found


def _chunks(seq: Sequence, n: int) -> list:
    size = max(1, -(-len(seq) // n))
    return [seq[k : k + size] for k in range(0, len(seq), size)]


def compute_stabilizer(target, params=None, *, eckardt_ids: Sequence[int] | None = None, jobs: int = 1, verify: bool = True) -> StabilizerGroup:
    """The candidates that fix the surface, paired with their permutations.

    ``target`` is a family name (with ``params``) or a surface with lines.
    """
    S, ids = _resolve(target, params)
    if S.lines is None:
        raise ValueError("surface needs its 27 lines")
    if eckardt_ids is not None:
        ids = eckardt_ids
    images = candidate_images(ids)
    if jobs > 1 and len(images) > 64:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_filter_chunk, [S] * jobs * 4, _chunks(images, jobs * 4)))
        found = [x for part in parts for x in part]
    else:
        found = _filter_chunk(S, images)
    elements = [(M, perm) for _, M, perm in found]
    elements.sort(key=lambda mp: mp[1] != tuple(range(27)))
    G = StabilizerGroup(S, elements, len(images), S.meta.get("family"))
    if verify:
        verify_group(G)
    return G


def family_stabilizer(name: str, params=None, jobs: int = 1) -> StabilizerGroup:
    return compute_stabilizer(name, params, jobs=jobs)


def verify_group(G: StabilizerGroup) -> None:
    """Closure of the permutations and of the matrices, faithfulness, and
    the order bound; raises :class:`ClosureViolation`."""
    perms = G.perms
    pset = set(perms)
    if len(pset) != len(perms):
        raise ClosureViolation("two stabilizer elements induce the same permutation")
    if tuple(range(27)) not in pset:
        raise ClosureViolation("identity missing")
    if GROUP_ORDER_BOUND % len(perms):
        raise ClosureViolation(f"order {len(perms)} does not divide {GROUP_ORDER_BOUND}")
    idx = e6_index()
    import numpy as np

    for p in perms:
        if np.array(p, dtype=np.int8).tobytes() not in idx:
            raise ClosureViolation("a stabilizer permutation is not in E6")
    gens = pg.greedy_generators(perms)
    for g in gens:
        for p in perms:
            if pg.compose(g, p) not in pset:
                raise ClosureViolation("permutations are not closed under composition")
    by_perm = {p: M for M, p in G.elements}
    keys = {M.key(): p for M, p in G.elements}
    for g in gens:
        Mg = by_perm[g]
        for M, p in G.elements:
            prod = Mg @ M
            if keys.get(prod.key()) != pg.compose(g, p):
                raise ClosureViolation("matrix products disagree with permutation products")


# ---------------------------------------------------------------------------
# fingerprints and reference models


def fingerprint_perms(perms: Sequence[tuple]) -> GroupFingerprint:
    els = list(perms)
    return GroupFingerprint(
        order=len(els),
        histogram=tuple(pg.order_histogram(els).items()),
        is_abelian=pg.is_abelian(els),
        center_order=len(pg.center(els)),
        derived_order=len(pg.derived_subgroup(els)),
    )


def group_fingerprint(G: StabilizerGroup) -> GroupFingerprint:
    return fingerprint_perms(G.perms)


def _cyclic(n: int) -> list[tuple]:
    return [tuple((i + k) % n for i in range(n)) for k in range(n)]


def _symmetric(n: int) -> list[tuple]:
    return list(permutations(range(n)))


def _direct(a: list[tuple], b: list[tuple]) -> list[tuple]:
    na, nb = len(a[0]), len(b[0])
    return [tuple(x) + tuple(na + y for y in yb) for x, yb in product(a, b)]


def _mat_mul3(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) % 3 for j in range(2)) for i in range(2))


def _mat_vec3(A, v):
    return tuple(sum(A[i][k] * v[k] for k in range(2)) % 3 for i in range(2))


def _heisenberg_extension(gen: tuple) -> list[tuple]:
    """The Heisenberg group of order 27 extended by the cyclic subgroup of
    SL(2, 3) generated by ``gen``, acting on ``(v, c)`` by ``(A v, c)``."""
    ident = ((1, 0), (0, 1))
    K = [ident]
    while True:
        nxt = _mat_mul3(K[-1], gen)
        if nxt == ident:
            break
        K.append(nxt)
    els = [((a, b), c, A) for a in range(3) for b in range(3) for c in range(3) for A in K]

    def mul(g, h):
        (v, c, A), (w, d, B) = g, h
        Aw = _mat_vec3(A, w)
        om = 2 * (v[0] * Aw[1] - v[1] * Aw[0])
        return (((v[0] + Aw[0]) % 3, (v[1] + Aw[1]) % 3), (c + d + om) % 3, _mat_mul3(A, B))

    return pg.regular_representation(els, mul)


def _fermat_group() -> list[tuple]:
    """Automorphisms of the Fermat cubic: cube-root scalings of the four
    coordinates modulo scalars, extended by coordinate permutations."""
    els = []
    for s in permutations(range(4)):
        for v in product(range(3), repeat=3):
            els.append((s, (0,) + v))

    def norm(v):
        return tuple((x - v[0]) % 3 for x in v)

    def mul(g, h):
        (s, v), (t, u) = g, h
        su = [0] * 4
        for i in range(4):
            su[s[i]] = u[i]
        st = tuple(s[t[i]] for i in range(4))
        return (st, norm([(v[i] + su[i]) % 3 for i in range(4)]))

    return pg.regular_representation(els, mul)


def _normalize_label(label: str) -> str:
    text = label.replace("\\times", "x").replace("\\rtimes", ":").replace("×", "x").replace("⋊", ":")
    text = re.sub(r"[\s_{}$]", "", text)
    return text


def _models() -> dict:
    return {
        "1": lambda: [(0,)],
        "C2": lambda: _cyclic(2),
        "C4": lambda: _cyclic(4),
        "C8": lambda: _cyclic(8),
        "C2xC2": lambda: _direct(_cyclic(2), _cyclic(2)),
        "S3": lambda: _symmetric(3),
        "C2xS3": lambda: _direct(_cyclic(2), _symmetric(3)),
        "S4": lambda: _symmetric(4),
        "S5": lambda: _symmetric(5),
        "((C3xC3):C3):C2": lambda: _heisenberg_extension(((2, 0), (0, 2))),
        "((C3xC3):C3):C4": lambda: _heisenberg_extension(((0, 2), (1, 0))),
        "(C3xC3xC3):S4": _fermat_group,
    }


STRUCTURE_LABELS = tuple(_models())
_FP_CACHE: dict = {}


def reference_fingerprint(label: str) -> GroupFingerprint:
    key = _normalize_label(label)
    models = _models()
    if key not in models:
        raise UnknownLabel(f"no reference model for {label!r}", known=", ".join(models))
    if key not in _FP_CACHE:
        _FP_CACHE[key] = fingerprint_perms(models[key]())
    return _FP_CACHE[key]


def match_structure(G: StabilizerGroup | Sequence[tuple], label: str) -> bool:
    fp = reference_fingerprint(label)
    perms = G.perms if isinstance(G, StabilizerGroup) else list(G)
    if len(perms) != fp.order:
        return False
    return fingerprint_perms(perms) == fp


def identify_structure(G: StabilizerGroup) -> list[str]:
    """Labels whose reference model has the same fingerprint as ``G``."""
    fp = group_fingerprint(G)
    return [lab for lab in STRUCTURE_LABELS if reference_fingerprint(lab).order == fp.order and reference_fingerprint(lab) == fp]


# ---------------------------------------------------------------------------
# orbits and generators


def plane_perm(perm: Sequence[int]) -> tuple:
    """Induced permutation of the 45 tritangent planes (0-based)."""
    return tuple(int(TRIPLE_OF_PAIR[perm[a], perm[b]]) for a, b, _ in TRIPLES)


def line_orbits(G: StabilizerGroup) -> list[list[str]]:
    return [[LABELS[i] for i in orb] for orb in pg.orbits(G.perms, 27)]


def plane_orbits(G: StabilizerGroup) -> list[list[int]]:
    perms = [plane_perm(p) for p in G.perms]
    return [[k + 1 for k in orb] for orb in pg.orbits(perms, 45)]


def orbit_image_order(G: StabilizerGroup, orbit: Sequence, on: str = "planes") -> int:
    """Order of the group of permutations that ``G`` induces on a stable set."""
    if on == "planes":
        perms = [plane_perm(p) for p in G.perms]
        subset = [k - 1 for k in orbit]
    else:
        perms = G.perms
        subset = [LABELS.index(x) if isinstance(x, str) else x for x in orbit]
    return len({pg.restrict(p, subset) for p in perms})


def generator_report(G: StabilizerGroup) -> list[str]:
    return [pg.cycle_notation(g) for g in pg.greedy_generators(G.perms)]


def listed_generator_check(G: StabilizerGroup, listed: Sequence[tuple[str, str]], eckardt_ids: Sequence[int] | None = None) -> dict:
    """Compare printed generators with ``G``: cycle types, plain membership,
    and membership after conjugating by one admissible permutation."""
    perms = set(G.perms)
    types = {pg.cycle_type(p) for p in perms}
    parsed = {name: pg.parse_cycles(text, 27) for name, text in listed}
    report = {
        "cycle_types": {n: pg.cycle_type(p) in types for n, p in parsed.items()},
        "members": {n: p in perms for n, p in parsed.items()},
        "conjugate": None,
    }
    if eckardt_ids is None:
        eckardt_ids = G.surface.eckardt_ids()
    gens = list(parsed.values())
    for row in admissible_subgroup(eckardt_ids):
        a = tuple(int(v) for v in row)
        ai = pg.inverse(a)
        if all(pg.compose(pg.compose(a, g), ai) in perms for g in gens):
            report["conjugate"] = pg.cycle_notation(a)
            break
    return report


def stabilizer_report(G: StabilizerGroup, label: str | None = None) -> dict:
    fp = group_fingerprint(G)
    out = {
        "family": G.family,
        "params": G.surface.meta.get("params"),
        "candidates": G.candidates,
        "order": G.order,
        "structure": label,
        "structure_matches": None if label is None else match_structure(G, label),
        "fingerprint": fp.to_dict(),
        "generators": generator_report(G),
        "line_orbits": line_orbits(G),
        "plane_orbits": plane_orbits(G),
        "eckardt_ids": G.surface.eckardt_ids(),
    }
    return out


def family_stabilizer_report(name: str, params=None, jobs: int = 1) -> dict:
    spec = get_family(name)
    G = family_stabilizer(spec.name, params, jobs=jobs)
    rep = stabilizer_report(G, spec.structure)
    rep["expected_order"] = spec.stab_order
    if spec.generators:
        chk = listed_generator_check(G, spec.generators, spec.eckardt_ids)
        rep["listed_generators"] = {
            "cycle_types": chk["cycle_types"],
            "members": chk["members"],
            "conjugating_element": chk["conjugate"],
        }
    return rep


__all__ = [
    "StabilizerGroup",
    "GroupFingerprint",
    "candidate_images",
    "candidate_matrices",
    "compute_stabilizer",
    "family_stabilizer",
    "group_fingerprint",
    "match_structure",
    "identify_structure",
    "line_orbits",
    "plane_orbits",
    "orbit_image_order",
    "generator_report",
    "listed_generator_check",
    "stabilizer_report",
    "family_stabilizer_report",
    "parse_params",
]
