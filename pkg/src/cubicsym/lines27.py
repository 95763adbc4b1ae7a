"""Combinatorics of the 27 line labels.

Labels are indexed 0..26 internally (``E1..E6``, ``G1..G6``, ``F12..F56``)
and printed 1-based in reports. The module provides the incidence relation,
the 45 tritangent triples, abstract L-sets and their extensions, and the
Weyl group E6 materialized as a ``(51840, 27)`` integer array.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidExtendedLSet, NotIncident
from .geometry import incidence_pattern_ok

F_PAIRS = tuple(combinations(range(1, 7), 2))
LABELS = tuple([f"E{i}" for i in range(1, 7)] + [f"G{i}" for i in range(1, 7)] + [f"F{i}{j}" for i, j in F_PAIRS])
INDEX = {name: k for k, name in enumerate(LABELS)}


def label(i: int) -> str:
    return LABELS[i]


def index(name: str) -> int:
    try:
        return INDEX[name]
    except KeyError:
        raise ValueError(f"unknown line label {name!r}") from None


def _parse(name: str) -> tuple[str, frozenset]:
    return name[0], frozenset(int(ch) for ch in name[1:])


def incidence(a: int | str, b: int | str) -> bool:
    """Whether two distinct labelled lines meet."""
    a = index(a) if isinstance(a, str) else a
    b = index(b) if isinstance(b, str) else b
    return bool(INCIDENCE[a, b])


def _meets(a: str, b: str) -> bool:
    if a == b:
        return False
    ka, sa = _parse(a)
    kb, sb = _parse(b)
    if ka == "F" and kb == "F":
        return not (sa & sb)
    if ka == "F" or kb == "F":
        single, pair = (sa, sb) if kb == "F" else (sb, sa)
        return bool(single & pair)
    if ka == kb:
        return False
    return sa != sb


INCIDENCE = np.array([[_meets(a, b) for b in LABELS] for a in LABELS], dtype=bool)
NEIGHBORS = tuple(tuple(int(j) for j in np.flatnonzero(INCIDENCE[i])) for i in range(27))


def _table1() -> tuple[tuple[int, int, int], ...]:
    triples = []
    for i in range(1, 7):
        for j in range(1, 7):
            if i != j:
                f = f"F{min(i, j)}{max(i, j)}"
                triples.append((INDEX[f"E{i}"], INDEX[f"G{j}"], INDEX[f]))
    f_first = [
        ("F12", "F34"), ("F12", "F35"), ("F12", "F36"),
        ("F13", "F24"), ("F13", "F25"), ("F13", "F26"),
        ("F14", "F23"), ("F14", "F25"), ("F14", "F26"),
        ("F15", "F23"), ("F15", "F24"), ("F15", "F26"),
        ("F16", "F23"), ("F16", "F24"), ("F16", "F25"),
    ]
    for a, b in f_first:
        used = set(a[1:] + b[1:])
        rest = sorted(set("123456") - used)
        triples.append((INDEX[a], INDEX[b], INDEX["F" + "".join(rest)]))
    return tuple(triples)


TRIPLES = _table1()
"""Tritangent triples; ``TRIPLES[k]`` is the triple of plane id ``k + 1``."""

TRIPLE_OF_PAIR = np.full((27, 27), -1, dtype=np.int16)
RESIDUE = np.full((27, 27), -1, dtype=np.int16)
for _k, (_a, _b, _c) in enumerate(TRIPLES):
    for _x, _y, _z in ((_a, _b, _c), (_b, _c, _a), (_a, _c, _b)):
        TRIPLE_OF_PAIR[_x, _y] = TRIPLE_OF_PAIR[_y, _x] = _k
        RESIDUE[_x, _y] = RESIDUE[_y, _x] = _z
TRIPLE_ARRAY = np.array(TRIPLES, dtype=np.int16)


def triple_labels(tid: int) -> tuple[str, str, str]:
    """Labels of the plane with 1-based id ``tid``."""
    return tuple(LABELS[i] for i in TRIPLES[tid - 1])


def triple_id(a: int | str, b: int | str) -> int:
    a = index(a) if isinstance(a, str) else a
    b = index(b) if isinstance(b, str) else b
    k = int(TRIPLE_OF_PAIR[a, b])
    if k < 0:
        raise NotIncident(f"{LABELS[a]} and {LABELS[b]} do not meet")
    return k + 1


def res_label(a: int | str, b: int | str) -> int:
    """Third line of the tritangent triple through two meeting lines."""
    a = index(a) if isinstance(a, str) else a
    b = index(b) if isinstance(b, str) else b
    r = int(RESIDUE[a, b])
    if r < 0:
        raise NotIncident(f"{LABELS[a]} and {LABELS[b]} do not meet")
    return r


def brute_force_triangles() -> list[tuple[int, int, int]]:
    return [
        (a, b, c)
        for a, b, c in combinations(range(27), 3)
        if INCIDENCE[a, b] and INCIDENCE[b, c] and INCIDENCE[a, c]
    ]


# ---------------------------------------------------------------------------
# L-sets

BASIC_LSET = tuple(INDEX[n] for n in ("E1", "G4", "E2", "G3", "E3"))
BASIC_EXTENDED = BASIC_LSET + (INDEX["E5"],)


def is_abstract_lset(labels: Sequence[int]) -> bool:
    labels = list(labels)
    if len(labels) not in (5, 6) or len(set(labels)) != len(labels):
        return False
    return incidence_pattern_ok(len(labels), lambda i, j: bool(INCIDENCE[labels[i], labels[j]]))


@lru_cache(maxsize=None)
def enumerate_lsets() -> tuple[tuple[int, ...], ...]:
    """All abstract L-sets in lexicographic order of label indices."""
    out = []
    inc = INCIDENCE
    for l1 in range(27):
        for l2 in NEIGHBORS[l1]:
            for l3 in NEIGHBORS[l2]:
                if l3 == l1 or inc[l1, l3]:
                    continue
                for l4 in NEIGHBORS[l1]:
                    if not inc[l3, l4] or inc[l2, l4] or l4 == l2:
                        continue
                    for l5 in NEIGHBORS[l2]:
                        if l5 in (l1, l3, l4) or inc[l1, l5] or inc[l3, l5] or inc[l4, l5]:
                            continue
                        out.append((l1, l2, l3, l4, l5))
    return tuple(out)


def common_transversals(a: int, b: int) -> list[int]:
    return [int(k) for k in np.flatnonzero(INCIDENCE[a] & INCIDENCE[b])]


def extend_lset(lset: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two extended L-sets containing an L-set, sixth label ascending."""
    l1, l2, l3, l4, l5 = lset
    excluded = {l1, l3, res_label(l2, l5)}
    sixth = [k for k in common_transversals(l2, l4) if k not in excluded]
    if len(sixth) != 2:
        raise InvalidExtendedLSet("input is not an L-set")
    return tuple(tuple(lset) + (k,) for k in sixth)


@lru_cache(maxsize=None)
def enumerate_extended() -> tuple[tuple[int, ...], ...]:
    return tuple(ext for L in enumerate_lsets() for ext in extend_lset(L))


# ---------------------------------------------------------------------------
# residuation program


def residuation_slots(ext: Sequence, res=res_label) -> list:
    """Run the fixed residue recipe on an extended L-set.

    ``res`` computes the residue of two meeting lines; with labels it is
    :func:`res_label`, with geometric lines the surface residue. Returns
    the 27 slots: ``s1, s2, r1..r5``, then ``res(r_i, s_j)`` for i = 1..5,
    j = 1, 2, then ``res(res(r_i, s1), res(r_j, s2))`` for i < j.
    """
    l1, l2, l3, l4, l5, l6 = ext
    s1, s2 = l2, l4
    r = [l1, l3, res(l2, l5), l6]
    t = res(res(r[0], s1), res(r[1], s2))
    u = res(res(r[2], s2), res(r[3], t))
    r.append(res(s1, u))
    rs = {(i, j): res(r[i], s) for i in range(5) for j, s in enumerate((s1, s2))}
    slots = [s1, s2] + r
    slots += [rs[i, j] for i in range(5) for j in range(2)]
    slots += [res(rs[i, 0], rs[j, 1]) for i in range(5) for j in range(i + 1, 5)]
    return slots


SLOT_NAMES = (
    ["s1", "s2"]
    + [f"r{i}" for i in range(1, 6)]
    + [f"res(r{i},s{j})" for i in range(1, 6) for j in (1, 2)]
    + [f"res(res(r{i},s1),res(r{j},s2))" for i in range(1, 6) for j in range(i + 1, 6)]
)

BASE_SLOTS = tuple(residuation_slots(BASIC_EXTENDED))


def perm_from_extended(target: Sequence[int]) -> tuple[int, ...]:
    """The incidence-preserving permutation sending ``L_be`` to ``target``."""
    target = tuple(target)
    if len(target) != 6 or not is_abstract_lset(target):
        raise InvalidExtendedLSet(f"{[LABELS[i] for i in target]} is not an extended L-set")
    slots = residuation_slots(target)
    if len(set(slots)) != 27:
        raise InvalidExtendedLSet("residuation does not produce 27 distinct labels")
    perm = [0] * 27
    for b, s in zip(BASE_SLOTS, slots):
        perm[b] = s
    return tuple(perm)


def preserves_incidence(perm: Sequence[int]) -> bool:
    p = np.asarray(perm)
    return bool((INCIDENCE[np.ix_(p, p)] == INCIDENCE).all())


@lru_cache(maxsize=None)
def e6_array() -> np.ndarray:
    """All 51,840 elements of E6, one permutation per row, in the order of
    :func:`enumerate_extended`."""
    ext = np.array(enumerate_extended(), dtype=np.int64)
    res = RESIDUE.astype(np.int64)

    def vres(a, b):
        return res[a, b]

    cols = [ext[:, k] for k in range(6)]
    slots = residuation_slots(cols, vres)
    slot_arr = np.stack(slots, axis=1)
    out = np.empty_like(slot_arr)
    out[:, list(BASE_SLOTS)] = slot_arr
    out = out.astype(np.int8)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def e6_index() -> dict[bytes, int]:
    arr = e6_array()
    return {arr[k].tobytes(): k for k in range(len(arr))}


def e6_closure_check(n_generators: int = 3, seed: int = 0) -> bool:
    """The group generated by a few random elements equals the enumerated set,
    and the set is closed under composition and inverse."""
    arr = e6_array().astype(np.int64)
    idx = e6_index()
    rng = np.random.default_rng(seed)
    n = len(arr)
    # closed under products and inverses (sampled on all rows against fixed partners)
    partners = arr[rng.integers(0, n, size=8)]
    for q in partners:
        prod = q[arr]  # q after p for every p
        if any(row.astype(np.int8).tobytes() not in idx for row in prod):
            return False
    inv = np.argsort(arr, axis=1)
    if any(row.astype(np.int8).tobytes() not in idx for row in inv):
        return False
    # generated subgroup by breadth-first search
    gens = arr[rng.integers(0, n, size=n_generators)]
    seen = np.zeros(n, dtype=bool)
    seen[idx[np.arange(27, dtype=np.int8).tobytes()]] = True
    frontier = np.arange(27, dtype=np.int64)[None, :]
    while len(frontier):
        new = []
        for g in gens:
            prod = g[frontier]
            for row in prod:
                k = idx.get(row.astype(np.int8).tobytes())
                if k is None:
                    return False
                if not seen[k]:
                    seen[k] = True
                    new.append(row)
        frontier = np.array(new, dtype=np.int64).reshape(-1, 27)
    return bool(seen.all())


def triple_images(perms: np.ndarray) -> np.ndarray:
    """``out[k, tau]`` is the 0-based triple id that ``perms[k]`` sends tau to."""
    p = perms.astype(np.int64)
    a = p[:, TRIPLE_ARRAY[:, 0]]
    b = p[:, TRIPLE_ARRAY[:, 1]]
    return TRIPLE_OF_PAIR[a, b]


def admissible_subgroup(eckardt_ids: Iterable[int]) -> np.ndarray:
    """Rows of E6 mapping the designated triples (1-based ids) onto themselves."""
    ids = np.array(sorted(set(eckardt_ids)), dtype=np.int64) - 1
    arr = e6_array()
    if len(ids) == 0:
        return arr
    img = triple_images(arr)[:, ids]
    mask = np.isin(img, ids).all(axis=1)
    return arr[mask]


def lset_image(perm: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(perm[i]) for i in BASIC_LSET)


def distinct_lset_images(perms: np.ndarray) -> list[tuple[int, ...]]:
    """Distinct images of ``L_b`` in first-occurrence order."""
    seen = {}
    for row in perms[:, list(BASIC_LSET)]:
        key = tuple(int(v) for v in row)
        seen.setdefault(key, None)
    return list(seen)


def format_perm(perm: Sequence[int]) -> str:
    from .permgroup import cycle_notation

    return cycle_notation(tuple(int(v) for v in perm))
