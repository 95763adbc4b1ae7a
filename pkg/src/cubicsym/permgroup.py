"""Small finite permutation groups given by explicit element lists.

Permutations are tuples of images on ``range(n)``; ``compose(p, q)`` is
"first q, then p".
"""

from __future__ import annotations

from collections import Counter
from math import gcd
from typing import Iterable, Sequence

Perm = tuple


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def cycles(p: Perm) -> list[tuple]:
    seen = set()
    out = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = p[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Perm) -> tuple:
    """Sorted lengths of the nontrivial cycles."""
    return tuple(sorted(len(c) for c in cycles(p)))


def cycle_notation(p: Perm, one_based: bool = True) -> str:
    off = 1 if one_based else 0
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + ",".join(str(i + off) for i in c) + ")" for c in cs)


def parse_cycles(text: str, n: int, one_based: bool = True) -> Perm:
    perm = list(range(n))
    off = 1 if one_based else 0
    for chunk in text.replace(" ", "").split(")"):
        chunk = chunk.lstrip("(")
        if not chunk:
            continue
        pts = [int(v) - off for v in chunk.split(",")]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    if not is_permutation(perm):
        raise ValueError(f"not a permutation: {text}")
    return tuple(perm)


def element_order(p: Perm) -> int:
    order = 1
    for c in cycles(p):
        order = order * len(c) // gcd(order, len(c))
    return order


def closure(generators: Iterable[Perm], n: int | None = None, limit: int | None = None) -> set:
    gens = [tuple(g) for g in generators]
    if n is None:
        n = len(gens[0])
    ident = identity(n)
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = compose(g, h)
                if k not in elements:
                    elements.add(k)
                    nxt.append(k)
                    if limit is not None and len(elements) > limit:
                        raise ValueError("group exceeds size limit")
        frontier = nxt
    return elements


def is_closed(elements: Iterable[Perm]) -> bool:
    els = set(elements)
    if not els:
        return False
    n = len(next(iter(els)))
    if identity(n) not in els:
        return False
    for a in els:
        if inverse(a) not in els:
            return False
        for b in els:
            if compose(a, b) not in els:
                return False
    return True


def greedy_generators(elements: Iterable[Perm]) -> list[Perm]:
    """A small generating set: repeatedly add an element of largest order
    not yet in the generated subgroup."""
    els = sorted(set(elements), key=lambda p: (-element_order(p), p))
    if not els:
        return []
    n = len(els[0])
    gens: list[Perm] = []
    current = {identity(n)}
    for p in els:
        if len(current) == len(els):
            break
        if p not in current:
            gens.append(p)
            current = closure(gens, n)
    return gens


def orbits(elements: Iterable[Perm], n: int) -> list[list[int]]:
    els = list(elements)
    seen = set()
    out = []
    for i in range(n):
        if i in seen:
            continue
        orb = sorted({g[i] for g in els})
        seen.update(orb)
        out.append(orb)
    return out


def order_histogram(elements: Iterable[Perm]) -> dict[int, int]:
    return dict(sorted(Counter(element_order(p) for p in elements).items()))


def is_abelian(elements: Iterable[Perm]) -> bool:
    els = list(elements)
    gens = greedy_generators(els)
    return all(compose(a, b) == compose(b, a) for a in gens for b in gens)


def center(elements: Iterable[Perm]) -> set:
    els = list(elements)
    gens = greedy_generators(els)
    return {z for z in els if all(compose(z, g) == compose(g, z) for g in gens)}


def derived_subgroup(elements: Iterable[Perm]) -> set:
    """Normal closure of the commutators of a generating set."""
    els = list(elements)
    n = len(els[0])
    gens = greedy_generators(els)
    comms = set()
    for a in gens:
        for b in gens:
            comms.add(compose(compose(inverse(a), inverse(b)), compose(a, b)))
    sub = closure(comms | {identity(n)}, n)
    changed = True
    while changed:
        changed = False
        for g in gens:
            gi = inverse(g)
            for h in list(sub):
                c = compose(compose(g, h), gi)
                if c not in sub:
                    comms.add(c)
                    sub = closure(comms | {identity(n)}, n)
                    changed = True
                    break
            if changed:
                break
    return sub


def restrict(p: Perm, subset: Sequence[int]) -> tuple:
    """Action of ``p`` on a stable subset, as a permutation of its positions."""
    pos = {v: k for k, v in enumerate(subset)}
    return tuple(pos[p[v]] for v in subset)


def regular_representation(elements: Sequence, mul) -> list[Perm]:
    """Left-regular permutation images of an abstract group."""
    els = list(elements)
    index = {e: i for i, e in enumerate(els)}
    return [tuple(index[mul(g, h)] for h in els) for g in els]
