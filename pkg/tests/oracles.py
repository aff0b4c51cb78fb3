"""Slow, independent reference implementations used only by the tests.

Nothing here shares code with the library: groups are closed by plain BFS
over tuples, partitions come from restricted growth strings, and normal
subgroups are found by scanning unions of conjugacy classes.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence


def compose(a, b):
    return tuple(b[x] for x in a)


def inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens: Sequence[Sequence[int]], n: int, cap: int = 10 ** 6) -> set[tuple[int, ...]]:
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if len(seen) > cap:
            raise RuntimeError("closure cap")
    return seen


def set_partitions(items: Sequence) -> Iterable[list[list]]:
    """All set partitions via restricted growth strings."""
    n = len(items)
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            parts: list[list] = [[] for _ in range(m + 1)]
            for idx, c in enumerate(a):
                parts[c].append(items[idx])
            yield parts
            return
        for c in range(m + 2):
            a[i] = c
            yield from rec(i + 1, max(m, c))

    a[0] = 0
    yield from rec(1, 0)


def invariant_partitions(gens, domain: Sequence[int]) -> list[frozenset[frozenset[int]]]:
    out = []
    for parts in set_partitions(list(domain)):
        blocks = {frozenset(P) for P in parts}
        if all(frozenset(g[x] for x in B) in blocks for g in gens for B in blocks):
            out.append(frozenset(blocks))
    return out


def is_primitive_brute(gens, domain: Sequence[int]) -> bool:
    nontrivial = [P for P in invariant_partitions(gens, domain) if 1 < len(P) < len(domain)]
    return not nontrivial


def conjugacy_classes_brute(elements: set) -> list[frozenset]:
    left = set(elements)
    out = []
    while left:
        x = min(left)
        cls = frozenset(compose(compose(inv(g), x), g) for g in elements)
        out.append(cls)
        left -= cls
    return out


def normal_subgroups_brute(elements: set) -> list[frozenset]:
    """Every normal subgroup, as a union of classes closed under products."""
    n = len(next(iter(elements)))
    e = tuple(range(n))
    classes = [c for c in conjugacy_classes_brute(elements) if e not in c]
    out = []
    for r in range(len(classes) + 1):
        for combo in itertools.combinations(classes, r):
            S = {e}.union(*combo) if combo else {e}
            if all(compose(a, b) in S for a in S for b in S):
                out.append(frozenset(S))
    return out


def minimal_normal_brute(elements: set) -> list[frozenset]:
    normals = [N for N in normal_subgroups_brute(elements) if len(N) > 1]
    return [N for N in normals if not any(M < N for M in normals)]


def orbits_brute(gens, domain: Sequence[int]) -> list[frozenset[int]]:
    left = set(domain)
    out = []
    while left:
        x = min(left)
        orb = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g in gens:
                if g[y] not in orb:
                    orb.add(g[y])
                    stack.append(g[y])
        out.append(frozenset(orb))
        left -= orb
    return out
