"""Pregeometries: typed elements with a cross-type incidence relation.

Elements are the dense integers ``0..|X|-1`` ordered by type, so the
element set doubles as the point set of any permutation group acting on the
pregeometry.  Reflexive incidence is implicit and never stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapacityError, ValidationError
from .perm import PermGroup, Perm

AUTOMORPHISM_CAP = 40


@dataclass(frozen=True)
class Pregeometry:
    types: tuple[str, ...]
    type_of: tuple[int, ...]
    incidence: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        validate(self)

    @classmethod
    def build(cls, types: Sequence[str], fiber_sizes: Sequence[int],
              incidences: Iterable[tuple[int, int]] = ()) -> Pregeometry:
        type_of = tuple(i for i, m in enumerate(fiber_sizes) for _ in range(m))
        inc = frozenset((min(a, b), max(a, b)) for a, b in incidences)
        return cls(tuple(str(t) for t in types), type_of, inc)

    @classmethod
    def from_labelled(cls, types: Sequence[str], elements: Sequence[tuple[object, str]],
                      incidences: Iterable[tuple[object, object]]) -> tuple[Pregeometry, dict]:
        """Build from externally labelled elements.

        Returns the pregeometry and the map from external id to dense id
        (ordered by type, then input order).
        """
        types = tuple(str(t) for t in types)
        if len(set(types)) != len(types):
            raise ValidationError("duplicate type label")
        tindex = {t: i for i, t in enumerate(types)}
        ext_ids = [e for e, _ in elements]
        if len(set(ext_ids)) != len(ext_ids):
            raise ValidationError("duplicate element id")
        for e, t in elements:
            if t not in tindex:
                raise ValidationError(f"element {e!r} has unknown type {t!r}")
        order = sorted(range(len(elements)), key=lambda k: (tindex[elements[k][1]], k))
        mapping = {elements[k][0]: new for new, k in enumerate(order)}
        type_of = tuple(tindex[elements[k][1]] for k in order)
        inc = set()
        for a, b in incidences:
            if a not in mapping or b not in mapping:
                raise ValidationError(f"incidence ({a!r}, {b!r}) refers to an unknown element")
            x, y = mapping[a], mapping[b]
            if x == y:
                continue
            inc.add((min(x, y), max(x, y)))
        return cls(types, type_of, frozenset(inc)), mapping

    # -- derived data -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.types)

    @property
    def size(self) -> int:
        return len(self.type_of)

    @cached_property
    def fibers(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.types]
        for x, t in enumerate(self.type_of):
            out[t].append(x)
        return tuple(tuple(f) for f in out)

    def fiber(self, label: str) -> tuple[int, ...]:
        return self.fibers[self.type_index(label)]

    def type_index(self, label: str) -> int:
        try:
            return self.types.index(label)
        except ValueError:
            raise ValidationError(f"unknown type {label!r}") from None

    @cached_property
    def neighbours(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in self.type_of]
        for a, b in self.incidence:
            adj[a].add(b)
            adj[b].add(a)
        return tuple(frozenset(s) for s in adj)

    def incident(self, x: int, y: int) -> bool:
        return x == y or (min(x, y), max(x, y)) in self.incidence

    def fiber_sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.fibers)

    def relabeled(self, types: Sequence[str]) -> Pregeometry:
        return Pregeometry(tuple(types), self.type_of, self.incidence)


def validate(p: Pregeometry) -> None:
    k = len(p.types)
    if k == 0:
        raise ValidationError("a pregeometry needs at least one type")
    if len(set(p.types)) != k:
        raise ValidationError("duplicate type label")
    prev = 0
    seen = set()
    for x, t in enumerate(p.type_of):
        if not 0 <= t < k:
            raise ValidationError(f"element {x} has unknown type index {t}")
        if t < prev:
            raise ValidationError("elements must be ordered by type")
        prev = t
        seen.add(t)
    if len(seen) != k:
        missing = [p.types[i] for i in range(k) if i not in seen]
        raise ValidationError(f"empty type fiber: {missing}")
    n = len(p.type_of)
    for a, b in p.incidence:
        if not (0 <= a < n and 0 <= b < n):
            raise ValidationError(f"incidence ({a}, {b}) refers to a dangling id")
        if a >= b:
            raise ValidationError(f"incidence ({a}, {b}) must be stored as an ordered pair a < b")
        if p.type_of[a] == p.type_of[b]:
            raise ValidationError(f"elements {a} and {b} share type {p.types[p.type_of[a]]!r} but are incident")


# -- constructions ----------------------------------------------------------------

def gamma_km(k: int, m: int, labels: Sequence[str] | None = None) -> Pregeometry:
    """Rank-k complete multipartite pregeometry with fibers of size m."""
    if k < 1 or m < 1:
        raise ValidationError("gamma_km needs k >= 1 and m >= 1")
    labels = tuple(labels) if labels else tuple(str(i) for i in range(1, k + 1))
    inc = [(a, b) for a in range(k * m) for b in range(a + 1, k * m) if a // m != b // m]
    return Pregeometry.build(labels, [m] * k, inc)


def truncation_with_map(p: Pregeometry, J: Iterable[str]) -> tuple[Pregeometry, tuple[int, ...]]:
    """J-truncation plus the original id of each retained element."""
    J = set(J)
    if not J:
        raise ValidationError("truncation needs a nonempty set of types")
    for t in J:
        p.type_index(t)
    keep_types = [i for i, t in enumerate(p.types) if t in J]
    old = tuple(x for i in keep_types for x in p.fibers[i])
    new = {x: i for i, x in enumerate(old)}
    inc = [(new[a], new[b]) for a, b in p.incidence if a in new and b in new]
    q = Pregeometry.build([p.types[i] for i in keep_types], [len(p.fibers[i]) for i in keep_types], inc)
    return q, old


def truncation(p: Pregeometry, J: Iterable[str]) -> Pregeometry:
    return truncation_with_map(p, J)[0]


def direct_sum(*parts: Pregeometry) -> Pregeometry:
    """Disjoint union with complete incidence between different summands.

    Type labels that occur in more than one summand get the 1-based summand
    index appended (``"1"`` becomes ``"1.2"`` in the second summand).
    """
    if not parts:
        raise ValidationError("direct_sum needs at least one summand")
    counts: dict[str, int] = {}
    for q in parts:
        for t in q.types:
            counts[t] = counts.get(t, 0) + 1
    labels, sizes, inc = [], [], []
    offset = 0
    starts = []
    for idx, q in enumerate(parts, start=1):
        starts.append(offset)
        labels.extend(t if counts[t] == 1 else f"{t}.{idx}" for t in q.types)
        sizes.extend(q.fiber_sizes())
        inc.extend((a + offset, b + offset) for a, b in q.incidence)
        offset += q.size
    for (i, qi), (j, qj) in itertools.combinations(enumerate(parts), 2):
        inc.extend((starts[i] + a, starts[j] + b) for a in range(qi.size) for b in range(qj.size))
    # summands are laid out consecutively, which is already ordered by type
    return Pregeometry.build(labels, sizes, inc)


# -- predicates -------------------------------------------------------------------

def _complete_between(p: Pregeometry, i: int, j: int) -> bool:
    return sum(1 for a, b in p.incidence
               if {p.type_of[a], p.type_of[b]} == {i, j}) == len(p.fibers[i]) * len(p.fibers[j])


def _connected(vertices: Sequence[int], nbrs) -> bool:
    vs = set(vertices)
    start = vertices[0]
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in nbrs[x]:
            if y in vs and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vs)


def rank2_truncations_connected(p: Pregeometry) -> bool:
    if p.rank < 2:
        raise ValidationError("rank-2 connectivity needs rank >= 2")
    for i, j in itertools.combinations(range(p.rank), 2):
        if not _connected(p.fibers[i] + p.fibers[j], p.neighbours):
            return False
    return True


def is_complete_multipartite(p: Pregeometry) -> bool:
    n = p.size
    sizes = p.fiber_sizes()
    cross = (n * n - sum(m * m for m in sizes)) // 2
    return len(p.incidence) == cross


def effective_rank(p: Pregeometry) -> int:
    return sum(1 for m in p.fiber_sizes() if m >= 2)


@dataclass(frozen=True)
class TypePartition:
    parts: tuple[tuple[str, ...], ...]

    def check(self, types: Sequence[str]) -> None:
        flat = [t for part in self.parts for t in part]
        if any(not part for part in self.parts):
            raise ValidationError("empty part in type partition")
        if sorted(flat) != sorted(types) or len(set(flat)) != len(flat):
            raise ValidationError("parts must be disjoint and cover the type set")

    def as_sets(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(part) for part in self.parts)


def finest_decomposition(p: Pregeometry) -> TypePartition:
    """Components of the graph on types joining i, j when X_i, X_j are not completely incident."""
    k = p.rank
    comp = list(range(k))

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for i, j in itertools.combinations(range(k), 2):
        if not _complete_between(p, i, j):
            ri, rj = find(i), find(j)
            if ri != rj:
                comp[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[str]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(p.types[i])
    return TypePartition(tuple(tuple(g) for g in groups.values()))


def is_direct_sum_split(p: Pregeometry, partition: Iterable[Iterable[str]]) -> bool:
    """Whether every pair of types from different parts is completely incident."""
    parts = [[p.type_index(t) for t in part] for part in partition]
    for A, B in itertools.combinations(parts, 2):
        for i in A:
            for j in B:
                if not _complete_between(p, i, j):
                    return False
    return True


def is_geometry(p: Pregeometry) -> bool:
    """Every flag lies in a chamber, i.e. every maximal flag meets every type."""
    if is_complete_multipartite(p):
        return True
    nb = p.neighbours
    k = p.rank

    def search(t: int, cands: list[frozenset[int]], skipped: list[int]) -> bool:
        # cands[i]: elements of type i incident with every chosen element
        if t == k:
            maximal = all(not cands[i] for i in skipped)
            return not (maximal and skipped)
        if not search(t + 1, cands, skipped + [t]):
            return False
        for x in sorted(cands[t]):
            nxt = [c if i == t else c & nb[x] for i, c in enumerate(cands)]
            if not search(t + 1, nxt, skipped):
                return False
        return True

    start = [frozenset(f) for f in p.fibers]
    return search(0, start, [])


# -- automorphisms -----------------------------------------------------------------

def automorphisms_bruteforce(p: Pregeometry, cap: int = AUTOMORPHISM_CAP) -> PermGroup:
    """Type-preserving incidence automorphisms by backtracking.

    Works down a point-stabilizer tower: at depth i it looks for one
    automorphism fixing 0..i-1 and sending i to each image outside the orbit
    already generated.  The collected maps generate the full group.
    """
    n = p.size
    if n > cap:
        raise CapacityError(f"automorphism search limited to {cap} elements (got {n})")
    nb = p.neighbours
    deg = [len(s) for s in nb]
    t = p.type_of

    def extend(fixed: int, target: int) -> Perm | None:
        img = [-1] * n
        used = [False] * n
        for x in range(fixed):
            img[x] = x
            used[x] = True

        def ok(x: int, y: int) -> bool:
            if used[y] or t[x] != t[y] or deg[x] != deg[y]:
                return False
            for z in range(x):
                if (z in nb[x]) != (img[z] in nb[y]):
                    return False
            return True

        def place(x: int) -> bool:
            if x == n:
                return True
            choices = [target] if x == fixed else p.fibers[t[x]]
            for y in choices:
                if ok(x, y):
                    img[x] = y
                    used[y] = True
                    if place(x + 1):
                        return True
                    used[y] = False
                    img[x] = -1
            return False

        return tuple(img) if place(fixed) else None

    gens: list[Perm] = []
    for i in range(n - 1, -1, -1):
        H = PermGroup(n, gens, check=False)
        orbit = set(H.orbit(i))
        for c in p.fibers[t[i]]:
            if c < i or c in orbit:
                continue
            g = extend(i, c)
            if g is not None:
                gens.append(g)
                H = PermGroup(n, gens, check=False)
                orbit = set(H.orbit(i))
    return PermGroup(n, gens, check=False)
