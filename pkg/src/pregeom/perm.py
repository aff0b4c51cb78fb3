"""Permutation groups on {0, ..., n-1}.

A permutation is a tuple of images: the image of point ``x`` under ``g`` is
``g[x]``.  Products compose left to right, ``mul(g, h)[x] == h[g[x]]``,
matching the exponential notation x^(gh) = (x^g)^h.

Groups carry a lazily built stabilizer chain (deterministic Schreier-Sims:
base points are taken as the smallest point moved by the first generator
that fixes the current base).  Operations that need every element
(conjugacy classes, minimal normal subgroups, isomorphism tests) enumerate
through numpy arrays and are guarded by the caps in ``LIMITS``.
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, MembershipError, ValidationError

Perm = tuple[int, ...]


@dataclass
class Limits:
    element_cap: int = 250_000
    isomorphism_cap: int = 10_000
    brute_block_degree: int = 12


LIMITS = Limits()


# -- single permutations ------------------------------------------------------

def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(a: Perm, b: Perm) -> Perm:
    """``a`` then ``b``."""
    return tuple(map(b.__getitem__, a))


def inverse(a: Perm) -> Perm:
    r = [0] * len(a)
    for i, x in enumerate(a):
        r[x] = i
    return tuple(r)


def conjugate(g: Perm, h: Perm) -> Perm:
    """g^h = h^-1 g h."""
    r = [0] * len(g)
    for x, y in enumerate(g):
        r[h[x]] = h[y]
    return tuple(r)


def is_identity(a: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(a))


def moved_points(a: Perm) -> list[int]:
    return [i for i, x in enumerate(a) if i != x]


def perm_order(a: Perm) -> int:
    seen = [False] * len(a)
    o = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        o = o * length // math.gcd(o, length)
    return o


def power(a: Perm, k: int) -> Perm:
    if k < 0:
        a, k = inverse(a), -k
    r = identity(len(a))
    while k:
        if k & 1:
            r = mul(r, a)
        a = mul(a, a)
        k >>= 1
    return r


def check_perm(p: Sequence[int], degree: int | None = None, index: int | None = None) -> Perm:
    """Return ``p`` as a tuple, raising ValidationError if it is not a bijection."""
    where = f"generator {index}: " if index is not None else ""
    try:
        p = tuple(int(x) for x in p)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}entries must be integers") from exc
    if degree is not None and len(p) != degree:
        raise ValidationError(f"{where}length {len(p)} does not match degree {degree}")
    if sorted(p) != list(range(len(p))):
        raise ValidationError(f"{where}not a bijection of 0..{len(p) - 1}")
    return p


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse disjoint-cycle notation such as ``"(0 2)(1 3)"`` or ``"()"``.

    Cycles are multiplied left to right, so overlapping cycles are allowed.
    """
    stripped = text.strip()
    if _CYCLE_RE.sub("", stripped).strip():
        raise ValidationError(f"could not parse permutation {text!r}")
    out = identity(degree)
    for body in _CYCLE_RE.findall(stripped):
        try:
            pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        except ValueError:
            raise ValidationError(f"non-integer point in ({body})") from None
        if not pts:
            continue
        if len(set(pts)) != len(pts):
            raise ValidationError(f"repeated point in cycle ({body})")
        if max(pts) >= degree or min(pts) < 0:
            raise ValidationError(f"point out of range 0..{degree - 1} in ({body})")
        c = list(range(degree))
        for x, y in zip(pts, pts[1:] + pts[:1]):
            c[x] = y
        out = mul(out, tuple(c))
    return out


def format_cycles(a: Perm) -> str:
    seen = set()
    out = []
    for i in range(len(a)):
        if i in seen or a[i] == i:
            continue
        cyc = [i]
        j = a[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = a[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# -- stabilizer chains ----------------------------------------------------------

def _orbit_transversal(point: int, gens: Sequence[Perm], n: int) -> dict[int, Perm]:
    trans = {point: identity(n)}
    queue = [point]
    for b in queue:
        ub = trans[b]
        for s in gens:
            c = s[b]
            if c not in trans:
                trans[c] = mul(ub, s)
                queue.append(c)
    return trans


def _fixes(g: Perm, points: Iterable[int]) -> bool:
    return all(g[b] == b for b in points)


class StabChain:
    """Base and strong generating set with explicit transversals.

    ``trans[i][p]`` maps ``base[i]`` to ``p`` and lies in the pointwise
    stabilizer of ``base[:i]``; ``levels[i]`` generates that stabilizer.
    """

    def __init__(self, degree: int, gens: Sequence[Perm], base_prefix: Sequence[int] = ()):
        self.degree = degree
        self._id = identity(degree)
        self.base: list[int] = list(dict.fromkeys(base_prefix))
        self.strong: list[Perm] = []
        for g in gens:
            if g != self._id and g not in self.strong:
                self.strong.append(g)
        for g in self.strong:
            if _fixes(g, self.base):
                self.base.append(moved_points(g)[0])
        self.levels: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []
        self.itrans: list[dict[int, Perm]] = []
        for i in range(len(self.base)):
            self._append_level(i)
        self._schreier_sims(len(self.base) - 1)

    def _append_level(self, i: int) -> None:
        pre = self.base[:i]
        self.levels.append([s for s in self.strong if _fixes(s, pre)])
        self.trans.append({})
        self.itrans.append({})
        self._rebuild_transversal(i)

    def _rebuild_transversal(self, i: int) -> None:
        t = _orbit_transversal(self.base[i], self.levels[i], self.degree)
        self.trans[i] = t
        self.itrans[i] = {p: inverse(u) for p, u in t.items()}

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        """Strip ``g`` through the levels from ``start``.

        Returns the residue and the level at which stripping stopped
        (``len(base)`` when it passed every level).
        """
        for i in range(start, len(self.base)):
            beta = g[self.base[i]]
            inv_u = self.itrans[i].get(beta)
            if inv_u is None:
                return g, i
            g = mul(g, inv_u)
        return g, len(self.base)

    def _add_strong(self, residue: Perm, level: int, upto: int) -> None:
        # residue lies in the stabilizer of base[:upto] and in <levels[level]>,
        # so only the transversals below ``level`` can grow
        self.strong.append(residue)
        if upto == len(self.base):
            self.base.append(moved_points(residue)[0])
            self.levels.append([])
            self.trans.append({})
            self.itrans.append({})
        for lvl in range(upto + 1):
            self.levels[lvl].append(residue)
        for lvl in range(level + 1, upto + 1):
            self._rebuild_transversal(lvl)

    def _schreier_sims(self, top: int) -> None:
        i = top
        while i >= 0:
            restart = None
            trans = self.trans[i]
            itrans = self.itrans[i]
            for beta, ub in list(trans.items()):
                for s in list(self.levels[i]):
                    gamma = s[beta]
                    ubs = mul(ub, s)
                    if ubs == trans[gamma]:
                        continue
                    h = mul(ubs, itrans[gamma])
                    residue, j = self.sift(h, i + 1)
                    if residue != self._id:
                        self._add_strong(residue, i, j)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                i = restart

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def contains(self, g: Perm) -> bool:
        residue, _ = self.sift(g)
        return residue == self._id

    def extend(self, g: Perm) -> None:
        """Add a generator in place and restore the BSGS property."""
        if self.contains(g):
            return
        self.strong.append(g)
        if _fixes(g, self.base):
            self.base.append(moved_points(g)[0])
            self._append_level(len(self.base) - 1)
        for lvl in range(len(self.base)):
            if _fixes(g, self.base[:lvl]):
                self.levels[lvl].append(g)
                self._rebuild_transversal(lvl)
        self._schreier_sims(len(self.base) - 1)

    def level_group_gens(self, depth: int) -> list[Perm]:
        """Generators of the pointwise stabilizer of ``base[:depth]``."""
        if depth >= len(self.base):
            return [s for s in self.strong if _fixes(s, self.base)]
        return list(self.levels[depth])


# -- groups ---------------------------------------------------------------------

class PermGroup:
    """A finitely generated permutation group of a given degree.

    Identity and repeated generators are dropped.  Everything else about the
    group is derived on demand from the stabilizer chain.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (), *, check: bool = True):
        if degree < 0:
            raise ValidationError("degree must be nonnegative")
        self.degree = degree
        gens: list[Perm] = []
        ident = identity(degree)
        for idx, g in enumerate(generators):
            g = check_perm(g, degree, idx) if check else tuple(g)
            if g != ident and g not in gens:
                gens.append(g)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self._chain: StabChain | None = None
        self._lock = threading.Lock()
        self._abelian: bool | None = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = StabChain(self.degree, self.generators)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return not self.generators

    def __contains__(self, g: Sequence[int]) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        return self.chain.contains(g)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(g in other for g in self.generators)

    def equals(self, other: PermGroup) -> bool:
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    def is_abelian(self) -> bool:
        if self._abelian is None:
            gs = self.generators
            self._abelian = all(mul(a, b) == mul(b, a) for a, b in itertools.combinations(gs, 2))
        return self._abelian

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        queue = [point]
        for x in queue:
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def stabilizer_chain(self, base_prefix: Sequence[int]) -> StabChain:
        return StabChain(self.degree, self.generators, base_prefix)

    def pointwise_stabilizer(self, points: Iterable[int]) -> PermGroup:
        pts = sorted(set(points))
        if not self.generators:
            return PermGroup(self.degree)
        ch = self.stabilizer_chain(pts)
        return PermGroup(self.degree, ch.level_group_gens(len(pts)), check=False)

    def join(self, *others: PermGroup) -> PermGroup:
        gens = list(self.generators)
        for o in others:
            gens.extend(o.generators)
        return PermGroup(self.degree, gens, check=False)

    def element_array(self, cap: int | None = None) -> np.ndarray:
        """All elements as rows of an (order x degree) integer array."""
        cap = LIMITS.element_cap if cap is None else cap
        order = self.order()
        if order > cap:
            raise CapacityError(
                f"group order {order} exceeds the element-enumeration cap {cap}; "
                "raise the cap or supply normal subgroups explicitly")
        dtype = np.uint8 if self.degree <= 256 else np.int32
        ch = self.chain
        elems = np.arange(self.degree, dtype=dtype)[None, :]
        for lvl in range(len(ch.base) - 1, -1, -1):
            us = [np.asarray(u, dtype=dtype) for u in ch.trans[lvl].values()]
            if len(us) > 1:
                elems = np.concatenate([u[elems] for u in us])
        return elems

    def elements(self, cap: int | None = None) -> list[Perm]:
        return [tuple(int(x) for x in row) for row in self.element_array(cap)]


def group_from_generators(degree: int, gens: Iterable[Sequence[int]]) -> PermGroup:
    return PermGroup(degree, gens)


def group_order(G: PermGroup) -> int:
    return G.order()


# -- orbits, transitivity, blocks -------------------------------------------------

def _domain(G: PermGroup, domain: Iterable[int] | None) -> tuple[int, ...]:
    if domain is None:
        return tuple(range(G.degree))
    dom = tuple(sorted(set(domain)))
    if dom and (dom[0] < 0 or dom[-1] >= G.degree):
        raise ValidationError("domain point out of range")
    return dom


def _check_invariant(G: PermGroup, dom: Sequence[int]) -> None:
    s = set(dom)
    for idx, g in enumerate(G.generators):
        for x in dom:
            if g[x] not in s:
                raise ValidationError(f"domain is not invariant: generator {idx} maps {x} to {g[x]}")


def orbits(G: PermGroup, domain: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Orbits on an invariant domain, ordered by smallest point."""
    dom = _domain(G, domain)
    _check_invariant(G, dom)
    seen: set[int] = set()
    out = []
    for x in dom:
        if x not in seen:
            orb = frozenset(G.orbit(x))
            seen |= orb
            out.append(orb)
    return out


def is_transitive(G: PermGroup, domain: Iterable[int] | None = None) -> bool:
    dom = _domain(G, domain)
    if not dom:
        raise ValidationError("transitivity is undefined on an empty domain")
    return len(orbits(G, dom)) == 1


def _require_transitive(G: PermGroup, dom: Sequence[int]) -> None:
    if not dom:
        raise ValidationError("empty domain")
    if len(orbits(G, dom)) != 1:
        raise ValidationError("group is not transitive on the domain")


def _block_closure(G: PermGroup, seed: Iterable[int]) -> dict[int, int]:
    """Finest invariant equivalence joining all points of ``seed``.

    Returns a union-find parent map over the touched points.
    """
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    seed = list(seed)
    queue = []
    a = seed[0]
    for b in seed[1:]:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            queue.append((a, b))
    while queue:
        x, y = queue.pop()
        for g in G.generators:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[max(u, v)] = min(u, v)
                queue.append((g[x], g[y]))
    return {x: find(x) for x in list(parent)}


def _system_from_block(G: PermGroup, block: frozenset[int]) -> frozenset[frozenset[int]]:
    blocks = {block}
    queue = [block]
    for b in queue:
        for g in G.generators:
            c = frozenset(g[x] for x in b)
            if c not in blocks:
                blocks.add(c)
                queue.append(c)
    return frozenset(blocks)


def _minimal_block(G: PermGroup, dom: Sequence[int], pts: Iterable[int]) -> frozenset[int]:
    roots = _block_closure(G, pts)
    a = min(pts)
    ra = roots.get(a, a)
    return frozenset(x for x in dom if roots.get(x, x) == ra)


def _sorted_systems(systems: Iterable[frozenset[frozenset[int]]]) -> list[frozenset[frozenset[int]]]:
    return sorted(set(systems), key=lambda s: (len(next(iter(s))), sorted(sorted(b) for b in s)))


def minimal_block_systems(G: PermGroup, domain: Iterable[int] | None = None) -> list[frozenset[frozenset[int]]]:
    """Block systems whose blocks are minimal nontrivial blocks.

    Empty exactly when the action is primitive.
    """
    dom = _domain(G, domain)
    _require_transitive(G, dom)
    n = len(dom)
    if n <= 3:
        return []
    a = dom[0]
    cands = set()
    for b in dom[1:]:
        blk = _minimal_block(G, dom, (a, b))
        if len(blk) < n:
            cands.add(blk)
    minimal = [B for B in cands if not any(C < B for C in cands)]
    return _sorted_systems(_system_from_block(G, B) for B in minimal)


def all_block_systems(G: PermGroup, domain: Iterable[int] | None = None) -> list[frozenset[frozenset[int]]]:
    """Every nontrivial block system (block size strictly between 1 and n)."""
    dom = _domain(G, domain)
    _require_transitive(G, dom)
    n = len(dom)
    a = dom[0]
    blocks = {frozenset([a])}
    frontier = [_minimal_block(G, dom, (a, b)) for b in dom[1:]]
    frontier = list(set(frontier))
    blocks.update(frontier)
    while frontier:
        new = []
        for B in frontier:
            for C in list(blocks):
                if B <= C or C <= B:
                    continue
                J = _minimal_block(G, dom, B | C)
                if J not in blocks:
                    blocks.add(J)
                    new.append(J)
        frontier = new
    return _sorted_systems(_system_from_block(G, B) for B in blocks if 1 < len(B) < n)


def block_systems_bruteforce(G: PermGroup, domain: Iterable[int] | None = None) -> list[frozenset[frozenset[int]]]:
    """Nontrivial block systems by testing every subset containing the first point.

    Exponential in the degree; used as an oracle up to ``LIMITS.brute_block_degree``.
    """
    dom = _domain(G, domain)
    _require_transitive(G, dom)
    n = len(dom)
    if n > LIMITS.brute_block_degree:
        raise CapacityError(f"brute-force block search is limited to degree {LIMITS.brute_block_degree}")
    a, rest = dom[0], dom[1:]
    out = []
    for size in range(2, n):
        if n % size:
            continue
        for others in itertools.combinations(rest, size - 1):
            B = frozenset((a,) + others)
            system = _system_from_block(G, B)
            covered = sum(len(b) for b in system)
            if covered == n and len(frozenset().union(*system)) == n:
                out.append(system)
    return _sorted_systems(out)


def is_primitive(G: PermGroup, domain: Iterable[int] | None = None) -> bool:
    dom = _domain(G, domain)
    _require_transitive(G, dom)
    n = len(dom)
    if n <= 3 or all(n % p for p in range(2, math.isqrt(n) + 1)):
        return True
    return not minimal_block_systems(G, dom)


# -- actions on subsets ---------------------------------------------------------

@dataclass(frozen=True)
class ActionRestriction:
    parent: PermGroup
    domain: tuple[int, ...]
    induced: PermGroup
    kernel: PermGroup


def induced_on(G: PermGroup, dom: Sequence[int]) -> PermGroup:
    index = {x: i for i, x in enumerate(dom)}
    gens = [tuple(index[g[x]] for x in dom) for g in G.generators]
    return PermGroup(len(dom), gens, check=False)


def restrict_action(G: PermGroup, domain: Iterable[int] | None = None) -> ActionRestriction:
    dom = _domain(G, domain)
    _check_invariant(G, dom)
    return ActionRestriction(G, dom, induced_on(G, dom), G.pointwise_stabilizer(dom))


def is_semiregular(G: PermGroup, domain: Iterable[int] | None = None) -> bool:
    dom = _domain(G, domain)
    for orb in orbits(G, dom):
        y = min(orb)
        stab = G.pointwise_stabilizer([y])
        if not all(_fixes(g, dom) for g in stab.generators):
            return False
    return True


def is_regular(G: PermGroup, domain: Iterable[int] | None = None) -> bool:
    dom = _domain(G, domain)
    return is_transitive(G, dom) and is_semiregular(G, dom)


# -- normal structure -----------------------------------------------------------

def normal_closure(G: PermGroup, S: Iterable[Sequence[int]]) -> PermGroup:
    """Smallest normal subgroup of G containing every element of S."""
    S = [tuple(s) for s in S]
    for idx, s in enumerate(S):
        if s not in G:
            raise MembershipError(f"element {idx} ({format_cycles(s)}) is not in the group")
    return _closure_under_conjugation(G, S)


def _closure_under_conjugation(G: PermGroup, seeds: Iterable[Perm]) -> PermGroup:
    ident = identity(G.degree)
    gens = [s for s in dict.fromkeys(seeds) if s != ident]
    if not gens:
        return PermGroup(G.degree)
    chain = StabChain(G.degree, gens)
    queue = list(gens)
    while queue:
        x = queue.pop()
        for g in G.generators:
            c = conjugate(x, g)
            if not chain.contains(c):
                chain.extend(c)
                gens.append(c)
                queue.append(c)
    H = PermGroup(G.degree, gens, check=False)
    H._chain = chain
    return H


def is_normal_subgroup(N: PermGroup, G: PermGroup) -> bool:
    if not N.is_subgroup_of(G):
        return False
    return all(conjugate(x, g) in N for x in N.generators for g in G.generators)


class ElementTable:
    """All elements of a group with a lookup from element to row index.

    Rows are keyed by their images of the chain's base, which determine the
    element uniquely.
    """

    def __init__(self, G: PermGroup, cap: int | None = None):
        self.group = G
        self.array = G.element_array(cap)
        self.base = list(G.chain.base) or [0]
        self.index = {k: i for i, k in enumerate(self._keys(self.array))}

    def _keys(self, rows: np.ndarray) -> list[bytes]:
        sub = np.ascontiguousarray(rows[:, self.base])
        raw = sub.tobytes()
        w = sub.shape[1] * sub.itemsize
        return [raw[i * w:(i + 1) * w] for i in range(sub.shape[0])]

    def lookup(self, rows: np.ndarray) -> list[int]:
        return [self.index[k] for k in self._keys(rows)]

    def __len__(self) -> int:
        return self.array.shape[0]


def conjugacy_classes(G: PermGroup, cap: int | None = None, table: ElementTable | None = None) -> list[np.ndarray]:
    """Conjugacy classes as arrays of row indices into an ElementTable.

    Classes are ordered by size, then by their first element's index.
    """
    table = table or ElementTable(G, cap)
    arr = table.array
    hs = [np.asarray(h, dtype=np.intp) for h in G.generators]
    assigned = np.zeros(len(table), dtype=bool)
    classes = []
    for start in range(len(table)):
        if assigned[start]:
            continue
        assigned[start] = True
        members = [start]
        frontier = arr[[start]]
        while frontier.shape[0]:
            found = []
            for h in hs:
                conj = np.empty_like(frontier)
                conj[:, h] = h[frontier].astype(frontier.dtype)
                for idx in table.lookup(conj):
                    if not assigned[idx]:
                        assigned[idx] = True
                        found.append(idx)
            members.extend(found)
            frontier = arr[found] if found else arr[:0]
        classes.append(np.array(sorted(members)))
    classes.sort(key=lambda c: (len(c), c[0]))
    return classes


def minimal_normal_subgroups(G: PermGroup, cap: int | None = None) -> list[PermGroup]:
    """Inclusion-minimal nontrivial normal subgroups of G.

    Each minimal normal subgroup is generated by any conjugacy class it
    contains, so it suffices to close each class and keep the minimal results.
    Classes are visited smallest first and a closure is abandoned as soon as
    it properly contains a subgroup already found.
    """
    if G.is_trivial():
        return []
    table = ElementTable(G, cap)
    ident = identity(G.degree)
    found: list[PermGroup] = []
    for cls in conjugacy_classes(G, table=table):
        rows = table.array[cls]
        rep = tuple(int(x) for x in rows[0])
        if rep == ident:
            continue
        H = _subgroup_from_class(G, rows, found)
        if H is None:
            continue
        Hord = H.order()
        if any(C.order() <= Hord and C.is_subgroup_of(H) for C in found):
            continue
        found = [C for C in found if not (Hord < C.order() and H.is_subgroup_of(C))]
        found.append(H)
    found.sort(key=lambda N: (N.order(), sorted(N.generators)))
    return found


def _subgroup_from_class(G: PermGroup, rows: np.ndarray, found: list[PermGroup]) -> PermGroup | None:
    gens = [tuple(int(x) for x in rows[0])]
    chain = StabChain(G.degree, gens)
    for row in rows[1:]:
        g = tuple(int(x) for x in row)
        if chain.contains(g):
            continue
        chain.extend(g)
        gens.append(g)
        order = chain.order()
        for C in found:
            if C.order() < order and all(chain.contains(c) for c in C.generators):
                return None
    H = PermGroup(G.degree, gens, check=False)
    H._chain = chain
    return H


def is_quasiprimitive(G: PermGroup, domain: Iterable[int] | None = None, cap: int | None = None) -> bool:
    """Whether the group induced on ``domain`` is quasiprimitive."""
    dom = _domain(G, domain)
    _require_transitive(G, dom)
    induced = induced_on(G, dom)
    if is_primitive(induced):
        return True
    return all(is_transitive(N) for N in minimal_normal_subgroups(induced, cap))


# -- isomorphism ----------------------------------------------------------------

def _small_generating_set(elems: Sequence[Perm]) -> list[Perm]:
    ordered = sorted(elems, key=lambda g: (-perm_order(g), g))
    n = len(elems[0])
    ident = identity(n)
    span = {ident}
    gens: list[Perm] = []
    for g in ordered:
        if g in span:
            continue
        gens.append(g)
        span = _close(span, gens)
        if len(span) == len(elems):
            break
    return gens


def _close(start: set[Perm], gens: Sequence[Perm]) -> set[Perm]:
    span = set(start)
    queue = list(span)
    for x in queue:
        for g in gens:
            y = mul(x, g)
            if y not in span:
                span.add(y)
                queue.append(y)
    return span


def _extend_hom(src_gens: Sequence[Perm], dst_gens: Sequence[Perm]) -> dict[Perm, Perm] | None:
    """Extend generator images to an injective homomorphism, or return None."""
    ident_a = identity(len(src_gens[0]))
    ident_b = identity(len(dst_gens[0]))
    fwd = {ident_a: ident_b}
    back = {ident_b: ident_a}
    queue = [ident_a]
    for x in queue:
        fx = fwd[x]
        for a, b in zip(src_gens, dst_gens):
            y = mul(x, a)
            fy = mul(fx, b)
            if y in fwd:
                if fwd[y] != fy:
                    return None
                continue
            if fy in back:
                return None
            fwd[y] = fy
            back[fy] = y
            queue.append(y)
    return fwd


def is_isomorphic_small(A: PermGroup, B: PermGroup, cap: int | None = None) -> bool:
    """Abstract isomorphism test by backtracking over generator images."""
    cap = LIMITS.isomorphism_cap if cap is None else cap
    oa, ob = A.order(), B.order()
    if max(oa, ob) > cap:
        raise CapacityError(f"isomorphism test limited to order {cap}")
    if oa != ob:
        return False
    if oa == 1:
        return True
    if A.is_abelian() != B.is_abelian():
        return False
    ea, eb = A.elements(cap), B.elements(cap)
    if Counter(map(perm_order, ea)) != Counter(map(perm_order, eb)):
        return False
    gens = _small_generating_set(ea)
    by_order: dict[int, list[Perm]] = {}
    for b in eb:
        by_order.setdefault(perm_order(b), []).append(b)
    cands = [by_order.get(perm_order(g), []) for g in gens]

    def search(k: int, images: list[Perm]) -> bool:
        if k == len(gens):
            hom = _extend_hom(gens, images)
            return hom is not None and len(hom) == oa
        for b in cands[k]:
            trial = images + [b]
            if _extend_hom(gens[:k + 1], trial) is not None and search(k + 1, trial):
                return True
        return False

    return search(0, [])


# -- constructions ----------------------------------------------------------------

def cyclic_group(n: int) -> PermGroup:
    return PermGroup(n, [tuple((i + 1) % n for i in range(n))] if n > 1 else [])


def symmetric_group(n: int) -> PermGroup:
    gens = []
    if n > 1:
        gens.append(tuple((i + 1) % n for i in range(n)))
        gens.append((1, 0) + tuple(range(2, n)))
    return PermGroup(n, gens)


def alternating_group(n: int) -> PermGroup:
    gens = []
    for k in range(2, n):
        c = list(range(n))
        c[0], c[1], c[k] = 1, k, 0
        gens.append(tuple(c))
    return PermGroup(n, gens)


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of an n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return PermGroup(n, [rot, ref])


def direct_product(*groups: PermGroup) -> PermGroup:
    """Product acting on the disjoint union of the factors' point sets."""
    total = sum(G.degree for G in groups)
    gens = []
    offset = 0
    for G in groups:
        for g in G.generators:
            p = list(range(total))
            for i, x in enumerate(g):
                p[offset + i] = offset + x
            gens.append(tuple(p))
        offset += G.degree
    return PermGroup(total, gens, check=False)


def coset_action(G: PermGroup, K: PermGroup) -> tuple[list[Perm], list[Perm]]:
    """Action of G by right multiplication on the right cosets of K.

    Returns canonical coset representatives (least element of each coset, in
    discovery order) and, for every generator of G, its permutation of the
    cosets.
    """
    if not K.is_subgroup_of(G):
        raise MembershipError("K is not a subgroup of G")
    kel = K.elements(LIMITS.isomorphism_cap)

    def canon(x: Perm) -> Perm:
        return min(mul(k, x) for k in kel)

    start = identity(G.degree)
    reps = [start]
    index = {start: 0}
    images: list[list[int]] = [[] for _ in G.generators]
    for r in reps:
        for gi, g in enumerate(G.generators):
            c = canon(mul(r, g))
            if c not in index:
                index[c] = len(reps)
                reps.append(c)
            images[gi].append(index[c])
    return reps, [tuple(im) for im in images]
