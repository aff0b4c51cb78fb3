"""Imprimitive and normal quotients, degeneracy, and basicness.

Quotient parts are numbered by (type, smallest contained element), so a
quotient is reproducible from its input alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import perm
from .action import BoundAction, bind, in_family_G, intransitive_fibers, is_fully_primitive
from .errors import CapacityError, MembershipError, TheoremViolation, ValidationError
from .geom import Pregeometry, effective_rank, is_geometry
from .perm import PermGroup

PARTITION_ELEMENT_CAP = 64
PARTITION_COUNT_CAP = 10_000


@dataclass(frozen=True)
class TypeRefiningPartition:
    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def from_parts(cls, parts: Iterable[Iterable[int]], p: Pregeometry) -> TypeRefiningPartition:
        ps = [tuple(sorted(P)) for P in parts]
        ps.sort(key=lambda P: (p.type_of[P[0]] if P else -1, P))
        out = cls(tuple(ps))
        out.check(p)
        return out

    def check(self, p: Pregeometry) -> None:
        seen: set[int] = set()
        for P in self.parts:
            if not P:
                raise ValidationError("empty part")
            if len({p.type_of[x] for x in P}) != 1:
                raise ValidationError(f"part {list(P)} meets more than one type")
            if seen & set(P):
                raise ValidationError("parts overlap")
            seen |= set(P)
        if seen != set(range(p.size)):
            raise ValidationError("parts do not cover the element set")

    def part_map(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for i, P in enumerate(self.parts):
            for x in P:
                out[x] = i
        return tuple(out)


@dataclass
class QuotientResult:
    source: BoundAction
    partition: TypeRefiningPartition
    quotient: BoundAction
    part_map: tuple[int, ...]
    k_table: dict[tuple[str, str], int | None] | None = None
    k_pairs: dict[tuple[int, int], int] | None = None
    part_degrees: dict[tuple[str, str], int | None] = field(default_factory=dict)

    @property
    def quotient_geometry(self) -> Pregeometry:
        return self.quotient.geometry

    @property
    def quotient_action(self) -> BoundAction:
        return self.quotient


# -- partitions -------------------------------------------------------------------

def _fiber_options(a: BoundAction, fiber: Sequence[int], keep_rank: bool) -> list[list[tuple[int, ...]]]:
    singletons = [(x,) for x in fiber]
    if len(fiber) == 1:
        return [singletons]
    opts = [singletons]
    for system in perm.all_block_systems(a.group, fiber):
        opts.append(sorted(tuple(sorted(B)) for B in system))
    if not keep_rank:
        opts.append([tuple(fiber)])
    return opts


def invariant_type_refining_partitions(a: BoundAction, preserve_effective_rank: bool = False,
                                       max_elements: int = PARTITION_ELEMENT_CAP,
                                       max_partitions: int = PARTITION_COUNT_CAP) -> list[TypeRefiningPartition]:
    """All G-invariant type-refining partitions.

    Each fiber is G-invariant, so an invariant partition is any independent
    choice of an invariant partition per fiber.  With
    ``preserve_effective_rank`` a fiber of size >= 2 is never collapsed to a
    single part.
    """
    p = a.geometry
    if p.size > max_elements:
        raise CapacityError(f"partition enumeration limited to |X| <= {max_elements}")
    per_fiber = [_fiber_options(a, f, preserve_effective_rank) for f in p.fibers]
    total = math.prod(len(o) for o in per_fiber)
    if total > max_partitions:
        raise CapacityError(f"{total} invariant partitions exceed the cap {max_partitions}")
    out = []
    for choice in itertools.product(*per_fiber):
        parts = [P for fiber_parts in choice for P in fiber_parts]
        out.append(TypeRefiningPartition.from_parts(parts, p))
    return out


def is_invariant(G: PermGroup, P: TypeRefiningPartition) -> bool:
    blocks = {frozenset(B) for B in P.parts}
    return all(frozenset(g[x] for x in B) in blocks for g in G.generators for B in P.parts)


# -- quotients --------------------------------------------------------------------

def _build_quotient(a: BoundAction, P: TypeRefiningPartition) -> tuple[BoundAction, tuple[int, ...]]:
    p = a.geometry
    pm = P.part_map(p.size)
    sizes = [0] * p.rank
    for B in P.parts:
        sizes[p.type_of[B[0]]] += 1
    inc = {(min(pm[x], pm[y]), max(pm[x], pm[y])) for x, y in p.incidence}
    q = Pregeometry.build(p.types, sizes, inc)
    gens = [tuple(pm[g[B[0]]] for B in P.parts) for g in a.group.generators]
    return bind(q, PermGroup(len(P.parts), gens, check=False)), pm


def quotient_by(a: BoundAction, P: TypeRefiningPartition) -> QuotientResult:
    P.check(a.geometry)
    if not is_invariant(a.group, P):
        raise ValidationError("partition is not invariant under the group")
    qa, pm = _build_quotient(a, P)
    if in_family_G(a) and not in_family_G(qa):
        raise TheoremViolation("quotient of a pair in the family left the family")
    res = QuotientResult(a, P, qa, pm)
    res.part_degrees = _part_degrees(qa)
    return res


def _part_degrees(qa: BoundAction) -> dict[tuple[str, str], int | None]:
    """Number of type-j parts incident with a type-i part, when constant."""
    q = qa.geometry
    out: dict[tuple[str, str], int | None] = {}
    for i, j in itertools.permutations(range(q.rank), 2):
        degs = {len([y for y in q.neighbours[x] if q.type_of[y] == j]) for x in q.fibers[i]}
        out[(q.types[i], q.types[j])] = degs.pop() if len(degs) == 1 else None
    return out


def normal_quotient(a: BoundAction, N: PermGroup) -> QuotientResult:
    """Quotient by the orbits of a normal subgroup, with incidence counts.

    ``k_pairs[(P, Q)]`` is the number of elements of part Q incident with any
    one element of part P; it is forced to be constant by N-invariance.
    ``k_table[(i, j)]`` is the common value over all incident parts of types
    (i, j), or None when different part pairs disagree.
    """
    G = a.group
    for idx, x in enumerate(N.generators):
        if x not in G:
            raise MembershipError(f"generator {idx} of N ({perm.format_cycles(x)}) is not in G")
    if not perm.is_normal_subgroup(N, G):
        raise ValidationError("N is not normal in G")
    p = a.geometry
    P = TypeRefiningPartition.from_parts(perm.orbits(N), p)
    res = quotient_by(a, P)
    nb = p.neighbours
    k_pairs: dict[tuple[int, int], int] = {}
    by_types: dict[tuple[str, str], set[int]] = {}
    for pi, B in enumerate(P.parts):
        ti = p.type_of[B[0]]
        touched: dict[int, list[int]] = {}
        for x in B:
            for y in nb[x]:
                touched.setdefault(res.part_map[y], []).append(x)
        for qi in touched:
            C = set(P.parts[qi])
            counts = {len(nb[x] & C) for x in B}
            if len(counts) != 1:
                raise TheoremViolation(
                    f"incidence count from part {pi} into part {qi} is not constant: {sorted(counts)}")
            k = counts.pop()
            k_pairs[(pi, qi)] = k
            tj = p.type_of[P.parts[qi][0]]
            by_types.setdefault((p.types[ti], p.types[tj]), set()).add(k)
    res.k_pairs = k_pairs
    res.k_table = {key: (next(iter(v)) if len(v) == 1 else None) for key, v in sorted(by_types.items())}
    return res


# -- degeneracy and basicness -----------------------------------------------------

def is_primitive_degenerate(p: Pregeometry) -> bool:
    return any(m == 1 for m in p.fiber_sizes())


def is_normal_degenerate(p: Pregeometry) -> bool:
    return sum(1 for m in p.fiber_sizes() if m > 1) <= 1


def is_primitive_basic(a: BoundAction) -> bool:
    return not is_primitive_degenerate(a.geometry) and is_fully_primitive(a)


def is_primitive_basic_by_quotients(a: BoundAction) -> bool:
    """Direct definition: every proper rank-preserving imprimitive quotient is degenerate."""
    p = a.geometry
    if is_primitive_degenerate(p):
        return False
    for P in invariant_type_refining_partitions(a, preserve_effective_rank=True):
        if len(P.parts) < p.size:
            q, _ = _build_quotient(a, P)
            if not is_primitive_degenerate(q.geometry):
                return False
    return True


def normal_basic_witness(a: BoundAction) -> PermGroup | None:
    """A minimal normal subgroup intransitive on two or more fibers, if any."""
    for N in a.minimal_normal_subgroups():
        if len(intransitive_fibers(a, N)) >= 2:
            return N
    return None


def is_normal_basic(a: BoundAction) -> bool:
    """Not normal-degenerate, and each minimal normal subgroup is transitive on all
    but at most one fiber.

    Every nontrivial normal subgroup contains a minimal one and transitivity
    passes to overgroups, so the minimal ones suffice.
    """
    if is_normal_degenerate(a.geometry):
        return False
    if not in_family_G(a):
        raise ValidationError("normal-basicness is defined for pairs in the family")
    return normal_basic_witness(a) is None


def normal_subgroups_from_classes(G: PermGroup) -> list[PermGroup]:
    """Normal closures of one element from every conjugacy class (deduplicated)."""
    table = perm.ElementTable(G)
    out: list[PermGroup] = []
    for cls in perm.conjugacy_classes(G, table=table):
        rep = tuple(int(x) for x in table.array[cls[0]])
        if perm.is_identity(rep):
            continue
        N = perm.normal_closure(G, [rep])
        if not any(N.equals(M) for M in out):
            out.append(N)
    return out


def is_normal_basic_by_quotients(a: BoundAction) -> bool:
    """Direct definition: every proper normal quotient is normal-degenerate."""
    if is_normal_degenerate(a.geometry):
        return False
    for N in normal_subgroups_from_classes(a.group):
        q, _ = _build_quotient(a, TypeRefiningPartition.from_parts(perm.orbits(N), a.geometry))
        if not is_normal_degenerate(q.geometry):
            return False
    return True


def quotient_summary(res: QuotientResult) -> dict:
    q = res.quotient.geometry
    out = {
        "fiber_sizes": dict(zip(q.types, q.fiber_sizes())),
        "effective_rank": effective_rank(q),
        "part_map": list(res.part_map),
        "parts": [list(P) for P in res.partition.parts],
        "source_is_geometry": is_geometry(res.source.geometry),
        "quotient_is_geometry": is_geometry(q),
        "part_degrees": {f"{i}->{j}": v for (i, j), v in res.part_degrees.items()},
    }
    if res.k_table is not None:
        out["k_table"] = {f"{i}->{j}": v for (i, j), v in res.k_table.items()}
    return out
