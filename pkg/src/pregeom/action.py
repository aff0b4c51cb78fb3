"""A permutation group bound to a pregeometry, and the per-type data derived from it.

For each type ``i`` the kernel ``T_i`` is the pointwise stabilizer of the
fiber ``X_i``.  Types are sorted into unfaithful (``T_i != 1``), faithful
quasiprimitive, and faithful non-quasiprimitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import perm
from .errors import ClassificationError, ValidationError
from .geom import Pregeometry, rank2_truncations_connected, truncation_with_map
from .perm import PermGroup


@dataclass(frozen=True)
class TypeClasses:
    unfaithful: tuple[str, ...]
    quasiprimitive: tuple[str, ...]
    non_quasiprimitive: tuple[str, ...]

    @property
    def s(self) -> int:
        """Number of types that are unfaithful or faithful but not quasiprimitive."""
        return len(self.unfaithful) + len(self.non_quasiprimitive)

    def as_dict(self) -> dict[str, list[str]]:
        return {"unf": list(self.unfaithful), "qp": list(self.quasiprimitive),
                "nonqp": list(self.non_quasiprimitive)}


class BoundAction:
    """The pair (geometry, group) after validation.

    Kernels are computed at bind time; type classes and minimal normal
    subgroups are computed on first use since they may hit capacity limits.
    """

    def __init__(self, geometry: Pregeometry, group: PermGroup):
        self.geometry = geometry
        self.group = group
        self.kernels: dict[str, PermGroup] = {
            t: group.pointwise_stabilizer(geometry.fibers[i]) for i, t in enumerate(geometry.types)}
        self._type_classes: TypeClasses | None = None
        self._minimal_normals: list[PermGroup] | None = None

    def __repr__(self) -> str:
        return (f"BoundAction(types={self.geometry.types}, sizes={self.geometry.fiber_sizes()}, "
                f"order={self.group.order()})")

    @property
    def types(self) -> tuple[str, ...]:
        return self.geometry.types

    def fiber(self, t: str) -> tuple[int, ...]:
        return self.geometry.fiber(t)

    def minimal_normal_subgroups(self) -> list[PermGroup]:
        if self._minimal_normals is None:
            self._minimal_normals = perm.minimal_normal_subgroups(self.group)
        return self._minimal_normals

    @property
    def type_classes(self) -> TypeClasses:
        if self._type_classes is None:
            self._type_classes = classify_types(self)
        return self._type_classes


def bind(p: Pregeometry, G: PermGroup) -> BoundAction:
    """Validate that G acts on p by automorphisms.

    A PermGroup of degree |X| is faithful on X by construction, so the only
    faithfulness failure possible here is a degree mismatch.
    """
    if G.degree != p.size:
        raise ValidationError(f"group degree {G.degree} does not match |X| = {p.size}; "
                              "pass the faithful image of the group on the element set")
    t = p.type_of
    for idx, g in enumerate(G.generators):
        for x in range(p.size):
            if t[g[x]] != t[x]:
                raise ValidationError(
                    f"type violation: generator {idx} maps element {x} (type {p.types[t[x]]!r}) "
                    f"to {g[x]} (type {p.types[t[g[x]]]!r})")
        for a, b in p.incidence:
            ga, gb = g[a], g[b]
            if (min(ga, gb), max(ga, gb)) not in p.incidence:
                raise ValidationError(f"incidence violation: generator {idx} maps incident pair "
                                      f"({a}, {b}) to non-incident ({ga}, {gb})")
    return BoundAction(p, G)


def in_family_G(a: BoundAction) -> bool:
    """Rank-2 truncations connected (vacuous at rank 1) and G transitive on every fiber."""
    p = a.geometry
    if p.rank >= 2 and not rank2_truncations_connected(p):
        return False
    return all(perm.is_transitive(a.group, f) for f in p.fibers)


def family_failure(a: BoundAction) -> str | None:
    """Human-readable reason the pair is outside the family, or None."""
    p = a.geometry
    if p.rank >= 2 and not rank2_truncations_connected(p):
        return "some rank-2 truncation is disconnected"
    for t, f in zip(p.types, p.fibers):
        if not perm.is_transitive(a.group, f):
            return f"group is intransitive on fiber {t!r}"
    return None


def type_kernel(a: BoundAction, t: str) -> PermGroup:
    if t not in a.kernels:
        raise ValidationError(f"unknown type {t!r}")
    return a.kernels[t]


def _require_family(a: BoundAction) -> None:
    reason = family_failure(a)
    if reason:
        raise ClassificationError(f"pair is not in the family: {reason}")


def is_type_quasiprimitive(a: BoundAction, t: str) -> bool:
    """Whether the group induced on X_t is quasiprimitive."""
    f = a.fiber(t)
    if a.kernels[t].is_trivial():
        # G is isomorphic to its image on X_t, so normal subgroups correspond
        induced = perm.induced_on(a.group, f)
        if perm.is_primitive(induced):
            return True
        return all(perm.is_transitive(N, f) for N in a.minimal_normal_subgroups())
    return perm.is_quasiprimitive(a.group, f)


def classify_types(a: BoundAction) -> TypeClasses:
    _require_family(a)
    unf, qp, nonqp = [], [], []
    for t in a.types:
        if not a.kernels[t].is_trivial():
            unf.append(t)
        elif is_type_quasiprimitive(a, t):
            qp.append(t)
        else:
            nonqp.append(t)
    return TypeClasses(tuple(unf), tuple(qp), tuple(nonqp))


def is_fully_primitive(a: BoundAction) -> bool:
    _require_family(a)
    return all(perm.is_primitive(a.group, f) for f in a.geometry.fibers)


def is_fully_quasiprimitive(a: BoundAction) -> bool:
    tc = a.type_classes
    return not tc.unfaithful and not tc.non_quasiprimitive


def restrict_to_types(a: BoundAction, J: Iterable[str]) -> BoundAction:
    """The truncation to J with the group induced on its elements."""
    q, old = truncation_with_map(a.geometry, J)
    return BoundAction(q, perm.induced_on(a.group, old))


def kernel_on_types(a: BoundAction, J: Iterable[str]) -> PermGroup:
    pts = [x for t in J for x in a.fiber(t)]
    return a.group.pointwise_stabilizer(pts)


def intransitive_fibers(a: BoundAction, N: PermGroup) -> list[str]:
    return [t for t, f in zip(a.types, a.geometry.fibers) if not perm.is_transitive(N, f)]


def complete_incidence_propagates(a: BoundAction, N: PermGroup, src: str, dst: str) -> bool | None:
    """Check the complete-incidence consequence for one normal subgroup.

    If N is trivial on X_src, transitive on X_dst, and some incidence joins
    the fibers, every pair must be incident.  Returns None when the premise
    does not apply.
    """
    p = a.geometry
    fs, fd = a.fiber(src), a.fiber(dst)
    if not all(g[x] == x for g in N.generators for x in fs):
        return None
    if not perm.is_transitive(N, fd):
        return None
    cross = [(x, y) for x in fs for y in fd if p.incident(x, y)]
    if not cross:
        return None
    return len(cross) == len(fs) * len(fd)

