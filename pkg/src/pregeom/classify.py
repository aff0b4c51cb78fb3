"""Structure of primitive-basic and normal-basic pairs.

Three layers:

* ``decompose_theorem11`` -- the unique splitting of a primitive-basic pair
  into indecomposable summands, each with a faithful primitive induced group
  on every fiber;
* ``classify_normal_basic`` -- the five-way case split (i, ii-a, ii-b, iii, iv)
  for normal-basic pairs, driven by the type classes;
* ``table1_line`` -- for complete multipartite pairs of rank >= 3 with at
  most one faithful type, which kernel configuration occurs.

Every structural claim attached to an assigned case is re-verified on the
instance; a failed check raises ``TheoremViolation``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import perm
from .action import (BoundAction, TypeClasses, _require_family, bind, family_failure,
                     intransitive_fibers, kernel_on_types, restrict_to_types)
from .errors import CapacityError, ClassificationError, TheoremViolation, ValidationError
from .geom import (TypePartition, finest_decomposition, is_complete_multipartite, is_direct_sum_split,
                   truncation)
from .perm import PermGroup
from .quotient import (is_normal_basic, is_normal_degenerate, is_primitive_basic,
                       is_primitive_degenerate, normal_basic_witness, normal_quotient)

CASES = ("i", "ii-a", "ii-b", "iii", "iv")
# wording used for case iv in the theorem-level statement
CASE_ALIASES = {"iv": "faithful but not quasiprimitive on the excluded subset of elements"}


# -- summand decomposition ---------------------------------------------------

@dataclass(frozen=True)
class PartCertificate:
    types: tuple[str, ...]
    induced_order: int
    faithful: dict[str, bool]
    primitive: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.faithful.values()) and all(self.primitive.values())

    def as_dict(self) -> dict:
        return {"types": list(self.types), "induced_order": self.induced_order,
                "faithful": dict(self.faithful), "primitive": dict(self.primitive)}


@dataclass(frozen=True)
class Theorem11Result:
    partition: TypePartition
    certificates: tuple[PartCertificate, ...]

    def as_dict(self) -> dict:
        return {"parts": [list(P) for P in self.partition.parts],
                "certificates": [c.as_dict() for c in self.certificates]}


def part_certificate(a: BoundAction, part: Sequence[str]) -> PartCertificate:
    """Faithfulness and primitivity of the group induced on the J-truncation.

    The induced group G^{X_J} is faithful on X_t iff the kernel of G on X_t
    equals the kernel on all of X_J; the first contains the second, so an
    order comparison decides it.
    """
    K = kernel_on_types(a, part)
    faithful = {t: a.kernels[t].order() == K.order() for t in part}
    primitive = {t: perm.is_primitive(a.group, a.fiber(t)) for t in part}
    return PartCertificate(tuple(part), a.group.order() // K.order(), faithful, primitive)


def _indecomposable(a: BoundAction, part: Sequence[str]) -> bool:
    return len(finest_decomposition(truncation(a.geometry, part)).parts) == 1


def decompose_theorem11(a: BoundAction) -> Theorem11Result:
    _require_family(a)
    p = a.geometry
    if is_primitive_degenerate(p):
        t = p.types[p.fiber_sizes().index(1)]
        raise ClassificationError(f"pair is primitive-degenerate: fiber {t!r} has one element")
    for t, f in zip(p.types, p.fibers):
        if not perm.is_primitive(a.group, f):
            raise ClassificationError(f"group is imprimitive on fiber {t!r}")
    parts = finest_decomposition(p)
    certs = tuple(part_certificate(a, P) for P in parts.parts)
    for c in certs:
        if not c.ok:
            raise TheoremViolation(f"summand {list(c.types)} fails faithfulness/primitivity: {c.as_dict()}")
    return Theorem11Result(parts, certs)


def set_partitions(items: Sequence[Any]) -> Iterable[list[list[Any]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        yield [[first]] + sub
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]


def theorem11_partitions_bruteforce(a: BoundAction, max_rank: int = 4) -> list[TypePartition]:
    """Every type partition into primitive-basic indecomposable summands, by exhaustion."""
    p = a.geometry
    if p.rank > max_rank:
        raise CapacityError(f"type-partition enumeration limited to rank {max_rank}")
    out = []
    for parts in set_partitions(list(p.types)):
        if not is_direct_sum_split(p, parts):
            continue
        if not all(_indecomposable(a, P) for P in parts):
            continue
        if all(part_certificate(a, P).ok for P in parts):
            ordered = sorted((tuple(t for t in p.types if t in P) for P in parts),
                             key=lambda P: p.types.index(P[0]))
            out.append(TypePartition(tuple(ordered)))
    return out


# -- case split for normal-basic pairs -------------------------------------------

def _in_Q(b: BoundAction) -> str | None:
    reason = family_failure(b)
    if reason:
        return reason
    tc = b.type_classes
    if tc.unfaithful or tc.non_quasiprimitive:
        return f"restricted pair not fully quasiprimitive: {tc.as_dict()}"
    return None


def _summand_checks(a: BoundAction, removed: Sequence[str]) -> str | None:
    """Shared part of cases ii and iv: Gamma_0 in Q and G faithful on Gamma_0."""
    rest = [t for t in a.types if t not in removed]
    if not rest:
        return "no types left for the main summand"
    if not kernel_on_types(a, rest).is_trivial():
        return "G is not faithful on the main summand"
    return _in_Q(restrict_to_types(a, rest))


def check_case(a: BoundAction, case: str, tc: TypeClasses | None = None) -> str | None:
    """None if every structural claim of ``case`` holds on ``a``, else the first failure."""
    tc = tc or a.type_classes
    p = a.geometry
    k = p.rank
    faithful = len(tc.quasiprimitive) + len(tc.non_quasiprimitive)
    if case == "i":
        if tc.s:
            return f"s = {tc.s} > 0"
        return None
    if case == "ii-a":
        if k < 3:
            return "rank < 3"
        if len(tc.unfaithful) != 1 or tc.non_quasiprimitive:
            return "needs exactly one unfaithful type and no faithful non-quasiprimitive type"
        j = tc.unfaithful[0]
        rest = [t for t in a.types if t != j]
        if not is_direct_sum_split(p, [rest, [j]]):
            return f"type {j!r} is not completely incident with the rest"
        return _summand_checks(a, [j])
    if case == "ii-b":
        if k < 4:
            return "rank < 4"
        if len(tc.unfaithful) != 2 or tc.non_quasiprimitive:
            return "needs exactly two unfaithful types and no faithful non-quasiprimitive type"
        j, l = tc.unfaithful
        rest = [t for t in a.types if t not in (j, l)]
        if not is_direct_sum_split(p, [rest, [j], [l]]):
            return "unfaithful types are not split off as a direct sum"
        reason = _summand_checks(a, [j, l])
        if reason:
            return reason
        n = len(a.minimal_normal_subgroups())
        if n != 2:
            return f"{n} minimal normal subgroups, expected 2"
        return None
    if case == "iii":
        if not is_complete_multipartite(p):
            return "not complete multipartite"
        if faithful > 1:
            return f"{faithful} faithful types"
        return None
    if case == "iv":
        if len(tc.non_quasiprimitive) != 1 or tc.unfaithful:
            return "needs exactly one faithful non-quasiprimitive type and all others faithful quasiprimitive"
        return _summand_checks(a, tc.non_quasiprimitive)
    raise ValueError(f"unknown case {case!r}")


def case_checks(a: BoundAction) -> dict[str, str | None]:
    tc = a.type_classes
    return {c: check_case(a, c, tc) for c in CASES}


def assign_case(tc: TypeClasses, rank: int) -> str:
    """Branch on s = |I_unf u I_nonqp| the way the proof of the case split does."""
    s = tc.s
    if s == 0:
        return "i"
    if s == 1:
        if tc.non_quasiprimitive:
            return "iv"
        return "iii" if rank == 2 else "ii-a"
    if s == 2:
        if rank <= 3:
            return "iii"
        return "ii-b"
    return "iii"


@dataclass
class Table1Result:
    line: str
    params: dict[str, int]
    kernels: dict[str, dict[str, Any]]
    lemma_checks: dict[str, bool]

    def as_dict(self) -> dict:
        return {"line": self.line, "params": dict(self.params), "kernels": self.kernels,
                "lemma_checks": dict(self.lemma_checks)}


def _trivial_intersection(A: PermGroup, B: PermGroup) -> bool:
    # both normal in G, so <A, B> = AB has order |A||B|/|A n B|
    return A.join(B).order() == A.order() * B.order()


def _prime_power(n: int) -> tuple[int, int] | None:
    if n < 2:
        return None
    p = next(q for q in range(2, n + 1) if n % q == 0)
    d = 0
    while n % p == 0:
        n //= p
        d += 1
    return (p, d) if n == 1 else None


def _elementary_abelian(G: PermGroup, p: int) -> bool:
    return G.is_abelian() and all(perm.perm_order(g) == p for g in G.generators)


def _violation(msg: str) -> TheoremViolation:
    return TheoremViolation(f"table-1 check failed: {msg}")


def regular_kernel_checks(a: BoundAction, unf: Sequence[str]) -> dict[str, bool]:
    """For distinct unfaithful i, j and any other l: trivial intersection, faithful
    regular action on X_l, and isomorphic kernels."""
    out: dict[str, bool] = {}
    T = a.kernels
    for i, j in itertools.combinations(unf, 2):
        out[f"T{i}&T{j}=1"] = _trivial_intersection(T[i], T[j])
        out[f"T{i}~T{j}"] = perm.is_isomorphic_small(T[i], T[j])
        for l in a.types:
            if l in (i, j):
                continue
            for x in (i, j):
                key = f"T{x} regular on X{l}"
                if key not in out:
                    f = a.fiber(l)
                    ind = perm.induced_on(T[x], f)
                    out[key] = ind.order() == T[x].order() and perm.is_regular(ind)
    return out


def table1_line(a: BoundAction) -> Table1Result:
    p = a.geometry
    k = p.rank
    tc = a.type_classes
    if k < 3 or not is_complete_multipartite(p):
        raise ClassificationError("table lines apply to complete multipartite pairs of rank >= 3")
    if len(tc.quasiprimitive) + len(tc.non_quasiprimitive) > 1:
        raise ClassificationError("table lines need at most one faithful type")
    T = a.kernels
    unf = list(tc.unfaithful)
    checks = regular_kernel_checks(a, unf)
    mins = a.minimal_normal_subgroups()
    for i in unf:
        checks[f"T{i} minimal normal"] = any(T[i].equals(M) for M in mins)
    sizes = dict(zip(p.types, p.fiber_sizes()))
    if len(unf) >= 3:
        checks["equal fibers"] = len(set(sizes.values())) == 1
    bad = [name for name, ok in checks.items() if not ok]
    if bad:
        raise _violation(", ".join(bad))
    kernels = {t: {"order": T[t].order(), "abelian": T[t].is_abelian()} for t in unf}
    t1 = unf[0]

    if len(unf) == 2 and k == 3 and len(tc.quasiprimitive) == 1:
        (t3,) = tc.quasiprimitive
        t2 = unf[1]
        if T[t1].is_abelian():
            raise _violation("line-i kernels must be nonabelian")
        if sizes[t3] != T[t1].order():
            raise _violation(f"|X_{t3}| = {sizes[t3]} != |T_{t1}| = {T[t1].order()}")
        if sizes[t3] % sizes[t1] or sizes[t3] % sizes[t2]:
            raise _violation("unfaithful fiber sizes must divide the faithful one")
        return Table1Result("line-i", {"k": 3, "m": sizes[t3], "a": sizes[t3] // sizes[t1],
                                       "b": sizes[t3] // sizes[t2]}, kernels, checks)

    if len(unf) != k:
        raise _violation(f"|I_unf| = {len(unf)} matches no line at rank {k}")
    m = sizes[t1]
    if not T[t1].is_abelian():
        if k != 3:
            raise _violation("nonabelian kernels need rank 3")
        J = T[unf[0]].join(T[unf[1]], T[unf[2]])
        checks["direct product"] = J.order() == T[unf[0]].order() * T[unf[1]].order() * T[unf[2]].order()
        if not checks["direct product"]:
            raise _violation("<T_1, T_2, T_3> is not their direct product")
        if m != T[t1].order():
            raise _violation(f"m = {m} != |T_1| = {T[t1].order()}")
        return Table1Result("line-ii", {"k": 3, "m": m}, kernels, checks)

    pd = _prime_power(T[t1].order())
    if pd is None:
        raise _violation(f"|T_{t1}| = {T[t1].order()} is not a prime power")
    q, d = pd
    for t in unf:
        if T[t].order() != q ** d or not _elementary_abelian(T[t], q):
            raise _violation(f"T_{t} is not elementary abelian of order {q}^{d}")
    if m != q ** d:
        raise _violation(f"fiber size {m} != {q}^{d}")
    if k > m + 1:
        raise _violation(f"k = {k} exceeds p^d + 1 = {m + 1}")
    J = T[unf[0]].join(*(T[t] for t in unf[1:]))
    checks["join elementary abelian of order p^2d"] = J.order() == q ** (2 * d) and _elementary_abelian(J, q)
    if not checks["join elementary abelian of order p^2d"]:
        raise _violation("<T_i> is not elementary abelian of order p^(2d)")
    return Table1Result("line-iii", {"k": k, "m": m, "p": q, "d": d}, kernels, checks)


@dataclass
class CaseResult:
    case: str
    checks: dict[str, str | None]
    shape: dict[str, Any] = field(default_factory=dict)
    table1: Table1Result | None = None
    witnesses: dict[str, Any] = field(default_factory=dict)


def classify_normal_basic(a: BoundAction) -> CaseResult:
    if not is_normal_basic(a):
        raise ClassificationError("pair is not normal-basic")
    p = a.geometry
    tc = a.type_classes
    case = assign_case(tc, p.rank)
    checks = case_checks(a)
    passing = [c for c, r in checks.items() if r is None]
    if passing != [case]:
        raise TheoremViolation(f"case {case} assigned but passing checks are {passing}: {checks}")
    res = CaseResult(case, checks)
    sizes = dict(zip(p.types, p.fiber_sizes()))
    if case in ("ii-a", "ii-b"):
        res.shape = {"split_off": {t: sizes[t] for t in tc.unfaithful},
                     "main": [t for t in a.types if t not in tc.unfaithful]}
    elif case == "iv":
        (t,) = tc.non_quasiprimitive
        N = next(N for N in a.minimal_normal_subgroups() if t in intransitive_fibers(a, N))
        res.witnesses["intransitive_normal"] = {"type": t, "order": N.order(),
                                                "generators": [perm.format_cycles(g) for g in N.generators]}
        res.shape = {"excluded": t}
    elif case == "iii":
        if p.rank == 2:
            res.shape = {"form": "Gamma(1,m)+Gamma(1,m')", "m": p.fiber_sizes()[0], "m'": p.fiber_sizes()[1]}
        else:
            res.table1 = table1_line(a)
            ms = sorted(p.fiber_sizes())
            if p.rank == 3 and not all(ms[-1] % x == 0 for x in ms):
                raise TheoremViolation(f"rank-3 fiber sizes {ms} break the divisibility shape")
            res.shape = {"fiber_sizes": sizes}
        res.witnesses["kernels"] = {t: a.kernels[t].order() for t in tc.unfaithful}
    return res


# -- full report ----------------------------------------------------------------

REPORT_FIELDS = ("verdict", "reason", "types", "fiber_sizes", "in_family", "type_classes",
                 "primitive_degenerate", "normal_degenerate", "primitive_basic", "normal_basic",
                 "thm11_partition", "case_tag", "case_alias", "case_checks", "case_shape",
                 "table1_line", "witnesses")


@dataclass
class ClassificationReport:
    verdict: tuple[str, ...]
    types: tuple[str, ...]
    fiber_sizes: tuple[int, ...]
    in_family: bool
    reason: str | None = None
    type_classes: TypeClasses | None = None
    primitive_degenerate: bool | None = None
    normal_degenerate: bool | None = None
    primitive_basic: bool | None = None
    normal_basic: bool | None = None
    thm11_partition: Theorem11Result | None = None
    case_tag: str | None = None
    case_alias: str | None = None
    case_checks: dict[str, str | None] | None = None
    case_shape: dict[str, Any] | None = None
    table1_line: Table1Result | None = None
    witnesses: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        raw = {
            "verdict": list(self.verdict),
            "reason": self.reason,
            "types": list(self.types),
            "fiber_sizes": list(self.fiber_sizes),
            "in_family": self.in_family,
            "type_classes": self.type_classes.as_dict() if self.type_classes else None,
            "primitive_degenerate": self.primitive_degenerate,
            "normal_degenerate": self.normal_degenerate,
            "primitive_basic": self.primitive_basic,
            "normal_basic": self.normal_basic,
            "thm11_partition": self.thm11_partition.as_dict() if self.thm11_partition else None,
            "case_tag": self.case_tag,
            "case_alias": self.case_alias,
            "case_checks": self.case_checks,
            "case_shape": self.case_shape,
            "table1_line": self.table1_line.as_dict() if self.table1_line else None,
            "witnesses": self.witnesses,
        }
        return {k: raw[k] for k in REPORT_FIELDS}


def _neither_witnesses(a: BoundAction) -> dict[str, Any]:
    out: dict[str, Any] = {}
    N = normal_basic_witness(a)
    if N is not None:
        q = normal_quotient(a, N)
        out["intransitive_normal"] = {
            "order": N.order(), "generators": [perm.format_cycles(g) for g in N.generators],
            "intransitive_on": intransitive_fibers(a, N),
            "quotient_fiber_sizes": list(q.quotient.geometry.fiber_sizes())}
    for t, f in zip(a.types, a.geometry.fibers):
        systems = perm.minimal_block_systems(a.group, f)
        if systems:
            out["block_system"] = {"type": t, "blocks": sorted(sorted(B) for B in systems[0])}
            break
    return out


def full_report(a: BoundAction) -> ClassificationReport:
    p = a.geometry
    rep = ClassificationReport((), p.types, p.fiber_sizes(), False)
    reason = family_failure(a)
    if reason:
        rep.verdict, rep.reason = ("not-in-family",), reason
        return rep
    rep.in_family = True
    if p.rank == 1:
        rep.reason = "rank 1: connectivity condition is vacuous"
    rep.type_classes = a.type_classes
    rep.primitive_degenerate = is_primitive_degenerate(p)
    rep.normal_degenerate = is_normal_degenerate(p)
    rep.primitive_basic = is_primitive_basic(a)
    rep.normal_basic = is_normal_basic(a)
    verdict = []
    if rep.primitive_basic:
        verdict.append("primitive-basic")
        rep.thm11_partition = decompose_theorem11(a)
    if rep.normal_basic:
        verdict.append("normal-basic")
        cr = classify_normal_basic(a)
        rep.case_tag = cr.case
        rep.case_alias = CASE_ALIASES.get(cr.case)
        rep.case_checks = cr.checks
        rep.case_shape = cr.shape
        rep.table1_line = cr.table1
        rep.witnesses.update(cr.witnesses)
    if not verdict:
        if rep.normal_degenerate:
            verdict.append("degenerate")
        else:
            verdict.append("neither-basic")
            rep.witnesses.update(_neither_witnesses(a))
    rep.verdict = tuple(verdict)
    return rep


def report_for(p, G) -> ClassificationReport:
    """Convenience: bind then report, turning binding failures into a not-in-family verdict."""
    try:
        a = bind(p, G)
    except ValidationError as exc:
        return ClassificationReport(("not-in-family",), p.types, p.fiber_sizes(), False, reason=str(exc))
    return full_report(a)
