"""Generators for the example pairs used throughout the tests and the census.

Every generator returns a validated ``BoundAction`` and is deterministic:
the same parameters give the same element order and the same generator list.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

from . import perm
from .action import BoundAction, bind, in_family_G
from .errors import ValidationError
from .geom import Pregeometry, direct_sum, rank2_truncations_connected
from .perm import Perm, PermGroup

INF = "inf"


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    params: dict[str, str] = field(default_factory=dict)


# -- small named groups ----------------------------------------------------------

def f20() -> PermGroup:
    """Affine group x -> ax + b of GF(5)."""
    return PermGroup(5, [tuple((x + 1) % 5 for x in range(5)), tuple((2 * x) % 5 for x in range(5))])


def named_group(name: str) -> PermGroup:
    """Z<n>, S<n>, A<n>, D<n> (dihedral of order 2n), or F20."""
    if name == "F20":
        return f20()
    m = re.fullmatch(r"([ZSAD])(\d+)", name)
    if not m:
        raise ValidationError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValidationError("group degree must be positive")
    return {"Z": perm.cyclic_group, "S": perm.symmetric_group,
            "A": perm.alternating_group, "D": perm.dihedral_group}[kind](n)


# -- Fano plane -----------------------------------------------------------------

def _load_psl32() -> dict:
    doc = json.loads(resources.files("pregeom").joinpath("data", "psl32.json").read_text())
    body = json.dumps(doc["generators"], separators=(",", ":"))
    if hashlib.sha256(body.encode()).hexdigest() != doc["sha256"]:
        raise ValidationError("bundled PSL(3,2) generators fail their checksum")
    return doc


def fano_pair() -> BoundAction:
    """PSL(3,2) on the 7 points (ids 0-6) and 7 lines (ids 7-13) of the Fano plane."""
    doc = _load_psl32()
    inc = [(x, 7 + i) for i, L in enumerate(doc["lines"]) for x in L]
    p = Pregeometry.build(["points", "lines"], [7, 7], inc)
    return bind(p, PermGroup(doc["degree"], doc["generators"]))


def points_pairs_S4() -> BoundAction:
    pairs = list(itertools.combinations(range(4), 2))
    idx = {P: 4 + i for i, P in enumerate(pairs)}
    inc = [(x, idx[P]) for P in pairs for x in P]
    p = Pregeometry.build(["points", "pairs"], [4, 6], inc)
    gens = []
    for g in perm.symmetric_group(4).generators:
        img = list(g) + [idx[tuple(sorted((g[a], g[b])))] for a, b in pairs]
        gens.append(tuple(img))
    return bind(p, PermGroup(10, gens))


def f20_case_iia() -> BoundAction:
    """F20 on two copies of GF(5) (incident when different) and on its 4-point quotient.

    The third fiber is the unit group {1,2,3,4}; x -> ax + b moves unit u to
    a*u.  It is completely incident with the first two fibers.
    """
    units = [1, 2, 3, 4]
    inc = [(x, 5 + y) for x in range(5) for y in range(5) if x != y]
    inc += [(x, 10 + j) for x in range(10) for j in range(4)]
    p = Pregeometry.build(["1", "2", "3"], [5, 5, 4], inc)
    gens = []
    for a, b in ((1, 1), (2, 0)):
        on5 = [(a * x + b) % 5 for x in range(5)]
        gens.append(tuple(on5 + [5 + y for y in on5] + [10 + units.index((a * u) % 5) for u in units]))
    return bind(p, PermGroup(14, gens))


# -- coordinatewise products ------------------------------------------------------

def _complete_bipartite(n1: int, n2: int, labels=("1", "2")) -> Pregeometry:
    return Pregeometry.build(labels, [n1, n2], [(x, n1 + y) for x in range(n1) for y in range(n2)])


def construction_5_2(T1: PermGroup, T2: PermGroup) -> BoundAction:
    """T1 x T2 acting coordinatewise on the complete bipartite pregeometry X1 + X2."""
    from .quotient import is_normal_basic

    for i, T in enumerate((T1, T2), start=1):
        if not perm.is_transitive(T):
            raise ValidationError(f"T{i} is not transitive")
        if not perm.is_quasiprimitive(T):
            raise ValidationError(f"T{i} is not quasiprimitive")
    a = bind(_complete_bipartite(T1.degree, T2.degree), perm.direct_product(T1, T2))
    if not is_normal_basic(a):
        raise ValidationError("product pair is not normal-basic")
    return a


def cyclic_pair(m: int) -> BoundAction:
    """Z_m x Z_m on the complete bipartite Gamma(2, m), each factor regular on one fiber.

    For composite m this is neither primitive-basic nor normal-basic.
    """
    if m < 2:
        raise ValidationError("m must be >= 2")
    Z = perm.cyclic_group(m)
    return bind(_complete_bipartite(m, m), perm.direct_product(Z, Z))


def product_pair(a: BoundAction, b: BoundAction) -> BoundAction:
    """Direct sum of two pairs with the product group, each factor trivial on the other summand."""
    for x in (a, b):
        if not in_family_G(x):
            raise ValidationError("product_pair inputs must be in the family")
    p = direct_sum(a.geometry, b.geometry)
    return bind(p, perm.direct_product(a.group, b.group))


# -- the abelian family over GF(p^d) ----------------------------------------------

def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


class GF:
    """GF(p^d) with elements encoded as ints 0..q-1 (base-p coefficient digits)."""

    def __init__(self, p: int, d: int):
        if not _is_prime(p):
            raise ValidationError(f"p = {p} is not prime")
        if d < 1:
            raise ValidationError("d must be >= 1")
        self.p, self.d, self.q = p, d, p ** d
        self.add = [[self._vec_add(a, b) for b in range(self.q)] for a in range(self.q)]
        for tail in range(p ** d):
            modulus = self._digits(tail) + [1]
            table = [[self._poly_mul(a, b, modulus) for b in range(self.q)] for a in range(self.q)]
            if all(table[a][b] for a in range(1, self.q) for b in range(1, self.q)):
                self.modulus = modulus
                self.mul = table
                break
        self.primitive = next(w for w in range(1, self.q) if self._mult_order(w) == self.q - 1)

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.d)]

    def _from_digits(self, ds: Sequence[int]) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(ds))

    def _vec_add(self, a: int, b: int) -> int:
        return self._from_digits([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def _poly_mul(self, a: int, b: int, modulus: list[int]) -> int:
        p, d = self.p, self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(self._digits(a)):
            for j, y in enumerate(self._digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d + 1):
                    prod[k - d + i] = (prod[k - d + i] - c * modulus[i]) % p
        return self._from_digits(prod[:d])

    def _mult_order(self, w: int) -> int:
        x, n = w, 1
        while x != 1:
            x = self.mul[x][w]
            n += 1
        return n

    @property
    def additive_basis(self) -> list[int]:
        return [self.p ** i for i in range(self.d)]


def parse_lambda(spec: str | Sequence, F: GF) -> list:
    """``"full"`` or a comma list of field elements and ``inf``."""
    if isinstance(spec, str):
        if spec == "full":
            return list(range(F.q)) + [INF]
        items = [s.strip() for s in spec.split(",") if s.strip()]
    else:
        items = list(spec)
    out = []
    for s in items:
        if s in (INF, "∞"):
            v = INF
        else:
            try:
                v = int(s)
            except (TypeError, ValueError):
                raise ValidationError(f"bad element of Lambda: {s!r}") from None
            if not 0 <= v < F.q:
                raise ValidationError(f"{v} is not an element of GF({F.q})")
        if v not in out:
            out.append(v)
    if 0 not in out or INF not in out:
        raise ValidationError("Lambda must contain 0 and inf")
    return sorted(out, key=lambda v: (v == INF, v if v != INF else 0))


def affine_plane_group(F: GF) -> tuple[PermGroup, list[Perm], Perm]:
    """Translations of F^2 and the scalar by a primitive element, on the q^2 vectors.

    Vector (x, y) is point x*q + y.  Returns the group, a helper list of the
    translation generators, and the scalar.
    """
    q = F.q

    def translation(a: int, b: int) -> Perm:
        return tuple(F.add[v // q][a] * q + F.add[v % q][b] for v in range(q * q))

    w = F.primitive
    scalar = tuple(F.mul[w][v // q] * q + F.mul[w][v % q] for v in range(q * q))
    trans = [translation(e, 0) for e in F.additive_basis] + [translation(0, e) for e in F.additive_basis]
    return PermGroup(q * q, trans + [scalar]), trans, scalar


def _translation_subgroup(F: GF, lam) -> list[Perm]:
    q = F.q

    def translation(a: int, b: int) -> Perm:
        return tuple(F.add[v // q][a] * q + F.add[v % q][b] for v in range(q * q))

    if lam == INF:
        return [translation(0, e) for e in F.additive_basis]
    return [translation(e, F.mul[lam][e]) for e in F.additive_basis]


def _combine_actions(sizes: Sequence[int], images: Sequence[Sequence[Perm]]) -> list[Perm]:
    """Stack per-fiber generator images into permutations of the disjoint union."""
    gens = []
    for gi in range(len(images[0])):
        g: list[int] = []
        offset = 0
        for size, ims in zip(sizes, images):
            g.extend(offset + x for x in ims[gi])
            offset += size
        gens.append(tuple(g))
    return gens


def _complete_multipartite(labels: Sequence[str], sizes: Sequence[int]) -> Pregeometry:
    type_of = [i for i, m in enumerate(sizes) for _ in range(m)]
    n = len(type_of)
    inc = [(a, b) for a in range(n) for b in range(a + 1, n) if type_of[a] != type_of[b]]
    return Pregeometry.build(labels, sizes, inc)


def example_gamma_lambda(p: int, d: int = 1, lam: str | Sequence = "full") -> BoundAction:
    """The group (T x T).H, T = GF(p^d)^+, H the scalars, on the coset spaces of T_lambda.H.

    T_lambda = {(u, lambda*u)} and T_inf = {(0, u)}.  Each fiber is the set of
    right cosets of T_lambda.H; the pregeometry is complete multipartite.
    """
    F = GF(p, d)
    if F.q > 64:
        raise ValidationError("p^d limited to 64")
    Lam = parse_lambda(lam, F)
    G, _, scalar = affine_plane_group(F)
    q = F.q
    if G.order() != q * q * (q - 1):
        raise ValidationError("affine group has the wrong order")
    images = []
    for lam_ in Lam:
        K = PermGroup(q * q, _translation_subgroup(F, lam_) + [scalar])
        reps, ims = perm.coset_action(G, K)
        if len(reps) != q:
            raise ValidationError(f"fiber for {lam_} has {len(reps)} cosets, expected {q}")
        images.append(ims)
    labels = [str(x) for x in Lam]
    geom = _complete_multipartite(labels, [q] * len(Lam))
    return bind(geom, PermGroup(q * len(Lam), _combine_actions([q] * len(Lam), images)))


# -- A5-based instances -----------------------------------------------------------

@lru_cache(maxsize=None)
def _a5_squared() -> tuple[PermGroup, PermGroup]:
    """A5 x A5 on 10 points and its diagonal subgroup."""
    A = perm.alternating_group(5)
    G = perm.direct_product(A, A)
    D = PermGroup(10, [tuple(list(g) + [5 + x for x in g]) for g in A.generators])
    return G, D


def line_i_A5() -> BoundAction:
    """A5 x A5 on two 5-point factor actions and the 60 cosets of the diagonal."""
    G, D = _a5_squared()
    reps, ims = perm.coset_action(G, D)
    sizes = [5, 5, len(reps)]
    gens = [tuple(g) + tuple(10 + x for x in im) for g, im in zip(G.generators, ims)]
    return bind(_complete_multipartite(["1", "2", "3"], sizes), PermGroup(sum(sizes), gens))


def line_ii_A5() -> BoundAction:
    """A5^3 on three copies of A5; (t1,t2,t3) acts on copy i by x -> t_{i+1}^-1 x t_{i+2}."""
    A = perm.alternating_group(5)
    els = sorted(A.elements())
    index = {g: i for i, g in enumerate(els)}
    m = len(els)
    ident = perm.identity(5)

    def image(t: Sequence[Perm], i: int) -> list[int]:
        left, right = perm.inverse(t[(i + 1) % 3]), t[(i + 2) % 3]
        return [index[perm.mul(perm.mul(left, x), right)] for x in els]

    gens = []
    for f in range(3):
        for s in A.generators:
            t = [ident, ident, ident]
            t[f] = s
            g: list[int] = []
            for i in range(3):
                g.extend(i * m + y for y in image(t, i))
            gens.append(tuple(g))
    return bind(_complete_multipartite(["1", "2", "3"], [m] * 3), PermGroup(3 * m, gens))


def case_iib_A5() -> BoundAction:
    """A5 x A5 on two 5-point factor fibers and two diagonal-coset fibers.

    The coset fibers are joined by the double-coset relation D x y^-1 D = D g D
    for the first non-diagonal g (in element order) that makes their rank-2
    truncation connected; every other pair of types is completely incident.
    """
    G, D = _a5_squared()
    reps, ims = perm.coset_action(G, D)
    n = len(reps)
    sizes = [5, 5, n, n]
    gens = [tuple(g) + tuple(10 + x for x in im) + tuple(10 + n + x for x in im)
            for g, im in zip(G.generators, ims)]
    Del = D.elements()
    diffs = [[perm.mul(r, perm.inverse(s)) for s in reps] for r in reps]
    for g in G.elements():
        if g in D:
            continue
        dgd = {perm.mul(perm.mul(x, g), y) for x in Del for y in Del}
        inc = [(x, y) for x in range(5) for y in range(5, 10 + 2 * n)]
        inc += [(x, y) for x in range(5, 10) for y in range(10, 10 + 2 * n)]
        inc += [(10 + i, 10 + n + j) for i in range(n) for j in range(n) if diffs[i][j] in dgd]
        p = Pregeometry.build(["1", "2", "3", "4"], sizes, inc)
        if rank2_truncations_connected(p):
            return bind(p, PermGroup(sum(sizes), gens))
    raise ValidationError("no connecting double coset found")


# -- registry -------------------------------------------------------------------

def _int(params: dict, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise ValidationError(f"missing parameter --{key}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise ValidationError(f"parameter --{key} must be an integer") from None


def _group_param(params: dict, key: str) -> PermGroup:
    if key not in params:
        raise ValidationError(f"missing parameter --{key}")
    return named_group(str(params[key]))


REGISTRY: dict[str, Callable[[dict], BoundAction]] = {
    "fano": lambda ps: fano_pair(),
    "points_pairs_S4": lambda ps: points_pairs_S4(),
    "f20_case_iia": lambda ps: f20_case_iia(),
    "construction_5_2": lambda ps: construction_5_2(_group_param(ps, "t1"), _group_param(ps, "t2")),
    "gamma_lambda": lambda ps: example_gamma_lambda(_int(ps, "p"), _int(ps, "d", 1), ps.get("lambda", "full")),
    "line_i_A5": lambda ps: line_i_A5(),
    "line_ii_A5": lambda ps: line_ii_A5(),
    "case_iib_A5": lambda ps: case_iib_A5(),
    "cyclic_pair": lambda ps: cyclic_pair(_int(ps, "m")),
    "fano_plus_fano": lambda ps: product_pair(fano_pair(), fano_pair()),
}


def generate(spec: GeneratorSpec) -> BoundAction:
    if spec.name not in REGISTRY:
        raise ValidationError(f"unknown generator {spec.name!r}; known: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[spec.name](dict(spec.params))
