import hashlib
import json
from importlib import resources

import pytest

from pregeom import action, gen, perm
from pregeom.errors import ValidationError
from pregeom.geom import is_complete_multipartite

import oracles
from battery import all_builders


def test_bundled_psl32_rederived():
    doc = json.loads(resources.files("pregeom").joinpath("data", "psl32.json").read_text())
    body = json.dumps(doc["generators"], separators=(",", ":"))
    assert hashlib.sha256(body.encode()).hexdigest() == doc["sha256"]
    a = gen.fano_pair()
    assert len(oracles.closure(a.group.generators, 14)) == 168
    points = perm.induced_on(a.group, range(7))
    assert oracles.is_primitive_brute(points.generators, range(7))


@pytest.mark.parametrize("name", ["fano", "points_pairs_S4", "f20_case_iia", "cyclic_pair_4",
                                  "c52_Z3_S3", "gl_2_2", "gl_5_1_partial"])
def test_generators_in_family_and_deterministic(name):
    build = all_builders()[name]
    a, b = build(), build()
    assert action.in_family_G(a)
    assert a.geometry == b.geometry and a.group.generators == b.group.generators


def test_construction_5_2():
    a = gen.construction_5_2(gen.named_group("Z3"), gen.named_group("S3"))
    assert a.group.order() == 18 and a.type_classes.unfaithful == ("1", "2")
    assert gen.construction_5_2(gen.named_group("Z5"), gen.named_group("F20")).group.order() == 100
    with pytest.raises(ValidationError, match="quasiprimitive"):
        gen.construction_5_2(gen.named_group("Z4"), gen.named_group("Z2"))


@pytest.mark.parametrize("p,d,order", [(2, 1, 4), (3, 1, 18), (2, 2, 48)])
def test_gamma_lambda_orders(p, d, order):
    a = gen.example_gamma_lambda(p, d)
    q = p ** d
    assert a.group.order() == order == q * q * (q - 1)
    assert is_complete_multipartite(a.geometry) and a.geometry.rank == q + 1
    assert all(K.order() == q for K in a.kernels.values())


def test_gamma_lambda_matches_affine_formula():
    """Coset fibers agree with the parallel classes of lines in the affine plane.

    Under (x, y) -> (hx + u, hy + v) the line {y = lam*x + c} goes to the line
    with intercept h*c + v - lam*u, and {x = c} goes to {x = h*c + u}.
    """
    p, d = 3, 1
    q = p
    a = gen.example_gamma_lambda(p, d)
    G, _, _ = gen.affine_plane_group(gen.GF(p, d))
    lams = [0, 1, 2, "inf"]

    def line_perm(g, lam):
        # recover (h, u, v) from images of (0,0) and (1,0)
        u, v = divmod(g[0], q)
        x1, y1 = divmod(g[q], q)
        h = (x1 - u) % q
        if lam == "inf":
            return tuple((h * c + u) % q for c in range(q))
        return tuple((h * c + v - lam * u) % q for c in range(q))

    target = perm.PermGroup(4 * q, [tuple(i * q + x for i, lam in enumerate(lams) for x in line_perm(g, lam))
                                    for g in G.generators])
    assert target.order() == a.group.order()
    # same permutation group up to relabelling inside each fiber: compare orbit/kernel data
    for i in range(4):
        dom = list(range(i * q, (i + 1) * q))
        assert target.pointwise_stabilizer(dom).order() == q
    assert perm.is_isomorphic_small(target, a.group)


@pytest.mark.parametrize("bad", [dict(p=4), dict(p=3, lam="1,2,inf"), dict(p=3, lam="0,1"), dict(p=3, lam="0,7,inf")])
def test_gamma_lambda_errors(bad):
    with pytest.raises(ValidationError):
        gen.example_gamma_lambda(bad["p"], 1, bad.get("lam", "full"))


def test_gf4_is_a_field():
    F = gen.GF(2, 2)
    for a in range(1, 4):
        assert any(F.mul[a][b] == 1 for b in range(1, 4))
    assert F._mult_order(F.primitive) == 3


def test_named_groups():
    assert gen.named_group("S4").order() == 24
    assert gen.named_group("A5").order() == 60
    assert gen.named_group("D5").order() == 10
    assert gen.named_group("F20").order() == 20
    with pytest.raises(ValidationError):
        gen.named_group("Q8")


def test_line_i_structure():
    a = gen.line_i_A5()
    assert a.geometry.fiber_sizes() == (5, 5, 60)
    assert a.kernels["1"].order() == 60 and a.kernels["3"].is_trivial()
    f = a.fiber("3")
    for t in ("1", "2"):
        assert perm.is_regular(a.kernels[t], f)


def test_f20_instance():
    a = gen.f20_case_iia()
    assert a.kernels["3"].order() == 5
    assert a.type_classes.quasiprimitive == ("1", "2")


def test_registry_and_generator_spec():
    a = gen.generate(gen.GeneratorSpec("gamma_lambda", {"p": "2", "d": "1", "lambda": "full"}))
    assert a.geometry.rank == 3
    with pytest.raises(ValidationError):
        gen.generate(gen.GeneratorSpec("nope"))
    with pytest.raises(ValidationError):
        gen.generate(gen.GeneratorSpec("gamma_lambda", {}))
    with pytest.raises(ValidationError):
        gen.product_pair(gen.fano_pair(), action.bind(gen.cyclic_pair(3).geometry, perm.PermGroup(6)))
