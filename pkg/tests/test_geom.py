import pytest

from pregeom import geom
from pregeom.errors import CapacityError, ValidationError
from pregeom.gen import fano_pair
from pregeom.geom import Pregeometry, direct_sum, gamma_km


def fano():
    return fano_pair().geometry


def test_validate():
    gamma_km(2, 2)
    with pytest.raises(ValidationError, match="share type"):
        Pregeometry.build(["a", "b"], [2, 2], [(0, 1)])
    with pytest.raises(ValidationError):
        Pregeometry.from_labelled(["a"], [(0, "a"), (1, "z")], [])
    with pytest.raises(ValidationError):
        Pregeometry.build(["a", "b"], [2, 0], [])
    with pytest.raises(ValidationError):
        Pregeometry.build(["a", "b"], [1, 1], [(0, 5)])
    with pytest.raises(ValidationError):
        Pregeometry.build(["a", "a"], [1, 1], [])


def test_from_labelled_orders_by_type():
    p, mapping = Pregeometry.from_labelled(["x", "y"], [(10, "y"), (11, "x"), (12, "y")], [(11, 10)])
    assert mapping == {11: 0, 10: 1, 12: 2}
    assert p.incidence == frozenset({(0, 1)})


def test_truncation():
    assert geom.truncation(gamma_km(3, 2), ["1", "2"]) == gamma_km(2, 2)
    assert geom.truncation(fano(), ["points", "lines"]) == fano()
    pts = geom.truncation(fano(), ["points"])
    assert pts.size == 7 and not pts.incidence
    with pytest.raises(ValidationError):
        geom.truncation(fano(), [])


def test_connectivity():
    assert geom.rank2_truncations_connected(gamma_km(3, 1))
    assert geom.rank2_truncations_connected(fano())
    matching = Pregeometry.build(["a", "b"], [2, 2], [(0, 2), (1, 3)])
    assert not geom.rank2_truncations_connected(matching)
    with pytest.raises(ValidationError):
        geom.rank2_truncations_connected(gamma_km(1, 3))


def test_complete_multipartite():
    assert geom.is_complete_multipartite(gamma_km(3, 2))
    assert not geom.is_complete_multipartite(fano())
    assert len(fano().incidence) == 21
    assert geom.is_complete_multipartite(gamma_km(1, 4))


def test_gamma_km():
    assert gamma_km(1, 5).size == 5 and not gamma_km(1, 5).incidence
    assert len(gamma_km(2, 2).incidence) == 4
    assert len(gamma_km(3, 2).incidence) == 12
    with pytest.raises(ValidationError):
        gamma_km(0, 2)


def test_direct_sum():
    k23 = direct_sum(gamma_km(1, 2), gamma_km(1, 3))
    assert k23.fiber_sizes() == (2, 3) and len(k23.incidence) == 6
    assert k23.types == ("1.1", "1.2")
    g3 = direct_sum(gamma_km(1, 2), gamma_km(1, 2), gamma_km(1, 2))
    assert g3.incidence == gamma_km(3, 2).incidence
    f4 = direct_sum(fano(), gamma_km(1, 4, ["new"]))
    assert f4.rank == 3 and len(f4.incidence) == 21 + 14 * 4


def test_finest_decomposition():
    parts = geom.finest_decomposition(gamma_km(3, 2)).parts
    assert parts == (("1",), ("2",), ("3",))
    assert geom.finest_decomposition(fano()).parts == (("points", "lines"),)
    ff = direct_sum(fano(), fano())
    assert geom.finest_decomposition(ff).parts == (("points.1", "lines.1"), ("points.2", "lines.2"))
    assert geom.is_direct_sum_split(ff, [["points.1", "lines.1"], ["points.2", "lines.2"]])
    assert not geom.is_direct_sum_split(ff, [["points.1"], ["lines.1", "points.2", "lines.2"]])


def test_is_geometry():
    assert geom.is_geometry(gamma_km(3, 2))
    assert geom.is_geometry(fano())
    isolated = Pregeometry.build(["a", "b"], [2, 1], [(0, 2)])
    assert not geom.is_geometry(isolated)
    # rank 3: a flag {x, y} with no element of the third type incident to both
    p = Pregeometry.build(["a", "b", "c"], [1, 1, 2], [(0, 1), (0, 2), (1, 3)])
    assert not geom.is_geometry(p)


def test_effective_rank():
    assert geom.effective_rank(gamma_km(3, 2)) == 3
    assert geom.effective_rank(direct_sum(gamma_km(1, 5), gamma_km(1, 1))) == 1
    assert geom.effective_rank(gamma_km(3, 1)) == 0


def test_automorphisms():
    assert geom.automorphisms_bruteforce(gamma_km(1, 3)).order() == 6
    assert geom.automorphisms_bruteforce(gamma_km(2, 2)).order() == 4
    hexagon = Pregeometry.build(["a", "b"], [3, 3], [(i, 3 + i) for i in range(3)]
                                + [(i, 3 + (i + 1) % 3) for i in range(3)])
    assert geom.automorphisms_bruteforce(hexagon).order() == 6
    assert geom.automorphisms_bruteforce(fano()).order() == 168
    with pytest.raises(CapacityError):
        geom.automorphisms_bruteforce(gamma_km(2, 30))


def test_type_partition_check():
    geom.TypePartition((("a",), ("b",))).check(["a", "b"])
    with pytest.raises(ValidationError):
        geom.TypePartition((("a",), ("a", "b"))).check(["a", "b"])
