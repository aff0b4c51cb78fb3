import pytest

from pregeom import action, gen, perm
from pregeom import quotient as Q
from pregeom.errors import CapacityError, MembershipError, ValidationError
from pregeom.geom import direct_sum, gamma_km, is_complete_multipartite
from pregeom.perm import PermGroup, parse_cycles


def k24():
    return gen.cyclic_pair(4)


def swap22():
    return action.bind(gamma_km(2, 2), PermGroup(4, [parse_cycles("(0 1)", 4), parse_cycles("(2 3)", 4)]))


def test_partition_counts():
    assert len(Q.invariant_type_refining_partitions(swap22())) == 4
    parts = Q.invariant_type_refining_partitions(k24())
    assert len(parts) == 9
    singletons = Q.TypeRefiningPartition(tuple((x,) for x in range(8)))
    assert singletons in parts
    kept = Q.invariant_type_refining_partitions(k24(), preserve_effective_rank=True)
    assert len(kept) == 4


def test_partition_caps():
    with pytest.raises(CapacityError):
        Q.invariant_type_refining_partitions(gen.line_i_A5())


def test_partition_validation():
    p = gamma_km(2, 2)
    with pytest.raises(ValidationError):
        Q.TypeRefiningPartition.from_parts([[0, 2], [1], [3]], p)
    with pytest.raises(ValidationError):
        Q.TypeRefiningPartition.from_parts([[0], [1]], p)


def test_quotient_by_identity_and_collapse():
    a = k24()
    res = Q.quotient_by(a, Q.TypeRefiningPartition(tuple((x,) for x in range(8))))
    assert res.quotient.geometry == a.geometry
    b = swap22()
    res = Q.quotient_by(b, Q.TypeRefiningPartition.from_parts([[0, 1], [2], [3]], b.geometry))
    assert res.quotient.geometry.fiber_sizes() == (1, 2)
    assert Q.is_primitive_degenerate(res.quotient.geometry)


def test_quotient_by_noninvariant():
    a = k24()
    with pytest.raises(ValidationError, match="invariant"):
        Q.quotient_by(a, Q.TypeRefiningPartition.from_parts([[0, 1], [2, 3], [4], [5], [6], [7]], a.geometry))


def test_quotient_by_blocks_gives_k24():
    a = k24()
    res = Q.quotient_by(a, Q.TypeRefiningPartition.from_parts([[0, 2], [1, 3], [4], [5], [6], [7]], a.geometry))
    assert res.quotient.geometry.fiber_sizes() == (2, 4)
    assert len(res.quotient.geometry.incidence) == 8
    assert action.in_family_G(res.quotient)


def test_normal_quotient_trivial_and_full():
    a = gen.fano_pair()
    res = Q.normal_quotient(a, PermGroup(14))
    assert res.quotient.geometry == a.geometry
    res = Q.normal_quotient(a, a.group)
    assert res.quotient.geometry.fiber_sizes() == (1, 1)
    assert Q.is_normal_degenerate(res.quotient.geometry)


def test_normal_quotient_errors():
    a = k24()
    with pytest.raises(MembershipError):
        Q.normal_quotient(a, PermGroup(8, [parse_cycles("(0 1)", 8)]))
    s = gen.points_pairs_S4()
    transposition = s.group.pointwise_stabilizer([2, 3]).generators
    with pytest.raises(ValidationError, match="normal"):
        Q.normal_quotient(s, PermGroup(10, transposition))


def test_normal_quotient_k_values():
    a = k24()
    res = Q.normal_quotient(a, PermGroup(8, [parse_cycles("(0 2)(1 3)", 8)]))
    assert res.k_table == {("1", "2"): 1, ("2", "1"): 2}
    assert res.part_degrees == {("1", "2"): 4, ("2", "1"): 2}
    assert set(res.k_pairs.values()) == {1, 2}


def test_k_uniformity_on_fano_subgroups():
    # the only normal subgroups of a simple group are 1 and G
    a = gen.fano_pair()
    assert len(Q.normal_subgroups_from_classes(a.group)) == 1


def test_degeneracy():
    p = direct_sum(gamma_km(1, 1), gamma_km(1, 5))
    assert Q.is_primitive_degenerate(p) and Q.is_normal_degenerate(p)
    p = direct_sum(gamma_km(1, 1), gamma_km(1, 2), gamma_km(1, 2))
    assert Q.is_primitive_degenerate(p) and not Q.is_normal_degenerate(p)
    assert not Q.is_primitive_degenerate(gamma_km(2, 2)) and not Q.is_normal_degenerate(gamma_km(2, 2))


def test_basicness_examples():
    f = gen.fano_pair()
    assert Q.is_primitive_basic(f) and Q.is_normal_basic(f)
    a = k24()
    assert not Q.is_primitive_basic(a) and not Q.is_normal_basic(a)
    N = Q.normal_basic_witness(a)
    assert N is not None and len(action.intransitive_fibers(a, N)) >= 2
    g = gen.example_gamma_lambda(2, 1, "0,1,inf")
    assert Q.is_normal_basic(g)
    degen = action.bind(direct_sum(gamma_km(1, 1), gamma_km(1, 3)),
                        PermGroup(4, [parse_cycles("(1 2 3)", 4)]))
    assert not Q.is_primitive_basic(degen)


@pytest.mark.parametrize("build", [gen.fano_pair, gen.points_pairs_S4, gen.f20_case_iia, k24,
                                   lambda: gen.example_gamma_lambda(3, 1),
                                   lambda: gen.construction_5_2(gen.named_group("Z3"), gen.named_group("S3"))])
def test_basicness_matches_direct_definitions(build):
    a = build()
    assert Q.is_primitive_basic(a) == Q.is_primitive_basic_by_quotients(a)
    assert Q.is_normal_basic(a) == Q.is_normal_basic_by_quotients(a)


def test_quotient_composition():
    """Quotient by N-orbits then by the image of M-orbits equals quotient by M-orbits."""
    a = gen.example_gamma_lambda(3, 1)
    normals = sorted(Q.normal_subgroups_from_classes(a.group), key=lambda H: H.order())
    for N in normals:
        for M in normals:
            if not N.is_subgroup_of(M):
                continue
            rN = Q.normal_quotient(a, N)
            M_image = PermGroup(rN.quotient.group.degree,
                                [tuple(rN.part_map[g[P[0]]] for P in rN.partition.parts) for g in M.generators])
            two_step = Q.normal_quotient(rN.quotient, M_image)
            direct = Q.normal_quotient(a, M)
            assert two_step.quotient.geometry == direct.quotient.geometry


def test_complete_multipartite_or_two_faithful():
    """Normal-basic, rank >= 2, some unfaithful type: complete multipartite or >= 2 faithful types."""
    for a in (gen.f20_case_iia(), gen.example_gamma_lambda(2, 2), gen.case_iib_A5(),
              gen.construction_5_2(gen.named_group("Z5"), gen.named_group("F20"))):
        tc = a.type_classes
        assert tc.unfaithful
        faithful = len(tc.quasiprimitive) + len(tc.non_quasiprimitive)
        assert is_complete_multipartite(a.geometry) or faithful >= 2


def test_quotient_summary_fields():
    a = k24()
    res = Q.normal_quotient(a, PermGroup(8, [parse_cycles("(0 2)(1 3)", 8)]))
    s = Q.quotient_summary(res)
    assert s["fiber_sizes"] == {"1": 2, "2": 4}
    assert s["k_table"] == {"1->2": 1, "2->1": 2}
    assert s["part_map"] == [0, 1, 0, 1, 2, 3, 4, 5]
