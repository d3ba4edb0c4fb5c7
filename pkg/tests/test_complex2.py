import pytest
from hypothesis import given, settings, strategies as st

from stokes_skeleton.complex2 import (CellMap, CellularAction, Edge, Face, StratComplex2,
                                      StratumPoset, Vertex, barycentric_subdivide, build_cone,
                                      build_cycle, build_from_spec, build_torus_chambers,
                                      build_triangle, cycle_rotation, quotient_by_action,
                                      sector_count, skeleton_groupoid, subdivide_times,
                                      torus_translation, trivial_action)
from stokes_skeleton.errors import (CompositionError, FixedCellError, UnsupportedRankError,
                                    ValidationError)
from stokes_skeleton.groups import cyclic_group

BUILDERS = {
    "cycle3": lambda: build_cycle(3),
    "cycle4": lambda: build_cycle(4),
    "triangle": build_triangle,
    "cone3": lambda: build_cone(3),
    "torus1x1": lambda: build_torus_chambers([1, 1]),
    "torus2x2": lambda: build_torus_chambers([2, 2]),
    "torus1x3": lambda: build_torus_chambers([1, 3]),
}


def test_cycle_builder_shape():
    K = build_cycle(5)
    assert K.cell_counts() == (5, 5, 0)
    assert K.edge["e4"].dst == "v0"
    assert K.euler_characteristic() == 0


@pytest.mark.parametrize("n,k,ell", [(1, 2, 2), (1, 3, 4), (2, 2, 4), (3, 4, 18)])
def test_sector_count(n, k, ell):
    assert sector_count(n, k) == ell


def test_torus_has_euler_characteristic_zero_and_four_cycle_micro_example():
    K = build_torus_chambers([2, 2])
    assert K.cell_counts() == (4, 8, 4)
    assert K.euler_characteristic() == 0
    assert build_torus_chambers([4]).cell_counts() == (4, 4, 0)


def test_torus_rank_three_is_unsupported():
    with pytest.raises(UnsupportedRankError):
        build_torus_chambers([1, 1, 1])


def test_triangle_and_cone_are_discs():
    assert build_triangle().euler_characteristic() == 1
    assert build_cone(5).euler_characteristic() == 1


@pytest.mark.parametrize("name,counts", [("triangle", (7, 12, 6)), ("torus1x1", (4, 12, 8)),
                                         ("cycle3", (6, 6, 0))])
def test_subdivision_cell_counts(name, counts):
    K, _ = barycentric_subdivide(BUILDERS[name]())
    assert K.cell_counts() == counts


def test_double_subdivision_of_triangle():
    K, cm = subdivide_times(build_triangle(), 2)
    assert K.cell_counts() == (25, 60, 36)
    assert len(cm.steps) == 2
    assert cm.target == build_triangle()


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_subdivision_preserves_euler_characteristic_and_components(name):
    K = BUILDERS[name]()
    L, cm = barycentric_subdivide(K)
    assert L.euler_characteristic() == K.euler_characteristic()
    assert len(L.components()) == len(K.components())
    for dim in range(3):
        for c in L.cells(dim):
            cdim, cid = cm.carrier((dim, c.id))
            assert cdim >= dim
            assert K.stratum_of((cdim, cid)) == c.stratum


def test_cell_maps_compose_and_identity_is_neutral():
    K = build_triangle()
    L, f = barycentric_subdivide(K)
    M, g = barycentric_subdivide(L)
    h = g.then(f)
    assert h.source is M and h.target is K
    assert CellMap.identity(K).carrier((2, "t")) == (2, "t")
    with pytest.raises(CompositionError):
        f.then(g)


def test_invalid_complexes_are_rejected():
    V = [Vertex("a"), Vertex("b")]
    with pytest.raises(ValidationError, match="endpoint"):
        StratComplex2(V, [Edge("e", "a", "c")])
    with pytest.raises(ValidationError, match="closed"):
        StratComplex2(V, [Edge("e", "a", "b")], [Face("f", ("e",))])
    with pytest.raises(ValidationError, match="duplicate"):
        StratComplex2([Vertex("a"), Vertex("a")])


def test_strata_must_increase_towards_faces():
    poset = StratumPoset(["wall", "open"], [("wall", "open")])
    StratComplex2([Vertex("a", "wall")], [Edge("e", "a", "a", "open")], [], poset)
    with pytest.raises(ValidationError, match="above"):
        StratComplex2([Vertex("a", "open")], [Edge("e", "a", "a", "wall")], [], poset)
    with pytest.raises(ValidationError):
        StratumPoset(["x", "y"], [("x", "y"), ("y", "x")])


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_json_round_trip(name):
    K = BUILDERS[name]()
    assert StratComplex2.from_json(K.to_json()) == K


def test_builder_shorthand():
    K = build_from_spec({"type": "cycle", "length": 4, "subdivide": 1})
    assert K.cell_counts() == (8, 8, 0)
    assert StratComplex2.from_json({"builder": {"type": "cone", "n": 3}}) == build_cone(3)
    with pytest.raises(ValidationError):
        build_from_spec({"type": "sphere"})


def test_skeleton_groupoid_has_one_relation_per_face():
    K = build_torus_chambers([1, 1])
    P = skeleton_groupoid(K)
    assert len(P.objects) == 1 and len(P.generators) == 2 and len(P.relations) == 1


# -- actions --------------------------------------------------------------------

def test_cycle_rotation_is_free_and_quotients():
    K = build_cycle(6)
    A = cycle_rotation(K, 3)
    assert A.is_free()
    Q, proj = quotient_by_action(K, A)
    assert Q.cell_counts() == (2, 2, 0)
    assert proj[(0, "v4")] == "v0"


def test_torus_translation_quotient():
    K = build_torus_chambers([2, 2])
    Q, _ = quotient_by_action(K, torus_translation(K, [2, 2]))
    assert Q.cell_counts() == (1, 2, 1)
    assert Q.euler_characteristic() == 0


def test_non_free_action_is_rejected():
    K = build_cycle(4)
    perms = [({"v0": "v0", "v1": "v1", "v2": "v2", "v3": "v3"},
              {"e0": "e0", "e1": "e1", "e2": "e2", "e3": "e3"}, {})] * 2
    with pytest.raises(ValidationError, match="permute"):
        CellularAction(cyclic_group(2), K, [perms[0], ({"v0": "v1"}, {}, {})])
    A = CellularAction(cyclic_group(2), K, perms)
    assert not A.is_free()
    with pytest.raises(FixedCellError):
        quotient_by_action(K, A)
    assert trivial_action(K).is_free()


def test_orientation_reversing_map_is_rejected():
    K = build_cycle(4)
    flip_v = {"v0": "v0", "v1": "v3", "v2": "v2", "v3": "v1"}
    flip_e = {"e0": "e3", "e1": "e2", "e2": "e1", "e3": "e0"}
    with pytest.raises(ValidationError, match="orientation"):
        CellularAction(cyclic_group(2), K, [({v: v for v in flip_v}, {e: e for e in flip_e}, {}),
                                            (flip_v, flip_e, {})])


def test_action_json_round_trip():
    K = build_cycle(4)
    A = cycle_rotation(K, 2)
    B = CellularAction.from_json(A.to_json(), K)
    assert B.perms == A.perms
    assert CellularAction.from_json({"type": "cycle_rotation", "order": 4}, K).group.order == 4


@settings(max_examples=20)
@given(st.integers(1, 8).flatmap(lambda d: st.tuples(st.just(d), st.integers(1, 3))))
def test_rotation_quotient_has_length_ell_over_order(data):
    order, mult = data
    K = build_cycle(order * mult)
    Q, _ = quotient_by_action(K, cycle_rotation(K, order))
    assert Q.cell_counts() == (mult, mult, 0)
