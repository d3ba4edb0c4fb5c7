import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import conjugacy_class_count, groupoid_functors, groupoid_iso_classes
from stokes_skeleton.errors import (CapExceededError, CompositionError, InvalidAssignmentError,
                                    ValidationError)
from stokes_skeleton.groupoid import (FiniteGroupoid, Functor, PresentedGroupoid, Word,
                                      brute_force_functor_count, check_functor,
                                      coequalizer_presentation, count_iso_classes, enumerate_functors,
                                      evaluate, free_groupoid, gauge_fixed_functors, make_word,
                                      one_loop, reduce, transport)
from stokes_skeleton.groups import abelian_group, cyclic_group, symmetric_group

Z2, Z3, Z4, S3 = cyclic_group(2), cyclic_group(3), cyclic_group(4), symmetric_group(3)
TARGETS = {
    "BZ2": FiniteGroupoid.from_group(Z2),
    "BZ3": FiniteGroupoid.from_group(Z3),
    "BS3": FiniteGroupoid.from_group(S3),
    "pair": FiniteGroupoid.pair_groupoid(["x", "y"], Z2),
    "union": FiniteGroupoid.disjoint_union(FiniteGroupoid.from_group(Z2), FiniteGroupoid.from_group(Z3)),
}


# -- words ---------------------------------------------------------------------

def test_word_endpoints_and_inverse():
    ends = {"a": ("x", "y"), "b": ("y", "z")}
    w = make_word(ends, ["a", "b"])
    assert (w.source, w.target) == ("x", "z")
    assert w.inverse().signed() == ["-b", "-a"]
    assert (w.inverse().source, w.inverse().target) == ("z", "x")


def test_non_composable_word_is_rejected():
    ends = {"a": ("x", "y"), "b": ("y", "z")}
    with pytest.raises(CompositionError):
        make_word(ends, ["b", "a"])
    with pytest.raises(CompositionError):
        make_word(ends, [])


def test_reduce_cancels_and_keeps_endpoints():
    ends = {"a": ("x", "y"), "b": ("y", "y")}
    w = make_word(ends, ["a", "b", "-b", "-a", "a"])
    r = reduce(w)
    assert r.signed() == ["a"]
    assert (r.source, r.target) == (w.source, w.target)
    assert reduce(w.then(w.inverse())).is_identity()


GRAPH = {"a": ("x", "y"), "b": ("y", "x"), "c": ("y", "y"), "d": ("x", "x")}


@st.composite
def walks(draw, max_len=10):
    start = draw(st.sampled_from(["x", "y"]))
    letters, here = [], start
    for _ in range(draw(st.integers(0, max_len))):
        options = [g for g, (s, _) in GRAPH.items() if s == here] + \
                  ["-" + g for g, (_, t) in GRAPH.items() if t == here]
        x = draw(st.sampled_from(sorted(options)))
        letters.append(x)
        s, t = GRAPH[x.lstrip("-")]
        here = s if x.startswith("-") else t
    return make_word(GRAPH, letters, start)


@given(walks())
def test_reduce_is_a_retraction(w):
    r = reduce(w)
    assert reduce(r) == r
    assert (r.source, r.target) == (w.source, w.target)
    assert reduce(w.then(w.inverse())).is_identity()
    assert all(r.letters[i] != (r.letters[i + 1][0], -r.letters[i + 1][1]) for i in range(len(r) - 1))


# -- presentations ---------------------------------------------------------------

def test_relation_sides_must_be_parallel():
    with pytest.raises(ValidationError, match="parallel"):
        PresentedGroupoid(["x", "y"], [("a", "x", "y")], [(["a"], [])])


def test_components_and_spanning_forest():
    P = PresentedGroupoid(["x", "y", "z", "w"], [("a", "x", "y"), ("b", "y", "x"), ("c", "z", "z")])
    assert P.components() == [["x", "y"], ["z"], ["w"]]
    assert len(P.spanning_forest()) == 1


def test_presentation_json_round_trip():
    P = PresentedGroupoid(["x", "y"], [("a", "x", "y"), ("b", "y", "y")], [(["b", "b"], [])])
    doc = P.to_json()
    assert doc["relations"] == [[["b", "b"], {"identity": "y"}]]
    assert PresentedGroupoid.from_json(doc).canonical() == P.canonical()


def test_coequalizer_presentation_matches_direct_relations():
    edges = [("a", "x", "x"), ("b", "x", "x")]
    P = coequalizer_presentation(["x"], edges, [(["a", "b"], ["b", "a"])])
    Q = PresentedGroupoid(["x"], edges, [(["a", "b"], ["b", "a"])])
    assert P.canonical() == Q.canonical()


# -- finite groupoids -----------------------------------------------------------

def test_finite_groupoid_audit_rejects_bad_tables():
    with pytest.raises(ValidationError):
        FiniteGroupoid(["x"], [("x", "x"), ("x", "x")], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1})


def test_pair_groupoid_and_union_shapes():
    H = FiniteGroupoid.pair_groupoid(["x", "y"], Z2)
    assert H.n_arrows == 8
    assert len(H.components()) == 1
    U = TARGETS["union"]
    assert len(U.components()) == 2
    again = FiniteGroupoid.from_json(H.to_json())
    assert again.comp == H.comp


# -- functors -----------------------------------------------------------------

def test_free_loop_to_z2_has_two_functors():
    assert len(enumerate_functors(one_loop(), TARGETS["BZ2"])) == 2


def test_loop_of_order_two_to_z4():
    P = one_loop(relations=[(["g", "g"], [])])
    funs = enumerate_functors(P, FiniteGroupoid.from_group(Z4))
    assert [F.arrows for F in funs] == [(0,), (2,)]


def test_no_generators_gives_object_maps():
    P = PresentedGroupoid(["p", "q"], [])
    assert len(enumerate_functors(P, TARGETS["pair"])) == 4
    assert count_iso_classes(P, TARGETS["pair"]) == 1
    assert count_iso_classes(P, TARGETS["union"]) == 4


@pytest.mark.parametrize("m", [2, 3, 5])
def test_free_loop_classes_into_cyclic(m):
    assert count_iso_classes(one_loop(), FiniteGroupoid.from_group(cyclic_group(m))) == m


@pytest.mark.parametrize("G", [Z2, Z3, S3, abelian_group([2, 2])], ids=lambda G: G.name)
def test_free_loop_classes_equal_conjugacy_classes(G):
    assert count_iso_classes(one_loop(), FiniteGroupoid.from_group(G)) == conjugacy_class_count(G)


def test_check_functor_and_endpoint_errors():
    P = one_loop(relations=[(["g", "g"], [])])
    H = FiniteGroupoid.from_group(Z4)
    assert check_functor(P, H, {"g": 2})
    assert not check_functor(P, H, {"g": 1})
    Q = PresentedGroupoid(["x", "y"], [("a", "x", "y")])
    pair = TARGETS["pair"]
    bad = next(a for a in range(pair.n_arrows) if pair.src[a] != pair.dst[a])
    with pytest.raises(InvalidAssignmentError):
        check_functor(Q, pair, {"a": bad}, objects={"x": 1, "y": 1})


def test_cap_is_enforced():
    P = free_groupoid(["*"], [("a", "*", "*"), ("b", "*", "*")])
    with pytest.raises(CapExceededError):
        enumerate_functors(P, FiniteGroupoid.from_group(S3), cap=5)


def test_enumeration_order_is_lexicographic():
    P = free_groupoid(["*"], [("a", "*", "*"), ("b", "*", "*")])
    funs = enumerate_functors(P, FiniteGroupoid.from_group(Z3))
    assert [F.arrows for F in funs] == sorted(F.arrows for F in funs)
    assert len(funs) == 9


def test_transport_is_conjugation():
    H = FiniteGroupoid.from_group(S3)
    F = enumerate_functors(one_loop(), H)[3]
    G = transport(one_loop(), H, F, {0: 1})
    assert G.arrows == (S3.conj(1, F.arrows[0]),)


def test_gauge_fixed_functors_cover_every_class():
    P = PresentedGroupoid(["x", "y"], [("a", "x", "y"), ("b", "x", "y")])
    H = TARGETS["pair"]
    fixed, comps = gauge_fixed_functors(P, H)
    assert comps == [[0, 1]]
    assert all(F.objects == (0, 0) for F in fixed)
    assert len(fixed) == 2


# -- random presentations against brute force ------------------------------------

@st.composite
def presentations(draw):
    objs = ["x", "y", "z"][:draw(st.integers(1, 3))]
    n_gen = draw(st.integers(0, 3))
    gens = [(f"g{i}", draw(st.sampled_from(objs)), draw(st.sampled_from(objs))) for i in range(n_gen)]
    ends = {g: (s, t) for g, s, t in gens}
    rels = []
    for _ in range(draw(st.integers(0, 2))):
        if not gens:
            break
        start = draw(st.sampled_from(objs))
        letters, here = [], start
        for _ in range(draw(st.integers(1, 4))):
            options = sorted([g for g, (s, _) in ends.items() if s == here] +
                             ["-" + g for g, (_, t) in ends.items() if t == here])
            if not options:
                break
            x = draw(st.sampled_from(options))
            letters.append(x)
            s, t = ends[x.lstrip("-")]
            here = s if x.startswith("-") else t
        if letters and here == start:
            rels.append((letters, []))
    return PresentedGroupoid(objs, gens, rels)


@settings(max_examples=60)
@given(presentations(), st.sampled_from(sorted(TARGETS)))
def test_enumeration_matches_brute_force(P, tname):
    H = TARGETS[tname]
    assume(len(H.objects) ** len(P.objects) * max(1, H.n_arrows) ** len(P.generators) <= 20000)
    funs = {F.key for F in enumerate_functors(P, H)}
    assert funs == set(groupoid_functors(P, H))
    assert brute_force_functor_count(P, H) == len(funs)


@settings(max_examples=60)
@given(presentations(), st.sampled_from(sorted(TARGETS)))
def test_iso_class_methods_agree_with_brute_force(P, tname):
    H = TARGETS[tname]
    assume(len(H.objects) ** len(P.objects) * max(1, H.n_arrows) ** len(P.generators) <= 5000)
    expected = groupoid_iso_classes(P, H)
    assert count_iso_classes(P, H, method="tree") == expected
    assert count_iso_classes(P, H, method="orbit") == expected


@settings(max_examples=30)
@given(presentations(), st.randoms(use_true_random=False))
def test_functor_set_ignores_relation_order(P, rnd):
    rels = list(P.relations)
    rnd.shuffle(rels)
    Q = PresentedGroupoid(P.objects, P.generators, rels)
    H = TARGETS["BS3"]
    assume(6 ** len(P.generators) <= 300)
    assert {F.key for F in enumerate_functors(P, H)} == {F.key for F in enumerate_functors(Q, H)}


@settings(max_examples=30)
@given(presentations())
def test_relations_hold_for_every_enumerated_functor(P):
    H = TARGETS["BZ3"]
    for F in enumerate_functors(P, H):
        for a, b in P.relations:
            assert evaluate(P, H, F, a) == evaluate(P, H, F, b)
