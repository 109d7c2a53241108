import random

import pytest
from hypothesis import given, settings

from oracles import all_forests, brute_tree_depth, brute_tree_width, is_cover_of
from strategies import structures

from gamecomonads import zoo
from gamecomonads.decomposition import (ForestCover, PebbledForestCover,
                                        TreeDecomposition, decomposition_from_json,
                                        decomposition_to_json,
                                        decomposition_to_pebble_cover,
                                        forest_cover_from_json, forest_cover_to_json,
                                        make_orderly, pebble_cover_to_decomposition,
                                        pebbled_cover_from_json, pebbled_cover_to_json,
                                        tree_depth, tree_width,
                                        verify_forest_cover,
                                        verify_pebbled_forest_cover,
                                        verify_tree_decomposition)
from gamecomonads.structures import BoundExceeded, gaifman_graph, validate_structure


def test_tree_depth_fixtures():
    assert tree_depth(zoo.lin(1))[0] == 1
    assert tree_depth(zoo.edge())[0] == 2
    assert tree_depth(zoo.clique(4))[0] == 4
    assert tree_depth(zoo.path(4))[0] == 3


def test_tree_depth_witness_verifies():
    for A in (zoo.edge(), zoo.clique(3), zoo.cycle(4), zoo.path(5)):
        depth, cover = tree_depth(A)
        ok, msg = verify_forest_cover(cover, gaifman_graph(A))
        assert ok, msg
        assert cover.height == depth


def test_tree_depth_disconnected_is_max_of_components():
    A = validate_structure({"R": 2}, ["a", "b", "c", "d"],
                           {"R": [["a", "b"], ["b", "a"]]})
    depth, cover = tree_depth(A)
    assert depth == 2
    ok, _ = verify_forest_cover(cover, gaifman_graph(A))
    assert ok


@settings(max_examples=20)
@given(structures(max_size=4))
def test_tree_depth_matches_bruteforce(A):
    assert tree_depth(A)[0] == brute_tree_depth(A)


def test_tree_width_fixtures():
    assert tree_width(zoo.lin(1))[0] == 0
    assert tree_width(zoo.path(4))[0] == 1
    assert tree_width(zoo.clique(3))[0] == 2
    assert tree_width(zoo.cycle(5))[0] == 2


def test_tree_width_witness_verifies():
    for A in (zoo.edge(), zoo.clique(4), zoo.cycle(5), zoo.path(5)):
        width, T = tree_width(A)
        ok, msg = verify_tree_decomposition(T, gaifman_graph(A))
        assert ok, msg
        assert T.width == width


@settings(max_examples=20)
@given(structures(max_size=4))
def test_tree_width_matches_bruteforce(A):
    assert tree_width(A)[0] == brute_tree_width(A)


def test_tree_width_random_seeded_structures_vs_bruteforce():
    rng = random.Random(7)
    for _ in range(15):
        n = rng.randint(1, 6)
        universe = [f"v{i}" for i in range(n)]
        tups = [[u, v] for u in universe for v in universe
                if u != v and rng.random() < 0.4]
        A = validate_structure({"R": 2}, universe, {"R": tups})
        assert tree_width(A)[0] == brute_tree_width(A)
        assert tree_depth(A)[0] == brute_tree_depth(A)


def test_solver_bounds():
    big = validate_structure({"R": 1}, [f"v{i}" for i in range(21)], {"R": []})
    with pytest.raises(BoundExceeded):
        tree_depth(big)
    with pytest.raises(BoundExceeded):
        tree_width(big)


def test_verify_forest_cover_rejects_incomparable_edge():
    A = zoo.edge()
    bad = ForestCover({"a": None, "b": None})
    ok, msg = verify_forest_cover(bad, gaifman_graph(A))
    assert not ok and "incomparable" in msg


def test_verify_forest_cover_rejects_cycle():
    A = zoo.edge()
    bad = ForestCover({"a": "b", "b": "a"})
    ok, msg = verify_forest_cover(bad, gaifman_graph(A))
    assert not ok


def test_tree_depth_equals_min_over_all_covers_exhaustively():
    for A in (zoo.path(4), zoo.cycle(4), zoo.clique(3)):
        G = gaifman_graph(A)
        heights = []
        for parent in all_forests(G.vertices):
            if is_cover_of(parent, sorted(G.edges)):
                cover = ForestCover(parent)
                ok, _ = verify_forest_cover(cover, G)
                assert ok
                heights.append(cover.height)
        assert tree_depth(A)[0] == min(heights)


def test_orderly_refinement_preserves_validity_and_width():
    A = zoo.clique(3)
    G = gaifman_graph(A)
    T = TreeDecomposition(("n",), {"n": None}, {"n": frozenset(A.universe)})
    ok, _ = verify_tree_decomposition(T, G)
    assert ok
    O = make_orderly(T)
    ok, msg = verify_tree_decomposition(O, G)
    assert ok, msg
    assert O.width == T.width
    # every node introduces at most one fresh element
    def introduced(n):
        above = set()
        cur = O.parent[n]
        while cur is not None:
            above |= O.bags[cur]
            cur = O.parent[cur]
        return O.bags[n] - above
    assert all(len(introduced(n)) <= 1 for n in O.nodes)


def test_pebble_cover_from_single_bag():
    T = TreeDecomposition(("n",), {"n": None}, {"n": frozenset(["a"])})
    C = decomposition_to_pebble_cover(T, 1)
    assert C.cover.parent == {"a": None}
    assert C.pebbles == {"a": 1}


def test_pebble_cover_from_edge_path_decomposition():
    T = TreeDecomposition(("n",), {"n": None}, {"n": frozenset(["a", "b"])})
    C = decomposition_to_pebble_cover(T, 2)
    chain = C.cover.chain("b") if C.cover.parent["a"] is None else C.cover.chain("a")
    assert len(chain) == 2
    assert sorted(C.pebbles.values()) == [1, 2]
    ok, msg = verify_pebbled_forest_cover(C, gaifman_graph(zoo.edge2()), 2)
    assert ok, msg


def test_pebble_cover_from_triangle_single_bag():
    T = TreeDecomposition(("n",), {"n": None}, {"n": frozenset(["v0", "v1", "v2"])})
    C = decomposition_to_pebble_cover(T, 3)
    assert sorted(C.pebbles.values()) == [1, 2, 3]
    assert max(len(C.cover.chain(v)) for v in C.cover.parent) == 3
    ok, msg = verify_pebbled_forest_cover(C, gaifman_graph(zoo.clique(3)), 3)
    assert ok, msg


def test_pebble_cover_rejects_wide_decomposition():
    T = TreeDecomposition(("n",), {"n": None}, {"n": frozenset(["a", "b"])})
    with pytest.raises(ValueError, match="not below"):
        decomposition_to_pebble_cover(T, 1)


def test_decomposition_from_one_node_cover():
    C = PebbledForestCover(ForestCover({"a": None}), {"a": 1}, 1)
    T = pebble_cover_to_decomposition(C)
    assert sorted(len(T.bags[n]) for n in T.nodes) == [0, 1]
    assert T.width == 0


def test_decomposition_from_edge_cover():
    C = PebbledForestCover(ForestCover({"a": None, "b": "a"}), {"a": 1, "b": 2}, 2)
    T = pebble_cover_to_decomposition(C)
    assert T.bags["b"] == frozenset({"a", "b"})
    assert T.width == 1


def test_decomposition_active_predecessors_drop_reused_pebbles():
    # chain a < b < c with pebbles 1,2,1 and no edge between a and c
    C = PebbledForestCover(ForestCover({"a": None, "b": "a", "c": "b"}),
                           {"a": 1, "b": 2, "c": 1}, 2)
    T = pebble_cover_to_decomposition(C)
    assert T.bags["c"] == frozenset({"b", "c"})
    assert T.width == 1
    A = validate_structure({"R": 2}, ["a", "b", "c"],
                           {"R": [["a", "b"], ["b", "a"], ["b", "c"], ["c", "b"]]})
    ok, msg = verify_tree_decomposition(T, gaifman_graph(A))
    assert ok, msg


def test_round_trip_through_both_conversions():
    for A in (zoo.clique(3), zoo.cycle(5), zoo.path(4)):
        width, T = tree_width(A)
        k = width + 1
        G = gaifman_graph(A)
        C = decomposition_to_pebble_cover(T, k)
        ok, msg = verify_pebbled_forest_cover(C, G, k)
        assert ok, msg
        T2 = pebble_cover_to_decomposition(C)
        ok, msg = verify_tree_decomposition(T2, G)
        assert ok, msg
        assert T2.width < k


def test_verify_tree_decomposition_rejects_broken_connectivity():
    A = zoo.path(3)
    T = TreeDecomposition(
        ("x", "y", "z"),
        {"x": None, "y": "x", "z": "y"},
        {"x": frozenset({"v0", "v1"}), "y": frozenset({"v1", "v2"}),
         "z": frozenset({"v0"})})
    ok, msg = verify_tree_decomposition(T, gaifman_graph(A))
    assert not ok and "not connected" in msg


def test_disconnected_structure_through_full_pipeline():
    # two components: an edge and a triangle; decomposition joins under an
    # empty root, the pebble cover stays a forest
    A = validate_structure(
        {"R": 2}, ["a", "b", "x", "y", "z"],
        {"R": [["a", "b"], ["b", "a"],
               ["x", "y"], ["y", "x"], ["y", "z"], ["z", "y"], ["x", "z"], ["z", "x"]]})
    G = gaifman_graph(A)
    width, T = tree_width(A)
    assert width == 2
    ok, msg = verify_tree_decomposition(T, G)
    assert ok, msg
    assert any(not T.bags[n] for n in T.nodes)  # the virtual empty root
    C = decomposition_to_pebble_cover(T, width + 1)
    ok, msg = verify_pebbled_forest_cover(C, G, width + 1)
    assert ok, msg
    assert sum(1 for v in C.cover.parent.values() if v is None) == 2


def test_unary_only_structure_parameters():
    A = validate_structure({"P": 1}, ["a", "b", "c"], {"P": [["a"], ["c"]]})
    assert tree_width(A)[0] == 0
    assert tree_depth(A)[0] == 1
    ok, _ = verify_tree_decomposition(tree_width(A)[1], gaifman_graph(A))
    assert ok


def test_hand_built_path_decomposition_converts():
    # C4 as a path of three bags, width 2
    A = zoo.cycle(4)
    T = TreeDecomposition(
        ("n0", "n1"),
        {"n0": None, "n1": "n0"},
        {"n0": frozenset({"v0", "v1", "v3"}), "n1": frozenset({"v1", "v2", "v3"})})
    ok, msg = verify_tree_decomposition(T, gaifman_graph(A))
    assert ok, msg
    C = decomposition_to_pebble_cover(T, 3)
    ok, msg = verify_pebbled_forest_cover(C, gaifman_graph(A), 3)
    assert ok, msg
    back = pebble_cover_to_decomposition(C)
    ok, msg = verify_tree_decomposition(back, gaifman_graph(A))
    assert ok, msg
    assert back.width < 3


def test_element_named_like_virtual_root_is_handled():
    A = validate_structure({"R": 2}, ["#root", "b", "c", "d"],
                           {"R": [["#root", "b"], ["c", "d"]]})
    G = gaifman_graph(A)
    width, T = tree_width(A)
    ok, msg = verify_tree_decomposition(T, G)
    assert ok, msg
    C = decomposition_to_pebble_cover(T, width + 1)
    back = pebble_cover_to_decomposition(C)
    ok, msg = verify_tree_decomposition(back, G)
    assert ok, msg


def test_json_round_trips():
    width, T = tree_width(zoo.cycle(4))
    T2 = decomposition_from_json(decomposition_to_json(T))
    assert T2.bags == T.bags and T2.parent == T.parent
    depth, F = tree_depth(zoo.path(3))
    F2 = forest_cover_from_json(forest_cover_to_json(F))
    assert F2.parent == F.parent
    C = decomposition_to_pebble_cover(T, width + 1)
    C2 = pebbled_cover_from_json(pebbled_cover_to_json(C))
    assert C2.pebbles == C.pebbles and C2.cover.parent == C.cover.parent
