import json
from fractions import Fraction

import pytest

from noncollide.lgv import (
    EnumerationCapError,
    PathGraph,
    PathTuple,
    brute_force_tuples,
    check_compatibility,
    enumerate_paths,
    enumerate_tuples,
    green_function,
    lgv_determinant,
    tail_swap,
    walk_graph,
)

VW_SOURCES = [(0, 0), (2, 0)]
VW_SINKS = [(0, 2), (2, 2)]


def test_green_function_basics():
    g = PathGraph([("a", "b", 1)])
    assert green_function(g, "a", "b") == 1
    assert green_function(g, "a", "a") == 1  # empty path
    assert green_function(g, "b", "a") == 0  # unreachable
    with pytest.raises(KeyError):
        green_function(g, "a", "zzz")


def test_green_function_walk_graph_binomials():
    from math import comb

    g = walk_graph(4, -4, 4)
    for y in (-4, -2, 0, 2, 4):
        assert green_function(g, (0, 0), (y, 4)) == comb(4, (4 - y) // 2)
    assert green_function(g, (0, 0), (0, 2)) == 2


def test_graph_validation():
    with pytest.raises(ValueError):
        PathGraph([("a", "b", 1), ("b", "a", 1)])  # cycle
    with pytest.raises(ValueError):
        PathGraph([("a", "b", 1), ("a", "b", 2)])  # duplicate edge
    with pytest.raises(ValueError):
        PathGraph([("a", "b", 1)], order=["a"])  # order misses a vertex


def test_graph_json_round_trip():
    g = walk_graph(2, 0, 2)
    data = json.loads(json.dumps(g.to_json()))
    g2 = PathGraph.from_json(data)
    assert g2.vertices == g.vertices
    assert lgv_determinant(g2, VW_SOURCES, VW_SINKS) == 3


def test_weighted_json_round_trip():
    g = PathGraph([("a", "b", Fraction(1, 3))])
    g2 = PathGraph.from_json(json.loads(json.dumps(g.to_json())))
    assert green_function(g2, "a", "b") == Fraction(1, 3)


def test_lgv_determinant_matches_brute_force():
    g = walk_graph(2, 0, 2)
    assert lgv_determinant(g, VW_SOURCES, VW_SINKS) == 3
    assert brute_force_tuples(g, VW_SOURCES, VW_SINKS, True) == 3
    assert brute_force_tuples(g, VW_SOURCES, VW_SINKS, False) == 4
    single = lgv_determinant(g, [(0, 0)], [(0, 2)])
    assert single == green_function(g, (0, 0), (0, 2))


def test_lgv_weighted_graph():
    # a 2x2 grid with distinct rational edge weights; sources/sinks chosen
    # so every crossing pair of paths shares a vertex
    edges = []
    for i in range(3):
        for j in range(3):
            if i < 2:
                edges.append(((i, j), (i + 1, j), Fraction(1, 1 + i + 3 * j)))
            if j < 2:
                edges.append(((i, j), (i, j + 1), Fraction(2 + i, 3 + j)))
    g = PathGraph(edges)
    sources = [(0, 0), (0, 1)]
    sinks = [(2, 1), (2, 2)]
    assert check_compatibility(g, sources, sinks)
    det = lgv_determinant(g, sources, sinks)
    direct = brute_force_tuples(g, sources, sinks, True)
    assert det == direct
    assert det != brute_force_tuples(g, sources, sinks, False)


def test_check_compatibility():
    g = walk_graph(3, -3, 5)
    assert check_compatibility(g, [(0, 0), (2, 0)], [(-1, 3), (3, 3)])
    assert check_compatibility(g, [(0, 0)], [(1, 3)])  # vacuous for N=1
    crossed = PathGraph([("u1", "v2", 1), ("u2", "v1", 1)])
    assert not check_compatibility(crossed, ["u1", "u2"], ["v1", "v2"])


def test_enumeration_cap():
    g = walk_graph(4, -4, 6)
    with pytest.raises(EnumerationCapError):
        brute_force_tuples(g, VW_SOURCES, [(0, 4), (2, 4)], True, cap=3)
    with pytest.raises(EnumerationCapError):
        enumerate_paths(g, (0, 0), (0, 4), cap=2)


def test_tail_swap_requires_intersection():
    g = walk_graph(1, 0, 2)
    c = PathTuple((0, 1), (((0, 0), (1, 1)), ((2, 0), (3, 1))))
    with pytest.raises(ValueError):
        tail_swap(c, g)


def test_tail_swap_exhaustive_small():
    g = walk_graph(2, -2, 4)
    sinks = [(0, 2), (2, 2)]
    tuples = enumerate_tuples(g, VW_SOURCES, sinks)
    intersecting = [c for c in tuples if c.intersection_vertices()]
    assert intersecting
    for c in intersecting:
        swapped = tail_swap(c, g)
        assert swapped != c
        assert tail_swap(swapped, g) == c
        assert swapped.sign() == -c.sign()
        assert swapped.weight(g) == c.weight(g)
        assert swapped.intersection_vertices() == c.intersection_vertices()


def test_cancellation_identity():
    # the signed sum over all tuples equals the nonintersecting
    # identity-pairing sum, on exhaustively enumerable instances
    g = walk_graph(3, -3, 5)
    for sinks in ([(-1, 3), (1, 3)], [(-1, 3), (3, 3)], [(1, 3), (3, 3)]):
        signed = 0
        for c in enumerate_tuples(g, VW_SOURCES, sinks):
            signed += c.sign() * c.weight(g)
        assert signed == brute_force_tuples(g, VW_SOURCES, sinks, True)
        assert signed == lgv_determinant(g, VW_SOURCES, sinks)


def test_tail_swap_weighted_preserves_weight():
    edges = []
    w = 1
    for i in range(3):
        for j in range(3):
            if i < 2:
                w += 1
                edges.append(((i, j), (i + 1, j), Fraction(w, 7)))
            if j < 2:
                w += 1
                edges.append(((i, j), (i, j + 1), Fraction(3, w)))
    g = PathGraph(edges)
    sources = [(0, 0), (0, 1)]
    sinks = [(2, 1), (2, 2)]
    intersecting = [
        c
        for c in enumerate_tuples(g, sources, sinks)
        if c.intersection_vertices()
    ]
    assert intersecting
    for c in intersecting:
        swapped = tail_swap(c, g)
        assert swapped.weight(g) == c.weight(g)
        assert tail_swap(swapped, g) == c


def test_path_tuple_sign():
    assert PathTuple((0, 1, 2), ((), (), ())).sign() == 1
    assert PathTuple((1, 0, 2), ((), (), ())).sign() == -1
    assert PathTuple((1, 2, 0), ((), (), ())).sign() == 1
