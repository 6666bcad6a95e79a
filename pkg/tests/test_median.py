import random

import pytest

from cubekit.median import (GraphError, MedianGraph, NotValidatedError,
                            brute_force_median_oracle, check_median,
                            enumerate_cubes, gate, graph_to_text, is_convex,
                            load_graph, median)
from cubekit import builders


def test_q3_is_median():
    g = builders.hypercube(3)
    g.validated = False
    res = check_median(g)
    assert res.ok
    assert g.validated


def test_triangle_is_not_median():
    res = check_median(builders.triangle())
    assert not res.ok
    assert res.counterexample is not None


def test_cube_minus_vertex_not_median():
    # classic counterexample: 110, 101, 011 have no median once 111 is gone
    g = builders.cube_minus_vertex()
    res = check_median(g)
    assert not res.ok
    a, b, c = res.counterexample
    labs = {g.labels[a], g.labels[b], g.labels[c]}
    assert labs == {"110", "101", "011"}


def test_median_of_q3_corner_triple():
    g = builders.hypercube(3)
    li = g.label_index
    # med(000, 011, 101) = 001: coordinatewise majority
    assert median(g, li["000"], li["011"], li["101"]) == li["001"]


def test_median_matches_brute_force_oracle_on_random_graphs():
    rng = random.Random(7)
    for _ in range(40):
        g = builders.random_connected_graph(rng.randrange(4, 14),
                                            rng.randrange(0, 4), rng)
        fast = check_median(g).ok
        oracle_bad_triple = brute_force_median_oracle(g)
        assert fast == (oracle_bad_triple is None)


def test_graph_text_roundtrip():
    g = builders.grid_graph(3, 2)
    g2 = load_graph(graph_to_text(g))
    assert g2.n == g.n and g2.edges == g.edges
    assert g2.labels == g.labels
    assert g2.digest() == g.digest()


def test_frontier_survives_text_roundtrip():
    g = builders.free_group_ball(2)
    g2 = load_graph(graph_to_text(g))
    assert g2.frontier == g.frontier


def test_load_rejects_garbage():
    with pytest.raises(GraphError):
        load_graph("v a\nq nonsense\n")


def test_unvalidated_graph_refuses_arrangement():
    from cubekit.hyperplanes import arrangement
    g = MedianGraph(2, [(0, 1)])
    with pytest.raises(NotValidatedError):
        arrangement(g)


def test_convexity_and_gates_on_grid():
    g = builders.grid_graph(3, 3)
    li = g.label_index
    # a subrectangle is convex; an L-shape is not
    rect = [li["0,0"], li["0,1"], li["1,0"], li["1,1"]]
    assert is_convex(g, rect)
    ell = [li["0,0"], li["0,1"], li["1,0"], li["2,0"], li["2,1"]]
    assert not is_convex(g, ell)
    # gate of the far corner into the rectangle is the near corner of it
    assert gate(g, rect, li["2,2"]) == li["1,1"]


def test_cube_enumeration_counts():
    # Q3 contains 6 squares and 1 three-cube; counts checked by hand
    g = builders.hypercube(3)
    assert len(enumerate_cubes(g, 2)) == 6
    assert len(enumerate_cubes(g, 3)) == 1
    # a tree has no squares
    t = builders.star(4)
    assert enumerate_cubes(t, 2) == []


def test_interval_is_subcube_in_hypercube():
    g = builders.hypercube(4)
    li = g.label_index
    iv = g.interval(li["0000"], li["0110"])
    assert sorted(g.labels[v] for v in iv) == ["0000", "0010", "0100", "0110"]
