from __future__ import annotations

import random

import pytest

from spancover.gf2core import add_parallel, enumerate_circuits, is_independent
from spancover.graphs import (
    GraphError,
    Multigraph,
    blocks,
    bond_matroid,
    boundary,
    bridges,
    components,
    cycle_matroid,
    format_graph_block,
    min_cut,
    parse_graph_block,
    reachable_side,
)

from fuzz import k3, random_graph, same_independence, subsets


def path(*names):
    """s-a-t style path; edge ids are the two endpoint names joined."""
    return Multigraph(list(names), [(names[i] + names[i + 1], names[i], names[i + 1]) for i in range(len(names) - 1)])


def test_cycle_matroid_examples():
    assert enumerate_circuits(cycle_matroid(k3()), 3) == [frozenset("abc")]
    loop = cycle_matroid(Multigraph(["1", "2"], [("e", "1", "1"), ("f", "1", "2")]))
    assert loop.is_loop("e") and not loop.is_loop("f")
    par = cycle_matroid(Multigraph(["1", "2"], [("e", "1", "2"), ("f", "1", "2")]))
    assert enumerate_circuits(par, 2) == [frozenset("ef")]


def test_bond_matroid_examples():
    circuits = set(enumerate_circuits(bond_matroid(k3()), 3))
    assert circuits == {frozenset("ab"), frozenset("bc"), frozenset("ac")}
    P = path("s", "a", "t")
    M = bond_matroid(P)
    assert M.is_loop("sa") and M.is_loop("at")


def test_bond_parallel_is_subdivision():
    rng = random.Random(2)
    for _ in range(60):
        G = random_graph(rng, rng.randint(2, 5), rng.randint(2, 7))
        M = bond_matroid(G)
        e = rng.choice([x for x in G.edge_ids if not M.is_loop(x)] or [None])
        if e is None:
            continue
        u, v = G.endpoints(e)
        mid = G.fresh_vertex("m")
        H = G.delete_edges([e]).add_vertex(mid).add_edge(e, u, mid).add_edge("new", mid, v)
        assert same_independence(add_parallel(M, e, "new"), bond_matroid(H))


def test_cycle_matroid_independence_is_forest():
    rng = random.Random(4)
    for _ in range(30):
        G = random_graph(rng, rng.randint(1, 5), rng.randint(0, 7))
        M = cycle_matroid(G)
        for S in subsets(G.edge_ids):
            forest = len(components(G.keep_edges(S))) == len(G.vertices) - len(S)
            assert is_independent(M, S) == forest


def test_bridges_and_blocks():
    P = path("1", "2", "3")
    assert bridges(P) == {"12", "23"}
    assert bridges(k3()) == frozenset()
    assert len(blocks(k3())) == 1
    bowtie = Multigraph(["1", "2", "3", "4", "5"], [
        ("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1"),
        ("d", "3", "4"), ("e", "4", "5"), ("f", "5", "3"),
    ])
    assert sorted(map(sorted, blocks(bowtie))) == [["a", "b", "c"], ["d", "e", "f"]]


def test_bridges_match_component_count():
    rng = random.Random(8)
    for _ in range(100):
        G = random_graph(rng, rng.randint(1, 7), rng.randint(0, 10), connected=rng.random() < 0.7)
        base = len(components(G))
        expect = {e for e in G.edge_ids if len(components(G, [e])) > base}
        assert bridges(G) == expect
        assert sorted(x for b in blocks(G) for x in b) == sorted(G.edge_ids)


def test_reachable_side():
    P = path("s", "a", "t")
    assert reachable_side(P, [], "s") == {"s", "a", "t"}
    assert reachable_side(P, ["at"], "s") == {"s", "a"}


def test_min_cut_side_has_the_cut_as_boundary():
    rng = random.Random(9)
    for _ in range(100):
        G = random_graph(rng, rng.randint(2, 7), rng.randint(1, 11), loops=False)
        x, y = rng.sample(G.vertices, 2)
        val, rmin, rmax = min_cut(G, [x], [y])
        for R in (rmin, rmax):
            assert x in R and y not in R
            assert len(boundary(G, R)) == val
        assert rmin <= rmax


def test_graph_block_round_trip_and_errors():
    G = k3()
    again = parse_graph_block(format_graph_block(G))
    assert again.edges == G.edges
    with pytest.raises(GraphError, match="line 3"):
        parse_graph_block(["v 1", "e a 1 1", "x"])
    with pytest.raises(GraphError):
        Multigraph(["1"], [("a", "1", "2")])
