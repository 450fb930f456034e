from __future__ import annotations

import random

from spancover.cuts import (
    enumerate_important_cuts,
    enumerate_semi_important,
    semi_important_gadget,
    solve_cographic,
    solve_cographic_restricted,
)
from spancover.graphs import Multigraph, bond_matroid, boundary, bridges, components
from spancover.oracle import brute_important_cuts, brute_restricted, brute_semi_important, brute_space_cover, is_interesting
from spancover.preprocess import Instance, RestrictedInstance

from fuzz import random_graph, random_instance, subsets


def path():
    return Multigraph(["s", "a", "t"], [("sa", "s", "a"), ("at", "a", "t")])


def key(res):
    return res.answer, res.opt_weight


def test_single_edge_cut():
    G = Multigraph(["x", "y"], [("e", "x", "y")])
    cuts = enumerate_important_cuts(G, ["x"], ["y"], 1)
    assert [c.cut for c in cuts] == [frozenset(["e"])]


def test_path_important_cut_is_the_far_one():
    cuts = enumerate_important_cuts(path(), ["s"], ["t"], 1)
    assert {c.cut for c in cuts} == {frozenset(["at"])}
    assert brute_important_cuts(path(), ["s"], ["t"], 1) == {frozenset(["at"])}


def test_important_cuts_match_oracle_small():
    rng = random.Random(41)
    for _ in range(60):
        G = random_graph(rng, rng.randint(2, 7), rng.randint(1, 11), loops=False)
        x, y = rng.sample(G.vertices, 2)
        k = rng.randint(0, 3)
        got = {c.cut for c in enumerate_important_cuts(G, [x], [y], k)}
        assert got == brute_important_cuts(G, [x], [y], k)
        assert len(got) <= 4 ** k
        for c in enumerate_important_cuts(G, [x], [y], k):
            assert boundary(G, c.side) == c.cut


def test_semi_important_examples():
    G = path()
    fam = enumerate_semi_important(G, "s", [], 1)
    assert [s.W for s in fam] == [frozenset("sat")]
    fam = {s.W for s in enumerate_semi_important(G, "s", ["t"], 1)}
    assert frozenset(["s", "a"]) in fam
    assert fam == brute_semi_important(G, "s", ["t"], 1)


def test_semi_important_outputs_are_interesting_and_maximal():
    rng = random.Random(42)
    for _ in range(40):
        G = random_graph(rng, rng.randint(2, 7), rng.randint(1, 10), loops=False)
        s = rng.choice(G.vertices)
        T = set(rng.sample([v for v in G.vertices if v != s], rng.randint(0, min(3, len(G.vertices) - 1))))
        k = rng.randint(0, 3)
        fam = enumerate_semi_important(G, s, T, k)
        for item in fam:
            assert is_interesting(G, set(item.W), s, T)
            assert boundary(G, item.W) == item.boundary and len(item.boundary) <= k
        assert {x.W for x in fam} == brute_semi_important(G, s, T, k)


def test_gadget_variants_agree():
    rng = random.Random(43)
    for _ in range(30):
        G = random_graph(rng, rng.randint(2, 6), rng.randint(1, 9), loops=False)
        s = rng.choice(G.vertices)
        T = rng.sample([v for v in G.vertices if v != s], rng.randint(0, min(2, len(G.vertices) - 1)))
        k = rng.randint(0, 2)
        a = {x.W for x in enumerate_semi_important(G, s, T, k, compact=True)}
        b = {x.W for x in enumerate_semi_important(G, s, T, k, compact=False)}
        assert a == b
        H, _ = semi_important_gadget(G, T, k)
        assert len(H.vertices) >= len(G.vertices)


def test_cographic_examples():
    G = Multigraph(["1", "2", "3"], [("e1", "1", "2"), ("e2", "2", "3"), ("e3", "3", "1")])
    M = bond_matroid(G)
    w = {e: 1 for e in M.elements}
    res = solve_cographic(Instance(M, w, frozenset(["e1"]), 1), G)
    assert res.ok and res.opt_weight == 1
    assert "e1" in bridges(G.delete_edges(res.witness))
    assert solve_cographic(Instance(M, w, frozenset(), 0), G).opt_weight == 0


def test_bridge_condition_matches_span():
    """F spans T in the bond matroid exactly when every t is a bridge of G - F."""
    rng = random.Random(44)
    for _ in range(40):
        G = random_graph(rng, rng.randint(2, 5), rng.randint(2, 7))
        M = bond_matroid(G)
        T = set(rng.sample(G.edge_ids, 1))
        for F in subsets([e for e in G.edge_ids if e not in T]):
            H = G.delete_edges(F)
            base = len(components(H))
            bridge = all(len(components(H, [t])) > base for t in T)
            assert bridge == (M.rank_mask(M.mask(F) | M.mask(T)) == M.rank_mask(M.mask(F)))


def test_cographic_matches_oracle_and_carried_mode():
    rng = random.Random(45)
    for _ in range(100):
        G = random_graph(rng, rng.randint(2, 7), rng.randint(1, 12))
        inst = random_instance(rng, bond_matroid(G))
        ref = key(brute_space_cover(inst))
        assert key(solve_cographic(inst, G)) == ref
        assert key(solve_cographic(inst, G, carried_z=True)) == ref
        assert key(solve_cographic(inst, G, compact=False)) == ref


def test_restricted_detour_is_worse():
    # cutting around x uses e* and costs 1; without e* the cut must take q
    G = Multigraph(["x", "y", "m"], [("t", "x", "y"), ("es", "x", "m"), ("r", "x", "m"), ("q", "m", "y")])
    M = bond_matroid(G)
    w = {"t": 1, "es": 0, "r": 1, "q": 3}
    plain = brute_space_cover(Instance(M, w, frozenset("t"), 4))
    inst = RestrictedInstance(M, w, frozenset("t"), 4, estar="es", tstar="t")
    res = solve_cographic_restricted(inst, G)
    assert key(res) == key(brute_restricted(inst)) == ("yes", 3)
    assert plain.opt_weight == 1


def test_restricted_free_bridge():
    # t* is already a bridge once the zero-weight edge z is gone
    G = Multigraph(["1", "2", "3"], [("t", "1", "2"), ("z", "2", "3"), ("es", "3", "1"), ("f", "3", "1")])
    M = bond_matroid(G)
    w = {"t": 1, "z": 0, "es": 0, "f": 2}
    inst = RestrictedInstance(M, w, frozenset("t"), 0, estar="es", tstar="t")
    res = solve_cographic_restricted(inst, G)
    assert res.ok and res.opt_weight == 0
