from __future__ import annotations

import itertools
import random

from spancover.basicsolve import (
    feedback_corank_guess,
    solve_exhaustive,
    solve_graphic,
    solve_graphic_restricted,
    solve_r10,
    solve_rsfs,
    solve_subset_feedback,
    steiner_forest,
    steiner_tree,
)
from spancover.gf2core import add_parallel, dualize, is_independent, r10
from spancover.graphs import Multigraph, bond_matroid, components, cycle_matroid
from spancover.oracle import brute_feedback, brute_restricted, brute_space_cover
from spancover.preprocess import Instance, RestrictedInstance

from fuzz import k3, random_graph, random_instance, random_matroid

INF = float("inf")


def c4():
    return Multigraph(list("abcd"), [("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d"), ("da", "d", "a")])


def unit(ids):
    return {e: 1 for e in ids}


def key(res):
    return res.answer, res.opt_weight


def test_r10_examples():
    R = r10()
    M = add_parallel(R, "r0", "t")
    w = unit(M.elements)
    w["r0"] = 2
    res = solve_r10(Instance(M, w, frozenset(["t"]), 5))
    assert res.ok and res.witness == {"r0"} and res.opt_weight == 2
    res = solve_r10(Instance(R, unit(R.elements), frozenset(["r0"]), 3))
    assert res.ok and len(res.witness) == 3
    assert not solve_r10(Instance(R, unit(R.elements), frozenset(["r0"]), 2)).ok


def test_steiner_tree_examples():
    P = Multigraph(["1", "2", "3"], [("x", "1", "2"), ("y", "2", "3")])
    table = steiner_tree(P, {"x": 3, "y": 1}, ["1", "2"])
    assert table[frozenset(["1"])] == 0
    assert table[frozenset(["1", "2"])] == 3
    table = steiner_tree(c4(), unit(c4().edge_ids), ["a", "b", "c"])
    assert table[frozenset("abc")] == 2


def test_steiner_tree_matches_subset_search():
    rng = random.Random(31)
    for _ in range(60):
        G = random_graph(rng, rng.randint(2, 6), rng.randint(1, 9), loops=False, connected=rng.random() < 0.8)
        w = {e: rng.randint(0, 3) for e in G.edge_ids}
        S = rng.sample(G.vertices, rng.randint(1, min(4, len(G.vertices))))
        best = INF
        for r in range(len(G.edge_ids) + 1):
            for F in itertools.combinations(G.edge_ids, r):
                H = G.keep_edges(F)
                comp = next(c for c in components(H) if S[0] in c)
                if set(S) <= set(comp):
                    best = min(best, sum(w[e] for e in F))
        assert steiner_tree(G, w, S)[frozenset(S)] == best


def test_steiner_forest_examples():
    G = c4()
    w = unit(G.edge_ids)
    res = steiner_forest(G, w, [("a", "c"), ("b", "d")], 3)
    assert res.ok and res.opt_weight == 3
    assert not steiner_forest(G, w, [("a", "c"), ("b", "d")], 2).ok
    assert steiner_forest(G, w, [], 0).opt_weight == 0


def test_solve_graphic_examples():
    G = k3()
    M = cycle_matroid(G)
    res = solve_graphic(Instance(M, unit("abc"), frozenset("a"), 2), G)
    assert res.ok and res.witness == {"b", "c"}
    assert not solve_graphic(Instance(M, unit("abc"), frozenset("a"), 1), G).ok


def test_solve_graphic_matches_oracle():
    rng = random.Random(32)
    for _ in range(150):
        G = random_graph(rng, rng.randint(1, 7), rng.randint(1, 12))
        inst = random_instance(rng, cycle_matroid(G))
        assert key(solve_graphic(inst, G)) == key(brute_space_cover(inst))


def test_solve_graphic_restricted_examples():
    # x1-y1 joined by t*, by e* (weight 0), and by the two-edge path p, q
    G = Multigraph(["x", "y", "m"], [("t", "x", "y"), ("es", "x", "y"), ("p", "x", "m"), ("q", "m", "y")])
    M = cycle_matroid(G)
    w = {"t": 1, "es": 0, "p": 1, "q": 1}
    inst = RestrictedInstance(M, w, frozenset("t"), 2, estar="es", tstar="t")
    res = solve_graphic_restricted(inst, G)
    assert res.ok and res.opt_weight == 2 and "es" not in res.witness
    assert key(res) == key(brute_restricted(inst))
    inst1 = RestrictedInstance(M, w, frozenset("t"), 1, estar="es", tstar="t")
    assert not solve_graphic_restricted(inst1, G).ok
    # e* hanging off the cycle: the constraint is vacuous
    G2 = G.delete_edges(["es"]).add_vertex("z").add_edge("es", "y", "z")
    M2 = cycle_matroid(G2)
    r = RestrictedInstance(M2, w, frozenset("t"), 2, estar="es", tstar="t")
    assert key(solve_graphic_restricted(r, G2)) == key(solve_graphic(r.demote(), G2))


def test_subset_feedback_examples():
    M = cycle_matroid(Multigraph(["1", "2", "3"], [("e1", "1", "2"), ("e2", "2", "3"), ("e3", "3", "1")]))
    assert solve_subset_feedback(M, [], 0).opt_weight == 0
    res = solve_subset_feedback(M, ["e1", "e2"], 1)
    assert res.ok and res.witness == {"e3"}
    rng = random.Random(33)
    for _ in range(40):
        M = random_matroid(rng, rng.randint(1, 8))
        T = rng.sample(M.elements, rng.randint(1, len(M)))
        # deleting everything else leaves M restricted to T, which is
        # circuit-free exactly when T is independent
        assert solve_subset_feedback(M, T, len(M) - len(T)).ok == is_independent(M, T)


def test_rsfs_examples():
    G = Multigraph(["1", "2", "3"], [("e1", "1", "2"), ("e2", "2", "3"), ("e3", "3", "1")])
    M = bond_matroid(G)
    w = unit(M.elements)
    assert not solve_rsfs(M, w, ["e1"], 1).ok
    assert solve_rsfs(M, w, ["e1"], 2).ok


def test_rsfs_solution_leaves_no_circuit_through_terminals():
    rng = random.Random(34)
    for _ in range(80):
        M = random_matroid(rng, rng.randint(1, 9))
        inst = random_instance(rng, M)
        res = solve_rsfs(M, inst.weights, inst.terminals, inst.k)
        assert key(res) == key(brute_feedback(M, inst.weights, inst.terminals, inst.k))


def test_feedback_closed_form_matches_unconstrained_dual_span():
    """With T itself allowed in F, the cheapest unit-weight cover is the dual rank of T."""
    rng = random.Random(35)
    for _ in range(60):
        M = random_matroid(rng, rng.randint(1, 8))
        T = frozenset(rng.sample(M.elements, rng.randint(1, len(M))))
        D = dualize(M)
        assert feedback_corank_guess(M, T) == D.rank_mask(D.mask(T))


def test_exhaustive_matches_oracle():
    rng = random.Random(36)
    for _ in range(150):
        inst = random_instance(rng, random_matroid(rng, rng.randint(1, 10)))
        assert key(solve_exhaustive(inst)) == key(brute_space_cover(inst))
