from __future__ import annotations

import itertools
import random

import pytest

from spancover.generate import random_tree
from spancover.gf2core import contract, delete
from spancover.graphs import Multigraph, bond_matroid, bridges, components, cycle_matroid
from spancover.sums import (
    BasicNode,
    ConflictTree,
    SumError,
    compose_tree,
    find_clean_cut,
    format_tree_block,
    is_clean_cut,
    matroid_sum,
    node_add_parallel,
    node_contract,
    node_delete,
    normalize_tree,
    parse_tree_block,
    split_cographic_subleaf,
    terminal_flip,
)

from fuzz import cycle_sets, random_graph, same_independence


def triangle(ids, verts=("1", "2", "3")):
    a, b, c = verts
    return Multigraph(list(verts), [(ids[0], a, b), (ids[1], b, c), (ids[2], c, a)])


def c4():
    return Multigraph(list("wxyz"), [("a", "w", "x"), ("b", "x", "y"), ("c", "y", "z"), ("d", "z", "w")])


def two_triangles():
    A = BasicNode("A", "graphic", triangle(["a", "b", "e"]))
    B = BasicNode("B", "graphic", triangle(["c", "d", "e"]))
    return ConflictTree((A, B), (("A", "B", ("e",)),))


def test_two_sum_of_triangles_is_c4():
    M = matroid_sum(cycle_matroid(triangle(["a", "b", "e"])), cycle_matroid(triangle(["c", "d", "e"])))
    assert same_independence(M, cycle_matroid(c4()))
    assert same_independence(compose_tree(two_triangles()), cycle_matroid(c4()))


def test_one_sum_is_disjoint_union():
    M1 = cycle_matroid(triangle(["a", "b", "c"]))
    M2 = bond_matroid(triangle(["x", "y", "z"]))
    S = matroid_sum(M1, M2)
    expect = {c1 | c2 for c1 in cycle_sets(M1) for c2 in cycle_sets(M2)}
    assert cycle_sets(S) == expect
    assert cycle_sets(M1) <= cycle_sets(S)


def test_sum_rejects_bad_shared_sets():
    M1 = cycle_matroid(Multigraph(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]))
    M2 = cycle_matroid(Multigraph(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]))
    with pytest.raises(SumError):
        matroid_sum(M1, M2)


def test_single_node_tree():
    A = BasicNode("A", "cographic", triangle(["a", "b", "c"]))
    assert compose_tree(ConflictTree((A,), ())).same_as(A.matroid)


def test_compose_order_does_not_matter():
    rng = random.Random(51)
    n = 0
    while n < 40:
        tree = random_tree(rng, 3, 14)
        if len(tree.edges) < 2:
            continue
        n += 1
        ref = compose_tree(tree)
        for order in itertools.permutations(range(len(tree.edges))):
            assert compose_tree(tree, order).same_as(ref)


def test_node_ops_match_matroid_ops():
    rng = random.Random(52)
    for _ in range(100):
        kind = rng.choice(["graphic", "cographic"])
        N = BasicNode("A", kind, random_graph(rng, rng.randint(2, 5), rng.randint(2, 8)))
        e = rng.choice(N.elements)
        assert node_delete(N, [e]).matroid.same_as(delete(N.matroid, [e]))
        assert node_contract(N, [e]).matroid.same_as(contract(N.matroid, [e]))
        if not N.matroid.is_loop(e):
            assert node_add_parallel(N, e, "new").matroid.parallel(e, "new")


def _terminal_trees(seed_from, count, need3=False):
    rng = random.Random(seed_from)
    out = []
    while len(out) < count:
        tree = random_tree(rng, 3, 14)
        if len(tree.nodes) < 2 or (need3 and not any(len(z) == 3 for _, _, z in tree.edges)):
            continue
        T = set(rng.sample(tree.ground(), rng.randint(1, min(4, len(tree.ground())))))
        out.append((tree, T))
    return out


def test_flip_keeps_the_composed_matroid():
    flips = 0
    for tree, T in _terminal_trees(53, 150):
        parent, _ = tree.rooted()
        for leaf, s in parent.items():
            if s is None:
                continue
            before = compose_tree(tree)
            cur = tree
            while True:
                nxt = terminal_flip(cur, s, leaf, T)
                if nxt is None:
                    break
                flips += 1
                assert compose_tree(nxt).same_as(before)
                cur = nxt
            # nothing left to flip: no leaf terminal parallel to a shared element
            L = cur.node(leaf).matroid
            for z in cur.sumset(s, leaf):
                assert not any(L.parallel(z, t) for t in T & set(L.elements) if not L.is_loop(z))
            assert terminal_flip(cur, s, leaf, T) is None
    assert flips > 0


def test_normalize_keeps_the_composed_matroid():
    rng = random.Random(54)
    seen = 0
    for tree, _ in _terminal_trees(54, 150):
        e = rng.choice(tree.ground())
        op = rng.choice([node_delete, node_contract])
        owner = tree.node(tree.owner(e))
        want = (delete if op is node_delete else contract)(compose_tree(tree), [e])
        fixed = normalize_tree(tree.replace_node(op(owner, [e])))
        fixed.validate()
        assert compose_tree(fixed).same_as(want)
        seen += fixed.edges != tree.edges
    assert seen > 0


def _series_pairs(G):
    base = len(components(G))
    ids = G.edge_ids
    solid = [e for e in ids if len(components(G, [e])) == base]
    return [(e, f) for e, f in itertools.combinations(solid, 2) if len(components(G, [e, f])) > base]


def _cographic_with_cuts(rng):
    """Connected graph plus a few 3-edge vertex stars (the shared sets),
    then scrambled by swapping labels of series pairs."""
    G = random_graph(rng, rng.randint(2, 5), rng.randint(1, 6), prefix="g", loops=False)
    base = list(G.vertices)
    stars = []
    for j in range(rng.randint(1, 3)):
        x = f"x{j}"
        G = G.add_vertex(x)
        Z = [f"z{j}{i}" for i in range(3)]
        for z in Z:
            G = G.add_edge(z, x, rng.choice(base))
        stars.append(Z)
    for _ in range(rng.randint(0, 4)):
        pairs = _series_pairs(G)
        if not pairs:
            break
        e, f = rng.choice(pairs)
        G = G.rename_edges({e: f, f: e})
    Zstar = stars.pop() if len(stars) > 1 and rng.random() < 0.5 else []
    M = bond_matroid(G)
    for Z in stars + ([Zstar] if Zstar else []):
        assert M.rank_mask(M.mask(Z)) == 2 and all(M.rank_mask(M.mask(p)) == 2 for p in itertools.combinations(Z, 2))
    return G, stars, Zstar


def test_clean_cut_identity_when_already_clean():
    G = Multigraph(["a", "b", "c", "x", "y"], [
        ("h1", "a", "b"), ("h2", "b", "c"), ("h3", "c", "a"),
        ("z1", "a", "x"), ("z2", "b", "y"), ("z3", "c", "y"), ("o", "x", "y"),
    ])
    cut = find_clean_cut(G, [["z1", "z2", "z3"]])
    assert cut.swaps == () and cut.graph == G
    assert is_clean_cut(G, [["z1", "z2", "z3"]], [], 0, cut.H)


def test_clean_cut_fuzz():
    rng = random.Random(55)
    relabeled = 0
    for _ in range(300):
        G, Zs, Zstar = _cographic_with_cuts(rng)
        cut = find_clean_cut(G, Zs, Zstar)
        assert is_clean_cut(cut.graph, Zs, Zstar, cut.index, cut.H)
        assert bond_matroid(cut.graph).same_as(bond_matroid(G).reordered(cut.graph.edge_ids))
        relabeled += bool(cut.swaps)
        if not bridges(G):
            # the driver only ever asks for cuts in bridgeless graphs
            assert not cut.fallback
    assert relabeled > 0


def test_clean_cut_predicate_rejects():
    G = Multigraph(["a", "b", "x"], [("h", "a", "b"), ("z1", "a", "x"), ("z2", "b", "x"), ("z3", "b", "x")])
    # the component {a, b} is a single edge, which is a bridge
    assert not is_clean_cut(G, [["z1", "z2", "z3"]], [], 0, {"a", "b"})


def _split_cases(rng):
    G, Zs, Zstar = _cographic_with_cuts(rng)
    cut = find_clean_cut(G, Zs, Zstar)
    S = BasicNode("S", "cographic", cut.graph)
    tree = ConflictTree((S,), ())
    return tree, Zs[cut.index], cut.H


def test_split_keeps_the_composed_matroid():
    rng = random.Random(56)
    sizes = set()
    for _ in range(200):
        tree, Z, H = _split_cases(rng)
        new, leaf, ny = split_cographic_subleaf(tree, "S", Z, H)
        sizes.add(ny)
        new.validate()
        assert compose_tree(new).same_as(compose_tree(tree).reordered(compose_tree(new).elements))
        if ny == 1:
            assert new.sumset("S", leaf) == ()
        if ny == 2:
            (f,) = new.sumset("S", leaf)
            L = new.node(leaf).matroid
            assert not any(L.parallel(f, e) for e in L.elements if e != f)
    assert sizes == {1, 2, 3}


def test_tree_parse_errors_name_the_edge():
    lines = [
        "node A graphic", "v 1", "v 2", "v 3", "e a 1 2", "e x 2 3", "e y 3 1",
        "node B graphic", "v 1", "v 2", "v 3", "e b 1 2", "e x 2 3", "e y 3 1",
        "sumedge A B x y",
    ]
    with pytest.raises(SumError, match="line 15: sum edge A-B: sum-set must have 0, 1 or 3 elements, got 2"):
        parse_tree_block(lines)


def test_tree_block_round_trip():
    rng = random.Random(57)
    for _ in range(30):
        tree = random_tree(rng, 3, 14)
        again = parse_tree_block(format_tree_block(tree))
        assert compose_tree(again).same_as(compose_tree(tree))


def test_three_sum_shares_a_triangle():
    rng = random.Random(58)
    for _ in range(100):
        tree = random_tree(rng, 3, 14)
        for a, b, Z in tree.edges:
            if len(Z) == 3:
                for n in (a, b):
                    M = tree.node(n).matroid
                    assert M.rank_mask(M.mask(Z)) == 2 and all(M.rank_mask(M.mask(p)) == 2 for p in itertools.combinations(Z, 2))
