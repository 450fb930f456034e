"""Seeded random instances: small graphs and conflict trees of valid sums."""

from __future__ import annotations

import random
from typing import Dict, List, Optional

from .gf2core import BinaryMatroid, add_parallel, r10
from .graphs import Multigraph
from .formats import ParsedInstance
from .sums import BasicNode, ConflictTree, SumError

__all__ = ["random_graph", "random_tree", "random_tree_instance", "random_graph_instance"]


def random_graph(rng: random.Random, n: int, m: int, prefix: str, loops: bool = False) -> Multigraph:
    """Connected multigraph: a random spanning tree plus extra edges."""
    V = [f"{prefix}v{i}" for i in range(n)]
    E = []
    for i in range(1, n):
        E.append((f"{prefix}{len(E)}", V[i], V[rng.randrange(i)]))
    while len(E) < m:
        if loops and rng.random() < 0.05 or n < 2:
            a = b = rng.choice(V)
        else:
            a, b = rng.sample(V, 2)
        E.append((f"{prefix}{len(E)}", a, b))
    return Multigraph(V, E)


def _r10_node(rng: random.Random, prefix: str) -> BinaryMatroid:
    M = r10().relabel({f"r{i}": f"{prefix}{i}" for i in range(10)})
    for j in range(rng.choice((0, 0, 1))):
        M = add_parallel(M, rng.choice(M.elements), f"{prefix}p{j}")
    return M


class _Draft:
    def __init__(self, name: str, kind: str, graph: Optional[Multigraph] = None, rep: Optional[BinaryMatroid] = None):
        self.name, self.kind, self.graph, self.rep = name, kind, graph, rep

    def size(self) -> int:
        return len(self.rep) if self.kind == "r10like" else len(self.graph.edges)

    def add_single(self, rng: random.Random, z: str) -> None:
        if self.kind == "r10like":
            old = rng.choice([e for e in self.rep.elements if not e.startswith("s")])
            self.rep = self.rep.relabel({old: z})
        else:
            a, b = rng.sample(self.graph.vertices, 2)
            self.graph = self.graph.add_edge(z, a, b)

    def add_triple(self, rng: random.Random, zs: List[str]) -> None:
        G = self.graph
        a, b, c = rng.sample(G.vertices, 3)
        if self.kind == "graphic":
            self.graph = G.add_edge(zs[0], a, b).add_edge(zs[1], b, c).add_edge(zs[2], c, a)
        else:
            # a new vertex whose three edges form a minimal cut
            x = G.fresh_vertex(f"{self.name.lower()}x")
            self.graph = G.add_vertex(x).add_edge(zs[0], x, a).add_edge(zs[1], x, b).add_edge(zs[2], x, c)

    def node(self) -> BasicNode:
        if self.kind == "r10like":
            return BasicNode(self.name, self.kind, rep=self.rep)
        return BasicNode(self.name, self.kind, graph=self.graph)


def random_tree(rng: random.Random, max_nodes: int = 3, max_ground: int = 14) -> ConflictTree:
    """Conflict tree of at most ``max_nodes`` basic nodes whose composed
    ground set has at most ``max_ground`` elements."""
    for _ in range(1000):
        count = rng.choice([c for c in (1, 2, 2, 3, 3, 3, 4, 4, 5) if c <= max_nodes])
        names = ["A", "B", "C", "D", "E"][:count]
        r10_at = rng.randrange(count) if count > 1 and rng.random() < 0.15 else None
        drafts = []
        for i, nm in enumerate(names):
            if i == r10_at:
                drafts.append(_Draft(nm, "r10like", rep=_r10_node(rng, nm.lower())))
            else:
                kind = rng.choice(("graphic", "cographic"))
                n = rng.randint(3, 5)
                m = rng.randint(n - 1, n + 3)
                drafts.append(_Draft(nm, kind, graph=random_graph(rng, n, m, nm.lower(), loops=True)))
        edges = []
        shared = 0
        for j in range(1, count):
            p = rng.randrange(j)
            A, B = drafts[p], drafts[j]
            sizes = [0, 1]
            if "r10like" not in (A.kind, B.kind):
                sizes += [3, 3]
            t = rng.choice(sizes)
            zs = [f"s{shared + i}" for i in range(t)]
            shared += t
            if t == 1:
                A.add_single(rng, zs[0])
                B.add_single(rng, zs[0])
            elif t == 3:
                A.add_triple(rng, zs)
                B.add_triple(rng, zs)
            edges.append((A.name, B.name, tuple(zs)))
        tree = ConflictTree(tuple(d.node() for d in drafts), tuple(edges))
        if len(tree.ground()) > max_ground:
            continue
        try:
            tree.validate()
        except SumError:
            continue
        return tree
    raise RuntimeError("could not draw a tree within the size limits")


def _instance_data(rng: random.Random, ground: List[str], max_weight: int, max_k: int):
    weights: Dict[str, int] = {}
    for e in ground:
        weights[e] = 0 if rng.random() < 0.08 else rng.randint(1, max_weight)
    nt = rng.randint(1, min(3, len(ground))) if ground else 0
    terminals = sorted(rng.sample(ground, nt))
    return weights, terminals, rng.randint(0, max_k)


def random_tree_instance(seed: int, max_nodes: int = 3, max_ground: int = 14, max_weight: int = 3, max_k: int = 4) -> ParsedInstance:
    rng = random.Random(seed)
    tree = random_tree(rng, max_nodes, max_ground)
    weights, terminals, k = _instance_data(rng, tree.ground(), max_weight, max_k)
    return ParsedInstance("tree", f"seed{seed}", tree=tree, weights=weights, terminals=terminals, k=k)


def random_graph_instance(seed: int, kind: str = "graphic", max_vertices: int = 7, max_weight: int = 3, max_k: int = 4) -> ParsedInstance:
    rng = random.Random(seed)
    n = rng.randint(2, max_vertices)
    G = random_graph(rng, n, rng.randint(n - 1, min(2 * n + 1, 14)), "e", loops=True)
    weights, terminals, k = _instance_data(rng, list(G.edge_ids), max_weight, max_k)
    return ParsedInstance(kind, f"seed{seed}", graph=G, weights=weights, terminals=terminals, k=k)
