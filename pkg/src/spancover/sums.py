"""
Extended 1-, 2- and 3-sums of binary matroids and conflict trees.

A sum is defined through cycle spaces: the cycles of M1 + M2 are the sets
C1 ^ C2 with Ci a cycle of Mi that agree on the shared elements.  A conflict
tree is a tree of basic matroids (graphic, cographic, or R10 with parallel
copies) whose edges carry the shared element sets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import gf2core
from .gf2core import BinaryMatroid, MatroidError, dualize
from .graphs import (
    Multigraph,
    bond_matroid,
    bridges,
    components,
    cycle_matroid,
    format_graph_block,
    parse_graph_block,
    reachable_side,
)

__all__ = [
    "SumError",
    "BasicNode",
    "ConflictTree",
    "CleanCut",
    "matroid_sum",
    "compose_tree",
    "node_delete",
    "node_contract",
    "node_add_parallel",
    "terminal_flip",
    "normalize_tree",
    "is_clean_cut",
    "find_clean_cut",
    "split_cographic_subleaf",
    "parse_tree_block",
    "format_tree_block",
    "KINDS",
]

KINDS = ("graphic", "cographic", "r10like")


class SumError(ValueError):
    pass


# ---------------------------------------------------------------- sums

def _is_triangle(M: BinaryMatroid, Z: Sequence[str]) -> bool:
    m = M.mask(Z)
    if M.rank_mask(m) != 2:
        return False
    return all(M.rank_mask(M.mask(p)) == 2 for p in ((Z[0], Z[1]), (Z[0], Z[2]), (Z[1], Z[2])))


def matroid_sum(M1: BinaryMatroid, M2: BinaryMatroid) -> BinaryMatroid:
    """Extended sum over the shared elements (0, 1 or 3 of them)."""
    Z = [e for e in M1.elements if e in M2]
    if len(Z) not in (0, 1, 3):
        raise SumError(f"shared set {sorted(Z)} has {len(Z)} elements; need 0, 1 or 3")
    if len(Z) == 3:
        for i, M in enumerate((M1, M2), 1):
            if not _is_triangle(M, Z):
                raise SumError(f"shared set {sorted(Z)} is not a circuit of summand {i}")
    U = list(M1.elements) + [e for e in M2.elements if e not in M1]
    pos = {e: i for i, e in enumerate(U)}
    gens: List[int] = []
    for M in (M1, M2):
        for r in dualize(M).rows:
            v = 0
            for j, e in enumerate(M.elements):
                if (r >> j) & 1:
                    v |= 1 << pos[e]
            gens.append(v)
    # keep the combinations that vanish on the shared coordinates
    for z in Z:
        bit = 1 << pos[z]
        piv = next((g for g in gens if g & bit), None)
        if piv is None:
            continue
        gens.remove(piv)
        gens = [g ^ piv if g & bit else g for g in gens]
    E = [e for e in U if e not in set(Z)]
    cyc = []
    for g in gens:
        v = 0
        for j, e in enumerate(E):
            if (g >> pos[e]) & 1:
                v |= 1 << j
        cyc.append(v)
    return dualize(BinaryMatroid(E, cyc))


# ---------------------------------------------------------------- nodes and trees

@dataclass(frozen=True)
class BasicNode:
    name: str
    kind: str
    graph: Optional[Multigraph] = None
    rep: Optional[BinaryMatroid] = None
    _m: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SumError(f"node {self.name}: unknown kind {self.kind!r}")
        if self.kind == "r10like":
            if self.rep is None:
                raise SumError(f"node {self.name}: r10like node needs a matrix")
        elif self.graph is None:
            raise SumError(f"node {self.name}: {self.kind} node needs a graph")

    @property
    def matroid(self) -> BinaryMatroid:
        if not self._m:
            if self.kind == "graphic":
                self._m.append(cycle_matroid(self.graph))
            elif self.kind == "cographic":
                self._m.append(bond_matroid(self.graph))
            else:
                self._m.append(self.rep)
        return self._m[0]

    @property
    def elements(self) -> Tuple[str, ...]:
        if self.kind == "r10like":
            return self.rep.elements
        return self.graph.edge_ids

    def with_graph(self, G: Multigraph) -> "BasicNode":
        return BasicNode(self.name, self.kind, G, None)

    def with_rep(self, M: BinaryMatroid) -> "BasicNode":
        return BasicNode(self.name, self.kind, None, M)


def node_delete(node: BasicNode, X: Iterable[str]) -> BasicNode:
    """Delete matroid elements inside one node."""
    X = list(X)
    if not X:
        return node
    if node.kind == "r10like":
        return node.with_rep(gf2core.delete(node.rep, X))
    G = node.graph
    if node.kind == "graphic":
        return node.with_graph(G.delete_edges(X))
    for e in X:  # bond matroid: deletion contracts the edge
        G = G.contract_edge(e)
    return node.with_graph(G)


def node_contract(node: BasicNode, X: Iterable[str]) -> BasicNode:
    """Contract matroid elements inside one node."""
    X = list(X)
    if not X:
        return node
    if node.kind == "r10like":
        return node.with_rep(gf2core.contract(node.rep, X))
    G = node.graph
    for e in X:
        if node.kind == "graphic":
            G = G.contract_edge(e)
        elif e in bridges(G):
            # a loop of the bond matroid; contracting the edge keeps G connected
            G = G.contract_edge(e)
        else:
            G = G.delete_edges([e])
    return node.with_graph(G)


def node_add_parallel(node: BasicNode, e: str, new: str) -> BasicNode:
    """Add ``new`` as an element parallel to ``e``."""
    if node.kind == "r10like":
        return node.with_rep(gf2core.add_parallel(node.rep, e, new))
    G = node.graph
    u, v = G.endpoints(e)
    if node.kind == "graphic":
        return node.with_graph(G.add_edge(new, u, v))
    # parallel in the bond matroid means in series in the graph: subdivide e
    x = G.fresh_vertex(f"{e}~")
    edges = [(i, a, b) if i != e else (e, u, x) for i, a, b in G.edges]
    edges.append((new, x, v))
    return node.with_graph(Multigraph(G.vertices + (x,), edges))


@dataclass(frozen=True)
class ConflictTree:
    """Nodes (the first one is the root) and sum edges ``(a, b, shared ids)``."""

    nodes: Tuple[BasicNode, ...]
    edges: Tuple[Tuple[str, str, Tuple[str, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple((a, b, tuple(z)) for a, b, z in self.edges))

    # lookups
    @property
    def root(self) -> str:
        return self.nodes[0].name

    @property
    def names(self) -> List[str]:
        return [n.name for n in self.nodes]

    def node(self, name: str) -> BasicNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise SumError(f"no node named {name!r}")

    def sumset(self, a: str, b: str) -> Tuple[str, ...]:
        for x, y, z in self.edges:
            if {x, y} == {a, b}:
                return z
        raise SumError(f"nodes {a} and {b} are not adjacent")

    def neighbors(self, a: str) -> List[str]:
        out = []
        for x, y, _ in self.edges:
            if x == a:
                out.append(y)
            elif y == a:
                out.append(x)
        return sorted(out)

    def rooted(self) -> Tuple[Dict[str, Optional[str]], Dict[str, int]]:
        """Parent and depth of every node."""
        parent: Dict[str, Optional[str]] = {self.root: None}
        depth = {self.root: 0}
        dq = deque([self.root])
        while dq:
            a = dq.popleft()
            for b in self.neighbors(a):
                if b not in parent:
                    parent[b] = a
                    depth[b] = depth[a] + 1
                    dq.append(b)
        return parent, depth

    def children(self, a: str) -> List[str]:
        parent, _ = self.rooted()
        return sorted(b for b, p in parent.items() if p == a)

    def shared_elements(self) -> Set[str]:
        return {e for _, _, z in self.edges for e in z}

    def ground(self) -> List[str]:
        shared = self.shared_elements()
        return [e for n in self.nodes for e in n.elements if e not in shared]

    def owner(self, e: str) -> str:
        for n in self.nodes:
            if e in n.matroid:
                return n.name
        raise SumError(f"element {e!r} is in no node")

    def all_ids(self) -> Set[str]:
        return {e for n in self.nodes for e in n.elements}

    def fresh_id(self, base: str, taken: Iterable[str] = ()) -> str:
        used = self.all_ids() | set(taken)
        i = 0
        while f"{base}{i}" in used:
            i += 1
        return f"{base}{i}"

    def fresh_name(self, base: str) -> str:
        used = set(self.names)
        i = 0
        while f"{base}{i}" in used:
            i += 1
        return f"{base}{i}"

    # surgery
    def replace_node(self, node: BasicNode) -> "ConflictTree":
        return ConflictTree(tuple(node if n.name == node.name else n for n in self.nodes), self.edges)

    def set_sumset(self, a: str, b: str, Z: Sequence[str]) -> "ConflictTree":
        edges = [(x, y, tuple(Z) if {x, y} == {a, b} else z) for x, y, z in self.edges]
        return ConflictTree(self.nodes, edges)

    def remove_leaf(self, name: str) -> "ConflictTree":
        if len(self.neighbors(name)) > 1:
            raise SumError(f"node {name} is not a leaf")
        return ConflictTree(
            tuple(n for n in self.nodes if n.name != name),
            tuple(e for e in self.edges if name not in (e[0], e[1])),
        )

    def add_leaf(self, parent: str, node: BasicNode, Z: Sequence[str]) -> "ConflictTree":
        return ConflictTree(self.nodes + (node,), self.edges + ((parent, node.name, tuple(Z)),))

    def validate(self) -> None:
        names = self.names
        if len(set(names)) != len(names):
            raise SumError("duplicate node names")
        if len(self.edges) != len(names) - 1:
            raise SumError("a conflict tree on n nodes needs n-1 sum edges")
        parent, _ = self.rooted()
        if len(parent) != len(names):
            raise SumError("sum edges do not connect all nodes")
        adjacent = {frozenset((a, b)): z for a, b, z in self.edges}
        for i, n1 in enumerate(self.nodes):
            for n2 in self.nodes[i + 1:]:
                common = set(n1.elements) & set(n2.elements)
                key = frozenset((n1.name, n2.name))
                if key not in adjacent:
                    if common:
                        raise SumError(f"nodes {n1.name} and {n2.name} share {sorted(common)} but are not adjacent")
                    continue
                z = adjacent[key]
                if set(z) != common:
                    raise SumError(f"sum edge {n1.name}-{n2.name}: declared {sorted(z)} but nodes share {sorted(common)}")
                if len(z) not in (0, 1, 3):
                    raise SumError(f"sum edge {n1.name}-{n2.name}: sum-set must have 0, 1 or 3 elements, got {len(z)}")
                if len(z) == 3:
                    for n in (n1, n2):
                        if not _is_triangle(n.matroid, list(z)):
                            raise SumError(f"sum edge {n1.name}-{n2.name}: {sorted(z)} is not a circuit of {n.name}")


def compose_tree(tree: ConflictTree, order: Optional[Sequence[int]] = None) -> BinaryMatroid:
    """Fold the sums along the tree edges, in the given edge order if any
    (default: breadth-first from the root)."""
    if len(tree.nodes) == 1:
        return tree.nodes[0].matroid
    if order is None:
        parent, depth = tree.rooted()
        order = sorted(range(len(tree.edges)), key=lambda i: min(depth[tree.edges[i][0]], depth[tree.edges[i][1]]))
    part: Dict[str, int] = {n.name: i for i, n in enumerate(tree.nodes)}
    mats: Dict[int, BinaryMatroid] = {i: n.matroid for i, n in enumerate(tree.nodes)}
    for idx in order:
        a, b, z = tree.edges[idx]
        pa, pb = part[a], part[b]
        try:
            m = matroid_sum(mats[pa], mats[pb])
        except SumError as exc:
            raise SumError(f"sum edge {a}-{b}: {exc}") from None
        mats[pa] = m
        del mats[pb]
        for k, v in part.items():
            if v == pb:
                part[k] = pa
    (only,) = mats.values()
    return only


# ---------------------------------------------------------------- terminal flipping

def terminal_flip(tree: ConflictTree, s: str, leaf: str, terminals: Iterable[str]) -> Optional[ConflictTree]:
    """Move one leaf terminal parallel to a shared element into the sub-leaf.

    Returns None when no terminal of the leaf is parallel to a shared element.
    """
    T = set(terminals)
    L = tree.node(leaf)
    M = L.matroid
    for z in sorted(tree.sumset(s, leaf)):
        if M.is_loop(z):
            continue
        for t in sorted(T & set(M.elements)):
            if M.parallel(z, t):
                new_leaf = node_delete(L, [t])
                new_s = node_add_parallel(tree.node(s), z, t)
                return tree.replace_node(new_leaf).replace_node(new_s)
    return None


# ---------------------------------------------------------------- degenerate sums

def normalize_tree(tree: ConflictTree) -> ConflictTree:
    """Rewrite sums that contractions or deletions made degenerate.

    A single shared element that is a loop on one side becomes a 1-sum after
    deleting it there and contracting it on the other side; a coloop on
    either side is deleted from both.  A 3-element shared set with a loop z3
    (the other two then parallel) becomes a 2-sum on z2: drop z1, z3 on that
    side, contract z3 and drop z1 on the other.
    """
    changed = True
    while changed:
        changed = False
        for a, b, Z in tree.edges:
            A, B = tree.node(a), tree.node(b)
            if len(Z) == 1:
                z = Z[0]
                if A.matroid.is_loop(z) or B.matroid.is_loop(z):
                    lo, hi = (A, B) if A.matroid.is_loop(z) else (B, A)
                    tree = tree.replace_node(node_delete(lo, [z])).replace_node(node_contract(hi, [z]))
                elif A.matroid.is_coloop(z) or B.matroid.is_coloop(z):
                    tree = tree.replace_node(node_delete(A, [z])).replace_node(node_delete(B, [z]))
                else:
                    continue
                tree = tree.set_sumset(a, b, ())
                changed = True
                break
            if len(Z) == 3:
                for X, Y in ((A, B), (B, A)):
                    MX = X.matroid
                    if _is_triangle(MX, list(Z)):
                        continue
                    loops = [z for z in Z if MX.is_loop(z)]
                    if len(loops) != 1 or not _is_triangle(Y.matroid, list(Z)):
                        raise SumError(f"sum edge {a}-{b}: unexpected degenerate shared set {sorted(Z)}")
                    z3 = loops[0]
                    z1, z2 = sorted(z for z in Z if z != z3)
                    tree = tree.replace_node(node_delete(X, [z1, z3]))
                    tree = tree.replace_node(node_delete(node_contract(Y, [z3]), [z1]))
                    tree = tree.set_sumset(a, b, (z2,))
                    changed = True
                    break
                if changed:
                    break
    return tree


# ---------------------------------------------------------------- clean cuts

@dataclass(frozen=True)
class CleanCut:
    graph: Multigraph  # relabeled graph; same bond matroid as the input
    swaps: Tuple[Tuple[str, str], ...]
    index: int
    H: FrozenSet[str]  # vertices of the clean component
    fallback: bool = False


def _inside(G: Multigraph, V: Set[str]) -> List[str]:
    return [e for e, u, v in G.edges if u in V and v in V]


def _component_graph(G: Multigraph, V: Set[str], removed: Set[str]) -> Multigraph:
    return Multigraph(sorted(V), [(e, u, v) for e, u, v in G.edges if u in V and v in V and e not in removed])


def is_clean_cut(G: Multigraph, Zs: Sequence[Sequence[str]], Zstar: Sequence[str], i: int, H: Iterable[str]) -> bool:
    """H is a component of G minus Zs[i], has no bridge, and holds no edge of
    any Zs[j] or of Zstar."""
    H = set(H)
    Zi = set(Zs[i])
    if not H or reachable_side(G, Zi, next(iter(H))) != H:
        return False
    sub = _component_graph(G, H, Zi)
    if bridges(sub):
        return False
    inner = set(sub.edge_ids)
    if any(inner & set(Z) for Z in Zs) or inner & set(Zstar):
        return False
    return True


def _swap(G: Multigraph, e: str, f: str) -> Multigraph:
    return G.rename_edges({e: f, f: e})


def _series_partner(G: Multigraph, e: str, cands: Iterable[str]) -> Optional[str]:
    """A candidate f with {e, f} a minimal cut of G."""
    base = len(components(G))
    for f in sorted(cands):
        if f == e:
            continue
        if len(components(G, [e, f])) > base and len(components(G, [e])) == base and len(components(G, [f])) == base:
            return f
    return None


def _clean_by_iteration(G: Multigraph, Zs: List[List[str]], Zstar: List[str]):
    swaps: List[Tuple[str, str]] = []
    zstar = set(Zstar)
    i = 0
    Zi = set(Zs[i])
    comps = [set(c) for c in components(G, Zi)]
    H = next((c for c in comps if not set(_inside(G, c)) & zstar), None)
    if H is None:
        for c in comps:
            hits = [e for e in _inside(G, c) if e in zstar]
            if len(hits) == 1:
                f = _series_partner(G, hits[0], Zi)
                if f is None:
                    return None
                G = _swap(G, hits[0], f)
                swaps.append((hits[0], f))
                break
        comps = [set(c) for c in components(G, Zi)]
        H = next((c for c in comps if not set(_inside(G, c)) & zstar), None)
        if H is None:
            return None
    for _ in range(4 * len(G.vertices) + 4):
        if is_clean_cut(G, Zs, Zstar, i, H):
            return G, swaps, i, H
        sub = _component_graph(G, H, Zi)
        br = sorted(bridges(sub))
        if br:
            # case 1: split H at a bridge and keep the side touching two cut edges
            e = br[0]
            side = reachable_side(sub, [e], sub.endpoints(e)[0])
            other = H - side
            touch = {}
            for z in Zi:
                u, v = G.endpoints(z)
                y = u if u in H else v
                touch[z] = y in side
            ones = [z for z, inside in touch.items() if inside]
            if len(ones) == 1:
                f, keep = ones[0], other
            elif len(ones) == 2:
                f = next(z for z, inside in touch.items() if not inside)
                keep = side
            else:
                return None
            G = _swap(G, e, f)
            swaps.append((e, f))
            Zi = set(Zs[i])
            H = keep
            continue
        moved = False
        for j, Z in enumerate(Zs):
            if j == i:
                continue
            inner = [z for z in Z if G.endpoints(z)[0] in H and G.endpoints(z)[1] in H]
            if len(inner) == 3:
                # case 2: a whole cut inside H; move to the component it isolates within H
                comps = [set(c) for c in components(G, Z)]
                cand = [c for c in comps if c < H]
                if not cand:
                    return None
                i, Zi, H = j, set(Z), min(cand, key=len)
                moved = True
                break
            if len(inner) == 2:
                # case 3: the third edge is a bridge of the far side; swap it into the current cut
                e = next(z for z in Z if z not in inner)
                f = _series_partner(G, e, Zi)
                if f is None:
                    return None
                G = _swap(G, e, f)
                swaps.append((e, f))
                comps = [set(c) for c in components(G, Z)]
                cand = [c for c in comps if c < H]
                if not cand:
                    return None
                i, Zi, H = j, set(Z), min(cand, key=len)
                moved = True
                break
        if not moved:
            return None
    return None


def _clean_by_search(G: Multigraph, Zs: List[List[str]], Zstar: List[str], limit: int = 20000):
    """Breadth-first search over relabelings by swaps of series edge pairs."""
    def found(g):
        for i, Z in enumerate(Zs):
            for c in components(g, Z):
                if is_clean_cut(g, Zs, Zstar, i, c):
                    return i, set(c)
        return None

    labels = [e for Z in Zs for e in Z] + list(Zstar)
    start = (G, ())
    seen = {G.edges}
    dq = deque([start])
    while dq and len(seen) < limit:
        g, path = dq.popleft()
        hit = found(g)
        if hit:
            return g, list(path), hit[0], hit[1]
        for e in labels:
            for f in g.edge_ids:
                if f == e or _series_partner(g, e, [f]) is None:
                    continue
                h = _swap(g, e, f)
                if h.edges not in seen:
                    seen.add(h.edges)
                    dq.append((h, path + ((e, f),)))
    return None


def find_clean_cut(G: Multigraph, Zs: Sequence[Sequence[str]], Zstar: Sequence[str] = ()) -> CleanCut:
    """Relabel series pairs of G until some Zs[i] is a clean cut.

    Follows the shrinking-component iteration: split the current component at
    a bridge, descend into a cut lying inside it, or swap a straddling edge
    into the current cut.  Should the iteration stall, a breadth-first search
    over swap sequences takes over.
    """
    Zs = [list(Z) for Z in Zs]
    Zstar = list(Zstar)
    if not Zs:
        raise SumError("no 3-element sum-sets to cut along")
    got = None
    for i, Z in enumerate(Zs):
        hit = next((set(c) for c in components(G, Z) if is_clean_cut(G, Zs, Zstar, i, c)), None)
        if hit is not None:
            got = G, [], i, hit
            break
    if got is None:
        got = _clean_by_iteration(G, Zs, Zstar)
    fallback = False
    if got is None:
        got = _clean_by_search(G, Zs, Zstar)
        fallback = True
    if got is None:
        raise SumError("no clean cut found")
    g, swaps, i, H = got
    return CleanCut(g, tuple(swaps), i, frozenset(H), fallback)


# ---------------------------------------------------------------- sub-leaf split

def split_cographic_subleaf(tree: ConflictTree, s: str, cut_edges: Sequence[str], H: Iterable[str]) -> Tuple[ConflictTree, str, int]:
    """Peel the clean component H (vertex set) off the cographic node s.

    ``cut_edges`` is the 3-edge cut that isolates H.  Its endpoints in H form
    the attachment set Y; depending on |Y| the new leaf hangs off s through a
    1-sum, a 2-sum on a new shared edge, or a 3-sum on a new apex star.
    Returns the new tree, the new leaf name and |Y|.
    """
    node = tree.node(s)
    if node.kind != "cographic":
        raise SumError(f"node {s} is not cographic")
    G = node.graph
    H = set(H)
    Y = sorted({u if u in H else v for z in cut_edges for u, v in [G.endpoints(z)]})
    inner = [(e, u, v) for e, u, v in G.edges if u in H and v in H]
    outer = [(e, u, v) for e, u, v in G.edges if not (u in H and v in H)]
    outside = [v for v in G.vertices if v not in H] + Y
    leaf_name = tree.fresh_name(f"{s}.h")
    if len(Y) == 1:
        G1 = Multigraph(outside, outer)
        H1 = Multigraph(sorted(H), inner)
        Z: Tuple[str, ...] = ()
    elif len(Y) == 2:
        f = tree.fresh_id("f")
        G1 = Multigraph(outside, outer + [(f, Y[0], Y[1])])
        H1 = Multigraph(sorted(H), inner + [(f, Y[0], Y[1])])
        Z = (f,)
    elif len(Y) == 3:
        fs = []
        for _ in range(3):
            fs.append(tree.fresh_id("f", fs))
        apex = "apex"
        while apex in G.vertices:
            apex += "'"
        G1 = Multigraph(outside + [apex], outer + [(fs[j], apex, Y[j]) for j in range(3)])
        H1 = Multigraph(sorted(H) + [apex], inner + [(fs[j], apex, Y[j]) for j in range(3)])
        Z = tuple(fs)
    else:
        raise SumError(f"attachment set of size {len(Y)}")
    new_tree = tree.replace_node(node.with_graph(G1)).add_leaf(s, BasicNode(leaf_name, "cographic", H1), Z)
    return new_tree, leaf_name, len(Y)


# ---------------------------------------------------------------- text format

def parse_tree_block(lines: Sequence[str], lineno: int = 1) -> ConflictTree:
    """``node <name> <kind>`` followed by its graph or matrix block, and
    ``sumedge <a> <b> [ids]`` lines."""
    nodes: List[BasicNode] = []
    edges = []
    cur: Optional[Tuple[str, str, int]] = None
    body: List[str] = []

    def flush():
        if cur is None:
            return
        name, kind, at = cur
        try:
            if kind == "r10like":
                skip = 0
                while skip < len(body) and not body[skip].strip():
                    skip += 1
                nodes.append(BasicNode(name, kind, rep=gf2core.parse_matrix_block(body[skip:], at + 1 + skip)))
            else:
                nodes.append(BasicNode(name, kind, graph=parse_graph_block(body, at + 1)))
        except (ValueError, MatroidError) as exc:
            raise SumError(f"node {name}: {exc}") from None

    for off, raw in enumerate(lines):
        no = lineno + off
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "node":
            flush()
            if len(parts) != 3 or parts[2] not in KINDS:
                raise SumError(f"line {no}: expected 'node <name> graphic|cographic|r10like'")
            cur, body = (parts[1], parts[2], no), []
        elif parts[0] == "sumedge":
            flush()
            cur, body = None, []
            if len(parts) < 3:
                raise SumError(f"line {no}: expected 'sumedge <a> <b> [ids]'")
            z = parts[3:]
            if len(z) not in (0, 1, 3):
                raise SumError(f"line {no}: sum edge {parts[1]}-{parts[2]}: sum-set must have 0, 1 or 3 elements, got {len(z)}")
            edges.append((parts[1], parts[2], tuple(z)))
        elif cur is not None:
            body.append(raw)
        else:
            raise SumError(f"line {no}: unexpected line outside a node block")
    flush()
    if not nodes:
        raise SumError(f"line {lineno}: tree has no nodes")
    tree = ConflictTree(tuple(nodes), tuple(edges))
    tree.validate()
    return tree


def format_tree_block(tree: ConflictTree) -> List[str]:
    out = []
    for n in tree.nodes:
        out.append(f"node {n.name} {n.kind}")
        if n.kind == "r10like":
            out.extend(gf2core.format_matrix_block(n.rep))
        else:
            out.extend(format_graph_block(n.graph))
    for a, b, z in tree.edges:
        out.append(" ".join(["sumedge", a, b, *z]))
    return out
