"""
Labeled multigraphs with loops and parallel edges, their cycle and bond
matroids, and the small set of cut routines the solvers rely on.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .gf2core import BinaryMatroid, dualize

__all__ = [
    "Multigraph",
    "GraphError",
    "cycle_matroid",
    "bond_matroid",
    "bridges",
    "components",
    "blocks",
    "reachable_side",
    "boundary",
    "min_cut",
    "parse_graph_block",
    "format_graph_block",
]

Edge = Tuple[str, str, str]


class GraphError(ValueError):
    pass


class Multigraph:
    """Immutable multigraph; every edge is ``(id, u, v)`` and ``u == v`` is a loop."""

    __slots__ = ("vertices", "edges", "_eindex", "_adj")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.edges: Tuple[Edge, ...] = tuple((str(e), str(u), str(v)) for e, u, v in edges)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        self._eindex: Dict[str, int] = {}
        for i, (e, u, v) in enumerate(self.edges):
            if e in self._eindex:
                raise GraphError(f"duplicate edge id {e!r}")
            if u not in vset or v not in vset:
                raise GraphError(f"edge {e!r} has an unknown endpoint")
            self._eindex[e] = i
        self._adj: Optional[Dict[str, List[Tuple[str, str]]]] = None

    def __repr__(self) -> str:
        return f"Multigraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(e for e, _, _ in self.edges)

    def has_edge(self, e: str) -> bool:
        return e in self._eindex

    def endpoints(self, e: str) -> Tuple[str, str]:
        try:
            _, u, v = self.edges[self._eindex[e]]
        except KeyError:
            raise GraphError(f"unknown edge {e!r}") from None
        return u, v

    def adjacency(self) -> Dict[str, List[Tuple[str, str]]]:
        """vertex -> list of (edge id, other endpoint); loops listed once."""
        if self._adj is None:
            adj: Dict[str, List[Tuple[str, str]]] = {v: [] for v in self.vertices}
            for e, u, v in self.edges:
                adj[u].append((e, v))
                if u != v:
                    adj[v].append((e, u))
            self._adj = adj
        return self._adj

    def degree(self, v: str, within: Optional[Set[str]] = None) -> int:
        return sum(1 for e, _ in self.adjacency()[v] if within is None or e in within)

    # surgery, always returning new graphs
    def delete_edges(self, X: Iterable[str]) -> "Multigraph":
        drop = set(X)
        return Multigraph(self.vertices, [t for t in self.edges if t[0] not in drop])

    def keep_edges(self, X: Iterable[str]) -> "Multigraph":
        keep = set(X)
        return Multigraph(self.vertices, [t for t in self.edges if t[0] in keep])

    def delete_vertices(self, X: Iterable[str]) -> "Multigraph":
        drop = set(X)
        return Multigraph(
            [v for v in self.vertices if v not in drop],
            [t for t in self.edges if t[1] not in drop and t[2] not in drop],
        )

    def induced(self, X: Iterable[str]) -> "Multigraph":
        keep = set(X)
        return self.delete_vertices([v for v in self.vertices if v not in keep])

    def merge_vertices(self, keep: str, gone: str) -> "Multigraph":
        if keep == gone:
            return self
        edges = []
        for e, u, v in self.edges:
            edges.append((e, keep if u == gone else u, keep if v == gone else v))
        return Multigraph([v for v in self.vertices if v != gone], edges)

    def contract_edge(self, e: str) -> "Multigraph":
        """Contract e; a loop is deleted.  The surviving vertex is the first endpoint."""
        u, v = self.endpoints(e)
        g = self.delete_edges([e])
        return g.merge_vertices(u, v)

    def add_vertex(self, v: str) -> "Multigraph":
        if v in self.vertices:
            raise GraphError(f"vertex {v!r} exists")
        return Multigraph(self.vertices + (v,), self.edges)

    def add_edge(self, e: str, u: str, v: str) -> "Multigraph":
        return Multigraph(self.vertices, self.edges + ((e, u, v),))

    def rename_edges(self, mapping: Dict[str, str]) -> "Multigraph":
        return Multigraph(self.vertices, [(mapping.get(e, e), u, v) for e, u, v in self.edges])

    def fresh_vertex(self, base: str = "x") -> str:
        i = 0
        vs = set(self.vertices)
        while f"{base}{i}" in vs:
            i += 1
        return f"{base}{i}"


def cycle_matroid(G: Multigraph) -> BinaryMatroid:
    """Vertex-edge incidence matrix over GF(2); loops give zero columns."""
    vpos = {v: i for i, v in enumerate(G.vertices)}
    cols = []
    for _, u, v in G.edges:
        cols.append(0 if u == v else (1 << vpos[u]) | (1 << vpos[v]))
    return BinaryMatroid.from_columns(G.edge_ids, cols)


def bond_matroid(G: Multigraph) -> BinaryMatroid:
    return dualize(cycle_matroid(G))


def components(G: Multigraph, removed: Iterable[str] = ()) -> List[List[str]]:
    """Vertex sets of the components of G minus the removed edges."""
    gone = set(removed)
    adj = G.adjacency()
    seen: Set[str] = set()
    out = []
    for s in G.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for e, y in adj[x]:
                if e not in gone and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(comp)
    return out


def reachable_side(G: Multigraph, S: Iterable[str], x) -> Set[str]:
    """Vertices reachable from x (a vertex or a collection of vertices) in G - S."""
    gone = set(S)
    start = [x] if isinstance(x, str) else list(x)
    adj = G.adjacency()
    seen = set(start)
    stack = list(start)
    while stack:
        a = stack.pop()
        for e, b in adj[a]:
            if e not in gone and b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def boundary(G: Multigraph, W: Iterable[str]) -> FrozenSet[str]:
    """Edges with exactly one endpoint in W."""
    ws = set(W)
    return frozenset(e for e, u, v in G.edges if (u in ws) != (v in ws))


def bridges(G: Multigraph) -> FrozenSet[str]:
    """Bridges by DFS low-points; parallel edges are told apart by id."""
    adj = G.adjacency()
    disc: Dict[str, int] = {}
    low: Dict[str, int] = {}
    out: Set[str] = set()
    counter = 0
    for root in G.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for e, w in it:
                if e == via or w == v:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > disc[p]:
                        out.add(via)
    return frozenset(out)


def blocks(G: Multigraph) -> List[FrozenSet[str]]:
    """Edge sets of the blocks (2-connected pieces and bridges); each loop is its own block."""
    adj = G.adjacency()
    disc: Dict[str, int] = {}
    low: Dict[str, int] = {}
    out: List[FrozenSet[str]] = []
    counter = 0
    for root in G.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        estack: List[str] = []
        stack = [(root, None, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for e, w in it:
                if e == via or w == v:
                    continue
                if w in disc:
                    if disc[w] < disc[v]:
                        estack.append(e)
                    low[v] = min(low[v], disc[w])
                else:
                    estack.append(e)
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] >= disc[p]:
                        blk = []
                        while True:
                            x = estack.pop()
                            blk.append(x)
                            if x == via:
                                break
                        out.append(frozenset(blk))
    for e, u, v in G.edges:
        if u == v:
            out.append(frozenset([e]))
    return out


def min_cut(G: Multigraph, X: Iterable[str], Y: Iterable[str], limit: Optional[int] = None):
    """Unit-capacity max flow between vertex sets X and Y.

    Returns ``(value, R_min, R_max)`` where R_min is the source side closest to
    X and R_max the one furthest from it.  If ``limit`` is given and the flow
    exceeds it, returns ``(limit + 1, None, None)``.
    """
    xs, ys = set(X), set(Y)
    if xs & ys:
        raise GraphError("X and Y intersect")
    adj = G.adjacency()
    flow: Dict[str, int] = {}  # +1: u->v, -1: v->u, over the stored (u, v)

    def residual(e: str, a: str, b: str) -> bool:
        u, _ = G.endpoints(e)
        f = flow.get(e, 0)
        return f != (1 if a == u else -1)

    def push(e: str, a: str) -> None:
        u, _ = G.endpoints(e)
        flow[e] = flow.get(e, 0) + (1 if a == u else -1)

    value = 0
    while True:
        prev: Dict[str, Tuple[str, str]] = {}
        seen = set(xs)
        dq = deque(xs)
        hit = None
        while dq and hit is None:
            a = dq.popleft()
            for e, b in adj[a]:
                if b in seen or a == b or not residual(e, a, b):
                    continue
                seen.add(b)
                prev[b] = (e, a)
                if b in ys:
                    hit = b
                    break
                dq.append(b)
        if hit is None:
            break
        b = hit
        while b not in xs:
            e, a = prev[b]
            push(e, a)
            b = a
        value += 1
        if limit is not None and value > limit:
            return limit + 1, None, None
    r_min = seen
    # vertices that can still reach Y in the residual graph
    back = set(ys)
    dq = deque(ys)
    while dq:
        b = dq.popleft()
        for e, a in adj[b]:
            if a in back or a == b or not residual(e, a, b):
                continue
            back.add(a)
            dq.append(a)
    r_max = set(G.vertices) - back
    return value, r_min, r_max


def parse_graph_block(lines: Sequence[str], lineno: int = 1) -> Multigraph:
    """Parse ``v <id>`` and ``e <id> <u> <v>`` lines."""
    verts: List[str] = []
    edges: List[Edge] = []
    for off, raw in enumerate(lines):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "v" and len(parts) == 2:
            verts.append(parts[1])
        elif parts[0] == "e" and len(parts) == 4:
            edges.append((parts[1], parts[2], parts[3]))
        else:
            raise GraphError(f"line {lineno + off}: expected 'v <id>' or 'e <id> <u> <v>'")
    try:
        return Multigraph(verts, edges)
    except GraphError as exc:
        raise GraphError(f"line {lineno}: {exc}") from None


def format_graph_block(G: Multigraph) -> List[str]:
    return [f"v {v}" for v in G.vertices] + [f"e {e} {u} {v}" for e, u, v in G.edges]
