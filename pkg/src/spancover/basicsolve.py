"""
Exact Space Cover solvers for the basic building blocks.

Graphic instances become Steiner forest problems on G - T with one demand
pair per terminal edge.  The restricted graphic variant runs a Dreyfus-Wagner
style table that additionally tracks whether the designated terminal's
endpoints are joined without using the forced edge.  Small matroids of any
other shape (R10 and its relatives) are solved by exhaustive search after
the elementary reductions.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .gf2core import BinaryMatroid, dualize
from .graphs import Multigraph
from .preprocess import NO, YES, Instance, RestrictedInstance, preprocess

__all__ = [
    "SolveResult",
    "SolverError",
    "INF",
    "solve_exhaustive",
    "solve_r10",
    "steiner_tree",
    "SteinerTable",
    "steiner_forest",
    "solve_graphic",
    "solve_graphic_restricted",
    "solve_subset_feedback",
    "feedback_corank_guess",
    "solve_rsfs",
    "demand_groups",
]

INF = float("inf")


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    answer: str
    opt_weight: Optional[int] = None
    witness: Optional[FrozenSet[str]] = None
    stats: Dict[str, int] = field(default_factory=dict, compare=False)

    @classmethod
    def yes(cls, weight: int, witness: Iterable[str] = (), **stats) -> "SolveResult":
        return cls(YES, int(weight), frozenset(witness), dict(stats))

    @classmethod
    def no(cls, **stats) -> "SolveResult":
        return cls(NO, None, None, dict(stats))

    @property
    def ok(self) -> bool:
        return self.answer == YES

    def extended(self, extra: Iterable[str], dw: int = 0) -> "SolveResult":
        if not self.ok:
            return self
        return SolveResult(YES, self.opt_weight + dw, self.witness | frozenset(extra), self.stats)

    def __str__(self) -> str:
        if not self.ok:
            return "no"
        return f"yes {self.opt_weight} {{{','.join(sorted(self.witness))}}}"


# ---------------------------------------------------------------- exhaustive

def _search(inst: Instance, extra_ok=None) -> SolveResult:
    """Cheapest spanning F by depth-first search over positive-weight elements.

    Assumes zero-weight nonterminals were already contracted.
    """
    M = inst.matroid
    tmask = M.mask(inst.terminals)
    cand = sorted((e for e in M.elements if e not in inst.terminals), key=lambda e: (inst.weights[e], e))
    idx = [M.index(e) for e in cand]
    wts = [inst.weights[e] for e in cand]
    best = [inst.k + 1, None]

    def spanned(f: int) -> bool:
        if M.rank_mask(f | tmask) != M.rank_mask(f):
            return False
        return extra_ok is None or extra_ok(f)

    def dfs(i: int, f: int, w: int) -> None:
        if spanned(f):
            if w < best[0]:
                best[0], best[1] = w, f
            return
        for j in range(i, len(cand)):
            nw = w + wts[j]
            if nw >= best[0]:
                continue
            dfs(j + 1, f | (1 << idx[j]), nw)

    dfs(0, 0, 0)
    if best[1] is None:
        return SolveResult.no()
    return SolveResult.yes(best[0], M.ids(best[1]))


def solve_exhaustive(inst: Instance, limit: Optional[int] = None) -> SolveResult:
    """Reduce, then search all subsets; ``limit`` bounds the reduced ground set."""
    red, trace = preprocess(inst)
    if red == YES:
        return SolveResult.yes(0, trace.contracted)
    if red == NO:
        return SolveResult.no()
    if limit is not None and len(red.matroid) > limit:
        raise SolverError(f"reduced ground set has {len(red.matroid)} elements, more than {limit}")
    return _search(red).extended(trace.contracted)


def solve_r10(inst: Instance) -> SolveResult:
    """Matroids derived from R10 shrink to at most 20 elements after reduction."""
    return solve_exhaustive(inst, limit=20)


# ---------------------------------------------------------------- Steiner trees

def _shortest_paths(G: Multigraph, w: Dict[str, int]):
    """All-pairs distances with predecessor edges, by Dijkstra from each vertex."""
    adj = G.adjacency()
    dist: Dict[str, Dict[str, float]] = {}
    pred: Dict[str, Dict[str, Tuple[str, str]]] = {}
    for s in G.vertices:
        d = {s: 0}
        p: Dict[str, Tuple[str, str]] = {}
        heap = [(0, s)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > d[u]:
                continue
            for e, v in adj[u]:
                if v == u:
                    continue
                nd = du + w[e]
                if nd < d.get(v, INF):
                    d[v] = nd
                    p[v] = (e, u)
                    heapq.heappush(heap, (nd, v))
        dist[s] = d
        pred[s] = p
    return dist, pred


class SteinerTable:
    """Dreyfus-Wagner table over a list of terminal vertices.

    ``cost(mask)`` is the weight of a cheapest tree touching the terminals in
    ``mask``; ``edges(mask)`` rebuilds one such tree.
    """

    def __init__(self, G: Multigraph, w: Dict[str, int], terminals: Sequence[str]):
        self.G = G
        self.terminals = list(terminals)
        self.dist, self.pred = _shortest_paths(G, w)
        verts = list(G.vertices)
        p = len(self.terminals)
        self.dp: List[Optional[Dict[str, float]]] = [None] * (1 << p)
        self.back: List[Optional[Dict[str, tuple]]] = [None] * (1 << p)
        for i, s in enumerate(self.terminals):
            ds = self.dist[s]
            self.dp[1 << i] = {v: ds.get(v, INF) for v in verts}
            self.back[1 << i] = {v: ("path", s) for v in verts}
        for mask in range(1, 1 << p):
            if mask & (mask - 1) == 0:
                continue
            merged: Dict[str, float] = {}
            mback: Dict[str, tuple] = {}
            low = mask & -mask
            for v in verts:
                best, arg = INF, None
                sub = (mask - 1) & mask
                while sub:
                    if sub & low:  # each split counted once
                        c = self.dp[sub][v] + self.dp[mask ^ sub][v]
                        if c < best:
                            best, arg = c, sub
                    sub = (sub - 1) & mask
                merged[v] = best
                mback[v] = ("split", arg)
            row: Dict[str, float] = {}
            rback: Dict[str, tuple] = {}
            for v in verts:
                best, arg = merged[v], ("split", mback[v][1])
                for u in verts:
                    c = merged[u] + self.dist[u].get(v, INF)
                    if c < best:
                        best, arg = c, ("move", u)
                row[v] = best
                rback[v] = arg
            self.dp[mask] = row
            self.back[mask] = rback

    def cost(self, mask: int) -> float:
        if mask == 0:
            return 0
        low = (mask & -mask).bit_length() - 1
        return self.dp[mask][self.terminals[low]]

    def _path(self, a: str, b: str) -> List[str]:
        out = []
        p = self.pred[a]
        while b != a:
            e, prev = p[b]
            out.append(e)
            b = prev
        return out

    def edges(self, mask: int) -> FrozenSet[str]:
        if mask == 0 or self.cost(mask) == INF:
            return frozenset()
        low = (mask & -mask).bit_length() - 1
        out: set = set()
        self._collect(mask, self.terminals[low], out)
        return frozenset(out)

    def _collect(self, mask: int, v: str, out: set) -> None:
        kind, arg = self.back[mask][v]
        if kind == "path":
            out.update(self._path(arg, v))
        elif kind == "move":
            out.update(self._path(arg, v))
            self._collect(mask, arg, out)
        else:
            self._collect(arg, v, out)
            self._collect(mask ^ arg, v, out)


def steiner_tree(G: Multigraph, w: Dict[str, int], S: Sequence[str], k: Optional[int] = None) -> Dict[FrozenSet[str], float]:
    """Minimum Steiner tree weight for every subset of S (INF when none, or above k)."""
    S = list(dict.fromkeys(S))
    table = SteinerTable(G, w, S)
    out = {}
    for mask in range(1 << len(S)):
        c = table.cost(mask)
        if k is not None and c > k:
            c = INF
        out[frozenset(s for i, s in enumerate(S) if mask >> i & 1)] = c
    return out


class _UnionFind:
    def __init__(self):
        self.parent: Dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def demand_groups(demands: Sequence[Tuple[str, str]]) -> List[List[str]]:
    """Vertex sets of the components of the demand graph, ordered by smallest vertex."""
    uf = _UnionFind()
    for a, b in demands:
        uf.union(a, b)
    groups: Dict[str, List[str]] = {}
    for x in sorted(uf.parent):
        groups.setdefault(uf.find(x), []).append(x)
    return sorted(groups.values(), key=lambda g: g[0])


def _forest_dp(t: int, W: Dict[int, float], k: int):
    """W'(J) = min over nonempty I in J of W'(J - I) + W(I); returns the table
    and the chosen I for each J."""
    Wp = [INF] * (1 << t)
    choice = [0] * (1 << t)
    Wp[0] = 0
    for J in range(1, 1 << t):
        low = J & -J
        best, arg = INF, 0
        I = J
        while I:
            if I & low:  # the group with the lowest index sits in exactly one tree
                c = Wp[J ^ I] + W[I]
                if c < best:
                    best, arg = c, I
            I = (I - 1) & J
        Wp[J] = best if best <= k else INF
        choice[J] = arg
    return Wp, choice


def steiner_forest(G: Multigraph, w: Dict[str, int], demands: Sequence[Tuple[str, str]], k: int) -> SolveResult:
    """Cheapest edge set joining every demand pair, if its weight is at most k."""
    demands = [(a, b) for a, b in demands if a != b]
    if not demands:
        return SolveResult.yes(0, ())
    groups = demand_groups(demands)
    t = len(groups)
    positive = all(w[e] > 0 for e in G.edge_ids)
    if positive and sum(len(g) for g in groups) > k + t:
        return SolveResult.no()
    flat = [v for g in groups for v in g]
    offs, bits = [], 0
    for g in groups:
        offs.append(((1 << len(g)) - 1) << bits)
        bits += len(g)
    table = SteinerTable(G, w, flat)

    def vmask(I: int) -> int:
        m = 0
        for i in range(t):
            if I >> i & 1:
                m |= offs[i]
        return m

    W = {}
    for I in range(1, 1 << t):
        c = table.cost(vmask(I))
        W[I] = c if c <= k else INF
    Wp, choice = _forest_dp(t, W, k)
    full = (1 << t) - 1
    if Wp[full] == INF:
        return SolveResult.no()
    F: set = set()
    J = full
    while J:
        I = choice[J]
        F |= table.edges(vmask(I))
        J ^= I
    return SolveResult.yes(sum(w[e] for e in F), F)


def _graph_reduce(G: Multigraph, weights: Dict[str, int], terminals, keep: Iterable[str] = ()):
    """Contract zero-weight nonterminal edges (except ``keep``) and drop loops.

    Returns the reduced graph, remaining terminal edges, and the contracted ids.
    """
    keep = set(keep)
    contracted = []
    for e in G.edge_ids:
        if e not in terminals and e not in keep and weights[e] == 0:
            contracted.append(e)
    for e in contracted:
        G = G.contract_edge(e)
    loops = [e for e, u, v in G.edges if u == v and e not in keep]
    G = G.delete_edges(loops)
    T = [e for e in G.edge_ids if e in terminals]
    return G, T, contracted


def _check_graph(inst: Instance, G: Multigraph) -> None:
    if set(G.edge_ids) != set(inst.matroid.elements):
        raise SolverError("graph edges do not match the matroid ground set")


def solve_graphic(inst: Instance, G: Multigraph) -> SolveResult:
    """Space Cover on a cycle matroid as Steiner forest on G - T."""
    _check_graph(inst, G)
    H, T, contracted = _graph_reduce(G, inst.weights, inst.terminals)
    demands = [H.endpoints(e) for e in T]
    res = steiner_forest(H.delete_edges(T), inst.weights, demands, inst.k)
    return res.extended(contracted)


# ---------------------------------------------------------------- restricted graphic

class _RestrictedTable:
    """c(v, X, l): cheapest subtree of G' with at most l edges that contains
    the terminal vertices X and v, such that x1 and y1 (when in X) are joined
    avoiding the forced edge, and a lone x1 or y1 in X reaches v avoiding it."""

    def __init__(self, G: Multigraph, w: Dict[str, int], Z: Sequence[str], x1: str, y1: str, estar: str, L: int):
        self.G, self.w, self.Z = G, w, list(Z)
        self.L = L
        self.verts = list(G.vertices)
        self.nbrs = {v: [(e, u) for e, u in G.adjacency()[v] if u != v] for v in self.verts}
        self.x1bit = 1 << self.Z.index(x1)
        self.y1bit = 1 << self.Z.index(y1)
        self.estar = estar
        self.memo: Dict[int, Tuple[list, list]] = {}
        self.amemo: Dict[int, Tuple[list, list]] = {}

    def _one_end(self, X: int) -> bool:
        return bool(X & self.x1bit) != bool(X & self.y1bit)

    def table(self, X: int):
        """(c, back): c[l][v] for l = 0..L."""
        if X in self.memo:
            return self.memo[X]
        verts, L = self.verts, self.L
        c = [{v: INF for v in verts} for _ in range(L + 1)]
        back = [{v: None for v in verts} for _ in range(L + 1)]
        if X & (X - 1) == 0:
            only = self.Z[X.bit_length() - 1]
            c[0][only] = 0
            back[0][only] = ("base",)
        subs = []
        Y = (X - 1) & X
        while Y:
            subs.append(Y)
            Y = (Y - 1) & X
        self.memo[X] = (c, back)  # sub-tables never reach back to X
        for l in range(1, L + 1):
            a_full, a_back = self.attach(X, l - 1)
            for u in verts:
                best, arg = c[l - 1][u], ("prev",)
                if a_full[u] < best:
                    best, arg = a_full[u], ("edge",) + a_back[u]
                for Y in subs:
                    rest = X ^ Y
                    crest = self.table(rest)[0]
                    for l1 in range(l):
                        left = crest[l1][u]
                        if left >= best:
                            continue
                        ay, ayb = self.attach(Y, l - 1 - l1)
                        val = left + ay[u]
                        if val < best:
                            best, arg = val, ("split", Y, l1) + ayb[u]
                c[l][u] = best
                back[l][u] = arg
        return c, back

    def attach(self, Y: int, l: int):
        """a(u, Y, l) = min over edges uv of c(v, Y, l) + w(uv), honoring the
        rule that the forced edge may not carry a lone x1/y1 path."""
        key = (Y, l)
        if key in self.amemo:
            return self.amemo[key]
        cy = self.table(Y)[0][l]
        forbid = self._one_end(Y)
        vals, args = {}, {}
        for u in self.verts:
            best, arg = INF, None
            for e, v in self.nbrs[u]:
                if forbid and e == self.estar:
                    continue
                val = cy[v] + self.w[e]
                if val < best:
                    best, arg = val, (e, v)
            vals[u], args[u] = best, arg
        self.amemo[key] = (vals, args)
        return vals, args

    def value(self, X: int) -> Tuple[float, Optional[str]]:
        c = self.table(X)[0][self.L]
        v = min(self.verts, key=lambda x: (c[x], x))
        return c[v], v

    def edges(self, X: int, l: int, u: str, out: set) -> None:
        back = self.table(X)[1][l][u]
        kind = back[0]
        if kind == "base":
            return
        if kind == "prev":
            self.edges(X, l - 1, u, out)
        elif kind == "edge":
            _, e, v = back
            out.add(e)
            self.edges(X, l - 1, v, out)
        else:
            _, Y, l1, e, v = back
            out.add(e)
            self.edges(X ^ Y, l1, u, out)
            self.edges(Y, l - 1 - l1, v, out)


def solve_graphic_restricted(inst: RestrictedInstance, G: Multigraph) -> SolveResult:
    """Restricted Space Cover on a cycle matroid: the endpoints of tstar must
    be joined in F without the forced edge estar."""
    _check_graph(inst, G)
    es, ts = inst.estar, inst.tstar
    H, T, contracted = _graph_reduce(G, inst.weights, inst.terminals, keep=[es])
    if ts not in T:
        # tstar became a loop, so it is spanned by nothing: plain problem
        return _demoted(H, inst, T, contracted)
    p, q = H.endpoints(es)
    if p == q:
        H = H.delete_edges([es])
        return _demoted(H, inst, T, contracted + [es])
    H = H.delete_edges([e for e in T if e != ts and H.endpoints(e)[0] == H.endpoints(e)[1]])
    T = [e for e in T if e in set(H.edge_ids)]
    k = inst.k
    x1, y1 = H.endpoints(ts)
    demands = [H.endpoints(e) for e in T]
    Gp = H.delete_edges(T)
    groups = demand_groups(demands)
    groups.sort(key=lambda g: (x1 not in g, g[0]))  # the group of tstar first
    t = len(groups)
    if sum(len(g) for g in groups) > k + 1 + t:
        return SolveResult.no()
    flat = [v for g in groups for v in g]
    offs, bits = [], 0
    for g in groups:
        offs.append(((1 << len(g)) - 1) << bits)
        bits += len(g)

    def vmask(I: int) -> int:
        m = 0
        for i in range(t):
            if I >> i & 1:
                m |= offs[i]
        return m

    plain = SteinerTable(Gp, inst.weights, flat)
    restricted = _RestrictedTable(Gp, inst.weights, flat, x1, y1, es, k + 1)
    W = {}
    for I in range(1, 1 << t):
        zm = vmask(I)
        if I & 1:
            if bin(zm).count("1") > k + 2:
                W[I] = INF
                continue
            c, _ = restricted.value(zm)
        else:
            c = plain.cost(zm)
        W[I] = c if c <= k else INF
    Wp, choice = _forest_dp(t, W, k)
    full = (1 << t) - 1
    if Wp[full] == INF:
        return SolveResult.no()
    F: set = set()
    J = full
    while J:
        I = choice[J]
        zm = vmask(I)
        if I & 1:
            _, root = restricted.value(zm)
            restricted.edges(zm, k + 1, root, F)
        else:
            F |= plain.edges(zm)
        J ^= I
    weight = sum(inst.weights[e] for e in F)
    return SolveResult.yes(weight, F | set(contracted))


def _demoted(H: Multigraph, inst: Instance, T: List[str], contracted: List[str]) -> SolveResult:
    Tset = set(T)
    H = H.delete_edges([e for e in T if H.endpoints(e)[0] == H.endpoints(e)[1]])
    T = [e for e in H.edge_ids if e in Tset]
    demands = [H.endpoints(e) for e in T]
    res = steiner_forest(H.delete_edges(T), inst.weights, demands, inst.k)
    return res.extended(contracted)


# ---------------------------------------------------------------- duality helpers

def solve_subset_feedback(M: BinaryMatroid, T: Iterable[str], k: int) -> SolveResult:
    """Fewest deletions outside T that leave no circuit through T.

    A circuit of M - F meets t exactly when t is not a coloop of M - F, that
    is when t is not spanned by F in the dual.  So this is unit-weight Space
    Cover on the dual, solved exactly here by exhaustive search.
    """
    T = frozenset(T)
    if not T:
        return SolveResult.yes(0, ())
    D = dualize(M)
    inst = Instance(D, {e: 1 for e in M.elements}, T, k)
    return solve_exhaustive(inst)


def feedback_corank_guess(M: BinaryMatroid, T: Iterable[str]) -> int:
    """Size of a smallest set spanning T in the dual when T itself may be used:
    the dual rank of T, |T| - r(M) + r(E - T)."""
    T = frozenset(T)
    rest = M.ground_mask & ~M.mask(T)
    return len(T) - M.full_rank() + M.rank_mask(rest)


def solve_rsfs(M: BinaryMatroid, w: Dict[str, int], T: Iterable[str], k: int, solver=None) -> SolveResult:
    """Cheapest F outside T with no circuit of M - F meeting T, via Space Cover on the dual."""
    inst = Instance(dualize(M), dict(w), frozenset(T), k)
    return (solver or solve_exhaustive)(inst)
