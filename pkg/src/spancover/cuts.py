"""
Important cuts, semi-important sets, and the branching solvers for Space
Cover on bond matroids.

On a bond matroid M*(G), a set F spans the terminal edges T exactly when
every terminal edge is a bridge of G - F.  The solvers expand weights into
unit parallel copies and branch over semi-important sets around a vertex
whose side of the final forest touches at most two terminal edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .basicsolve import SolveResult, SolverError
from .graphs import Multigraph, boundary, bridges, components, min_cut, reachable_side
from .preprocess import Instance, RestrictedInstance

__all__ = [
    "ImportantCut",
    "SemiImportantSet",
    "enumerate_important_cuts",
    "enumerate_semi_important",
    "semi_important_gadget",
    "solve_cographic",
    "solve_cographic_restricted",
    "unit_expand",
    "CographicStats",
]

SEP = "\t"  # never appears in ids read from files


@dataclass(frozen=True)
class ImportantCut:
    cut: FrozenSet[str]
    side: FrozenSet[str]


@dataclass(frozen=True)
class SemiImportantSet:
    W: FrozenSet[str]
    boundary: FrozenSet[str]


# ---------------------------------------------------------------- important cuts

def _raw_important(G: Multigraph, X: FrozenSet[str], Y: FrozenSet[str], k: int, chosen: FrozenSet[str], out: Set[FrozenSet[str]]) -> None:
    lam, _, rmax = min_cut(G, X, Y, limit=k)
    if lam > k:
        return
    if lam == 0:
        out.add(chosen)
        return
    e, u, v = min(
        (e, u, v) if u in rmax else (e, v, u)
        for e, u, v in G.edges
        if (u in rmax) != (v in rmax)
    )
    _raw_important(G.delete_edges([e]), frozenset(rmax), Y, k - 1, chosen | {e}, out)
    if v not in Y:
        _raw_important(G, frozenset(rmax | {v}), Y, k, chosen, out)


def _is_important(G: Multigraph, X: Set[str], Y: Set[str], S: FrozenSet[str]) -> Optional[FrozenSet[str]]:
    """Source side of S if S is an important (X,Y)-cut, else None."""
    R = reachable_side(G, S, X)
    if R & Y:
        return None
    if boundary(G, R) != S:  # not inclusion-minimal
        return None
    if not all(Y & reachable_side(G, S - {e}, X) for e in S):
        return None
    adj = G.adjacency()
    nbrs = {b for a in R for _, b in adj[a]} - R - Y
    for v in sorted(nbrs):
        lam, _, _ = min_cut(G, R | {v}, Y, limit=len(S))
        if lam <= len(S):
            return None
    return frozenset(R)


def enumerate_important_cuts(G: Multigraph, X: Iterable[str], Y: Iterable[str], k: int) -> List[ImportantCut]:
    """Every important (X,Y)-cut with at most k edges.

    Branches on an edge leaving the furthest minimum cut (edge in the cut, or
    its far endpoint joins the source side), then keeps the outputs that pass
    the importance test.
    """
    X, Y = frozenset(X), frozenset(Y)
    if X & Y:
        raise ValueError("X and Y must be disjoint")
    raw: Set[FrozenSet[str]] = set()
    _raw_important(G, X, Y, k, frozenset(), raw)
    out = []
    for S in raw:
        R = _is_important(G, set(X), set(Y), S)
        if R is not None:
            out.append(ImportantCut(S, R))
    out.sort(key=lambda c: (len(c.cut), sorted(c.cut)))
    return out


# ---------------------------------------------------------------- semi-important sets

def semi_important_gadget(G: Multigraph, T: Iterable[str], k: int, compact: bool = True) -> Tuple[Multigraph, str]:
    """G plus a sink joined to every terminal so that keeping one terminal on
    the source side costs exactly k+1 extra edges while a gadget vertex on the
    source side costs more than 2k+1.

    Each terminal gets k+1 private vertices, each of which reaches the sink
    through 2k+3 internally disjoint two-edge paths.  With ``compact`` the
    gadget is replaced by k+1 parallel terminal-sink edges, which has the same
    cuts of size at most 2k+1.
    """
    sink = G.fresh_vertex("sink")
    verts = list(G.vertices) + [sink]
    edges = list(G.edges)
    n = 0
    for v in sorted(T):
        for j in range(k + 1):
            if compact:
                edges.append((f"g{SEP}{n}", v, sink))
                n += 1
                continue
            mid = f"{v}{SEP}{j}"
            verts.append(mid)
            edges.append((f"g{SEP}{n}", v, mid))
            n += 1
            for i in range(2 * k + 3):
                far = f"{v}{SEP}{j}{SEP}{i}"
                verts.append(far)
                edges.append((f"g{SEP}{n}", mid, far))
                edges.append((f"g{SEP}{n + 1}", far, sink))
                n += 2
    return Multigraph(verts, edges), sink


def _connected(G: Multigraph, W: FrozenSet[str], s: str) -> bool:
    return reachable_side(G.induced(W), (), s) == set(W)


def enumerate_semi_important(G: Multigraph, s: str, T: Iterable[str], k: int, compact: bool = True) -> List[SemiImportantSet]:
    """Every (s,T,k)-semi-important set: connected W holding s and at most one
    terminal, boundary at most k, and no better interesting set (a superset
    with no larger boundary and no extra terminal).

    Candidates come from important (s,T)-cuts of size at most k, and from
    important (s,sink)-cuts of size at most 2k+1 in the sink gadget.  Those
    that are interesting and undominated among the candidates are returned.
    """
    T = frozenset(T)
    if s in T:
        raise ValueError("s must not be a terminal")
    cands: Set[FrozenSet[str]] = set()
    for c in enumerate_important_cuts(G, {s}, T, k):
        cands.add(c.side)
    if T:
        H, sink = semi_important_gadget(G, T, k, compact)
        vs = set(G.vertices)
        for c in enumerate_important_cuts(H, {s}, {sink}, 2 * k + 1):
            cands.add(frozenset(c.side & vs))
    good = []
    for W in cands:
        if len(W & T) > 1 or not _connected(G, W, s):
            continue
        D = boundary(G, W)
        if len(D) <= k:
            good.append((W, D, W & T))
    out = []
    for W, D, t in good:
        if any(W < W2 and len(D2) <= len(D) and t2 <= t for W2, D2, t2 in good):
            continue
        out.append(SemiImportantSet(W, D))
    out.sort(key=lambda x: (len(x.boundary), sorted(x.W)))
    return out


# ---------------------------------------------------------------- cographic Space Cover

def unit_expand(G: Multigraph, weights: Dict[str, int], terminals: FrozenSet[str], k: int, heavy: Iterable[str] = ()):
    """Replace each nonterminal edge by min(w, k+1) parallel unit copies
    (edges in ``heavy`` always get k+1).  Returns the new graph and a map
    copy id -> original id."""
    heavy = set(heavy)
    edges = []
    origin: Dict[str, str] = {}
    for e, u, v in G.edges:
        if e in terminals:
            edges.append((e, u, v))
            continue
        n = k + 1 if e in heavy else min(weights[e], k + 1)
        for i in range(n):
            cid = f"{e}{SEP}{i}"
            edges.append((cid, u, v))
            origin[cid] = e
    return Multigraph(G.vertices, edges), origin


@dataclass
class CographicStats:
    calls: int = 0
    branches: int = 0
    contractions: int = 0


def _absorb(G: Multigraph, T: Set[str], protect: Optional[str] = None, stats: Optional[CographicStats] = None):
    """Contract terminal edges lying in a cut made only of terminals.

    Such an edge joins two components of G - T.  The protected terminal is
    contracted only when no other terminal edge qualifies.  Returns the new
    graph and terminal set, or None when a terminal became a loop (it can
    then never be a bridge).
    """
    T = set(T)
    while True:
        for e in T:
            u, v = G.endpoints(e)
            if u == v:
                return None
        comp = {}
        for i, c in enumerate(components(G, T)):
            for x in c:
                comp[x] = i
        crossing = sorted(e for e in T if comp[G.endpoints(e)[0]] != comp[G.endpoints(e)[1]])
        if not crossing:
            return G, T
        pick = next((e for e in crossing if e != protect), crossing[0])
        G = G.contract_edge(pick)
        T.discard(pick)
        if stats:
            stats.contractions += 1


def _candidates(G: Multigraph, T: Set[str], avoid: Iterable[str] = ()) -> List[str]:
    """Terminal endpoints touching at most two terminal edges."""
    deg: Dict[str, int] = {}
    for e in T:
        for x in G.endpoints(e):
            deg[x] = deg.get(x, 0) + 1
    avoid = set(avoid)
    return sorted(x for x, d in deg.items() if d <= 2 and x not in avoid)


class _Search:
    def __init__(self, compact: bool = True):
        self.memo: Dict[tuple, Tuple[int, Optional[Tuple[int, FrozenSet[str]]]]] = {}
        self.stats = CographicStats()
        self.compact = compact

    def run(self, G: Multigraph, T: Set[str], k: int, restricted: Optional[tuple] = None):
        """Cheapest unit-edge set F (size at most k) making all of T bridges.

        ``restricted`` is (tstar, copy ids of the forced edge); while tstar is
        still a terminal those copies are never cut and the chosen side must
        avoid both of their endpoints.
        """
        self.stats.calls += 1
        if restricted is not None:
            ts, copies = restricted
            got = _absorb(G, T, protect=ts, stats=self.stats)
            if got is None:
                return None
            G, T = got
            live = [c for c in copies if G.has_edge(c)]
            if ts not in T or not live or G.endpoints(live[0])[0] == G.endpoints(live[0])[1]:
                # tstar is already a bridge, or the forced edge is a loop and cannot matter
                G = G.delete_edges(live)
                restricted = None
        if restricted is None:
            got = _absorb(G, T, stats=self.stats)
            if got is None:
                return None
            G, T = got
        if not T:
            return (0, frozenset())
        if k <= 0:
            return None
        key = (frozenset(G.edges), frozenset(T), restricted is not None)
        hit = self.memo.get(key)
        if hit is not None:
            kk, res = hit
            if res is not None and res[0] <= k:
                return res
            if res is None and kk >= k:
                return None
        res = self._branch(G, T, k, restricted)
        self.memo[key] = (k, res)
        return res

    def _branch(self, G, T, k, restricted):
        Q = {x for e in T for x in G.endpoints(e)}
        GT = G.delete_edges(T)
        avoid: Set[str] = set()
        if restricted is not None:
            live = [c for c in restricted[1] if G.has_edge(c)]
            avoid = set(G.endpoints(live[0]))
        best = None
        budget = k
        for s in _candidates(G, T, avoid):
            tn = set()
            for e in T:
                a, b = G.endpoints(e)
                if a == s:
                    tn.add(b)
                elif b == s:
                    tn.add(a)
            Y = (Q - {s}) | avoid
            for sis in enumerate_semi_important(GT, s, Y, budget, self.compact):
                if sis.W & tn or sis.W & avoid:
                    continue
                d = len(sis.boundary)
                if d == 0 or d > budget:
                    if d == 0:
                        raise SolverError("empty semi-important cut after absorption")
                    continue
                self.stats.branches += 1
                sub = self.run(G.delete_edges(sis.boundary), set(T), budget - d, restricted)
                if sub is None:
                    continue
                total = d + sub[0]
                if best is None or total < best[0]:
                    best = (total, sis.boundary | sub[1])
                    budget = total - 1
                if budget <= 0:
                    return best
        return best


class _CarriedZSearch(_Search):
    """The branching exactly as first described: a guessed vertex set Z is
    carried through contractions and cut branches, re-guessed only when it
    runs empty.  Kept for comparison with the default search."""

    def __init__(self, compact: bool = True):
        super().__init__(compact)
        self.empty_cuts = 0

    def _absorb_z(self, G, T, Z, protect):
        T, Z = set(T), set(Z)
        while True:
            if any(G.endpoints(e)[0] == G.endpoints(e)[1] for e in T):
                return None
            comp = {}
            for i, c in enumerate(components(G, T)):
                for x in c:
                    comp[x] = i
            crossing = sorted(e for e in T if comp[G.endpoints(e)[0]] != comp[G.endpoints(e)[1]])
            if not crossing:
                return G, T, Z
            pick = next((e for e in crossing if e != protect), crossing[0])
            deg: Dict[str, int] = {}
            for e in T:
                for x in G.endpoints(e):
                    deg[x] = deg.get(x, 0) + 1
            x, y = G.endpoints(pick)
            keep = x in Z and y in Z and (deg[x] == 2 or deg[y] == 2)
            Z -= {x, y}
            if keep:
                Z.add(x)  # contraction keeps the first endpoint's name
            G = G.contract_edge(pick)
            T.discard(pick)
            self.stats.contractions += 1

    def run(self, G, T, k, restricted=None, Z=frozenset()):
        self.stats.calls += 1
        protect = restricted[0] if restricted else None
        got = self._absorb_z(G, T, Z, protect)
        if got is None:
            return None
        G, T, Z = got
        if restricted is not None:
            ts, copies = restricted
            live = [c for c in copies if G.has_edge(c)]
            if ts not in T or not live or G.endpoints(live[0])[0] == G.endpoints(live[0])[1]:
                G = G.delete_edges(live)
                restricted = None
                got = self._absorb_z(G, T, Z, None)
                if got is None:
                    return None
                G, T, Z = got
        if not T:
            return (0, frozenset())
        if k <= 0:
            return None
        Q = {x for e in T for x in G.endpoints(e)}
        Z = frozenset(Z & Q)
        key = (frozenset(G.edges), frozenset(T), restricted is not None, Z)
        hit = self.memo.get(key)
        if hit is not None:
            kk, res = hit
            if res is not None and res[0] <= k:
                return res
            if res is None and kk >= k:
                return None
        avoid: Set[str] = set()
        if restricted is not None:
            live = [c for c in restricted[1] if G.has_edge(c)]
            avoid = set(G.endpoints(live[0]))
        if Z:
            res = self._cut_branch(G, T, k, restricted, Z, Q, avoid)
        else:
            res = self._guess(G, T, k, restricted, avoid)
        self.memo[key] = (k, res)
        return res

    def _guess(self, G, T, k, restricted, avoid):
        cands = _candidates(G, T, avoid)
        need = (len(T) + 1) // 2 - (2 if restricted is not None else 0)
        best = None
        for r in range(max(need, 1), len(cands) + 1):
            for Z in combinations(cands, r):
                sub = self.run(G, T, k if best is None else best[0] - 1, restricted, frozenset(Z))
                if sub is not None and (best is None or sub[0] < best[0]):
                    best = sub
        return best

    def _cut_branch(self, G, T, k, restricted, Z, Q, avoid):
        s = min(Z)
        GT = G.delete_edges(T)
        Y = (Q - {s}) | avoid
        best = None
        budget = k
        for sis in enumerate_semi_important(GT, s, Y, budget, self.compact):
            if sis.W & avoid:
                continue
            d = len(sis.boundary)
            if d == 0:
                self.empty_cuts += 1
                continue
            self.stats.branches += 1
            sub = self.run(G.delete_edges(sis.boundary), T, budget - d, restricted, Z)
            if sub is None:
                continue
            total = d + sub[0]
            if best is None or total < best[0]:
                best = (total, sis.boundary | sub[1])
                budget = total - 1
            if budget <= 0:
                break
        return best


def _prepare(inst: Instance, G: Multigraph) -> List[str]:
    """Zero-weight nonterminals; they go into every witness for free."""
    if set(G.edge_ids) != set(inst.matroid.elements):
        raise SolverError("graph edges do not match the matroid ground set")
    zeros = [e for e in G.edge_ids if e not in inst.terminals and inst.weights[e] == 0]
    return zeros


def _lift(inst: Instance, F: FrozenSet[str], origin: Dict[str, str], zeros: Iterable[str]) -> FrozenSet[str]:
    counts: Dict[str, int] = {}
    for c in F:
        o = origin[c]
        counts[o] = counts.get(o, 0) + 1
    full = {o for o, n in counts.items() if n == min(inst.weights[o], inst.k + 1)}
    return frozenset(full) | frozenset(zeros)


def _bridges_ok(G: Multigraph, F: Iterable[str], T: Iterable[str]) -> bool:
    br = bridges(G.delete_edges(F))
    return all(t in br for t in T)


def solve_cographic(inst: Instance, G: Multigraph, compact: bool = True, carried_z: bool = False) -> SolveResult:
    """Space Cover on the bond matroid of G: cheapest F making every terminal
    edge a bridge of G - F."""
    zeros = _prepare(inst, G)
    H = G.delete_edges(zeros)
    U, origin = unit_expand(H, inst.weights, inst.terminals, inst.k)
    search = (_CarriedZSearch if carried_z else _Search)(compact)
    res = search.run(U, set(inst.terminals), inst.k)
    stats = vars(search.stats).copy()
    if res is None:
        return SolveResult.no(**stats)
    F = _lift(inst, res[1], origin, zeros)
    w = sum(inst.weights[e] for e in F)
    if w != res[0] or not _bridges_ok(G, F, inst.terminals):
        raise SolverError("cographic witness failed verification")
    return SolveResult.yes(w, F, **stats)


def solve_cographic_restricted(inst: RestrictedInstance, G: Multigraph, compact: bool = True, carried_z: bool = False) -> SolveResult:
    """Restricted Space Cover on M*(G): additionally tstar must be a bridge of
    G - (F - estar), so the forced edge may not be what isolates it."""
    zeros = [e for e in _prepare(inst, G) if e != inst.estar]
    H = G.delete_edges(zeros)
    es, ts = inst.estar, inst.tstar
    if es in inst.terminals or es in bridges(H):
        # the forced edge is irrelevant to spanning: plain problem
        return solve_cographic(inst.demote(), G, compact, carried_z)
    U, origin = unit_expand(H, inst.weights, inst.terminals, inst.k, heavy=[es])
    copies = [c for c, o in origin.items() if o == es]
    search = (_CarriedZSearch if carried_z else _Search)(compact)
    res = search.run(U, set(inst.terminals), inst.k, restricted=(ts, copies))
    stats = vars(search.stats).copy()
    if res is None:
        return SolveResult.no(**stats)
    Fu = res[1] - set(copies)
    F = _lift(inst, Fu, origin, zeros) | {es}
    w = sum(inst.weights[e] for e in F)
    ok = _bridges_ok(G, F, inst.terminals) and _bridges_ok(G, F - {es}, [ts])
    if w != res[0] or not ok:
        raise SolverError("restricted cographic witness failed verification")
    return SolveResult.yes(w, F, **stats)
