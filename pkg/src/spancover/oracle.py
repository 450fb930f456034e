"""
Brute-force ground truth.

Every routine here enumerates straight from a definition and refuses inputs
above a size cap instead of silently truncating.  The cap defaults to 16
ground-set elements and can be raised with the SPANCOVER_CAP variable.
"""

from __future__ import annotations

import os
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Set

from .basicsolve import SolveResult
from .gf2core import BinaryMatroid, delete
from .graphs import Multigraph, boundary, reachable_side
from .preprocess import Instance, RestrictedInstance

__all__ = [
    "OracleCapError",
    "oracle_cap",
    "brute_space_cover",
    "brute_restricted",
    "brute_important_cuts",
    "brute_semi_important",
    "brute_rank_reduction",
    "brute_feedback",
    "is_interesting",
]

DEFAULT_CAP = 16


class OracleCapError(RuntimeError):
    pass


def oracle_cap(cap: Optional[int] = None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("SPANCOVER_CAP", DEFAULT_CAP))


def _check(n: int, cap: Optional[int], what: str) -> None:
    c = oracle_cap(cap)
    if n > c:
        raise OracleCapError(f"{what}: size {n} exceeds oracle cap {c}")


def _gray_search(inst: Instance, accept, cap: Optional[int]) -> SolveResult:
    """Cheapest F of nonterminals (weight <= k) with accept(mask) true.

    Zero-weight nonterminals are always included since they cost nothing and
    every acceptance predicate here is monotone in them.  The rest is walked
    in Gray-code order so each step flips a single element.
    """
    M = inst.matroid
    _check(len(M), cap, "space cover oracle")
    free = 0
    paid: List[int] = []
    for e in M.elements:
        if e in inst.terminals:
            continue
        if inst.weights[e] == 0:
            free |= 1 << M.index(e)
        else:
            paid.append(M.index(e))
    wts = [inst.weights[M.elements[i]] for i in paid]
    best_w, best_m = None, 0
    cur_m, cur_w = 0, 0
    for step in range(1 << len(paid)):
        if step:
            j = (step & -step).bit_length() - 1
            cur_m ^= 1 << paid[j]
            cur_w += wts[j] if cur_m >> paid[j] & 1 else -wts[j]
        if cur_w > inst.k or (best_w is not None and cur_w >= best_w):
            continue
        if accept(free | cur_m):
            best_w, best_m = cur_w, free | cur_m
    if best_w is None:
        return SolveResult.no()
    return SolveResult.yes(best_w, M.ids(best_m))


def brute_space_cover(inst: Instance, cap: Optional[int] = None) -> SolveResult:
    M = inst.matroid
    t = M.mask(inst.terminals)
    return _gray_search(inst, lambda f: M.rank_mask(f | t) == M.rank_mask(f), cap)


def brute_restricted(inst: RestrictedInstance, cap: Optional[int] = None) -> SolveResult:
    """Space Cover where additionally tstar lies in the span of F minus estar."""
    M = inst.matroid
    t = M.mask(inst.terminals)
    ts = M.mask([inst.tstar])
    es = M.mask([inst.estar])

    def ok(f: int) -> bool:
        g = f & ~es
        return M.rank_mask(f | t) == M.rank_mask(f) and M.rank_mask(g | ts) == M.rank_mask(g)

    return _gray_search(inst, ok, cap)


def brute_feedback(M: BinaryMatroid, weights, T: Iterable[str], k: int, cap: Optional[int] = None) -> SolveResult:
    """Cheapest F outside T such that M - F has no circuit meeting T.

    A circuit through t exists in M - F exactly when t is not a coloop there.
    """
    T = frozenset(T)
    inst = Instance(M, weights, T, k)

    def ok(f: int) -> bool:
        rest = M.ground_mask & ~f
        r = M.rank_mask(rest)
        return all(M.rank_mask(rest & ~(1 << M.index(x))) < r for x in T)

    return _gray_search(inst, ok, cap)


def is_interesting(G: Multigraph, W: Set[str], s: str, T: Set[str]) -> bool:
    if s not in W or len(W & T) > 1:
        return False
    return reachable_side(G.induced(W), (), s) == W


def _vertex_subsets_with(G: Multigraph, s: str, cap: Optional[int]):
    others = [v for v in G.vertices if v != s]
    _check(len(others) + 1, cap, "vertex-subset oracle")
    for r in range(len(others) + 1):
        for combo in combinations(others, r):
            yield {s, *combo}


def brute_important_cuts(G: Multigraph, X: Iterable[str], Y: Iterable[str], k: int, cap: Optional[int] = None) -> Set[FrozenSet[str]]:
    """All inclusion-minimal (X,Y)-cuts S with |S| <= k such that no cut of
    size <= |S| has a strictly larger X-side."""
    X, Y = set(X), set(Y)
    edges = [e for e, u, v in G.edges if u != v]
    _check(len(edges), 2 * oracle_cap(cap), "important-cut oracle")
    sides = {}
    for r in range(min(k, len(edges)) + 1):
        for S in combinations(edges, r):
            R = reachable_side(G, S, X)
            if R & Y:
                continue
            sides[frozenset(S)] = frozenset(R)
    minimal = {S: R for S, R in sides.items() if all(S - {e} not in sides for e in S)}
    out = set()
    for S, R in minimal.items():
        if not any(len(S2) <= len(S) and R < R2 for S2, R2 in minimal.items()):
            out.add(S)
    return out


def brute_semi_important(G: Multigraph, s: str, T: Iterable[str], k: int, cap: Optional[int] = None) -> Set[FrozenSet[str]]:
    """All interesting W (connected, holds s, at most one terminal) with
    |boundary| <= k that no other interesting set improves on."""
    T = set(T)
    interesting = []
    for W in _vertex_subsets_with(G, s, cap):
        if is_interesting(G, W, s, T):
            interesting.append((frozenset(W), len(boundary(G, W)), frozenset(W & T)))
    out = set()
    for W, d, t in interesting:
        if d > k:
            continue
        if not any(W < W2 and d2 <= d and t2 <= t for W2, d2, t2 in interesting):
            out.add(W)
    return out


def brute_rank_reduction(M: BinaryMatroid, h: int, k: int, cap: Optional[int] = None) -> SolveResult:
    """Smallest X with |X| <= k and r(M) - r(M - X) >= h."""
    _check(len(M), cap, "rank-reduction oracle")
    full = M.full_rank()
    for size in range(min(k, len(M)) + 1):
        for X in combinations(M.elements, size):
            if full - delete(M, X).full_rank() >= h:
                return SolveResult.yes(size, frozenset(X))
    return SolveResult.no()
