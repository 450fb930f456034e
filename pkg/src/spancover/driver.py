"""
Space Cover on a regular matroid given as a conflict tree.

The tree is processed bottom-up.  Each call preprocesses the composed
instance, solves single basic nodes directly, and otherwise works on the
deepest non-leaf node: terminals are flipped up into it, then its leaf
children are removed one at a time by a reduction or a branching step.
Branching children always get a strictly smaller budget.

All routines return the optimum (weight at most k) together with a witness.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .basicsolve import SolveResult, SolverError, solve_exhaustive, solve_graphic, solve_graphic_restricted, solve_r10
from .cuts import solve_cographic, solve_cographic_restricted
from .gf2core import BinaryMatroid, dualize, fundamental_circuit
from .graphs import Multigraph, components
from .preprocess import NO, YES, Instance, RestrictedInstance, preprocess
from .sums import (
    BasicNode,
    ConflictTree,
    compose_tree,
    find_clean_cut,
    node_contract,
    node_delete,
    normalize_tree,
    split_cographic_subleaf,
    terminal_flip,
)

__all__ = [
    "TreeInstance",
    "SearchStats",
    "Driver",
    "solve",
    "solve_basic",
    "rank_reduction",
]

Solution = Tuple[int, FrozenSet[str]]
# observer(rule, before, [(cost, after), ...]): the optimum of ``before`` is the
# minimum of cost + optimum of ``after`` over the list (no when it is empty)
Observer = Callable[[str, "TreeInstance", List[Tuple[int, "TreeInstance"]]], None]


@dataclass(frozen=True)
class TreeInstance:
    tree: ConflictTree
    weights: Dict[str, int]
    terminals: FrozenSet[str]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        ground = set(self.tree.ground())
        if not self.terminals <= ground:
            raise ValueError(f"terminals {sorted(self.terminals - ground)} are not composed elements")
        missing = ground - set(self.weights)
        if missing:
            raise ValueError(f"missing weights for {sorted(missing)}")
        object.__setattr__(self, "weights", {e: self.weights[e] for e in ground})
        if self.k < 0:
            raise ValueError("budget must be nonnegative")

    def composed(self) -> Instance:
        return Instance(compose_tree(self.tree), self.weights, self.terminals, self.k)


@dataclass
class SearchStats:
    nodes: int = 1  # search-tree nodes: the root plus every branch child evaluated
    branchings: int = 0
    max_depth: int = 0
    budget_violations: int = 0
    min_budget_drop: Optional[int] = None
    clean_cut_fallbacks: int = 0
    observation_checks: int = 0
    rules: Dict[str, int] = field(default_factory=dict)

    @property
    def leaves(self) -> int:
        return self.nodes - self.branchings

    def fire(self, rule: str) -> None:
        self.rules[rule] = self.rules.get(rule, 0) + 1

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes - 1
        self.branchings += other.branchings
        self.max_depth = max(self.max_depth, other.max_depth)
        self.budget_violations += other.budget_violations
        if other.min_budget_drop is not None:
            self.min_budget_drop = other.min_budget_drop if self.min_budget_drop is None else min(self.min_budget_drop, other.min_budget_drop)
        self.clean_cut_fallbacks += other.clean_cut_fallbacks
        self.observation_checks += other.observation_checks
        for r, n in other.rules.items():
            self.rules[r] = self.rules.get(r, 0) + n

    def as_dict(self) -> Dict[str, int]:
        d = {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "branchings": self.branchings,
            "max_depth": self.max_depth,
            "budget_violations": self.budget_violations,
            "clean_cut_fallbacks": self.clean_cut_fallbacks,
            "observation_checks": self.observation_checks,
        }
        d.update({f"rule_{r}": n for r, n in sorted(self.rules.items())})
        return d


# ---------------------------------------------------------------- basic nodes

def solve_basic(node: BasicNode, weights: Dict[str, int], T: Iterable[str], k: int,
                estar: Optional[str] = None, tstar: Optional[str] = None) -> Optional[Solution]:
    """Optimum for one basic node, restricted when estar/tstar are given."""
    M = node.matroid
    w = {e: weights[e] for e in M.elements}
    if estar is None:
        inst = Instance(M, w, frozenset(T), k)
        if node.kind == "graphic":
            res = solve_graphic(inst, node.graph)
        elif node.kind == "cographic":
            res = solve_cographic(inst, node.graph)
        else:
            res = solve_r10(inst)
    else:
        inst = RestrictedInstance(M, w, frozenset(T), k, estar=estar, tstar=tstar)
        if node.kind == "graphic":
            res = solve_graphic_restricted(inst, node.graph)
        elif node.kind == "cographic":
            res = solve_cographic_restricted(inst, node.graph)
        else:
            raise SolverError(f"node {node.name}: restricted problems on r10like nodes do not arise")
    if not res.ok:
        return None
    return res.opt_weight, res.witness


def _minimal(M: BinaryMatroid, F: Iterable[str], T: Iterable[str]) -> FrozenSet[str]:
    """Drop elements of F while it still spans T; the result is independent."""
    t = M.mask(T)
    f = M.mask(F)
    for e in sorted(F, reverse=True):
        g = f & ~M.mask([e])
        if M.rank_mask(g | t) == M.rank_mask(g):
            f = g
    return M.ids(f)


def _connected(G: Multigraph) -> Multigraph:
    """Glue components at one vertex each; the bond matroid does not change."""
    comps = components(G)
    for c in comps[1:]:
        G = G.merge_vertices(comps[0][0], c[0])
    return G


@dataclass(frozen=True)
class _Split:
    """Minimum cost to span e1, e2 inside a piece, cut along two circuits."""
    cost: int
    parts: Tuple[int, int, int]  # only-first, only-second, shared
    pieces: Tuple[FrozenSet[str], ...]


def _two_target_split(node: BasicNode, w: Dict[str, int], e1: str, e2: str, k: int) -> _Split:
    sol = solve_basic(node, w, [e1, e2], k)
    if sol is None:
        return _Split(k + 1, (k + 1, k + 1, k + 1), ())
    M = node.matroid
    F = _minimal(M, sol[1], [e1, e2])
    C1 = fundamental_circuit(M, F, e1) - {e1}
    C2 = fundamental_circuit(M, F, e2) - {e2}
    wt = lambda S: sum(w[x] for x in S)
    parts = (wt(C1 - C2), wt(C2 - C1), wt(C1 & C2))
    if sum(parts) != sol[0]:
        raise SolverError("two-target solution is not the union of its circuits")
    return _Split(sol[0], parts, (frozenset(C1), frozenset(C2), frozenset(C1 ^ C2), frozenset(F)))


# ---------------------------------------------------------------- the driver

class Driver:
    def __init__(self, check: bool = False, jobs: int = 1, trace: Optional[List[dict]] = None,
                 observer: Optional[Observer] = None):
        self.check = check
        self.jobs = jobs
        self.trace = trace
        self.observer = observer
        self.stats = SearchStats()

    def _observe(self, rule: str, before: TreeInstance, after: List[Tuple[int, TreeInstance]]) -> None:
        if self.observer is not None:
            self.observer(rule, before, after)

    def _event(self, **kw) -> None:
        if self.trace is not None:
            self.trace.append(kw)

    # ------------------------------------------------------------ entry
    def solve(self, ti: TreeInstance, depth: int = 0) -> Optional[Solution]:
        self.stats.max_depth = max(self.stats.max_depth, depth)
        pre = self._preprocess(ti)
        if pre is None:
            return None
        ti2, zeros, settled = pre
        if settled:
            return 0, zeros
        res = self._dispatch(ti2, depth)
        if res is None:
            return None
        out = res[0], res[1] | zeros
        if self.check:
            self._verify(ti, out)
        return out

    def _verify(self, ti: TreeInstance, sol: Solution) -> None:
        M = compose_tree(ti.tree)
        F = sol[1]
        if F & ti.terminals:
            raise SolverError("witness contains a terminal")
        if sum(ti.weights[e] for e in F) != sol[0] or sol[0] > ti.k:
            raise SolverError("witness weight does not match")
        if M.rank_mask(M.mask(F) | M.mask(ti.terminals)) != M.rank_mask(M.mask(F)):
            raise SolverError("witness does not span the terminals")

    # ------------------------------------------------------------ preprocessing
    def _preprocess(self, ti: TreeInstance):
        M = compose_tree(ti.tree)
        red, trace = preprocess(Instance(M, ti.weights, ti.terminals, ti.k))
        zeros = frozenset(trace.contracted)
        if red == YES:
            return ti, zeros, True
        if red == NO:
            return None
        tree = ti.tree
        for rule, ids, _ in trace.steps:
            for e in ids:
                owner = tree.node(tree.owner(e))
                op = node_contract if rule == "zero" else node_delete
                tree = normalize_tree(tree.replace_node(op(owner, [e])))
        if self.check and not compose_tree(tree).same_as(red.matroid):
            raise SolverError("tree preprocessing changed the composed matroid")
        out = TreeInstance(tree, red.weights, red.terminals, red.k)
        if trace.steps:
            self._observe("preprocess", ti, [(sum(ti.weights[e] for e in zeros), out)])
        return out, zeros, False

    # ------------------------------------------------------------ dispatch
    def _dispatch(self, ti: TreeInstance, depth: int) -> Optional[Solution]:
        tree = ti.tree
        if len(tree.nodes) == 1:
            self.stats.fire("basic")
            return solve_basic(tree.nodes[0], ti.weights, ti.terminals, ti.k)
        parent, dep = tree.rooted()
        inner = [n for n in tree.names if tree.children(n)]
        s = min(inner, key=lambda n: (-dep[n], n))
        flipped = self._flip_all(tree, s, ti.terminals)
        if flipped is not tree:
            before, ti = ti, TreeInstance(flipped, ti.weights, ti.terminals, ti.k)
            self._observe("flip", before, [(0, ti)])
        tree = flipped
        leaves = tree.children(s)
        info = []
        for leaf in leaves:
            Z = tree.sumset(s, leaf)
            Tl = frozenset(e for e in tree.node(leaf).elements if e in ti.terminals)
            info.append((leaf, Z, Tl))
        for leaf, Z, Tl in info:
            if not Z:
                return self._reduce_1leaf(ti, s, leaf, Tl, depth)
        for leaf, Z, Tl in info:
            if len(Z) == 1 and not Tl:
                return self._reduce_2leaf(ti, s, leaf, Z[0], depth)
        for leaf, Z, Tl in info:
            if len(Z) == 1:
                return self._branch_2leaf(ti, s, leaf, Z[0], Tl, depth)
        for leaf, Z, Tl in info:
            if len(Z) == 3 and Tl:
                return self._branch_3leaf(ti, s, leaf, Z, Tl, depth)
        node = tree.node(s)
        if node.kind == "graphic":
            return self._reduce_graphic_3leaf(ti, s, info[0][0], depth)
        if node.kind == "cographic":
            return self._cographic_subleaf(ti, s, parent[s], depth)
        raise SolverError(f"node {s}: r10like node with 3-sum children")

    def _flip_all(self, tree: ConflictTree, s: str, T: FrozenSet[str]) -> ConflictTree:
        changed = True
        while changed:
            changed = False
            for leaf in tree.children(s):
                t2 = terminal_flip(tree, s, leaf, T)
                if t2 is not None:
                    self.stats.fire("flip")
                    self._event(event="flip", sub_leaf=s, leaf=leaf)
                    tree, changed = t2, True
                    break
        return tree

    def _leaf_weights(self, ti: TreeInstance, leaf: str, override: Dict[str, int]) -> Dict[str, int]:
        w = {e: ti.weights[e] for e in ti.tree.node(leaf).elements if e in ti.weights}
        w.update(override)
        return w

    # ------------------------------------------------------------ 1- and 2-leaves
    def _reduce_1leaf(self, ti, s, leaf, Tl, depth):
        node = ti.tree.node(leaf)
        rest = ti.tree.remove_leaf(leaf)
        keep = set(rest.ground())
        w = {e: x for e, x in ti.weights.items() if e in keep}
        T = ti.terminals - Tl
        if not Tl:
            self.stats.fire("1-leaf-delete")
            self._event(event="1-leaf", leaf=leaf, cost=0, k=ti.k)
            child = TreeInstance(rest, w, T, ti.k)
            self._observe("1-leaf-delete", ti, [(0, child)])
            return self.solve(child, depth)
        sol = solve_basic(node, self._leaf_weights(ti, leaf, {}), Tl, ti.k)
        self.stats.fire("1-leaf")
        self._event(event="1-leaf", leaf=leaf, cost=None if sol is None else sol[0], k=ti.k)
        if sol is None:
            self._observe("1-leaf", ti, [])
            return None
        child = TreeInstance(rest, w, T, ti.k - sol[0])
        self._observe("1-leaf", ti, [(sol[0], child)])
        sub = self.solve(child, depth)
        if sub is None:
            return None
        return sol[0] + sub[0], sol[1] | sub[1]

    def _reduce_2leaf(self, ti, s, leaf, e, depth):
        k = ti.k
        sol = solve_basic(ti.tree.node(leaf), self._leaf_weights(ti, leaf, {e: 0}), [e], k)
        cost = k + 1 if sol is None else sol[0]
        rest = ti.tree.remove_leaf(leaf)
        keep = set(rest.ground())
        w = {x: y for x, y in ti.weights.items() if x in keep}
        w[e] = cost
        self.stats.fire("2-leaf")
        self._event(event="2-leaf", leaf=leaf, element=e, weight=cost, k=k)
        child = TreeInstance(rest, w, ti.terminals, k)
        self._observe("2-leaf", ti, [(0, child)])
        sub = self.solve(child, depth)
        if sub is None:
            return None
        if e in sub[1]:
            return sub[0], (sub[1] - {e}) | sol[1]
        return sub

    # ------------------------------------------------------------ branching
    def _branch(self, ti, rule, leaf, Z, branches, depth) -> Optional[Solution]:
        """branches: (leaf cost, leaf witness, child instance) with child budget k - cost."""
        self.stats.branchings += 1
        self.stats.fire(rule)
        k = ti.k
        Z = set(Z)
        for cost, _, _ in branches:
            drop = cost
            self.stats.min_budget_drop = drop if self.stats.min_budget_drop is None else min(self.stats.min_budget_drop, drop)
            if drop < 1:
                self.stats.budget_violations += 1
        self._event(event="branch", rule=rule, leaf=leaf, k=k, costs=[c for c, _, _ in branches])
        self._observe(rule, ti, [(c, child) for c, _, child in branches])
        best: Optional[Solution] = None
        if self.jobs > 1 and depth == 0 and len(branches) > 1:
            args = [(child, self.check) for _, _, child in branches]
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                outs = list(pool.map(_run_child, args))
            for (cost, Fl, _), (sub, st, tr) in zip(branches, outs):
                self.stats.nodes += 1
                self.stats.merge(st)
                if self.trace is not None:
                    self.trace.extend(tr)
                if sub is not None and (best is None or cost + sub[0] < best[0]):
                    best = cost + sub[0], (Fl | sub[1]) - Z
            return best
        for cost, Fl, child in branches:
            budget = child.k if best is None else min(child.k, best[0] - 1 - cost)
            if budget < 0:
                continue
            self.stats.nodes += 1
            sub = self.solve(TreeInstance(child.tree, child.weights, child.terminals, budget), depth + 1)
            if sub is not None and (best is None or cost + sub[0] < best[0]):
                best = cost + sub[0], (Fl | sub[1]) - Z
        return best

    def _child(self, ti, leaf, zweights: Dict[str, int], extra_T: Iterable[str], cost: int) -> TreeInstance:
        rest = ti.tree.remove_leaf(leaf)
        keep = set(rest.ground())
        w = {e: x for e, x in ti.weights.items() if e in keep}
        w.update(zweights)
        Tl = set(ti.tree.node(leaf).elements)
        T = (ti.terminals - Tl) | set(extra_T)
        return TreeInstance(rest, w, T, ti.k - cost)

    def _branch_2leaf(self, ti, s, leaf, e, Tl, depth):
        k = ti.k
        node = ti.tree.node(leaf)
        branches = []
        # (i) the leaf spans e as well; e is free on the other side
        sol = solve_basic(node, self._leaf_weights(ti, leaf, {e: 0}), Tl | {e}, k)
        if sol is not None:
            branches.append((sol[0], sol[1], self._child(ti, leaf, {e: 0}, [], sol[0])))
        # (ii) e is free inside the leaf and must be spanned outside
        sol = solve_basic(node, self._leaf_weights(ti, leaf, {e: 0}), Tl, k)
        if sol is not None:
            branches.append((sol[0], sol[1], self._child(ti, leaf, {e: 0}, [e], sol[0])))
        # (iii) no solution circuit passes through e
        sol = solve_basic(node, self._leaf_weights(ti, leaf, {e: k + 1}), Tl, k)
        if sol is not None:
            branches.append((sol[0], sol[1], self._child(ti, leaf, {e: k + 1}, [], sol[0])))
        return self._branch(ti, "2-leaf-branch", leaf, [e], branches, depth)

    def _branch_3leaf(self, ti, s, leaf, Z, Tl, depth):
        k = ti.k
        big = k + 1
        node = ti.tree.node(leaf)
        e = sorted(Z)
        branches = []

        def add(leaf_w, leaf_T, child_w, child_T, estar=None, tstar=None):
            sol = solve_basic(node, self._leaf_weights(ti, leaf, leaf_w), leaf_T, k, estar, tstar)
            if sol is not None:
                branches.append((sol[0], sol[1], self._child(ti, leaf, child_w, child_T, sol[0])))

        heavy = {x: big for x in e}
        for i in range(3):  # (i)
            add(heavy, Tl | {e[i]}, {**heavy, e[i]: 0}, [])
        add(heavy, Tl | {e[0], e[1]}, {**heavy, e[0]: 0, e[1]: 0}, [])  # (ii)
        for i in range(3):  # (iii) restricted: e_i forced free in the leaf, e_j spanned without it
            for j in range(3):
                if i != j:
                    add({**heavy, e[i]: 0}, Tl | {e[j]}, {**heavy, e[j]: 0}, [e[i]], estar=e[i], tstar=e[j])
        for i in range(3):  # (iv)
            add({**heavy, e[i]: 0}, Tl, heavy, [e[i]])
        add({**heavy, e[0]: 0, e[1]: 0}, Tl, heavy, [e[0], e[1]])  # (v)
        add(heavy, Tl, heavy, [])  # (vi)
        return self._branch(ti, "3-leaf-branch", leaf, Z, branches, depth)

    # ------------------------------------------------------------ terminal-free 3-leaves
    def _lift(self, pre: TreeInstance, F: FrozenSet[str], new: Iterable[str], pieces: Sequence[FrozenSet[str]], budget: int) -> FrozenSet[str]:
        """Cheapest union of pieces that, added to F minus the gadget elements,
        spans the terminals of the instance before the rule fired."""
        M = compose_tree(pre.tree)
        base = frozenset(F) - set(new)
        t = M.mask(pre.terminals)
        pieces = list(dict.fromkeys(pieces))
        best = None
        for r in range(len(pieces) + 1):
            for combo in combinations(pieces, r):
                X = base.union(*combo)
                wt = sum(pre.weights[x] for x in X)
                if best is not None and wt >= best[0]:
                    continue
                f = M.mask(X)
                if M.rank_mask(f | t) == M.rank_mask(f):
                    best = wt, X
        if best is None or best[0] > budget:
            raise SolverError("could not lift the reduced witness")
        return best[1]

    def _reduce_graphic_3leaf(self, ti, s, leaf, depth):
        k = ti.k
        tree = ti.tree
        node, lnode = tree.node(s), tree.node(leaf)
        e1, e2, e3 = sorted(tree.sumset(s, leaf))
        G = node.graph
        (a, b), (c, d) = G.endpoints(e1), G.endpoints(e2)
        v2 = ({a, b} & {c, d}).pop()
        v1 = a if b == v2 else b
        v3 = c if d == v2 else d
        if set(G.endpoints(e3)) != {v1, v3}:
            raise SolverError(f"node {s}: shared set is not a triangle")
        heavy = {x: k + 1 for x in (e1, e2, e3)}
        lw = self._leaf_weights(ti, leaf, heavy)
        singles = [solve_basic(lnode, lw, [x], k) for x in (e1, e2, e3)]
        ks = [k + 1 if s_ is None else s_[0] for s_ in singles]
        split = _two_target_split(lnode, lw, e1, e2, k)
        self._check_triangle(ks, split, k)
        ids = []
        for _ in range(3):
            ids.append(tree.fresh_id("u", ids))
        u = G.fresh_vertex("u")
        if split.cost <= k:
            p1, p2, p3 = split.parts
            star = {ids[0]: p1, ids[1]: p3, ids[2]: p2}
        else:
            star = {x: k + 1 for x in ids}
        G2 = G.add_vertex(u).add_edge(ids[0], v1, u).add_edge(ids[1], v2, u).add_edge(ids[2], v3, u)
        rest = tree.remove_leaf(leaf).replace_node(node.with_graph(G2))
        keep = set(rest.ground())
        w = {x: y for x, y in ti.weights.items() if x in keep}
        w.update({e1: ks[0], e2: ks[1], e3: ks[2]})
        w.update(star)
        self.stats.fire("graphic-3-leaf")
        self._event(event="graphic-3-leaf", leaf=leaf, k=k, singles=ks, pair=split.cost, star=[star[x] for x in ids])
        child = TreeInstance(rest, w, ti.terminals, k)
        self._observe("graphic-3-leaf", ti, [(0, child)])
        sub = self.solve(child, depth)
        if sub is None:
            return None
        pieces = [S[1] for S, x in zip(singles, (e1, e2, e3)) if S is not None and x in sub[1]]
        if set(ids) & sub[1]:
            pieces += list(split.pieces)
        F = self._lift(ti, sub[1], [e1, e2, e3, *ids], pieces, sub[0])
        return sum(ti.weights[x] for x in F), F

    def _check_triangle(self, ks, split, k):
        """The pair cost never exceeds two single costs, and is finite when
        two single costs fit the budget; the split parts bound each single."""
        self.stats.observation_checks += 1
        for i, j in combinations(range(3), 2):
            if ks[i] + ks[j] < min(split.cost, k + 1) and ks[i] + ks[j] <= k:
                raise SolverError("pair cost exceeds two single costs")
            if ks[i] + ks[j] <= k and split.cost > k:
                raise SolverError("pair infeasible although two singles fit")
        if split.cost <= k:
            p1, p2, p3 = split.parts
            if not (p1 + p3 >= ks[0] and p2 + p3 >= ks[1] and p1 + p2 >= ks[2]):
                raise SolverError("triangle inequality between gadget weights fails")

    def _cographic_subleaf(self, ti, s, parent, depth):
        tree = ti.tree
        node = tree.node(s)
        G = _connected(node.graph)
        leaves = tree.children(s)
        Zs = [list(tree.sumset(s, l)) for l in leaves]
        Zstar = list(tree.sumset(s, parent)) if parent is not None else []
        cut = find_clean_cut(G, Zs, Zstar)
        if cut.fallback:
            self.stats.clean_cut_fallbacks += 1
        tree = tree.replace_node(node.with_graph(cut.graph))
        ti = TreeInstance(tree, ti.weights, ti.terminals, ti.k)
        leaf = leaves[cut.index]
        H = set(cut.H)
        inner = [e for e, a, b in cut.graph.edges if a in H and b in H]
        self._event(event="clean-cut", sub_leaf=s, leaf=leaf, swaps=[list(p) for p in cut.swaps], size=len(H))
        if set(inner) & ti.terminals:
            new_tree, new_leaf, ny = split_cographic_subleaf(tree, s, Zs[cut.index], H)
            self.stats.fire(f"split-{ny}")
            self._event(event="split", sub_leaf=s, new_leaf=new_leaf, attachments=ny)
            child = TreeInstance(new_tree, ti.weights, ti.terminals, ti.k)
            self._observe(f"split-{ny}", ti, [(0, child)])
            return self.solve(child, depth)
        return self._reduce_cographic_3leaf(ti, s, leaf, H, depth)

    def _reduce_cographic_3leaf(self, ti, s, leaf, H, depth):
        k = ti.k
        tree = ti.tree
        node, lnode = tree.node(s), tree.node(leaf)
        G = node.graph
        e = sorted(tree.sumset(s, leaf))
        heavy = {x: k + 1 for x in e}
        lw = self._leaf_weights(ti, leaf, heavy)
        singles1 = [solve_basic(lnode, lw, [x], k) for x in e]
        k1 = [k + 1 if x is None else x[0] for x in singles1]
        split1 = _two_target_split(lnode, lw, e[0], e[1], k)
        # the other side of the cut: H plus an apex joined to the attachments
        xs, ys = [], []
        for z in e:
            a, b = G.endpoints(z)
            y, x = (a, b) if a in H else (b, a)
            xs.append(x)
            ys.append(y)
        apex = "apex"
        while apex in H:
            apex += "'"
        prime = []
        for _ in range(3):
            prime.append(tree.fresh_id("h", prime))
        inner = [(x, a, b) for x, a, b in G.edges if a in H and b in H]
        Hp = Multigraph(sorted(H) + [apex], inner + [(prime[i], apex, ys[i]) for i in range(3)])
        hnode = BasicNode(f"{s}.H", "cographic", Hp)
        hw = {x: ti.weights[x] for x, _, _ in inner}
        hw.update({x: k + 1 for x in prime})
        singles2 = [solve_basic(hnode, hw, [x], k) for x in prime]
        k2 = [k + 1 if x is None else x[0] for x in singles2]
        split2 = _two_target_split(hnode, hw, prime[0], prime[1], k)
        self._check_triangle(k1, split1, k)
        self._check_triangle(k2, split2, k)
        chosen = split1 if split1.cost <= split2.cost else split2
        zs = []
        taken = set(G.vertices)
        for i in range(3):
            zv = f"z{i + 1}"
            while zv in taken:
                zv += "'"
            taken.add(zv)
            zs.append(zv)
        ids = []
        for _ in range(6):
            ids.append(tree.fresh_id("g", ids))
        spoke = {ids[i]: min(k1[i], k2[i]) for i in range(3)}
        if chosen.cost <= k:
            p1, p2, p3 = chosen.parts
        else:
            p1 = p2 = p3 = k + 1
        tri = {ids[3]: p1, ids[4]: p2, ids[5]: p3}  # z1z3, z2z3, z1z2
        self.stats.observation_checks += 1
        for i, (a, b) in enumerate(((ids[5], ids[3]), (ids[5], ids[4]), (ids[3], ids[4]))):
            if tri[a] + tri[b] < spoke[ids[i]]:
                raise SolverError("gadget triangle is cheaper than a spoke")
        G2 = G.delete_vertices(H).add_vertex(zs[0]).add_vertex(zs[1]).add_vertex(zs[2])
        for i in range(3):
            G2 = G2.add_edge(ids[i], xs[i], zs[i])
        G2 = G2.add_edge(ids[3], zs[0], zs[2]).add_edge(ids[4], zs[1], zs[2]).add_edge(ids[5], zs[0], zs[1])
        rest = tree.remove_leaf(leaf).replace_node(node.with_graph(G2))
        keep = set(rest.ground())
        w = {x: y for x, y in ti.weights.items() if x in keep}
        w.update(spoke)
        w.update(tri)
        self.stats.fire("cographic-3-leaf")
        self._event(event="cographic-3-leaf", leaf=leaf, k=k, leaf_singles=k1, side_singles=k2,
                    leaf_pair=split1.cost, side_pair=split2.cost,
                    spokes=[spoke[x] for x in ids[:3]], triangle=[tri[x] for x in ids[3:]])
        child = TreeInstance(rest, w, ti.terminals, k)
        self._observe("cographic-3-leaf", ti, [(0, child)])
        sub = self.solve(child, depth)
        if sub is None:
            return None
        pieces = []
        for i in range(3):
            if ids[i] in sub[1]:
                pieces += [S[1] for S in (singles1[i], singles2[i]) if S is not None]
        if set(ids[3:]) & sub[1]:
            pieces += list(chosen.pieces)
        pieces = [frozenset(p) - set(prime) for p in pieces]
        F = self._lift(ti, sub[1], ids, pieces, sub[0])
        return sum(ti.weights[x] for x in F), F


def _run_child(args):
    child, check = args
    d = Driver(check=check, trace=[])
    res = d.solve(child, depth=1)
    return res, d.stats, d.trace


def solve(ti: TreeInstance, check: bool = False, jobs: int = 1, trace: Optional[List[dict]] = None,
          observer: Optional[Observer] = None) -> SolveResult:
    """Exact optimum of Space Cover on the matroid composed from the tree."""
    d = Driver(check=check, jobs=jobs, trace=trace, observer=observer)
    res = d.solve(ti)
    stats = d.stats.as_dict()
    if res is None:
        return SolveResult.no(**stats)
    d._verify(ti, res)
    return SolveResult.yes(res[0], res[1], **stats)


def rank_reduction(M: BinaryMatroid, h: int, k: int, solver=None) -> SolveResult:
    """Fewest deletions (at most k) that lower the rank of M by h or more.

    X works exactly when it splits as F plus h elements T with F spanning T
    in the dual, so each choice of T is a unit-weight Space Cover instance
    on the dual with budget k - h.
    """
    if h <= 0:
        return SolveResult.yes(0, ())
    if k < h:
        return SolveResult.no()
    solver = solver or solve_exhaustive
    D = dualize(M)
    unit = {e: 1 for e in M.elements}
    best = None
    for T in combinations(M.elements, h):
        budget = k - h if best is None else min(k - h, best.opt_weight - h - 1)
        if budget < 0:
            break
        res = solver(Instance(D, unit, frozenset(T), budget))
        if res.ok:
            best = SolveResult.yes(res.opt_weight + h, res.witness | set(T))
    return best or SolveResult.no()
