"""
Space Cover instances and the elementary reduction rules.

Plain instances use the zero-weight, terminal-circuit, loop, parallel and
stopping rules.  Restricted instances (a free element ``estar`` that must not
be needed to span terminal ``tstar``) use the starred variants and are
demoted to plain instances once ``estar`` or ``tstar`` disappears.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from .gf2core import BinaryMatroid, contract, delete

__all__ = [
    "Instance",
    "RestrictedInstance",
    "ReductionTrace",
    "preprocess",
    "preprocess_restricted",
    "find_circuit_in",
    "replay",
    "YES",
    "NO",
]

YES = "yes"
NO = "no"


@dataclass(frozen=True)
class Instance:
    matroid: BinaryMatroid
    weights: Dict[str, int]
    terminals: FrozenSet[str]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        els = set(self.matroid.elements)
        if not self.terminals <= els:
            raise ValueError("terminals must be elements of the matroid")
        missing = els - set(self.weights)
        if missing:
            raise ValueError(f"missing weights for {sorted(missing)}")
        if any(self.weights[e] < 0 for e in els):
            raise ValueError("weights must be nonnegative")
        if self.k < 0:
            raise ValueError("budget must be nonnegative")

    @property
    def nonterminals(self) -> List[str]:
        return [e for e in self.matroid.elements if e not in self.terminals]

    def weight_of(self, F: Iterable[str]) -> int:
        return sum(self.weights[e] for e in F)

    def with_budget(self, k: int) -> "Instance":
        return replace(self, k=k)


@dataclass(frozen=True)
class RestrictedInstance(Instance):
    estar: str = ""
    tstar: str = ""

    def __post_init__(self):
        super().__post_init__()
        if self.estar not in self.matroid:
            raise ValueError(f"estar {self.estar!r} is not an element")
        if self.tstar not in self.terminals:
            raise ValueError(f"tstar {self.tstar!r} is not a terminal")
        if self.weights[self.estar] != 0:
            raise ValueError("estar must have weight 0")

    def demote(self) -> Instance:
        return Instance(self.matroid, self.weights, self.terminals, self.k)


@dataclass
class ReductionTrace:
    """Rule firings in order: (rule, affected ids, budget change)."""

    steps: List[Tuple[str, Tuple[str, ...], int]] = field(default_factory=list)
    verdict: str = "open"

    def add(self, rule: str, ids: Iterable[str], dk: int = 0) -> None:
        self.steps.append((rule, tuple(ids), dk))

    @property
    def contracted(self) -> List[str]:
        """Elements contracted because they were free; a witness of the reduced
        instance plus these spans the original terminals."""
        return [i for r, ids, _ in self.steps if r in ("zero", "zero*") for i in ids]


def find_circuit_in(M: BinaryMatroid, ids: Iterable[str]) -> Optional[List[str]]:
    """A circuit inside the given set, or None if it is independent."""
    members = sorted(ids)
    m = M.mask(members)
    if M.rank_mask(m) == len(members):
        return None
    for e in members:
        trial = m & ~(1 << M.index(e))
        if M.rank_mask(trial) < bin(trial).count("1"):
            m = trial
    return sorted(M.ids(m))


def _drop(inst_w: Dict[str, int], ids: Iterable[str]) -> Dict[str, int]:
    gone = set(ids)
    return {e: w for e, w in inst_w.items() if e not in gone}


def _parallel_extras(M: BinaryMatroid, weights: Dict[str, int], candidates: List[str], keep_first: Optional[str] = None) -> List[str]:
    """Nonterminals to delete so each parallel class keeps one cheapest copy."""
    classes: Dict[int, List[str]] = {}
    for e in candidates:
        c = M.column(e)
        if c:
            classes.setdefault(c, []).append(e)
    extra = []
    for members in classes.values():
        if len(members) < 2:
            continue
        # the forced element is never removed; among the rest keep one cheapest copy
        others = [e for e in members if e != keep_first]
        best = min(others, key=lambda e: (weights[e], e))
        extra.extend(e for e in others if e != best)
    return sorted(extra)


def preprocess(inst: Instance) -> Tuple[Union[Instance, str], ReductionTrace]:
    trace = ReductionTrace()
    M, w, T, k = inst.matroid, dict(inst.weights), set(inst.terminals), inst.k
    changed = True
    while changed:
        changed = False
        zeros = [e for e in M.elements if e not in T and w[e] == 0]
        if zeros:
            for e in zeros:
                M = contract(M, [e])
                trace.add("zero", [e])
            w = _drop(w, zeros)
            changed = True
        while True:
            circ = find_circuit_in(M, T)
            if circ is None:
                break
            e = max(circ)
            M = delete(M, [e])
            T.discard(e)
            w = _drop(w, [e])
            trace.add("terminal-circuit", [e])
            changed = True
        loops = [e for e in M.elements if e not in T and M.is_loop(e)]
        if loops:
            M = delete(M, loops)
            w = _drop(w, loops)
            trace.add("loop", loops)
            changed = True
        extra = _parallel_extras(M, w, [e for e in M.elements if e not in T])
        if extra:
            M = delete(M, extra)
            w = _drop(w, extra)
            trace.add("parallel", extra)
            changed = True
    if not T:
        trace.verdict = YES
        return YES, trace
    if len(M) == len(T) or len(T) > k:
        trace.verdict = NO
        return NO, trace
    return Instance(M, w, frozenset(T), k), trace


def preprocess_restricted(inst: RestrictedInstance) -> Tuple[Union[RestrictedInstance, Instance, str], ReductionTrace]:
    trace = ReductionTrace()
    M, w, T, k = inst.matroid, dict(inst.weights), set(inst.terminals), inst.k
    es, ts = inst.estar, inst.tstar

    def demoted():
        trace.add("demote", [es, ts])
        res, sub = preprocess(Instance(M, w, frozenset(T), k))
        trace.steps.extend(sub.steps)
        trace.verdict = sub.verdict
        return res, trace

    changed = True
    while changed:
        changed = False
        zeros = [e for e in M.elements if e not in T and e != es and w[e] == 0]
        if zeros:
            for e in zeros:
                M = contract(M, [e])
                trace.add("zero*", [e])
            w = _drop(w, zeros)
            changed = True
        if M.is_loop(ts):
            M = delete(M, [ts])
            T.discard(ts)
            w = _drop(w, [ts])
            trace.add("terminal-circuit*", [ts])
            return demoted()
        while True:
            circ = find_circuit_in(M, T)
            if circ is None:
                break
            e = max(x for x in circ if x != ts)
            M = delete(M, [e])
            T.discard(e)
            w = _drop(w, [e])
            trace.add("terminal-circuit*", [e])
            changed = True
        loops = [e for e in M.elements if e not in T and M.is_loop(e)]
        if loops:
            M = delete(M, loops)
            w = _drop(w, loops)
            trace.add("loop", loops)
            if es in loops:
                return demoted()
            changed = True
        extra = _parallel_extras(M, w, [e for e in M.elements if e not in T], keep_first=es)
        if extra:
            M = delete(M, extra)
            w = _drop(w, extra)
            trace.add("parallel*", extra)
            changed = True
    if not T:
        trace.verdict = YES
        return YES, trace
    if len(M) == len(T) or len(T) > k + 1:
        trace.verdict = NO
        return NO, trace
    return RestrictedInstance(M, w, frozenset(T), k, estar=es, tstar=ts), trace


def replay(inst: Instance, trace: ReductionTrace) -> Instance:
    """Apply the recorded deletions and contractions to the original instance."""
    M, w, T = inst.matroid, dict(inst.weights), set(inst.terminals)
    for rule, ids, _ in trace.steps:
        if rule == "demote":
            continue
        if rule in ("zero", "zero*"):
            M = contract(M, ids)
        else:
            M = delete(M, ids)
        T -= set(ids)
        w = _drop(w, ids)
    return Instance(M, w, frozenset(T), inst.k)
