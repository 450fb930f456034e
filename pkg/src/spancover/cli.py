"""Command-line front end: ``spancover solve|verify|gen|rank-reduce``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from .basicsolve import SolveResult, SolverError, solve_exhaustive, solve_graphic, solve_graphic_restricted, solve_r10, solve_rsfs
from .cuts import solve_cographic, solve_cographic_restricted
from .driver import TreeInstance, rank_reduction
from .driver import solve as solve_tree
from .formats import FormatError, ParsedInstance, format_instance, read_instance
from .generate import random_graph_instance, random_tree_instance
from .gf2core import MatroidError, delete, dualize, spans
from .graphs import GraphError
from .oracle import OracleCapError, oracle_cap, brute_feedback, brute_rank_reduction, brute_restricted, brute_space_cover
from .preprocess import Instance, RestrictedInstance
from .sums import SumError


class CliError(Exception):
    pass


@dataclass
class RunReport:
    answer: str
    opt_weight: Optional[int]
    witness: Optional[FrozenSet[str]]
    stats: Dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    trace_path: Optional[str] = None

    @classmethod
    def of(cls, res: SolveResult, seconds: float, trace_path: Optional[str] = None) -> "RunReport":
        return cls(res.answer, res.opt_weight, res.witness, dict(res.stats), seconds, trace_path)

    def lines(self) -> List[str]:
        head = "no" if self.witness is None else f"yes {self.opt_weight} {{{','.join(sorted(self.witness))}}}"
        stats = " ".join(f"{k}={v}" for k, v in sorted(self.stats.items()))
        info = f"stats {stats} time={self.seconds:.3f}s" if stats else f"stats time={self.seconds:.3f}s"
        if self.trace_path:
            info += f" trace={self.trace_path}"
        weight = "none" if self.opt_weight is None else self.opt_weight
        return [head, info, f"RESULT {self.answer} {weight}"]


def _budget(p: ParsedInstance, k: Optional[int]) -> int:
    if k is not None:
        return k
    if p.k is None:
        raise CliError("no budget: give a 'k' line or --k")
    return p.k


def _restricted(p: ParsedInstance) -> bool:
    if (p.estar is None) != (p.tstar is None):
        raise CliError("estar and tstar must be given together")
    return p.estar is not None


def run_solve(p: ParsedInstance, k: int, dual: bool = False, jobs: int = 1, trace: Optional[list] = None) -> SolveResult:
    w = p.full_weights()
    T = frozenset(p.terminals)
    if dual:
        if _restricted(p):
            raise CliError("--dual does not take estar/tstar")
        M = p.composed()
        if p.kind == "graphic":
            solver = lambda inst: solve_cographic(inst, p.graph)
        elif p.kind == "cographic":
            solver = lambda inst: solve_graphic(inst, p.graph)
        else:
            solver = solve_exhaustive
        return solve_rsfs(M, w, T, k, solver)
    if _restricted(p):
        inst = RestrictedInstance(p.composed(), w, T, k, estar=p.estar, tstar=p.tstar)
        if p.kind == "graphic":
            return solve_graphic_restricted(inst, p.graph)
        if p.kind == "cographic":
            return solve_cographic_restricted(inst, p.graph)
        if p.kind == "matrix":
            return brute_restricted(inst)
        raise CliError("restricted instances are not supported for trees")
    if p.kind == "tree":
        return solve_tree(TreeInstance(p.tree, w, T, k), jobs=jobs, trace=trace)
    inst = Instance(p.composed(), w, T, k)
    if p.kind == "graphic":
        return solve_graphic(inst, p.graph)
    if p.kind == "cographic":
        return solve_cographic(inst, p.graph)
    return solve_r10(inst)


def oracle_solve(p: ParsedInstance, k: int, dual: bool = False) -> SolveResult:
    w = p.full_weights()
    T = frozenset(p.terminals)
    M = p.composed()
    if dual:
        return brute_feedback(M, w, T, k)
    if _restricted(p):
        return brute_restricted(RestrictedInstance(M, w, T, k, estar=p.estar, tstar=p.tstar))
    return brute_space_cover(Instance(M, w, T, k))


def _check_witness(p: ParsedInstance, res: SolveResult, dual: bool) -> None:
    """Re-check a yes answer directly before printing it."""
    if not res.ok:
        return
    M = dualize(p.composed()) if dual else p.composed()
    T = set(p.terminals)
    if res.witness & T or not spans(M, res.witness, T):
        raise SolverError("witness failed the final span check")
    if p.estar is not None and not dual and not spans(M, res.witness - {p.estar}, [p.tstar]):
        raise SolverError("witness needs estar to span tstar")


def _verify(res: SolveResult, ref_fn, out) -> int:
    try:
        ref = ref_fn()
    except OracleCapError as exc:
        print(f"verify skipped: {exc}", file=out)
        return 0
    same = (res.answer, res.opt_weight) == (ref.answer, ref.opt_weight)
    print(f"verify {'ok' if same else 'MISMATCH'} oracle {ref}", file=out)
    return 0 if same else 1


def cmd_solve(args, out) -> int:
    p = read_instance(args.path)
    k = _budget(p, args.k)
    trace: Optional[list] = [] if args.trace else None
    t0 = time.perf_counter()
    res = run_solve(p, k, dual=args.dual, jobs=args.jobs, trace=trace)
    elapsed = time.perf_counter() - t0
    _check_witness(p, res, args.dual)
    if args.trace:
        with open(args.trace, "w") as fh:
            for ev in trace if p.kind == "tree" else [{"event": "basic", "kind": p.kind}]:
                fh.write(json.dumps(ev, sort_keys=True) + "\n")
    print("\n".join(RunReport.of(res, elapsed, args.trace).lines()), file=out)
    if args.verify:
        return _verify(res, lambda: oracle_solve(p, k, args.dual), out)
    return 0


def cmd_rank_reduce(args, out) -> int:
    p = read_instance(args.path)
    k = _budget(p, args.k)
    if args.h is None:
        raise CliError("rank-reduce needs --h")
    M = p.composed()
    if p.kind == "graphic":
        solver = lambda inst: solve_cographic(inst, p.graph)
    elif p.kind == "cographic":
        solver = lambda inst: solve_graphic(inst, p.graph)
    else:
        solver = solve_exhaustive
    t0 = time.perf_counter()
    res = rank_reduction(M, args.h, k, solver)
    elapsed = time.perf_counter() - t0
    if res.ok and M.full_rank() - delete(M, res.witness).full_rank() < args.h:
        raise SolverError("deletion set does not lower the rank enough")
    print("\n".join(RunReport.of(res, elapsed).lines()), file=out)
    if args.verify:
        return _verify(res, lambda: brute_rank_reduction(M, args.h, k), out)
    return 0


def cmd_gen(args, out) -> int:
    if args.verifiable and args.max_ground > oracle_cap():
        raise CliError(f"--max-ground {args.max_ground} is above the oracle cap {oracle_cap()}")
    if args.nodes < 1 or args.max_ground < 1:
        raise CliError("--nodes and --max-ground must be positive")
    try:
        if args.kind == "tree":
            p = random_tree_instance(args.seed, max_nodes=args.nodes, max_ground=args.max_ground, max_k=args.max_k)
        else:
            p = random_graph_instance(args.seed, kind=args.kind, max_vertices=args.vertices, max_k=args.max_k)
    except RuntimeError as exc:
        raise CliError(str(exc)) from None
    text = format_instance(p)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spancover", description="Exact Space Cover on binary and regular matroids.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("path", help="instance file")
        sp.add_argument("--k", type=int, help="budget (overrides the file)")

    sp = sub.add_parser("solve", help="solve an instance file")
    common(sp)
    sp.add_argument("--dual", action="store_true", help="solve the subset feedback problem through the dual")
    sp.add_argument("--verify", action="store_true", help="cross-check with the brute-force oracle")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for top-level branches")
    sp.add_argument("--trace", help="write rule events as JSON lines")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="solve and cross-check with the oracle")
    common(sp)
    sp.add_argument("--dual", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--trace")
    sp.set_defaults(func=cmd_solve, verify=True)

    sp = sub.add_parser("rank-reduce", help="delete at most k elements to drop the rank by h")
    common(sp)
    sp.add_argument("--h", type=int, help="required rank drop")
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_rank_reduce)

    sp = sub.add_parser("gen", help="write a random instance")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--kind", choices=("tree", "graphic", "cographic"), default="tree")
    sp.add_argument("--nodes", type=int, default=3, help="most basic nodes in a tree")
    sp.add_argument("--max-ground", type=int, default=14, help="most elements in the composed tree")
    sp.add_argument("--vertices", type=int, default=7, help="most vertices in a graph instance")
    sp.add_argument("--max-k", type=int, default=4)
    sp.add_argument("--verifiable", action="store_true", help="refuse shapes the oracle cannot check")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (CliError, FormatError, OracleCapError, SolverError, SumError, MatroidError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
