"""
Instance files.

The first non-blank line names the structure: ``matrix <name>``,
``graph <name> graphic|cographic`` or ``tree <name>``.  The structure block
follows, mixed with instance lines ``w <id> <int>``, ``t <id> ...``,
``k <int>``, ``estar <id>`` and ``tstar <id>``.  ``#`` starts a comment.
Elements without a ``w`` line weigh 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .gf2core import BinaryMatroid, MatroidError, format_matrix_block, parse_matrix_block
from .graphs import GraphError, Multigraph, bond_matroid, cycle_matroid, format_graph_block, parse_graph_block
from .sums import ConflictTree, SumError, compose_tree, format_tree_block, parse_tree_block

__all__ = ["FormatError", "ParsedInstance", "parse_instance", "format_instance", "read_instance"]

INSTANCE_KEYS = ("w", "t", "k", "estar", "tstar")


class FormatError(ValueError):
    pass


@dataclass
class ParsedInstance:
    kind: str  # matrix | graphic | cographic | tree
    name: str
    matroid: Optional[BinaryMatroid] = None
    graph: Optional[Multigraph] = None
    tree: Optional[ConflictTree] = None
    weights: Dict[str, int] = field(default_factory=dict)
    terminals: List[str] = field(default_factory=list)
    k: Optional[int] = None
    estar: Optional[str] = None
    tstar: Optional[str] = None

    def ground(self) -> List[str]:
        if self.kind == "tree":
            return self.tree.ground()
        if self.kind == "matrix":
            return list(self.matroid.elements)
        return list(self.graph.edge_ids)

    def composed(self) -> BinaryMatroid:
        if self.kind == "tree":
            return compose_tree(self.tree)
        if self.kind == "matrix":
            return self.matroid
        if self.kind == "graphic":
            return cycle_matroid(self.graph)
        return bond_matroid(self.graph)

    def full_weights(self) -> Dict[str, int]:
        return {e: self.weights.get(e, 1) for e in self.ground()}


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_instance(text: str) -> ParsedInstance:
    lines = [_strip(x) for x in text.splitlines()]
    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i == len(lines):
        raise FormatError("empty instance file")
    head = lines[i].split()
    head_no = i + 1
    i += 1
    if head[0] == "matrix" and len(head) == 2:
        kind = "matrix"
    elif head[0] == "graph" and len(head) == 3 and head[2] in ("graphic", "cographic"):
        kind = head[2]
    elif head[0] == "tree" and len(head) == 2:
        kind = "tree"
    else:
        raise FormatError(f"line {head_no}: expected 'matrix <name>', 'graph <name> graphic|cographic' or 'tree <name>'")
    inst = ParsedInstance(kind, head[1])
    # structure lines keep their positions (others become blank) so that
    # block parsers report true line numbers
    block: List[str] = []
    block_start = i + 1
    extra: List[Tuple[int, List[str]]] = []
    awaiting_size = kind == "matrix"
    owed = 0
    for no in range(i + 1, len(lines) + 1):
        raw = lines[no - 1]
        parts = raw.split()
        if not parts:
            block.append("")
            continue
        if awaiting_size:
            try:
                owed = int(parts[0]) + 1
            except ValueError:
                raise FormatError(f"line {no}: expected 'rows cols'") from None
            awaiting_size = False
            block.append(raw)
            continue
        if owed:
            owed -= 1
            block.append(raw)
            continue
        if parts[0] in INSTANCE_KEYS:
            extra.append((no, parts))
            block.append("")
            continue
        block.append(raw)
        if kind == "tree" and parts[0] == "node" and parts[2:3] == ["r10like"]:
            awaiting_size = True
    if kind == "matrix":
        while block and not block[0]:
            block.pop(0)
            block_start += 1
    try:
        if kind == "matrix":
            inst.matroid = parse_matrix_block(block, block_start)
        elif kind == "tree":
            inst.tree = parse_tree_block(block, block_start)
        else:
            inst.graph = parse_graph_block(block, block_start)
    except (MatroidError, GraphError, SumError) as exc:
        raise FormatError(str(exc)) from None
    ground = set(inst.ground())
    for no, parts in extra:
        key = parts[0]
        try:
            if key == "w":
                if len(parts) != 3:
                    raise ValueError
                inst.weights[parts[1]] = int(parts[2])
            elif key == "t":
                if len(parts) < 2:
                    raise ValueError
                inst.terminals.extend(parts[1:])
            elif key == "k":
                inst.k = int(parts[1])
            elif key == "estar":
                inst.estar = parts[1]
            elif key == "tstar":
                inst.tstar = parts[1]
        except (ValueError, IndexError):
            raise FormatError(f"line {no}: malformed '{key}' line") from None
        if key == "w" and inst.weights[parts[1]] < 0:
            raise FormatError(f"line {no}: negative weight")
        for x in parts[1:] if key == "t" else parts[1:2] if key in ("w", "estar", "tstar") else []:
            if x not in ground:
                raise FormatError(f"line {no}: unknown element {x!r}")
    return inst


def read_instance(path: str) -> ParsedInstance:
    with open(path) as fh:
        return parse_instance(fh.read())


def format_instance(inst: ParsedInstance) -> str:
    if inst.kind == "matrix":
        out = [f"matrix {inst.name}"] + format_matrix_block(inst.matroid)
    elif inst.kind == "tree":
        out = [f"tree {inst.name}"] + format_tree_block(inst.tree)
    else:
        out = [f"graph {inst.name} {inst.kind}"] + format_graph_block(inst.graph)
    for e in inst.ground():
        if e in inst.weights:
            out.append(f"w {e} {inst.weights[e]}")
    if inst.terminals:
        out.append("t " + " ".join(inst.terminals))
    if inst.k is not None:
        out.append(f"k {inst.k}")
    if inst.estar is not None:
        out.append(f"estar {inst.estar}")
    if inst.tstar is not None:
        out.append(f"tstar {inst.tstar}")
    return "\n".join(out) + "\n"
