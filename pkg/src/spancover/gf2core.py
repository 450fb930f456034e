"""
Binary matroids over GF(2).

A matroid is stored as a row-major 0/1 matrix where every row is a Python
int and bit ``j`` of a row is the entry in column ``j``.  Columns are labeled
by stable string ids.  Subsets of the ground set are passed around as
iterables of ids at the API boundary and as int bitmasks internally.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "BinaryMatroid",
    "MatroidError",
    "gf2_rank",
    "rref",
    "nullspace",
    "rank",
    "is_independent",
    "spans",
    "fundamental_circuit",
    "is_cycle",
    "dualize",
    "delete",
    "contract",
    "add_parallel",
    "enumerate_circuits",
    "r10",
    "parse_matrix_block",
    "format_matrix_block",
    "CIRCUIT_CAP",
]

CIRCUIT_CAP = 24


class MatroidError(ValueError):
    pass


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank of a list of GF(2) vectors packed as ints."""
    basis: List[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def rref(rows: Sequence[int], ncols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form; pivots are chosen leftmost (lowest bit).

    Returns the nonzero reduced rows and the pivot column of each.
    """
    rows = list(rows)
    out: List[int] = []
    pivots: List[int] = []
    for col in range(ncols):
        bit = 1 << col
        idx = next((i for i, r in enumerate(rows) if r & bit), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        rows = [r ^ piv if r & bit else r for r in rows]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
    return out, pivots


def nullspace(rows: Sequence[int], ncols: int) -> List[int]:
    """A basis of {x : row . x = 0 for every row}, one vector per free column."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = 1 << j
        for r, p in zip(red, pivots):
            if (r >> j) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


class BinaryMatroid:
    """Binary matroid given by a GF(2) representation with labeled columns."""

    __slots__ = ("elements", "rows", "_index", "_cols", "_rank")

    def __init__(self, elements: Sequence[str], rows: Sequence[int]):
        self.elements: Tuple[str, ...] = tuple(str(e) for e in elements)
        if len(set(self.elements)) != len(self.elements):
            raise MatroidError("duplicate element ids")
        full = (1 << len(self.elements)) - 1
        self.rows: Tuple[int, ...] = tuple(r for r in rows if r & full)
        if any(r & ~full for r in self.rows):
            raise MatroidError("row has bits beyond the column count")
        self._index: Dict[str, int] = {e: i for i, e in enumerate(self.elements)}
        self._cols: Optional[Tuple[int, ...]] = None
        self._rank: Optional[int] = None

    @classmethod
    def from_columns(cls, elements: Sequence[str], columns: Sequence[int]) -> "BinaryMatroid":
        nrows = max((c.bit_length() for c in columns), default=0)
        rows = []
        for i in range(nrows):
            r = 0
            for j, c in enumerate(columns):
                if (c >> i) & 1:
                    r |= 1 << j
            rows.append(r)
        return cls(elements, rows)

    # ground set helpers
    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: str) -> bool:
        return e in self._index

    def __repr__(self) -> str:
        return f"BinaryMatroid({len(self.elements)} elements, rank {self.full_rank()})"

    def index(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise MatroidError(f"unknown element {e!r}") from None

    def mask(self, ids: Iterable[str]) -> int:
        m = 0
        for e in ids:
            m |= 1 << self.index(e)
        return m

    def ids(self, mask: int) -> FrozenSet[str]:
        return frozenset(e for i, e in enumerate(self.elements) if (mask >> i) & 1)

    @property
    def ground_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    @property
    def columns(self) -> Tuple[int, ...]:
        """Column vectors packed as ints (bit i = row i)."""
        if self._cols is None:
            cols = []
            for j in range(len(self.elements)):
                c = 0
                for i, r in enumerate(self.rows):
                    if (r >> j) & 1:
                        c |= 1 << i
                cols.append(c)
            self._cols = tuple(cols)
        return self._cols

    def column(self, e: str) -> int:
        return self.columns[self.index(e)]

    def rank_mask(self, mask: int) -> int:
        return gf2_rank(r & mask for r in self.rows)

    def full_rank(self) -> int:
        if self._rank is None:
            self._rank = gf2_rank(self.rows)
        return self._rank

    def is_loop(self, e: str) -> bool:
        return self.column(e) == 0

    def is_coloop(self, e: str) -> bool:
        m = self.ground_mask & ~(1 << self.index(e))
        return self.rank_mask(m) < self.full_rank()

    def parallel(self, e: str, f: str) -> bool:
        ce, cf = self.column(e), self.column(f)
        return e != f and ce != 0 and ce == cf

    def relabel(self, mapping: Dict[str, str]) -> "BinaryMatroid":
        return BinaryMatroid([mapping.get(e, e) for e in self.elements], self.rows)

    def reordered(self, order: Sequence[str]) -> "BinaryMatroid":
        """Same matroid with columns in the given order."""
        cols = self.columns
        return BinaryMatroid.from_columns(order, [cols[self.index(e)] for e in order])

    def same_as(self, other: "BinaryMatroid") -> bool:
        """Equal ground sets and equal cycle spaces (hence equal matroids)."""
        if set(self.elements) != set(other.elements):
            return False
        o = other.reordered(self.elements)
        return _row_space(self.rows, len(self.elements)) == _row_space(o.rows, len(self.elements))


def _row_space(rows: Sequence[int], ncols: int) -> Tuple[int, ...]:
    red, _ = rref(rows, ncols)
    return tuple(sorted(red))


def _as_mask(M: BinaryMatroid, S) -> int:
    if isinstance(S, int):
        return S
    if isinstance(S, str):
        return M.mask([S])
    return M.mask(S)


def rank(M: BinaryMatroid, S: Iterable[str]) -> int:
    return M.rank_mask(_as_mask(M, S))


def is_independent(M: BinaryMatroid, S: Iterable[str]) -> bool:
    m = _as_mask(M, S)
    return M.rank_mask(m) == bin(m).count("1")


def spans(M: BinaryMatroid, F: Iterable[str], T: Iterable[str]) -> bool:
    f = _as_mask(M, F)
    t = _as_mask(M, T)
    return M.rank_mask(f | t) == M.rank_mask(f)


def is_cycle(M: BinaryMatroid, S: Iterable[str]) -> bool:
    m = _as_mask(M, S)
    return all(bin(r & m).count("1") % 2 == 0 for r in M.rows)


def fundamental_circuit(M: BinaryMatroid, B: Iterable[str], e: str) -> FrozenSet[str]:
    b = _as_mask(M, B)
    if not is_independent(M, b):
        raise MatroidError("B is not independent")
    ei = M.index(e)
    if (b >> ei) & 1:
        raise MatroidError("e already in B")
    whole = b | (1 << ei)
    if M.rank_mask(whole) == bin(whole).count("1"):
        raise MatroidError("B + e is independent; no circuit")
    # drop every element of B whose removal keeps e dependent on the rest
    circ = whole
    for i in range(len(M)):
        bit = 1 << i
        if i == ei or not (b & bit):
            continue
        rest = circ & ~bit
        if M.rank_mask(rest) < bin(rest).count("1"):
            circ = rest
    return M.ids(circ)


def dualize(M: BinaryMatroid) -> BinaryMatroid:
    """Representation of the dual on the same labels.

    Bringing the matrix to [I | A] form (leftmost pivots), the dual is [A^T | I]
    after undoing the column permutation; its rows span the null space of M.
    """
    return BinaryMatroid(M.elements, nullspace(M.rows, len(M)))


def _drop_column(rows: Iterable[int], j: int) -> List[int]:
    low = (1 << j) - 1
    return [(r & low) | ((r >> (j + 1)) << j) for r in rows]


def delete(M: BinaryMatroid, X: Iterable[str]) -> BinaryMatroid:
    idx = sorted((M.index(x) for x in set(X)), reverse=True)
    rows = list(M.rows)
    elements = list(M.elements)
    for j in idx:
        rows = _drop_column(rows, j)
        del elements[j]
    return BinaryMatroid(elements, rows)


def contract(M: BinaryMatroid, X: Iterable[str]) -> BinaryMatroid:
    """Contract each element of X in turn; a loop is simply deleted."""
    rows = list(M.rows)
    elements = list(M.elements)
    for x in X:
        j = elements.index(x) if x in elements else None
        if j is None:
            raise MatroidError(f"unknown element {x!r}")
        bit = 1 << j
        piv = next((r for r in rows if r & bit), None)
        if piv is not None:
            rows.remove(piv)
            rows = [r ^ piv if r & bit else r for r in rows]
        rows = _drop_column(rows, j)
        del elements[j]
    return BinaryMatroid(elements, rows)


def add_parallel(M: BinaryMatroid, e: str, new_id: Optional[str] = None) -> BinaryMatroid:
    if M.is_loop(e):
        raise MatroidError(f"cannot add a parallel copy of loop {e!r}")
    if new_id is None:
        new_id = e + "'"
        while new_id in M:
            new_id += "'"
    if new_id in M:
        raise MatroidError(f"element {new_id!r} already exists")
    n = len(M)
    j = M.index(e)
    rows = [r | (((r >> j) & 1) << n) for r in M.rows]
    return BinaryMatroid(M.elements + (new_id,), rows)


def enumerate_circuits(M: BinaryMatroid, size_bound: int, cap: int = CIRCUIT_CAP) -> List[FrozenSet[str]]:
    """All circuits with at most size_bound elements, smallest first."""
    n = len(M)
    if n > cap:
        raise MatroidError(f"ground set of {n} elements exceeds circuit enumeration cap {cap}")
    found: List[int] = []
    for size in range(1, min(size_bound, n) + 1):
        for combo in combinations(range(n), size):
            m = 0
            for i in combo:
                m |= 1 << i
            if any(c & m == c for c in found):
                continue
            if M.rank_mask(m) == size - 1:
                found.append(m)
    return [M.ids(m) for m in found]


def r10() -> BinaryMatroid:
    """The 10-element matroid whose columns are the weight-3 vectors of GF(2)^5."""
    cols = []
    for combo in combinations(range(5), 3):
        c = 0
        for i in combo:
            c |= 1 << i
        cols.append(c)
    return BinaryMatroid.from_columns([f"r{i}" for i in range(10)], cols)


def parse_matrix_block(lines: Sequence[str], lineno: int = 1) -> BinaryMatroid:
    """Parse ``rows cols``, a header of ids, then ``rows`` lines of 0/1."""
    if not lines:
        raise MatroidError(f"line {lineno}: empty matrix block")
    try:
        nrows, ncols = (int(x) for x in lines[0].split())
    except ValueError:
        raise MatroidError(f"line {lineno}: expected 'rows cols'") from None
    if len(lines) < nrows + 2:
        raise MatroidError(f"line {lineno}: matrix block too short")
    ids = lines[1].split()
    if len(ids) != ncols:
        raise MatroidError(f"line {lineno + 1}: expected {ncols} element ids, got {len(ids)}")
    rows = []
    for i in range(nrows):
        text = lines[2 + i].strip()
        if len(text) != ncols or set(text) - {"0", "1"}:
            raise MatroidError(f"line {lineno + 2 + i}: expected {ncols} characters of 0/1")
        r = 0
        for j, ch in enumerate(text):
            if ch == "1":
                r |= 1 << j
        rows.append(r)
    return BinaryMatroid(ids, rows)


def format_matrix_block(M: BinaryMatroid) -> List[str]:
    n = len(M)
    rows = [r for r in M.rows]
    out = [f"{len(rows)} {n}", " ".join(M.elements)]
    for r in rows:
        out.append("".join("1" if (r >> j) & 1 else "0" for j in range(n)))
    return out
