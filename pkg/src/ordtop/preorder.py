"""Finite preorders as bitset adjacency rows.

A relation on n points is stored as n ints; bit j of rows[i] set means
i <= j.  Reflexivity is enforced at construction, transitivity is not:
use transitive_reflexive_closure when the input is just a seed relation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# above this size the numpy matmul path beats pure-python Warshall
_NUMPY_CUTOVER = 96


@dataclass(frozen=True)
class PreorderGraph:
    """Reflexive relation on points 0..n-1, one bitmask row per point."""

    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {i} has bits outside 0..{self.n - 1}")
            if not row >> i & 1:
                raise ValueError(f"relation not reflexive at {i}")

    def leq(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def pairs(self):
        """All related pairs (i, j), i <= j, in lexicographic order."""
        for i in range(self.n):
            row = self.rows[i]
            while row:
                low = row & -row
                yield i, low.bit_length() - 1
                row ^= low

    def pair_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def up_set(self, mask: int) -> int:
        """Bitmask of points above anything in mask."""
        out = 0
        rest = mask
        while rest:
            low = rest & -rest
            out |= self.rows[low.bit_length() - 1]
            rest ^= low
        return out

    def down_set(self, mask: int) -> int:
        out = 0
        for i in range(self.n):
            if self.rows[i] & mask:
                out |= 1 << i
        return out

    def to_matrix(self) -> np.ndarray:
        return rows_to_matrix(self.n, self.rows)

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "PreorderGraph":
        mat = np.asarray(mat, dtype=bool)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        return cls(mat.shape[0], matrix_to_rows(mat))

    @classmethod
    def diagonal(cls, n: int) -> "PreorderGraph":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "PreorderGraph":
        row = (1 << n) - 1
        return cls(n, tuple(row for _ in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "PreorderGraph":
        rows = [1 << i for i in range(n)]
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i}, {j}) out of range")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))


def rows_to_matrix(n: int, rows) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    nbytes = (n + 7) // 8
    raw = np.frombuffer(
        b"".join(row.to_bytes(nbytes, "little") for row in rows), dtype=np.uint8
    ).reshape(n, nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n].astype(bool)


def matrix_to_rows(mat: np.ndarray) -> tuple:
    n = mat.shape[0]
    if n == 0:
        return ()
    packed = np.packbits(mat.astype(np.uint8), axis=1, bitorder="little")
    return tuple(int.from_bytes(packed[i].tobytes(), "little") for i in range(n))


def transitive_reflexive_closure(graph: PreorderGraph) -> PreorderGraph:
    """Smallest preorder containing the given reflexive relation."""
    if graph.n > _NUMPY_CUTOVER:
        return _closure_numpy(graph)
    rows = list(graph.rows)
    n = graph.n
    # Warshall over bitmask rows: one pass suffices because row k is
    # already fully updated when later rows OR it in.
    for k in range(n):
        bit = 1 << k
        row_k = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return PreorderGraph(n, tuple(rows))


def _closure_numpy(graph: PreorderGraph) -> PreorderGraph:
    mat = graph.to_matrix().astype(np.float32)
    n = graph.n
    # squaring a reflexive matrix doubles reachable path length
    steps = max(1, int(np.ceil(np.log2(max(n, 2)))))
    for _ in range(steps):
        nxt = (mat @ mat) > 0
        nxt = nxt.astype(np.float32)
        if np.array_equal(nxt, mat):
            break
        mat = nxt
    return PreorderGraph(n, matrix_to_rows(mat.astype(bool)))


def is_transitive(graph: PreorderGraph) -> bool:
    rows = graph.rows
    for i in range(graph.n):
        row = rows[i]
        rest = row
        while rest:
            low = rest & -rest
            if rows[low.bit_length() - 1] & ~row:
                return False
            rest ^= low
    return True


def is_antisymmetric(graph: PreorderGraph):
    """(True, None) or (False, (i, j)) with i < j mutually related."""
    for i in range(graph.n):
        row = graph.rows[i]
        for j in range(i + 1, graph.n):
            if row >> j & 1 and graph.rows[j] >> i & 1:
                return False, (i, j)
    return True, None


@dataclass(frozen=True)
class EquivalenceClasses:
    """Partition of 0..n-1 into blocks of mutually related points."""

    n: int
    classes: tuple  # sorted tuples, ordered by least member

    def __post_init__(self):
        seen = 0
        for cls in self.classes:
            if not cls:
                raise ValueError("empty equivalence class")
            mask = 0
            for m in cls:
                if not 0 <= m < self.n:
                    raise ValueError(f"member {m} out of range")
                mask |= 1 << m
            if mask.bit_count() != len(cls) or mask & seen:
                raise ValueError("classes overlap or repeat members")
            seen |= mask
        if seen != (1 << self.n) - 1:
            raise ValueError("classes do not cover all points")

    def representative(self, class_index: int) -> int:
        return self.classes[class_index][0]

    def index_map(self) -> dict:
        """point -> class index, for bulk lookups."""
        return {m: idx for idx, cls in enumerate(self.classes) for m in cls}


def symmetric_part(graph: PreorderGraph) -> EquivalenceClasses:
    """Classes of mutual relation, ordered by smallest member.

    Only meaningful when the graph is transitive.
    """
    seen = 0
    classes = []
    for i in range(graph.n):
        if seen >> i & 1:
            continue
        cls = [i]
        seen |= 1 << i
        row = graph.rows[i]
        for j in range(i + 1, graph.n):
            if row >> j & 1 and graph.rows[j] >> i & 1:
                cls.append(j)
                seen |= 1 << j
        classes.append(tuple(cls))
    return EquivalenceClasses(graph.n, tuple(classes))


def quotient_preorder(graph: PreorderGraph, classes=None):
    """Collapse mutual-relation classes; returns (quotient, classes).

    The quotient of a preorder by its symmetric part is a partial order.
    """
    if classes is None:
        classes = symmetric_part(graph)
    if isinstance(classes, EquivalenceClasses):
        if classes.n != graph.n:
            raise ValueError("partition size does not match graph")
        blocks = classes.classes
    else:
        blocks = tuple(tuple(c) for c in classes)
        classes = EquivalenceClasses(graph.n, blocks)
    if blocks != symmetric_part(graph).classes:
        raise ValueError("partition is not the symmetric part of the graph")
    rep = classes.index_map()
    m = len(blocks)
    rows = [1 << i for i in range(m)]
    for i, j in graph.pairs():
        rows[rep[i]] |= 1 << rep[j]
    return PreorderGraph(m, tuple(rows)), classes


def function_preorder(values) -> PreorderGraph:
    """Preorder induced by a family of real functions given as a matrix.

    values[k][i] is function k at point i; i <= j iff every function is
    nondecreasing from i to j.  An empty family gives the full relation.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 2:
        raise ValueError("values must be a 2d array (functions x points)")
    if not np.all(np.isfinite(vals)):
        raise ValueError("function values must be finite")
    n = vals.shape[1]
    if vals.shape[0] == 0:
        return PreorderGraph.full(n)
    mat = np.all(vals[:, :, None] <= vals[:, None, :], axis=0)
    return PreorderGraph.from_matrix(mat)


def intersect_graphs(graphs) -> PreorderGraph:
    graphs = list(graphs)
    if not graphs:
        raise ValueError("need at least one graph to intersect")
    n = graphs[0].n
    rows = list(graphs[0].rows)
    for g in graphs[1:]:
        if g.n != n:
            raise ValueError("graphs live on different point counts")
        for i in range(n):
            rows[i] &= g.rows[i]
    return PreorderGraph(n, tuple(rows))
