"""k-uniform hypergraphs, degree-1 peeling to the 2-core, and the exact
peel/rank decomposition.

A hypergraph on [n] with k-vertex edges is the same object as an n-row
matrix of weight-k columns: each edge is the support of a column.  Removing
an edge that contains a degree-1 vertex lowers the matrix rank by exactly
one, so  rank(full) = #peeled + rank(core)  holds deterministically.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .gf2 import ColumnSet, Gf2Matrix, format_columns, parse_columns, rank


class Hypergraph:
    """Uniform hypergraph with distinct edges, stored as a sorted array."""

    def __init__(self, n: int, edge_array: np.ndarray, k: int | None = None,
                 validate: bool = True):
        edge_array = np.asarray(edge_array, dtype=np.int32)
        if edge_array.ndim != 2:
            if edge_array.size == 0:
                edge_array = edge_array.reshape(0, k or 0)
            else:
                raise ValueError("edge_array must be 2-dimensional")
        m, ka = edge_array.shape
        if k is None:
            k = ka
        elif m > 0 and k != ka:
            raise ValueError(f"edges have {ka} vertices, expected k={k}")
        if validate and m > 0:
            if not (np.diff(edge_array, axis=1) > 0).all():
                raise ValueError("each edge must list distinct sorted vertices")
            if edge_array.min() < 0 or edge_array.max() >= n:
                raise ValueError("vertex index out of range")
            if np.unique(edge_array, axis=0).shape[0] != m:
                raise ValueError("duplicate edges are forbidden")
        self.n = int(n)
        self.k = int(k)
        self.edge_array = edge_array

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   k: int | None = None) -> "Hypergraph":
        rows = [tuple(sorted(e)) for e in edges]
        if rows:
            arr = np.array(rows, dtype=np.int32)
        else:
            arr = np.zeros((0, k or 0), dtype=np.int32)
        return cls(n, arr, k=k)

    @property
    def m(self) -> int:
        return self.edge_array.shape[0]

    @cached_property
    def edges(self) -> tuple[ColumnSet, ...]:
        return tuple(ColumnSet(tuple(int(v) for v in row), self.n)
                     for row in self.edge_array)

    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        eptr = np.arange(self.m + 1, dtype=np.int64) * self.k
        return eptr, self.edge_array.reshape(-1)

    def to_matrix(self) -> Gf2Matrix:
        return Gf2Matrix(self.n, list(self.edges))

    def to_text(self) -> str:
        return format_columns(self.n, self.k, self.edge_array)

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph":
        n, k, rows = parse_columns(text)
        return cls.from_edges(n, rows, k=k)

    def __repr__(self):
        return f"Hypergraph(n={self.n}, k={self.k}, m={self.m})"


class PeelResult:
    """Outcome of peeling: removal trace plus the surviving 2-core."""

    def __init__(self, graph: Hypergraph, order: np.ndarray,
                 triggers: np.ndarray, alive: np.ndarray, deg: np.ndarray):
        self._graph = graph
        self.peel_order = order          # edge ids in removal order
        self.trigger_vertices = triggers
        self.core_mask = alive.astype(bool)
        self._deg = deg

    @property
    def m1(self) -> int:
        return int(self.peel_order.size)

    @cached_property
    def core_edge_array(self) -> np.ndarray:
        return self._graph.edge_array[self.core_mask]

    @cached_property
    def core_vertices(self) -> frozenset[int]:
        return frozenset(int(v) for v in np.flatnonzero(self._deg >= 2))

    @cached_property
    def peeled(self) -> tuple[tuple[ColumnSet, int], ...]:
        edges = self._graph.edges
        return tuple((edges[int(e)], int(t))
                     for e, t in zip(self.peel_order, self.trigger_vertices))

    @cached_property
    def core_edges(self) -> tuple[ColumnSet, ...]:
        edges = self._graph.edges
        return tuple(edges[int(e)] for e in np.flatnonzero(self.core_mask))

    def core_hypergraph(self) -> Hypergraph:
        return Hypergraph(self._graph.n, self.core_edge_array,
                          k=self._graph.k, validate=False)


def peel_two_core(graph: Hypergraph) -> PeelResult:
    """Peel edges at degree-1 vertices until the (possibly empty) 2-core.

    Deterministic: FIFO over vertices that reach degree 1, initially in
    ascending vertex order.  The surviving edge set is the same under any
    removal order; only the trace depends on the rule.
    """
    if graph.m == 0:
        return PeelResult(graph, np.zeros(0, np.int64), np.zeros(0, np.int64),
                          np.zeros(0, np.uint8), np.zeros(graph.n, np.int64))
    eptr, everts = graph._csr()
    order, trig, alive, deg = _kernels.peel(graph.n, eptr, everts)
    return PeelResult(graph, order, trig, alive, deg)


def two_core_oracle(graph: Hypergraph) -> frozenset[int]:
    """The 2-core vertex set by exhaustive search over vertex subsets.

    The union of any two vertex sets inducing minimum degree >= 2 again
    induces minimum degree >= 2, so the maximal set is the union of all of
    them.  Exponential in n; rejected for n > 16.
    """
    if graph.n > 16:
        raise ValueError(f"exhaustive core search rejects n={graph.n} > 16")
    edges = [frozenset(int(v) for v in row) for row in graph.edge_array]
    best: set[int] = set()
    for mask in range(1 << graph.n):
        s = {v for v in range(graph.n) if (mask >> v) & 1}
        if not s or not (s - best):
            continue
        induced = [e for e in edges if e <= s]
        deg = {v: 0 for v in s}
        for e in induced:
            for v in e:
                deg[v] += 1
        if all(d >= 2 for d in deg.values()):
            best |= s
    return frozenset(best)


def degrees(graph: Hypergraph) -> np.ndarray:
    """Vertex degrees as an array indexed by vertex."""
    if graph.m == 0:
        return np.zeros(graph.n, dtype=np.int64)
    return np.bincount(graph.edge_array.reshape(-1), minlength=graph.n
                       ).astype(np.int64)


def peel_rank_identity_check(graph: Hypergraph) -> tuple[int, int, int]:
    """Return (total_rank, m1, core_rank) and assert the exact identity.

    total_rank == m1 + core_rank is deterministic, not a high-probability
    statement; a violation raises with the offending instance serialized.
    """
    res = peel_two_core(graph)
    total = rank(graph.to_matrix())
    core_rank = rank(res.core_hypergraph().to_matrix())
    if total != res.m1 + core_rank:
        raise AssertionError(
            f"peel/rank identity violated: rank={total}, m1={res.m1}, "
            f"core_rank={core_rank}\noffending instance:\n{graph.to_text()}")
    return total, res.m1, core_rank
