"""Seeded random generation of the column/edge models.

All randomness flows from a :class:`SeedSpec`: numpy's SeedSequence hashes
``(master_seed, stream_id)`` into the 256-bit PCG64 state, so distinct
streams are statistically independent and every stream is reproducible
bit-for-bit for a fixed seed pair.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .gf2 import ColumnSet
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class SeedSpec:
    """Deterministic stream handle: (master_seed, stream_id)."""

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed,
                                    spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class WeightedColumn:
    column: ColumnSet
    weight: float

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"weight {self.weight} outside [0, 1]")


def _floyd_batch(gen: np.random.Generator, n: int, k: int,
                 batch: int) -> np.ndarray:
    rnd = np.empty((batch, k), dtype=np.int64)
    for j in range(k):
        rnd[:, j] = gen.integers(0, n - k + j + 1, size=batch)
    return _kernels.floyd_fill(rnd, n, k)


def sample_edge_array(n: int, k: int, m: int, seed: SeedSpec) -> np.ndarray:
    """m distinct uniformly random k-subsets of range(n), as an (m, k) array.

    Draws i.i.d. uniform k-subsets (Floyd) and keeps first occurrences until
    m distinct ones have appeared, which yields a uniform m-subset of the
    binomial(n, k) possible columns.  Order is the draw order.
    """
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    total = math.comb(n, k)
    if m > total:
        raise ValueError(f"m={m} exceeds C({n},{k})={total}")
    return _sample_edge_array_from(seed.generator(), n, k, m)


def sample_m_subset(n: int, k: int, m: int, seed: SeedSpec) -> Hypergraph:
    """Uniform random m-subset of all weight-k columns, as a hypergraph."""
    arr = sample_edge_array(n, k, m, seed)
    return Hypergraph(n, arr, k=k, validate=False)


def sample_binomial(n: int, k: int, p: float, seed: SeedSpec) -> Hypergraph:
    """Include each of the C(n, k) columns independently with probability p.

    Realized by drawing the column count M ~ Binomial(C(n, k), p) and then
    sampling a uniform M-subset from the same stream.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    total = math.comb(n, k)
    if total > np.iinfo(np.int64).max:
        raise ValueError(f"C({n},{k}) too large for the binomial draw")
    gen = seed.generator()
    m = int(gen.binomial(total, p))
    arr = _sample_edge_array_from(gen, n, k, m)
    return Hypergraph(n, arr, k=k, validate=False)


def _sample_edge_array_from(gen: np.random.Generator, n: int, k: int,
                            m: int) -> np.ndarray:
    if m == 0:
        return np.zeros((0, k), dtype=np.int32)
    got = np.zeros((0, k), dtype=np.int32)
    need = m
    while True:
        # oversample a little; collisions are rare when m << C(n, k)
        batch = need + max(16, need // 8)
        fresh = _floyd_batch(gen, n, k, batch)
        got = np.concatenate([got, fresh]) if got.size else fresh
        _, first = np.unique(got, axis=0, return_index=True)
        if first.size >= m:
            keep = np.sort(first)[:m]
            return np.ascontiguousarray(got[keep])
        got = got[np.sort(first)]
        need = m - got.shape[0]


class ColumnStream:
    """Stateful stream of distinct uniformly random columns.

    Each emission is uniform over the columns not yet seen (rejection
    against the seen-set), so the length-m prefix is distributed exactly
    like :func:`sample_m_subset`.  Raises RuntimeError on exhaustion.
    """

    def __init__(self, n: int, k: int, seed: SeedSpec):
        if k < 1 or k > n:
            raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
        self.n = n
        self.k = k
        self._gen = seed.generator()
        self._seen: set[tuple[int, ...]] = set()
        self._total = math.comb(n, k)
        self._buf = np.zeros((0, k), dtype=np.int32)
        self._pos = 0

    def __iter__(self):
        return self

    def emitted(self) -> int:
        return len(self._seen)

    def next_indices(self) -> tuple[int, ...]:
        if len(self._seen) >= self._total:
            raise RuntimeError(f"stream exhausted after C(n,k)={self._total} "
                               "emissions")
        while True:
            if self._pos >= self._buf.shape[0]:
                self._buf = _floyd_batch(self._gen, self.n, self.k, 256)
                self._pos = 0
            row = tuple(int(v) for v in self._buf[self._pos])
            self._pos += 1
            if row not in self._seen:
                self._seen.add(row)
                return row

    def __next__(self) -> ColumnSet:
        return ColumnSet(self.next_indices(), self.n)


def column_stream(n: int, k: int, seed: SeedSpec) -> ColumnStream:
    return ColumnStream(n, k, seed)


_ENUM_LIMIT = 10_000_000


@lru_cache(maxsize=8)
def enumerate_columns(n: int, k: int) -> np.ndarray:
    """All C(n, k) sorted k-subsets in lexicographic order, cached."""
    total = math.comb(n, k)
    if total > _ENUM_LIMIT:
        raise ValueError(f"C({n},{k})={total} exceeds the enumeration limit "
                         f"{_ENUM_LIMIT}")
    arr = np.fromiter(itertools.chain.from_iterable(
        itertools.combinations(range(n), k)),
        dtype=np.int32, count=total * k)
    return arr.reshape(total, k)


def weighted_enumeration_arrays(n: int, k: int, seed: SeedSpec
                                ) -> tuple[np.ndarray, np.ndarray]:
    """(columns, weights) with columns sorted by ascending weight.

    Weights are i.i.d. uniform 53-bit dyadics on [0, 1); ties (practically
    impossible) fall back to lexicographic column order via the stable sort.
    """
    cols = enumerate_columns(n, k)
    gen = seed.generator()
    weights = gen.random(cols.shape[0])
    order = np.argsort(weights, kind="stable")
    return cols[order], weights[order]


def weighted_enumeration(n: int, k: int, seed: SeedSpec) -> list[WeightedColumn]:
    """All columns with uniform weights, sorted ascending by weight."""
    cols, weights = weighted_enumeration_arrays(n, k, seed)
    return [WeightedColumn(ColumnSet(tuple(int(v) for v in row), n), float(w))
            for row, w in zip(cols, weights)]
