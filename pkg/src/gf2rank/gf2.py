"""Bit-packed GF(2) columns, batch rank, and a streaming rank engine.

Columns are sparse sets of row indices (the interchange form); they are
densified into 64-bit words on entry to the elimination routines.  The
batch :func:`rank` and the incremental :class:`RankEngine` use different
elimination strategies (echelon vs fully reduced) so they cross-check each
other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels

_WORD = 64


def _pack_bits(indices: Iterable[int], nwords: int) -> np.ndarray:
    w = np.zeros(nwords, dtype=np.uint64)
    for i in indices:
        w[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
    return w


def _iter_bits(words: np.ndarray) -> Iterator[int]:
    for wi, x in enumerate(words):
        x = int(x)
        base = wi << 6
        while x:
            low = x & -x
            yield base + low.bit_length() - 1
            x ^= low


@dataclass(frozen=True)
class ColumnSet:
    """A column with unit entries exactly at ``indices`` (0-based, sorted)."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        idx = self.indices
        if not isinstance(idx, tuple):
            object.__setattr__(self, "indices", tuple(idx))
            idx = self.indices
        if len(idx) == 0:
            raise ValueError("a column needs at least one unit entry")
        prev = -1
        for i in idx:
            if i <= prev:
                raise ValueError(f"indices must be strictly increasing, got {idx}")
            prev = i
        if idx[0] < 0 or idx[-1] >= self.n:
            raise ValueError(f"indices {idx} out of range for n={self.n}")

    @property
    def k(self) -> int:
        return len(self.indices)

    @classmethod
    def from_iterable(cls, indices: Iterable[int], n: int) -> "ColumnSet":
        return cls(tuple(sorted(indices)), n)

    def encode(self) -> str:
        """Canonical textual form: comma-separated sorted 0-based indices."""
        return ",".join(str(i) for i in self.indices)

    @classmethod
    def decode(cls, text: str, n: int) -> "ColumnSet":
        return cls(tuple(int(t) for t in text.split(",")), n)


class Gf2Matrix:
    """An ordered collection of columns over GF(2) sharing a row count.

    Duplicate columns are permitted when constructed explicitly.
    """

    def __init__(self, n: int, columns: Sequence[ColumnSet]):
        if n < 0:
            raise ValueError("n must be nonnegative")
        for c in columns:
            if c.n != n:
                raise ValueError(f"column {c} has n={c.n}, expected {n}")
        self.n = n
        self.columns = list(columns)

    @property
    def m(self) -> int:
        return len(self.columns)

    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        eptr = np.zeros(self.m + 1, dtype=np.int64)
        for i, c in enumerate(self.columns):
            eptr[i + 1] = eptr[i] + c.k
        everts = np.empty(int(eptr[-1]), dtype=np.int32)
        pos = 0
        for c in self.columns:
            everts[pos:pos + c.k] = c.indices
            pos += c.k
        return eptr, everts

    def __repr__(self):
        return f"Gf2Matrix(n={self.n}, m={self.m})"


def rank(matrix: Gf2Matrix) -> int:
    """Rank of the column span over GF(2), by bit-packed elimination."""
    if matrix.m == 0:
        return 0
    eptr, everts = matrix._csr()
    packed = _kernels.pack_rows(matrix.n, eptr, everts)
    return int(_kernels.bitset_rank(packed, max(1, matrix.n), -1))


def rank_of_arrays(n: int, eptr: np.ndarray, everts: np.ndarray,
                   stop_rank: int = -1) -> int:
    """Array-level batch rank (same elimination as :func:`rank`)."""
    if eptr.size <= 1:
        return 0
    packed = _kernels.pack_rows(n, np.ascontiguousarray(eptr, dtype=np.int64),
                                np.ascontiguousarray(everts, dtype=np.int32))
    return int(_kernels.bitset_rank(packed, max(1, n), stop_rank))


def span_size_oracle(matrix: Gf2Matrix) -> int:
    """|span| by exhaustive enumeration of all subset XORs (m <= 20 only).

    Independent of the elimination code: log2 of the result must equal the
    rank.
    """
    if matrix.m > 20:
        raise ValueError(f"span enumeration rejects m={matrix.m} > 20")
    span = {0}
    for c in matrix.columns:
        v = 0
        for i in c.indices:
            v |= 1 << i
        if v not in span:
            span |= {x ^ v for x in span}
    return len(span)


def zero_rows(matrix: Gf2Matrix) -> int:
    """Number of row indices that appear in no column."""
    covered = np.zeros(matrix.n, dtype=bool)
    for c in matrix.columns:
        covered[list(c.indices)] = True
    return int(matrix.n - covered.sum())


class RankEngine:
    """Streaming rank: offer columns one at a time.

    The pivot structure is kept fully reduced: each stored vector has a 1 in
    its own pivot row and a 0 in every other vector's pivot row, where the
    pivot row is the lowest-index set bit at insertion time.  Reducing an
    offered column then costs at most k vector XORs, because reduction never
    introduces new pivot-row bits.
    """

    def __init__(self, n: int):
        if n <= 0:
            raise ValueError("n must be positive")
        self.n = n
        self.columns_seen = 0
        self._nwords = (n + 63) >> 6
        self._basis = np.zeros((16, self._nwords), dtype=np.uint64)
        self._pivot_rows: list[int] = []
        self._row_of_bit: dict[int, int] = {}
        self._pivot_mask = np.zeros(self._nwords, dtype=np.uint64)

    @property
    def rank(self) -> int:
        return len(self._pivot_rows)

    @property
    def pivots(self) -> dict[int, int]:
        """Map pivot row -> reduced vector as a Python int bitmask."""
        out = {}
        for b, r in self._row_of_bit.items():
            v = 0
            for w in range(self._nwords - 1, -1, -1):
                v = (v << 64) | int(self._basis[r, w])
            out[b] = v
        return out

    def _offer_packed(self, w: np.ndarray) -> bool:
        self.columns_seen += 1
        masked = w & self._pivot_mask
        while masked.any():
            wi = int(np.flatnonzero(masked)[0])
            x = int(masked[wi])
            b = (wi << 6) + (x & -x).bit_length() - 1
            w ^= self._basis[self._row_of_bit[b]]
            masked = w & self._pivot_mask
        if not w.any():
            return False
        wi = int(np.flatnonzero(w)[0])
        x = int(w[wi])
        b = (wi << 6) + (x & -x).bit_length() - 1
        r = len(self._pivot_rows)
        if r == self._basis.shape[0]:
            grown = np.zeros((2 * r, self._nwords), dtype=np.uint64)
            grown[:r] = self._basis
            self._basis = grown
        # clear the new pivot bit from every stored vector (reduced form)
        if r:
            col = (self._basis[:r, wi] >> np.uint64(b & 63)) & np.uint64(1)
            hits = np.flatnonzero(col)
            if hits.size:
                self._basis[hits] ^= w
        self._basis[r] = w
        self._pivot_rows.append(b)
        self._row_of_bit[b] = r
        self._pivot_mask[wi] |= np.uint64(1) << np.uint64(b & 63)
        return True

    def offer(self, column: ColumnSet) -> bool:
        """Add a column; True iff it was independent of everything before."""
        if column.n != self.n:
            raise ValueError(f"column has n={column.n}, engine has n={self.n}")
        return self._offer_packed(_pack_bits(column.indices, self._nwords))

    def offer_indices(self, indices: Iterable[int]) -> bool:
        """Like :meth:`offer` for a bare index iterable (no validation)."""
        return self._offer_packed(_pack_bits(indices, self._nwords))


# ---------------------------------------------------------------------------
# canonical text format: header "n=<n> k=<k> m=<m>", one column per line

def format_columns(n: int, k: int, rows: Iterable[Sequence[int]]) -> str:
    lines = [f"n={n} k={k} m={{m}}"]
    m = 0
    for r in rows:
        lines.append(",".join(str(int(i)) for i in r))
        m += 1
    lines[0] = lines[0].format(m=m)
    return "\n".join(lines) + "\n"


def parse_columns(text: str) -> tuple[int, int, list[tuple[int, ...]]]:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty column file")
    header = dict(part.split("=") for part in lines[0].split())
    try:
        n, k, m = int(header["n"]), int(header["k"]), int(header["m"])
    except KeyError as exc:
        raise ValueError(f"malformed header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header says m={m} but found {len(body)} columns")
    rows = []
    for ln in body:
        idx = tuple(int(t) for t in ln.split(","))
        if len(idx) != k:
            raise ValueError(f"column {ln!r} does not have k={k} entries")
        rows.append(idx)
    return n, k, rows


def matrix_to_text(matrix: Gf2Matrix) -> str:
    ks = {c.k for c in matrix.columns}
    if len(ks) > 1:
        raise ValueError("text format requires uniform column weight")
    k = ks.pop() if ks else 0
    return format_columns(matrix.n, k, (c.indices for c in matrix.columns))


def matrix_from_text(text: str) -> Gf2Matrix:
    n, _, rows = parse_columns(text)
    return Gf2Matrix(n, [ColumnSet(r, n) for r in rows])
