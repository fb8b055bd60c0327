"""Regular LDPC construction, systematic encoding, and sum-product decoding.

Parity-check matrices are column-regular (degree 3 by default) with
near-regular check degrees, built by random socket permutation followed by
local edge swaps that clear duplicate edges and short cycles.  A
systematic encoder is derived once per matrix by GF(2) elimination; the
decoder is plain sum-product over the Tanner graph in the LLR domain with
exact handling of zero (erasure) messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .beliefs import pairs_to_llr
from .errors import ConstructionError

_ARCTANH_CLIP = 1.0 - 1e-13


class ParityCheckMatrix:
    """Sparse binary matrix stored as row/column index arrays."""

    def __init__(self, m: int, n: int, rows: np.ndarray, cols: np.ndarray):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if rows.shape != cols.shape:
            raise ValueError("row and column index arrays differ in length")
        if rows.size and (rows.min() < 0 or rows.max() >= m):
            raise ValueError("row index out of range")
        if cols.size and (cols.min() < 0 or cols.max() >= n):
            raise ValueError("column index out of range")
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        keys = rows * n + cols
        if np.unique(keys).size != keys.size:
            raise ValueError("duplicate (row, col) entry")
        self.m = int(m)
        self.n = int(n)
        self.rows = rows
        self.cols = cols

    @classmethod
    def from_dense(cls, h: np.ndarray) -> "ParityCheckMatrix":
        h = np.asarray(h)
        r, c = np.nonzero(h)
        return cls(h.shape[0], h.shape[1], r, c)

    def to_dense(self) -> np.ndarray:
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        h[self.rows, self.cols] = 1
        return h

    @property
    def num_edges(self) -> int:
        return self.rows.size

    def col_degrees(self) -> np.ndarray:
        return np.bincount(self.cols, minlength=self.n)

    def row_degrees(self) -> np.ndarray:
        return np.bincount(self.rows, minlength=self.m)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ParityCheckMatrix)
            and self.m == other.m
            and self.n == other.n
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
        )


def count_4cycles(h: ParityCheckMatrix) -> int:
    """Number of column pairs sharing at least two rows (each shared pair counted)."""
    pair_counts: dict[tuple[int, int], int] = {}
    order = np.argsort(h.cols, kind="stable")
    cols_sorted = h.cols[order]
    rows_sorted = h.rows[order]
    boundaries = np.searchsorted(cols_sorted, np.arange(h.n + 1))
    total = 0
    for c in range(h.n):
        r = np.sort(rows_sorted[boundaries[c]:boundaries[c + 1]])
        for i in range(r.size):
            for j in range(i + 1, r.size):
                key = (int(r[i]), int(r[j]))
                cnt = pair_counts.get(key, 0)
                total += cnt
                pair_counts[key] = cnt + 1
    return total


def _clear_duplicates(rows: np.ndarray, cols: np.ndarray, n: int,
                      rng: np.random.Generator, max_passes: int = 1000) -> None:
    """Swap check sockets between edges until no (row, col) repeats."""
    e = rows.size
    for _ in range(max_passes):
        keys = rows * n + cols
        order = np.argsort(keys, kind="stable")
        dup_mask = np.zeros(e, dtype=bool)
        dup_mask[order[1:]] = keys[order[1:]] == keys[order[:-1]]
        dup_idx = np.nonzero(dup_mask)[0]
        if dup_idx.size == 0:
            return
        partners = rng.integers(0, e, size=dup_idx.size)
        for i, j in zip(dup_idx, partners):
            rows[i], rows[j] = rows[j], rows[i]
    raise ConstructionError("could not clear duplicate edges")


def _clear_4cycles(rows: np.ndarray, cols: np.ndarray, n: int,
                   rng: np.random.Generator, max_passes: int = 60) -> None:
    """Best-effort removal of column pairs sharing two rows, via socket swaps."""
    e = rows.size
    for _ in range(max_passes):
        _clear_duplicates(rows, cols, n, rng)
        seen: dict[tuple[int, int], int] = {}
        offenders = []
        order = np.argsort(cols, kind="stable")
        cols_sorted = cols[order]
        boundaries = np.searchsorted(cols_sorted, np.arange(n + 1))
        for c in range(n):
            idx = order[boundaries[c]:boundaries[c + 1]]
            r = rows[idx]
            sub = np.argsort(r)
            idx, r = idx[sub], r[sub]
            for i in range(r.size):
                for j in range(i + 1, r.size):
                    key = (int(r[i]), int(r[j]))
                    if key in seen:
                        offenders.append(int(idx[j]))
                    else:
                        seen[key] = int(idx[j])
        if not offenders:
            return
        partners = rng.integers(0, e, size=len(offenders))
        for i, j in zip(offenders, partners):
            rows[i], rows[j] = rows[j], rows[i]
    # Residual short cycles are tolerated; duplicates are not.
    _clear_duplicates(rows, cols, n, rng)


def construct_regular(n: int, rate: float, rng: np.random.Generator,
                      col_degree: int = 3) -> ParityCheckMatrix:
    """Random column-regular parity-check matrix for a target code rate.

    m = round(n (1 - rate)) checks with degrees in {floor(dn/m), ceil(dn/m)};
    duplicate edges are always removed, length-4 cycles where possible.
    """
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate must lie in (0, 1): {rate}")
    m = int(round(n * (1.0 - rate)))
    if m < col_degree:
        raise ConstructionError(f"n(1 - rate) = {m} leaves fewer checks than the column degree")
    e = col_degree * n
    base, extra = divmod(e, m)
    if base < 1:
        raise ConstructionError("more checks than edges; degree constraints infeasible")
    row_degrees = np.full(m, base, dtype=np.int64)
    row_degrees[:extra] += 1

    cols = np.repeat(np.arange(n, dtype=np.int64), col_degree)
    rows = np.repeat(np.arange(m, dtype=np.int64), row_degrees)
    rows = rows[rng.permutation(e)]
    _clear_4cycles(rows, cols, n, rng)
    return ParityCheckMatrix(m, n, rows, cols)


def _pack_rows(h: np.ndarray) -> np.ndarray:
    return np.packbits(h, axis=1)


def _column_bits(packed: np.ndarray, j: int) -> np.ndarray:
    return (packed[:, j >> 3] >> (7 - (j & 7))) & 1


class SystematicLdpcCode:
    """Parity-check matrix plus a systematic encoder derived from it.

    sys_positions lists the codeword positions carrying information bits
    (in order); parity_positions the remaining rank(H) positions.  gen is
    the dense k x m_parity GF(2) map from information bits to parity bits.
    """

    def __init__(self, h: ParityCheckMatrix, sys_positions: np.ndarray,
                 parity_positions: np.ndarray, gen: np.ndarray):
        self.h = h
        self.n = h.n
        self.sys_positions = sys_positions
        self.parity_positions = parity_positions
        self.gen = gen
        self.k = sys_positions.size
        self.m_parity = parity_positions.size
        self.rank_deficiency = h.m - self.m_parity
        self.rate = self.k / self.n

    def encode(self, info: np.ndarray) -> np.ndarray:
        """Codeword with the information bits verbatim at sys_positions."""
        info = np.asarray(info, dtype=np.uint8)
        if info.shape != (self.k,):
            raise ValueError(f"expected {self.k} information bits, got {info.shape}")
        word = np.zeros(self.n, dtype=np.uint8)
        word[self.sys_positions] = info
        active = self.gen[info != 0]
        if active.shape[0]:
            word[self.parity_positions] = np.bitwise_xor.reduce(active, axis=0)
        return word


def to_systematic(h: ParityCheckMatrix) -> SystematicLdpcCode:
    """Derive a systematic encoder by GF(2) elimination with column pivoting.

    Pivots are chosen scanning from the last column backwards, so a matrix
    already ending in an identity block keeps its natural layout.  Rank
    deficiency shrinks the parity count and is recorded on the code.
    """
    dense = h.to_dense()
    packed = _pack_rows(dense)
    m, n = h.m, h.n
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    rank = 0
    for j in range(n - 1, -1, -1):
        col = _column_bits(packed, j)
        candidates = np.nonzero(col[rank:])[0]
        if candidates.size == 0:
            continue
        piv = rank + int(candidates[0])
        if piv != rank:
            packed[[rank, piv]] = packed[[piv, rank]]
            col = _column_bits(packed, j)
        clear = np.nonzero(col)[0]
        clear = clear[clear != rank]
        if clear.size:
            packed[clear] ^= packed[rank]
        pivot_rows.append(rank)
        pivot_cols.append(j)
        rank += 1
        if rank == m:
            break

    order = np.argsort(pivot_cols)
    pivot_cols_arr = np.asarray(pivot_cols, dtype=np.int64)[order]
    pivot_rows_arr = np.asarray(pivot_rows, dtype=np.int64)[order]
    sys_mask = np.ones(n, dtype=bool)
    sys_mask[pivot_cols_arr] = False
    sys_positions = np.nonzero(sys_mask)[0]

    reduced = np.unpackbits(packed[:rank], axis=1, count=n)
    gen = reduced[pivot_rows_arr][:, sys_positions].T.copy()
    return SystematicLdpcCode(h, sys_positions, pivot_cols_arr, gen)


def syndrome(h: ParityCheckMatrix, word: np.ndarray) -> np.ndarray:
    """GF(2) product H @ word; zero exactly for codewords."""
    word = np.asarray(word, dtype=np.uint8)
    if word.shape != (h.n,):
        raise ValueError(f"expected {h.n} bits, got {word.shape}")
    sums = np.bincount(h.rows, weights=word[h.cols].astype(np.float64), minlength=h.m)
    return (sums.astype(np.int64) & 1).astype(np.uint8)


class DecodeResult(NamedTuple):
    word: np.ndarray
    converged: bool
    iterations: int
    posterior: np.ndarray


@dataclass
class BeliefPropagationDecoder:
    """Sum-product decoder with reusable edge layout.

    Messages live per edge in row-major order; one step runs a full
    bit-to-check and check-to-bit pass.  Zero-LLR (erasure) messages are
    handled exactly: a check with one erased input resolves it from the
    others, with two or more it stays silent.
    """

    h: ParityCheckMatrix
    edge_row: np.ndarray = field(init=False, repr=False)
    edge_col: np.ndarray = field(init=False, repr=False)
    row_ptr: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        degrees = self.h.row_degrees()
        keep = degrees[self.h.rows] > 0  # all true; empty rows simply have no edges
        self.edge_row = self.h.rows[keep]
        self.edge_col = self.h.cols[keep]
        active_rows = np.nonzero(degrees > 0)[0]
        remap = np.zeros(self.h.m, dtype=np.int64)
        remap[active_rows] = np.arange(active_rows.size)
        self.edge_row = remap[self.edge_row]
        self._n_rows = active_rows.size
        self.row_ptr = np.searchsorted(self.edge_row, np.arange(self._n_rows))

    @property
    def num_edges(self) -> int:
        return self.edge_col.size

    def new_messages(self) -> np.ndarray:
        return np.zeros(self.num_edges)

    def step(self, prior_llr: np.ndarray, c2v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """One bit-to-check plus check-to-bit pass; returns (posterior, new c2v)."""
        if self.num_edges == 0:
            return prior_llr.copy(), c2v
        col_sums = np.bincount(self.edge_col, weights=c2v, minlength=self.h.n)
        v2c = prior_llr[self.edge_col] + col_sums[self.edge_col] - c2v

        t = np.tanh(0.5 * v2c)
        zero = t == 0.0
        t_safe = np.where(zero, 1.0, t)
        row_prod = np.multiply.reduceat(t_safe, self.row_ptr)
        row_zeros = np.add.reduceat(zero.astype(np.float64), self.row_ptr)
        pr = row_prod[self.edge_row]
        zr = row_zeros[self.edge_row]
        # Leave-one-out product: exact zeros stay exact so unresolved
        # erasures keep posterior 0 instead of drifting.
        loo = np.where(zr == 0.0, pr / t_safe, np.where(zero & (zr == 1.0), pr, 0.0))
        c2v_new = 2.0 * np.arctanh(np.clip(loo, -_ARCTANH_CLIP, _ARCTANH_CLIP))

        posterior = prior_llr + np.bincount(self.edge_col, weights=c2v_new, minlength=self.h.n)
        return posterior, c2v_new

    def syndrome_ok(self, word: np.ndarray) -> bool:
        if self.num_edges == 0:
            return True
        sums = np.bitwise_xor.reduceat(word[self.edge_col], self.row_ptr)
        return not np.any(sums)

    def decode(self, prior_llr: np.ndarray, max_iter: int = 100) -> DecodeResult:
        """Iterate until the hard decision is a codeword with every bit decided."""
        prior_llr = np.asarray(prior_llr, dtype=np.float64)
        if prior_llr.shape != (self.h.n,):
            raise ValueError(f"expected {self.h.n} beliefs, got {prior_llr.shape}")
        if max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        c2v = self.new_messages()
        posterior = prior_llr
        word = (posterior < 0.0).astype(np.uint8)
        for it in range(1, max_iter + 1):
            posterior, c2v = self.step(prior_llr, c2v)
            word = (posterior < 0.0).astype(np.uint8)
            if self.syndrome_ok(word) and not np.any(posterior == 0.0):
                return DecodeResult(word, True, it, posterior)
        return DecodeResult(word, False, max_iter, posterior)


def bp_decode(h: ParityCheckMatrix, beliefs: np.ndarray, max_iter: int = 100) -> DecodeResult:
    """Sum-product decode from probability-pair beliefs ((0.5, 0.5) = erasure)."""
    return BeliefPropagationDecoder(h).decode(pairs_to_llr(beliefs), max_iter)


def write_alist(h: ParityCheckMatrix, path) -> None:
    """Write the matrix in alist text format (1-based, zero-padded lists)."""
    col_deg = h.col_degrees()
    row_deg = h.row_degrees()
    dc = int(col_deg.max()) if h.n else 0
    dr = int(row_deg.max()) if h.m else 0
    by_col: list[list[int]] = [[] for _ in range(h.n)]
    by_row: list[list[int]] = [[] for _ in range(h.m)]
    for r, c in zip(h.rows, h.cols):
        by_col[c].append(int(r) + 1)
        by_row[r].append(int(c) + 1)
    lines = [
        f"{h.n} {h.m}",
        f"{dc} {dr}",
        " ".join(str(int(d)) for d in col_deg),
        " ".join(str(int(d)) for d in row_deg),
    ]
    for entries in by_col:
        padded = sorted(entries) + [0] * (dc - len(entries))
        lines.append(" ".join(str(v) for v in padded))
    for entries in by_row:
        padded = sorted(entries) + [0] * (dr - len(entries))
        lines.append(" ".join(str(v) for v in padded))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path) -> ParityCheckMatrix:
    """Read an alist file, validating that row and column lists agree."""
    with open(path, "r", encoding="ascii") as fh:
        rows_of_ints = [[int(tok) for tok in line.split()] for line in fh if line.strip()]
    if len(rows_of_ints) < 4:
        raise ValueError(f"truncated alist file: {path}")
    n, m = rows_of_ints[0]
    col_deg = rows_of_ints[2]
    row_deg = rows_of_ints[3]
    if len(col_deg) != n or len(row_deg) != m:
        raise ValueError("alist degree lists do not match declared dimensions")
    if len(rows_of_ints) != 4 + n + m:
        raise ValueError("alist adjacency block does not match declared dimensions")
    rows, cols = [], []
    for c in range(n):
        entries = [v for v in rows_of_ints[4 + c] if v != 0]
        if len(entries) != col_deg[c]:
            raise ValueError(f"column {c} lists {len(entries)} entries, degree says {col_deg[c]}")
        rows.extend(v - 1 for v in entries)
        cols.extend([c] * len(entries))
    h = ParityCheckMatrix(m, n, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))
    for r in range(m):
        entries = sorted(v for v in rows_of_ints[4 + n + r] if v != 0)
        expect = sorted(int(c) + 1 for c in h.cols[h.rows == r])
        if entries != expect:
            raise ValueError(f"row {r} adjacency disagrees with column lists")
    return h
