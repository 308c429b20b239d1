"""Bit-packed GF(2) vectors and matrices using Python int bitsets.

Bit i of the backing integer is coordinate i, so ``hex(bits)`` prints the
most significant nibble first and coordinate 0 sits in the lowest bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import RngStream

__all__ = [
    "BitVec",
    "GF2Matrix",
    "hamming_weight",
    "xor_add",
    "parity_dot",
    "rank",
    "invert",
    "vec_mat",
    "matmul",
    "sample_full_rank",
    "lex_index",
]


@dataclass(frozen=True)
class BitVec:
    """Fixed-length vector over GF(2). Storage beyond ``length`` must be zero."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVec":
        bits = 0
        n = 0
        for v in values:
            if v & 1:
                bits |= 1 << n
            n += 1
        return cls(n, bits)

    @classmethod
    def from_indices(cls, length: int, positions: Iterable[int]) -> "BitVec":
        bits = 0
        for p in positions:
            if not 0 <= p < length:
                raise ValueError(f"position {p} outside [0, {length})")
            bits |= 1 << p
        return cls(length, bits)

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitVec":
        return cls(length, int(text, 16))

    @classmethod
    def from_words(cls, words: np.ndarray, length: int) -> "BitVec":
        bits = 0
        for i, w in enumerate(words.tolist()):
            bits |= w << (64 * i)
        return cls(length, bits & ((1 << length) - 1))

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVec(self.length, self.bits ^ other.bits)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.length) if (self.bits >> i) & 1)

    def to_hex(self) -> str:
        ndigits = (self.length + 3) // 4
        return f"{self.bits:0{ndigits}x}"

    def to_words(self) -> np.ndarray:
        nwords = max(1, (self.length + 63) // 64)
        out = np.zeros(nwords, dtype=np.uint64)
        b = self.bits
        for i in range(nwords):
            out[i] = b & 0xFFFFFFFFFFFFFFFF
            b >>= 64
        return out


def hamming_weight(v: BitVec) -> int:
    """Number of nonzero coordinates."""
    return v.weight


def xor_add(a: BitVec, b: BitVec) -> BitVec:
    """Component-wise addition over GF(2)."""
    return a ^ b


def parity_dot(a: int, b: int) -> int:
    """Inner product of two int bitsets over GF(2)."""
    return (a & b).bit_count() & 1


@dataclass(frozen=True)
class GF2Matrix:
    """Dense bit-packed matrix, one int bitset per row (bit j = column j)."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.row_bits) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.row_bits:
            if r < 0 or r >> self.cols:
                raise ValueError("row bits set beyond column count")

    @classmethod
    def from_rows(cls, row_bits: Sequence[int], cols: int) -> "GF2Matrix":
        return cls(len(row_bits), cols, tuple(row_bits))

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "GF2Matrix":
        cols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged rows")
            rows.append(sum((v & 1) << j for j, v in enumerate(row)))
        return cls(len(entries), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.row_bits[i])

    def to_words(self) -> np.ndarray:
        """Rows as a (rows, ceil(cols/64)) uint64 array for kernel use."""
        nwords = max(1, (self.cols + 63) // 64)
        out = np.zeros((self.rows, nwords), dtype=np.uint64)
        for i, bits in enumerate(self.row_bits):
            for w in range(nwords):
                out[i, w] = bits & 0xFFFFFFFFFFFFFFFF
                bits >>= 64
        return out


def rank(matrix: GF2Matrix) -> int:
    """GF(2) row rank by Gaussian elimination."""
    work = list(matrix.row_bits)
    r = 0
    for col in range(matrix.cols):
        pivot = None
        for i in range(r, len(work)):
            if (work[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        r += 1
        if r == len(work):
            break
    return r


def invert(matrix: GF2Matrix) -> GF2Matrix:
    """Inverse of a square matrix; raises ValueError if singular."""
    if matrix.rows != matrix.cols:
        raise ValueError("matrix is not square")
    n = matrix.rows
    # Augmented elimination: low n bits hold the matrix, high n bits the identity.
    work = [bits | (1 << (n + i)) for i, bits in enumerate(matrix.row_bits)]
    r = 0
    for col in range(n):
        pivot = None
        for i in range(r, n):
            if (work[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            raise ValueError("singular matrix over GF(2)")
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(n):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        r += 1
    mask = (1 << n) - 1
    return GF2Matrix(n, n, tuple((w >> n) & mask for w in work))


def vec_mat(bits: int, matrix: GF2Matrix) -> int:
    """Row vector (int bitset of length matrix.rows) times matrix."""
    acc = 0
    i = 0
    while bits:
        if bits & 1:
            acc ^= matrix.row_bits[i]
        bits >>= 1
        i += 1
    return acc


def matmul(a: GF2Matrix, b: GF2Matrix) -> GF2Matrix:
    if a.cols != b.rows:
        raise ValueError("inner dimension mismatch")
    return GF2Matrix(a.rows, b.cols, tuple(vec_mat(r, b) for r in a.row_bits))


def sample_full_rank(rows: int, cols: int, rng: RngStream) -> GF2Matrix:
    """Uniform full-rank rows x cols matrix by rejection.

    Redraws the whole matrix until it has rank ``rows``; succeeds in O(1)
    expected attempts. Row draws use one ``integers`` call per row so the
    consumption pattern matches the compiled sampler kernels exactly.
    """
    if rows > cols:
        raise ValueError("rows > cols admits no full-rank matrix")
    if cols <= 63:
        high = 1 << cols
        while True:
            bits = [int(rng.integers(0, high)) for _ in range(rows)]
            if _rank_of_rows(bits) == rows:
                return GF2Matrix(rows, cols, tuple(bits))
    while True:
        bits = [_wide_row(cols, rng) for _ in range(rows)]
        if _rank_of_rows(bits) == rows:
            return GF2Matrix(rows, cols, tuple(bits))


def _wide_row(cols: int, rng: RngStream) -> int:
    out = 0
    for off in range(0, cols, 32):
        width = min(32, cols - off)
        out |= int(rng.integers(0, 1 << width)) << off
    return out


def _rank_of_rows(bits: list[int]) -> int:
    basis: dict[int, int] = {}
    r = 0
    for v in bits:
        while v:
            low = (v & -v).bit_length() - 1
            if low in basis:
                v ^= basis[low]
            else:
                basis[low] = v
                r += 1
                break
    return r


def lex_index(z: BitVec) -> int:
    """Index of evaluation point z = (z1..zm) with z1 the most significant bit."""
    m = z.length
    idx = 0
    for pos in range(m):
        if (z.bits >> pos) & 1:
            idx |= 1 << (m - 1 - pos)
    return idx
