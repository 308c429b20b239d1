"""Reed-Muller codes RM(m, r).

Generators follow the recursive block construction
``G(m,r) = [[G(m-1,r), G(m-1,r)], [0, G(m-1,r-1)]]`` with ``G(m,0)`` the
all-ones row and ``G(m,m)`` the identity. Columns are labelled by the m-bit
binary expansion of the column index (first coordinate most significant), so
message supports and codeword hex strings are reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .gf2 import BitVec, GF2Matrix, invert, parity_dot, sample_full_rank, vec_mat
from .rng import RngStream

__all__ = ["RmCode", "InfoSet", "generator_rows", "generator_matrix", "dimension"]


def dimension(m: int, r: int) -> int:
    """k = sum_{i<=r} C(m, i)."""
    return sum(comb(m, i) for i in range(r + 1))


def generator_rows(m: int, r: int) -> list[int]:
    """Generator rows of RM(m, r) as int bitsets (bit j = column j)."""
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got m={m} r={r}")
    if r == 0:
        return [(1 << (1 << m)) - 1]
    if r == m:
        return [1 << i for i in range(1 << m)]
    half = 1 << (m - 1)
    top = generator_rows(m - 1, r)
    bottom = generator_rows(m - 1, r - 1)
    return [row | (row << half) for row in top] + [row << half for row in bottom]


def generator_matrix(m: int, r: int) -> GF2Matrix:
    return GF2Matrix.from_rows(generator_rows(m, r), 1 << m)


@dataclass(frozen=True)
class InfoSet:
    """Information-set columns (labels of weight <= r, ascending) and the
    invertible square submatrix of the generator at those columns."""

    columns: tuple[int, ...]
    sub: GF2Matrix
    sub_inv: GF2Matrix


class RmCode:
    """The code RM(m, r) with cached generator and dual generator."""

    def __init__(self, m: int, r: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        if not 0 <= r <= m:
            raise ValueError(f"need 0 <= r <= m, got m={m} r={r}")
        self.m = m
        self.r = r
        self.n = 1 << m
        self.k = dimension(m, r)
        self._gen_rows = generator_rows(m, r)
        self._dual_rows = generator_rows(m, m - r - 1) if r <= m - 1 else []

    def __repr__(self):
        return f"RmCode(m={self.m}, r={self.r})"

    @property
    def min_distance(self) -> int:
        return 1 << (self.m - self.r)

    @cached_property
    def generator(self) -> GF2Matrix:
        return GF2Matrix.from_rows(self._gen_rows, self.n)

    @cached_property
    def dual_generator(self) -> GF2Matrix:
        return GF2Matrix.from_rows(self._dual_rows, self.n)

    @cached_property
    def generator_words(self) -> np.ndarray:
        return self.generator.to_words()

    @cached_property
    def info_set(self) -> InfoSet:
        cols = tuple(
            idx for idx in range(self.n) if idx.bit_count() <= self.r
        )
        assert len(cols) == self.k
        sub_rows = []
        for bits in self._gen_rows:
            sub_rows.append(
                sum(((bits >> c) & 1) << j for j, c in enumerate(cols))
            )
        sub = GF2Matrix.from_rows(sub_rows, self.k)
        return InfoSet(cols, sub, invert(sub))

    def encode(self, u: BitVec) -> BitVec:
        """Codeword u . G."""
        if u.length != self.k:
            raise ValueError(f"message length {u.length} != k={self.k}")
        bits = 0
        ubits = u.bits
        i = 0
        while ubits:
            if ubits & 1:
                bits ^= self._gen_rows[i]
            ubits >>= 1
            i += 1
        return BitVec(self.n, bits)

    def contains(self, x: BitVec) -> bool:
        """Membership via the dual generator as parity-check matrix."""
        if x.length != self.n:
            raise ValueError(f"vector length {x.length} != n={self.n}")
        return all(parity_dot(h, x.bits) == 0 for h in self._dual_rows)

    def sample_min_weight(self, rng: RngStream) -> BitVec:
        """Uniformly random minimum-weight codeword.

        Draws a full-rank (m-r) x m matrix A and uniform b, and returns the
        characteristic vector of the affine flat {xA + b}. Each flat has the
        same number of (A, b) preimages, so the output is uniform over the
        weight-2^(m-r) codewords.
        """
        mr = self.m - self.r
        a = sample_full_rank(mr, self.m, rng)
        b = int(rng.integers(0, self.n))
        # Points of the flat, enumerated in Gray order over x; row ints act
        # directly on column indices because the column labelling is linear.
        bits = 0
        point = b
        bits |= 1 << point
        for s in range(1, 1 << mr):
            point ^= a.row_bits[(s & -s).bit_length() - 1]
            bits |= 1 << point
        return BitVec(self.n, bits)

    def recover_message(self, c: BitVec) -> BitVec:
        """Message u with encode(u) = c, from the information-set columns."""
        if not self.contains(c):
            raise ValueError("vector is not a codeword")
        info = self.info_set
        punctured = sum(
            ((c.bits >> col) & 1) << j for j, col in enumerate(info.columns)
        )
        return BitVec(self.k, vec_mat(punctured, info.sub_inv))
