"""Exact weight-distribution oracles.

Three independent routes, kept in full integer precision end to end:

* brute force -- Gray-code enumeration of all 2^k codewords;
* MacWilliams transform -- dual distribution via Krawtchouk recurrences;
* Plotkin coset recursion -- weight enumerators of cosets of one RM code
  inside another, lifted through the (u, u+v) construction.

Polynomial convolutions ride on Python bigints: coefficients are packed into
fixed-width limbs of one integer, multiplied natively, and unpacked. The limb
width is chosen from the coefficient mass so no digit can overflow into its
neighbour, which keeps every convolution exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from ._kernels import gray_weight_histogram
from .rm import RmCode, dimension, generator_rows

__all__ = [
    "WeightDistribution",
    "CosetEnumerators",
    "ResourceLimitError",
    "brute_force_distribution",
    "macwilliams_transform",
    "plotkin_square",
    "enumerate_cosets",
    "coset_recursion_step",
    "coset_recursion_distribution",
]


class ResourceLimitError(RuntimeError):
    """A configured enumeration or label budget would be exceeded."""


@dataclass(frozen=True)
class WeightDistribution:
    """Exact counts A(0..n), arbitrary precision."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise ValueError("counts must have length n + 1")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def from_map(cls, n: int, entries: dict[int, int]) -> "WeightDistribution":
        counts = [0] * (n + 1)
        for w, a in entries.items():
            counts[w] = a
        return cls(n, tuple(counts))

    def __getitem__(self, w: int) -> int:
        return self.counts[w]

    def total(self) -> int:
        return sum(self.counts)

    def spectrum(self) -> tuple[int, ...]:
        return tuple(w for w, a in enumerate(self.counts) if a)

    def min_nonzero_weight(self) -> int:
        return next(w for w, a in enumerate(self.counts) if a and w > 0)

    def to_json(self) -> str:
        """Sparse JSON with counts as decimal strings."""
        body = {
            "n": self.n,
            "counts": {str(w): str(a) for w, a in enumerate(self.counts) if a},
        }
        return json.dumps(body, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WeightDistribution":
        body = json.loads(text)
        n = int(body["n"])
        return cls.from_map(n, {int(w): int(a) for w, a in body["counts"].items()})


def brute_force_distribution(code: RmCode, k_max: int = 26) -> WeightDistribution:
    """Exact distribution by enumerating all 2^k codewords.

    Gray-code message stepping: one generator-row XOR and one popcount per
    codeword. Guarded by k_max (2^26 is minutes of desk time; raise it
    explicitly for bigger runs).
    """
    if code.k > k_max:
        raise ResourceLimitError(
            f"k={code.k} exceeds k_max={k_max} for brute-force enumeration"
        )
    hist = np.zeros(code.n + 1, dtype=np.int64)
    gray_weight_histogram(code.generator_words, code.k, hist)
    return WeightDistribution(code.n, tuple(int(c) for c in hist))


def _krawtchouk_column(n: int, v: int) -> list[int]:
    """K_w(v; n) for w = 0..n, exact integers via the three-term recurrence."""
    col = [0] * (n + 1)
    col[0] = 1
    if n >= 1:
        col[1] = n - 2 * v
    for w in range(1, n):
        num = (n - 2 * v) * col[w] - (n - w + 1) * col[w - 1]
        q, rem = divmod(num, w + 1)
        assert rem == 0
        col[w + 1] = q
    return col


def macwilliams_transform(wd: WeightDistribution, k: int) -> WeightDistribution:
    """Distribution of the dual of a [n, k] code with distribution wd.

    A_dual(w) = 2^-k * sum_v A(v) K_w(v; n). Exact integer arithmetic; any
    non-exact division means the input is not the distribution of a linear
    code of dimension k.
    """
    if wd.total() != 1 << k:
        raise ValueError(f"counts sum to {wd.total()}, expected 2^{k}")
    n = wd.n
    nonzero = [(v, a) for v, a in enumerate(wd.counts) if a]
    cols = {v: _krawtchouk_column(n, v) for v, _ in nonzero}
    denom = 1 << k
    out = []
    for w in range(n + 1):
        s = sum(a * cols[v][w] for v, a in nonzero)
        q, rem = divmod(s, denom)
        if rem != 0 or q < 0:
            raise ValueError(
                f"non-exact MacWilliams division at weight {w}: inconsistent input"
            )
        out.append(q)
    return WeightDistribution(n, tuple(out))


# ---------------------------------------------------------------------------
# Exact polynomial convolution via limb packing
# ---------------------------------------------------------------------------


def _pack(counts: Sequence[int], limb: int) -> int:
    acc = 0
    shift = 0
    for c in counts:
        acc |= c << shift
        shift += limb
    return acc


def _unpack(acc: int, length: int, limb: int) -> tuple[int, ...]:
    mask = (1 << limb) - 1
    return tuple((acc >> (i * limb)) & mask for i in range(length))


def plotkin_square(coset_wds: Sequence[WeightDistribution]) -> WeightDistribution:
    """Distribution of the (u, u+v) code from the coset distributions of its
    constituents: the sum of the self-convolutions, length 2n."""
    if not coset_wds:
        raise ValueError("need at least one coset distribution")
    n = coset_wds[0].n
    if any(wd.n != n for wd in coset_wds):
        raise ValueError("coset distributions have mismatched lengths")
    max_mass = max(wd.total() for wd in coset_wds)
    limb = (max_mass * max_mass * len(coset_wds)).bit_length() + 1
    acc = 0
    for wd in coset_wds:
        p = _pack(wd.counts, limb)
        acc += p * p
    return WeightDistribution(2 * n, _unpack(acc, 2 * n + 1, limb))


# ---------------------------------------------------------------------------
# Coset weight enumerators and the (u, u+v) lifting recursion
# ---------------------------------------------------------------------------


class _LabelledSpan:
    """Echelon GF(2) basis whose elements carry label tags.

    Lets us read off, for any vector in the span, its coefficients over a
    chosen set of representative rows modulo a sub-code (rows inserted with
    tag 0 span the sub-code; rows with unit tags are the representatives).
    """

    def __init__(self):
        self._pivots: dict[int, tuple[int, int]] = {}

    def _reduce(self, v: int, tag: int) -> tuple[int, int]:
        while v:
            low = (v & -v).bit_length() - 1
            hit = self._pivots.get(low)
            if hit is None:
                return v, tag
            v ^= hit[0]
            tag ^= hit[1]
        return 0, tag

    def insert(self, v: int, tag: int) -> bool:
        res, t = self._reduce(v, tag)
        if res == 0:
            return False
        low = (res & -res).bit_length() - 1
        self._pivots[low] = (res, t)
        return True

    def label(self, v: int) -> int:
        res, t = self._reduce(v, 0)
        if res:
            raise ValueError("vector outside the spanned code")
        return t


@dataclass(frozen=True)
class CosetEnumerators:
    """Weight enumerators of all cosets of RM(m, sub_order) in RM(m, order).

    Cosets are labelled by bit-vectors over a filtration basis: block
    ``(level, width)`` holds the coefficients of representatives that extend
    RM(m, level-1) to RM(m, level), lowest level in the lowest bits. Labels
    add like cosets: the coset of a sum is the XOR of the labels.

    ``ij_widths = (wi, wj)`` records the (i, j) index split, i indexing cosets
    of the next-lower order code and j the cosets inside it; None when the
    internal label layout does not admit that split.
    """

    m: int
    order: int
    sub_order: int
    blocks: tuple[tuple[int, int], ...]
    dists: tuple[tuple[int, ...], ...]
    ij_widths: tuple[int, int] | None

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def label_bits(self) -> int:
        return sum(w for _, w in self.blocks)

    @property
    def coset_count(self) -> int:
        return 1 << self.label_bits

    @property
    def quotient_sizes(self) -> tuple[int, int]:
        """(M, M0) = (#i values, #j values)."""
        if self.ij_widths is None:
            raise ValueError("no (i, j) split on this level")
        wi, wj = self.ij_widths
        return 1 << wi, 1 << wj

    def distribution(self, label: int) -> WeightDistribution:
        return WeightDistribution(self.n, self.dists[label])

    def coset(self, i: int, j: int) -> WeightDistribution:
        if self.ij_widths is None:
            raise ValueError("no (i, j) split on this level")
        wi, wj = self.ij_widths
        if not (0 <= i < (1 << wi) and 0 <= j < (1 << wj)):
            raise IndexError((i, j))
        return self.distribution((i << wj) | j)


def enumerate_cosets(
    m: int, order: int, sub_order: int, enum_bits: int = 22
) -> CosetEnumerators:
    """Build coset enumerators directly, by enumerating RM(m, order).

    ``sub_order = -1`` means cosets of the zero code (singletons). Orders
    above m clamp to the full space. Enumeration cost is 2^dim; refuse
    anything beyond enum_bits.
    """
    if sub_order < -1 or sub_order >= order:
        raise ValueError("need -1 <= sub_order < order")
    rc = min(order, m)
    kdim = dimension(m, rc)
    if kdim > enum_bits:
        raise ResourceLimitError(
            f"enumerating RM({m},{rc}) needs 2^{kdim} words (cap 2^{enum_bits})"
        )
    n = 1 << m

    span = _LabelledSpan()
    if sub_order >= 0:
        for row in generator_rows(m, min(sub_order, m)):
            span.insert(row, 0)

    blocks: list[tuple[int, int]] = []
    offset = 0
    for level in range(sub_order + 1, order + 1):
        width = 0
        for row in generator_rows(m, min(level, m)):
            if span.insert(row, 1 << (offset + width)):
                width += 1
        expected = dimension(m, min(level, m)) - (
            dimension(m, min(level - 1, m)) if level >= 1 else 0
        )
        assert width == expected
        blocks.append((level, width))
        offset += width

    g_rows = generator_rows(m, rc)
    row_labels = [span.label(row) for row in g_rows]
    counts = [[0] * (n + 1) for _ in range(1 << offset)]
    c = 0
    lab = 0
    counts[0][0] += 1
    for i in range(1, 1 << kdim):
        j = (i & -i).bit_length() - 1
        c ^= g_rows[j]
        lab ^= row_labels[j]
        counts[lab][c.bit_count()] += 1

    w_top = blocks[-1][1]
    return CosetEnumerators(
        m=m,
        order=order,
        sub_order=sub_order,
        blocks=tuple(blocks),
        dists=tuple(tuple(row) for row in counts),
        ij_widths=(w_top, offset - w_top),
    )


def _lift(level: CosetEnumerators) -> CosetEnumerators:
    """Coset enumerators one Plotkin level up.

    From cosets of RM(m, rho) in RM(m, r), produce cosets of RM(m+1, rho+1)
    in RM(m+1, r): the coset of (a, a+b) is a convolution sum over the
    lowest-level block of the input labels.
    """
    m, r, rho = level.m, level.order, level.sub_order
    blocks = level.blocks
    total = level.label_bits
    w_low = blocks[0][1]
    w_top = blocks[-1][1]
    d_hi = total - w_low  # upper label bits of a
    d_b = total - w_top   # label bits of b (top block empty)
    n2 = (1 << (m + 1)) + 1

    mass = 1 << dimension(m, min(rho, m)) if rho >= 0 else 1
    limb = (mass * mass << w_low).bit_length() + 1
    packed = [_pack(d, limb) for d in level.dists]

    # Output blocks at level lam pack a's lam-bits above b's (lam-1)-bits.
    in_off = {}
    off = 0
    for lam, w in blocks:
        in_off[lam] = off
        off += w
    widths = dict(blocks)
    out_blocks = []
    out_off = {}
    off = 0
    for lam in range(rho + 2, r + 1):
        out_off[lam] = off
        w = widths[lam] + widths[lam - 1]
        out_blocks.append((lam, w))
        off += w

    def scatter_a(ha: int) -> int:
        out = 0
        for lam in range(rho + 2, r + 1):
            bits = (ha >> (in_off[lam] - w_low)) & ((1 << widths[lam]) - 1)
            out |= bits << (out_off[lam] + widths[lam - 1])
        return out

    def scatter_b(kb: int) -> int:
        out = 0
        for lam in range(rho + 2, r + 1):
            bits = (kb >> in_off[lam - 1]) & ((1 << widths[lam - 1]) - 1)
            out |= bits << out_off[lam]
        return out

    sb = [scatter_b(kb) for kb in range(1 << d_b)]
    out_dists: list[tuple[int, ...] | None] = [None] * (1 << (d_hi + d_b))
    for ha in range(1 << d_hi):
        base = ha << w_low
        oa = scatter_a(ha)
        for kb in range(1 << d_b):
            acc = 0
            for low in range(1 << w_low):
                acc += packed[base ^ low] * packed[base ^ low ^ kb]
            out_dists[oa | sb[kb]] = _unpack(acc, n2, limb)
    return CosetEnumerators(
        m=m + 1,
        order=r,
        sub_order=rho + 1,
        blocks=tuple(out_blocks),
        dists=tuple(out_dists),  # type: ignore[arg-type]
        # For a depth-2 input the (i, j) split of the output is exactly
        # (u's coset of C0 in C, v's coset of C00 in C0).
        ij_widths=(d_hi, d_b) if r - rho == 2 else None,
    )


def coset_recursion_step(level: CosetEnumerators) -> CosetEnumerators:
    """Lift a populated triple RM(m,r-2) in RM(m,r-1) in RM(m,r) to the coset
    enumerators of RM(m+1, r-1) in RM(m+1, r), indexed by (i, j)."""
    if level.order - level.sub_order != 2:
        raise ValueError("step needs a depth-2 level (sub_order = order - 2)")
    return _lift(level)


def coset_recursion_distribution(
    m: int,
    r: int,
    enum_bits: int = 16,
    max_label_bits: int = 24,
    work_bits: int = 26,
) -> WeightDistribution:
    """Exact distribution of RM(m, r) by the coset recursion.

    Starts from a directly enumerable base level and lifts until the cosets
    of RM(m-1, r-1) in RM(m-1, r) are in hand; their squared enumerators sum
    to the answer. Budgets are checked before any heavy work, and the error
    reports the level whose coset count (or lift convolution count) explodes.
    """
    n = 1 << m
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got m={m} r={r}")
    if r == m:
        return WeightDistribution(n, tuple(comb(n, w) for w in range(n + 1)))

    base = None
    for mu0 in range(m - 1, -1, -1):
        lifts = (m - 1) - mu0
        rho0 = r - 1 - lifts
        if rho0 < -1:
            break
        if dimension(mu0, min(r, mu0)) <= enum_bits:
            base = (mu0, rho0, lifts)
            break
    if base is None:
        raise ResourceLimitError(
            f"no enumerable base level for RM({m},{r}) under enum_bits={enum_bits}"
        )
    mu0, rho0, lifts = base
    for mu in range(mu0, m):
        rho = rho0 + (mu - mu0)
        d = dimension(mu, min(r, mu)) - (
            dimension(mu, min(rho, mu)) if rho >= 0 else 0
        )
        if d > max_label_bits:
            raise ResourceLimitError(
                f"level m={mu}: 2^{d} cosets of RM({mu},{rho}) in RM({mu},{r}) "
                f"exceed max_label_bits={max_label_bits}"
            )
        if mu < m - 1:
            # Lifting this level costs 2^(d + d_b) convolutions.
            w_top = dimension(mu, min(r, mu)) - dimension(mu, min(r - 1, mu))
            work = d + (d - w_top)
            if work > work_bits:
                raise ResourceLimitError(
                    f"level m={mu}: lifting needs 2^{work} convolutions, "
                    f"exceeding work_bits={work_bits}"
                )

    state = enumerate_cosets(mu0, r, rho0, enum_bits=enum_bits)
    for _ in range(lifts):
        state = _lift(state)
    return plotkin_square(
        [state.distribution(lab) for lab in range(state.coset_count)]
    )
