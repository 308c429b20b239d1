"""Compiled hot loops (numba).

All bit manipulation stays in uint64; mixing signed and unsigned operands
would silently promote to float64 under numba's numpy semantics.
The chain kernel consumes its Generator in exactly the same pattern as the
pure-Python path in ``sampler``: per step, one ``integers`` draw per proposal
matrix row (redrawing the whole matrix on rank failure), one for the offset,
then one ``random`` draw for the acceptance test.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)
_SIX = np.uint64(6)
_MASK6 = np.uint64(63)


@njit(inline="always")
def _popcount64(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(inline="always")
def _ctz64(x):
    # x != 0
    return _popcount64((x & (~x + _ONE)) - _ONE)


@njit(cache=True, nogil=True)
def run_chain(rng, m, mr, omega, tau, exp_table, state):
    """Advance a Metropolis chain tau steps in place; returns the final weight.

    state: uint64 words of the current codeword (mutated).
    exp_table[j] = exp(-beta * j) for j in [0, n].
    """
    nwords = state.shape[0]
    arows = np.zeros(mr, dtype=np.uint64)
    basis = np.zeros(m, dtype=np.uint64)
    flat = np.zeros(nwords, dtype=np.uint64)
    high = 1 << m

    w = 0
    for i in range(nwords):
        w += int(_popcount64(state[i]))
    e_cur = w - omega if w >= omega else omega - w

    for _ in range(tau):
        # Uniform full-rank (mr x m) matrix by whole-matrix rejection.
        while True:
            for i in range(mr):
                arows[i] = rng.integers(0, high)
            rank = 0
            for i in range(m):
                basis[i] = _ZERO
            for i in range(mr):
                v = arows[i]
                while v != _ZERO:
                    p = int(_ctz64(v))
                    if basis[p] != _ZERO:
                        v ^= basis[p]
                    else:
                        basis[p] = v
                        rank += 1
                        break
            if rank == mr:
                break
        b = np.uint64(rng.integers(0, high))

        # Characteristic vector of the flat {xA + b}, Gray-enumerated.
        for i in range(nwords):
            flat[i] = _ZERO
        point = b
        flat[point >> _SIX] ^= _ONE << (point & _MASK6)
        for s in range(1, 1 << mr):
            point ^= arows[int(_ctz64(np.uint64(s)))]
            flat[point >> _SIX] ^= _ONE << (point & _MASK6)

        w_new = 0
        for i in range(nwords):
            w_new += int(_popcount64(state[i] ^ flat[i]))
        e_new = w_new - omega if w_new >= omega else omega - w_new

        u = rng.random()
        de = e_new - e_cur
        if de <= 0 or u < exp_table[de]:
            for i in range(nwords):
                state[i] ^= flat[i]
            e_cur = e_new
            w = w_new
    return w


@njit(cache=True, nogil=True)
def gray_weight_histogram(rows, k, hist):
    """Tally weights of all 2^k codewords spanned by rows (uint64 (k, nwords)).

    One row-XOR and popcount per codeword via Gray-code message stepping.
    hist must be int64 of length n+1; counts are added in place.
    """
    nwords = rows.shape[1]
    cur = np.zeros(nwords, dtype=np.uint64)
    hist[0] += 1
    total = np.int64(1) << k
    for i in range(1, total):
        j = int(_ctz64(np.uint64(i)))
        w = 0
        for t in range(nwords):
            cur[t] ^= rows[j, t]
            w += int(_popcount64(cur[t]))
        hist[w] += 1
