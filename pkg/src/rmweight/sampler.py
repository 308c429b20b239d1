"""Metropolis sampling of RM codewords from the Gibbs distribution p_beta.

The chain proposes ``current + (uniform minimum-weight codeword)`` and accepts
with probability min(1, exp(-beta * (E(proposal) - E(current)))). Proposals
are codeword XOR codeword, so the chain never leaves the code.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import _kernels
from .gf2 import BitVec
from .rm import RmCode
from .rng import RngStream

__all__ = [
    "WeightEnergy",
    "ChainState",
    "energy",
    "acceptance_table",
    "metropolis_step",
    "sample",
    "batch_final_weights",
    "ChainPool",
]


@dataclass(frozen=True)
class WeightEnergy:
    """E(x) = |weight(x) - target|; zero exactly on the target weight class."""

    target: int

    def __call__(self, x: BitVec) -> int:
        return abs(x.weight - self.target)

    def of_weight(self, w: int) -> int:
        return abs(w - self.target)


def energy(omega: int, x: BitVec) -> int:
    return abs(x.weight - omega)


@dataclass(frozen=True)
class ChainState:
    current: BitVec
    current_weight: int
    beta: float
    steps_taken: int = 0


@lru_cache(maxsize=64)
def acceptance_table(beta: float, n: int) -> np.ndarray:
    """exp(-beta * j) for integer energy deltas j in [0, n].

    Cached so the hot loop never calls a transcendental; shared verbatim with
    the compiled kernel so both paths make identical accept decisions.
    """
    table = np.exp(-beta * np.arange(n + 1, dtype=np.float64))
    table.setflags(write=False)
    return table


def initial_state(code: RmCode, beta: float, c0: BitVec | None = None) -> ChainState:
    """Chain start; defaults to the zero codeword."""
    if c0 is None:
        c0 = BitVec(code.n)
    if not code.contains(c0):
        raise ValueError("c0 is not a codeword")
    return ChainState(c0, c0.weight, beta)


def metropolis_step(
    state: ChainState,
    code: RmCode,
    e: WeightEnergy,
    rng: RngStream,
    accept: np.ndarray | None = None,
) -> ChainState:
    """One proposal/accept step. Draws exactly one uniform real per step."""
    if accept is None:
        accept = acceptance_table(state.beta, code.n)
    flat = code.sample_min_weight(rng)
    u = rng.random()
    w_new = (state.current.bits ^ flat.bits).bit_count()
    de = e.of_weight(w_new) - e.of_weight(state.current_weight)
    if de <= 0 or u < accept[de]:
        return ChainState(
            state.current ^ flat, w_new, state.beta, state.steps_taken + 1
        )
    return replace(state, steps_taken=state.steps_taken + 1)


def sample(
    code: RmCode,
    c0: BitVec,
    beta: float,
    e: WeightEnergy,
    tau: int,
    rng: RngStream,
    method: str = "kernel",
) -> BitVec:
    """Run the chain tau steps from codeword c0; returns the final codeword.

    ``method="kernel"`` (compiled) and ``method="python"`` consume the stream
    identically and produce the same trajectory for the same seed.
    """
    if not code.contains(c0):
        raise ValueError("c0 is not a codeword")
    if method == "python":
        state = ChainState(c0, c0.weight, beta)
        accept = acceptance_table(beta, code.n)
        for _ in range(tau):
            state = metropolis_step(state, code, e, rng, accept)
        return state.current
    words = c0.to_words()
    _kernels.run_chain(
        rng, code.m, code.m - code.r, e.target, tau,
        acceptance_table(beta, code.n), words,
    )
    return BitVec.from_words(words, code.n)


def _one_chain_weight(code, omega, beta, tau, rng) -> int:
    words = np.zeros(max(1, code.n // 64), dtype=np.uint64)
    return int(
        _kernels.run_chain(
            rng, code.m, code.m - code.r, omega, tau,
            acceptance_table(beta, code.n), words,
        )
    )


def batch_final_weights(
    code: RmCode,
    omega: int,
    beta: float,
    tau: int,
    t: int,
    rng: RngStream,
    threads: int = 1,
) -> np.ndarray:
    """Final weights of t independent chains, each from the zero codeword.

    Chains get child streams spawned in index order, and results are collected
    by index, so the output does not depend on the thread schedule.
    """
    children = rng.spawn(t)
    if threads > 1 and t > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            weights = list(
                pool.map(
                    lambda j: _one_chain_weight(code, omega, beta, tau, children[j]),
                    range(t),
                )
            )
    else:
        weights = [
            _one_chain_weight(code, omega, beta, tau, children[j]) for j in range(t)
        ]
    return np.asarray(weights, dtype=np.int64)


class ChainPool:
    """Persistent chains for warm-started estimator rounds.

    Each round advances every chain tau further steps at the new temperature
    from wherever it stopped, instead of re-equilibrating from the zero
    codeword. Endpoints are then correlated across rounds, so the strict
    unbiasedness of the telescoping product is lost; the bias vanishes as
    tau outgrows the chain's relaxation time. Trade made only on request.
    """

    def __init__(self, code: RmCode, omega: int, t: int, rng: RngStream):
        self._code = code
        self._omega = omega
        self._words = [
            np.zeros(max(1, code.n // 64), dtype=np.uint64) for _ in range(t)
        ]
        self._streams = rng.spawn(t)

    def advance(self, beta: float, tau: int, threads: int = 1) -> np.ndarray:
        code = self._code
        table = acceptance_table(beta, code.n)

        def one(j: int) -> int:
            return int(
                _kernels.run_chain(
                    self._streams[j], code.m, code.m - code.r, self._omega,
                    tau, table, self._words[j],
                )
            )

        if threads > 1 and len(self._words) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                weights = list(pool.map(one, range(len(self._words))))
        else:
            weights = [one(j) for j in range(len(self._words))]
        return np.asarray(weights, dtype=np.int64)


def exact_gibbs(counts, omega: int, beta: float) -> dict[int, float]:
    """Exact p_beta mass per weight class from a full weight distribution.

    Small-code oracle used by tests and diagnostics; cost O(n).
    """
    zs = {
        w: a * math.exp(-beta * abs(w - omega))
        for w, a in enumerate(counts)
        if a
    }
    total = sum(zs.values())
    return {w: z / total for w, z in zs.items()}
