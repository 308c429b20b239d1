"""Telescoping-product estimation of the constant-weight subcode size A(omega).

Writing Z_beta for the Gibbs partition function, Z_0 = 2^k and each ratio
Z_{beta_i} / Z_{beta_{i-1}} is the mean of X = exp((beta_{i-1}-beta_i) E(c))
over codewords c drawn at the previous inverse temperature. The product of
per-round sample means estimates Z_{beta*}, which approaches A(omega) as
beta* grows. All accounting lives in base-2 logs: the linear value overflows
any native float once k passes ~1000.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .rm import RmCode
from .rng import RngStream, as_stream
from .sampler import ChainPool, batch_final_weights

__all__ = [
    "RatioSample",
    "LogEstimate",
    "ratio_estimate",
    "estimate_fixed",
    "estimate_adaptive",
    "sample_size_bound",
    "median_boost",
]

logger = logging.getLogger(__name__)

#: Hard cap on adaptive schedule length, 16 n^3 unless overridden: the theory
#: needs beta* on the order of n^2, i.e. n^3 steps of size 1/n.
DEFAULT_ELL_MAX_FACTOR = 16


@dataclass(frozen=True)
class RatioSample:
    """Per-round importance weights X_j = exp((beta_prev - beta_curr) E_j)
    and their sample mean Y."""

    values: np.ndarray
    mean: float


@dataclass(frozen=True)
class LogEstimate:
    """A partition-function estimate in base-2 log domain."""

    m: int
    r: int
    omega: int
    log2_z: float
    rate: float
    ell_used: int
    beta_star: float
    step: float
    t: int
    tau: int
    delta: float | None
    seed: int | None
    converged: bool = True

    def linear(self) -> float:
        """2^log2_z; overflows to inf for large codes, use log2_z instead."""
        try:
            return math.exp(self.log2_z * math.log(2.0))
        except OverflowError:
            return math.inf

    def params_key(self) -> tuple:
        return (self.m, self.r, self.omega, self.step, self.t, self.tau, self.delta)


def _ratio_from_weights(weights: np.ndarray, omega: int, dbeta: float) -> RatioSample:
    energies = np.abs(weights - omega)
    values = np.exp(-dbeta * energies.astype(np.float64))
    return RatioSample(values, float(values.mean()))


def ratio_estimate(
    code: RmCode,
    omega: int,
    beta_prev: float,
    beta_curr: float,
    t: int,
    tau: int,
    rng: RngStream | int | None,
    threads: int = 1,
) -> RatioSample:
    """Estimate Z_{beta_curr} / Z_{beta_prev} from t chains run at beta_prev."""
    if beta_curr <= beta_prev:
        raise ValueError("need beta_curr > beta_prev")
    if t < 1:
        raise ValueError("need t >= 1")
    rng = as_stream(rng)
    weights = batch_final_weights(code, omega, beta_prev, tau, t, rng, threads)
    return _ratio_from_weights(weights, omega, beta_curr - beta_prev)


def _seed_note(rng) -> int | None:
    return rng if isinstance(rng, int) else None


def estimate_fixed(
    code: RmCode,
    omega: int,
    beta_star: float | None = None,
    t: int = 10,
    tau: int = 10**6,
    rng: RngStream | int | None = 0,
    step: float | None = None,
    threads: int = 1,
    warm_start: bool = False,
) -> LogEstimate:
    """Fixed-schedule estimate of Z_{beta*} with uniform steps.

    beta* must sit on the schedule (a multiple of step). Defaults to n^2,
    the order the theory asks for, with unit constant. ``warm_start``
    continues each chain across rounds instead of drawing fresh i.i.d.
    samples; see ChainPool for the bias caveat.
    """
    n = code.n
    if step is None:
        step = 1.0 / n
    if beta_star is None:
        beta_star = float(n) * n
    ell = round(beta_star / step)
    if abs(ell * step - beta_star) > 1e-9 * max(1.0, beta_star):
        raise ValueError(f"beta_star={beta_star} is not a multiple of step={step}")
    seed = _seed_note(rng)
    stream = as_stream(rng)
    pool = ChainPool(code, omega, t, stream) if warm_start else None
    log2_z = float(code.k)
    for i in range(1, ell + 1):
        if pool is not None:
            weights = pool.advance((i - 1) * step, tau, threads)
            ratio = _ratio_from_weights(weights, omega, step)
        else:
            ratio = ratio_estimate(
                code, omega, (i - 1) * step, i * step, t, tau, stream, threads
            )
        log2_z += math.log2(ratio.mean)
        logger.debug(
            "round=%d beta=%.6g Y=%.8g log2_Z=%.6f rate=%.8f",
            i, i * step, ratio.mean, log2_z, log2_z / n,
        )
    return LogEstimate(
        m=code.m, r=code.r, omega=omega, log2_z=log2_z, rate=log2_z / n,
        ell_used=ell, beta_star=beta_star, step=step, t=t, tau=tau,
        delta=None, seed=seed, converged=True,
    )


def estimate_adaptive(
    code: RmCode,
    omega: int,
    t: int = 10,
    tau: int = 10**6,
    delta: float = 1e-3,
    rng: RngStream | int | None = 0,
    step: float | None = None,
    window: int = 3,
    ell_max: int | None = None,
    criterion: str = "log2",
    threads: int = 1,
    warm_start: bool = False,
) -> LogEstimate:
    """Adaptive-schedule estimate: extend the schedule until the running
    estimate settles to within delta.

    The default criterion declares a round settled when the base-2 log of the
    running estimate moves by at most delta, and stops after ``window``
    consecutive settled rounds. ``criterion="linear"`` instead compares
    consecutive linear-domain estimates |curr - prev| <= delta, which is only
    meaningful while 2^k fits in a float.

    On hitting ell_max (default 16 n^3) the best-so-far estimate is returned
    flagged unconverged. ``warm_start`` continues chains across rounds; see
    ChainPool for the bias caveat.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("need delta in (0, 1)")
    if criterion not in ("log2", "linear"):
        raise ValueError(f"unknown criterion {criterion!r}")
    n = code.n
    if step is None:
        step = 1.0 / n
    if ell_max is None:
        ell_max = DEFAULT_ELL_MAX_FACTOR * n * n * n
    seed = _seed_note(rng)
    stream = as_stream(rng)
    pool = ChainPool(code, omega, t, stream) if warm_start else None

    log2_z = float(code.k)
    try:
        curr_linear = math.pow(2.0, code.k)
    except OverflowError:
        curr_linear = math.inf
    settled = 0
    ell = 0
    converged = False
    while ell < ell_max:
        ell += 1
        if pool is not None:
            weights = pool.advance((ell - 1) * step, tau, threads)
            ratio = _ratio_from_weights(weights, omega, step)
        else:
            ratio = ratio_estimate(
                code, omega, (ell - 1) * step, ell * step, t, tau, stream, threads
            )
        dlog2 = math.log2(ratio.mean)
        log2_z += dlog2
        if criterion == "log2":
            ok = abs(dlog2) <= delta
        else:
            prev_linear = curr_linear
            curr_linear = curr_linear * ratio.mean
            ok = (
                math.isfinite(curr_linear)
                and abs(curr_linear - prev_linear) <= delta
            )
        settled = settled + 1 if ok else 0
        logger.debug(
            "round=%d beta=%.6g Y=%.8g log2_Z=%.6f rate=%.8f settled=%d",
            ell, ell * step, ratio.mean, log2_z, log2_z / n, settled,
        )
        if settled >= window:
            converged = True
            break
    return LogEstimate(
        m=code.m, r=code.r, omega=omega, log2_z=log2_z, rate=log2_z / n,
        ell_used=ell, beta_star=ell * step, step=step, t=t, tau=tau,
        delta=delta, seed=seed, converged=converged,
    )


def sample_size_bound(epsilon: float, ell: int) -> int:
    """Samples per round guaranteeing a (1 +/- epsilon) estimate w.p. >= 3/4.

    ceil(16 e^2 ell / epsilon^2): the per-round variable lives in [1/e, 1],
    so its second moment over squared mean is at most e^2.
    """
    if epsilon <= 0:
        raise ValueError("need epsilon > 0")
    raw = 16.0 * math.e**2 * ell / (epsilon * epsilon)
    return math.ceil(round(raw, 9))


def median_boost(runs: list[LogEstimate]) -> LogEstimate:
    """The run with median log2_Z (lower of the middle two for even counts).

    Boosts the 3/4 success probability of a single run; runs must share
    parameters and differ only in seed.
    """
    if not runs:
        raise ValueError("need at least one run")
    key = runs[0].params_key()
    for run in runs[1:]:
        if run.params_key() != key:
            raise ValueError("runs have mismatched parameters")
    ordered = sorted(runs, key=lambda e: e.log2_z)
    return ordered[(len(ordered) - 1) // 2]
