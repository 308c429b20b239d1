from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from rmweight import (
    LogEstimate,
    RmCode,
    estimate_adaptive,
    estimate_fixed,
    master_stream,
    median_boost,
    ratio_estimate,
    sample_size_bound,
)


def exact_partition(counts, omega: float, beta: float) -> float:
    return sum(a * math.exp(-beta * abs(w - omega)) for w, a in enumerate(counts) if a)


def test_ratio_is_one_when_all_samples_hit_target():
    # At omega=0 and high beta the chain never leaves the zero codeword.
    code = RmCode(2, 2)
    rs = ratio_estimate(code, 0, 50.0, 50.0 + 0.25, t=10, tau=50, rng=1)
    assert rs.mean == 1.0
    assert np.all(rs.values == 1.0)


def test_ratio_boundary_value_e_inverse(rm31):
    # tau=0 pins every sample at the zero codeword, energy n; with step 1/n
    # each importance weight sits on the interval boundary 1/e.
    n = rm31.n
    rs = ratio_estimate(rm31, n, 0.0, 1.0 / n, t=7, tau=0, rng=2)
    assert rs.mean == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_ratio_requires_increasing_beta(rm31):
    with pytest.raises(ValueError):
        ratio_estimate(rm31, 4, 0.5, 0.5, t=2, tau=10, rng=0)
    with pytest.raises(ValueError):
        ratio_estimate(rm31, 4, 0.0, 0.5, t=0, tau=10, rng=0)


def test_ratio_matches_enumeration(rm31, dist31):
    # Exact expectation of exp(-E/n) under the uniform (beta=0) distribution.
    n = rm31.n
    expected = exact_partition(dist31.counts, 4, 1.0 / n) / dist31.total()
    rs = ratio_estimate(rm31, 4, 0.0, 1.0 / n, t=4000, tau=96, rng=3)
    sigma = float(np.std(rs.values)) / math.sqrt(len(rs.values))
    assert abs(rs.mean - expected) <= 3.5 * sigma


def test_fixed_beta_zero_is_log_code_size(rm31):
    est = estimate_fixed(rm31, 4, beta_star=0.0, t=4, tau=10, rng=4)
    assert est.log2_z == float(rm31.k)
    assert est.ell_used == 0
    assert est.converged


def test_fixed_requires_schedule_multiple(rm31):
    with pytest.raises(ValueError):
        estimate_fixed(rm31, 4, beta_star=0.3, t=2, tau=10, rng=0)


def test_fixed_full_space_binomial_count():
    # RM(2,2) is all of F_2^4, so A(2) = C(4,2) = 6. A single run at these
    # parameters carries ~0.1 bits of sampling noise (t = 64 is far below the
    # Dyer-Frieze size for +/-0.05 in log2), so check the rate of a 3-run
    # median to +/-0.05, the precision the rate tables carry.
    code = RmCode(2, 2)
    rng = master_stream(55)
    runs = [
        estimate_fixed(code, 2, beta_star=64.0, t=64, tau=10_000, rng=rng)
        for _ in range(3)
    ]
    best = median_boost(runs)
    assert abs(best.rate - math.log2(6) / 4) <= 0.05
    assert best.rate == best.log2_z / 4


def test_fixed_rm42_rate_close_to_exact(rm42, dist42):
    est = estimate_fixed(rm42, 8, beta_star=4.0, t=32, tau=3000, rng=6)
    assert abs(est.rate - math.log2(dist42[8]) / 16) <= 0.01


def test_adaptive_terminates_on_settled_estimate():
    # Once the chain sits on the target weight class, successive Y hit 1 and
    # the loop stops well before the schedule cap. t=5 keeps this fast but
    # noisy, so only sanity-check the value itself.
    code = RmCode(2, 2)
    est = estimate_adaptive(code, 2, t=5, tau=500, delta=1e-3, rng=7)
    assert est.converged
    assert est.ell_used < 200
    assert abs(est.log2_z - math.log2(6)) <= 1.0


def test_adaptive_rm42_single_run(rm42, dist42):
    est = estimate_adaptive(rm42, 8, t=10, tau=5000, delta=1e-3, rng=8)
    assert est.converged
    assert abs(est.rate - math.log2(dist42[8]) / 16) <= 0.015


def test_adaptive_unconverged_cap(rm31):
    # omega=0 keeps the early rounds away from zero energy, so the estimate
    # cannot settle to delta=1e-9 within three rounds.
    est = estimate_adaptive(rm31, 0, t=2, tau=30, delta=1e-9, rng=9, ell_max=3)
    assert not est.converged
    assert est.ell_used == 3


def test_adaptive_linear_criterion_small_code(rm31, dist31):
    est = estimate_adaptive(
        rm31, 4, t=8, tau=400, delta=0.5, rng=10, criterion="linear"
    )
    assert est.converged
    # With delta=0.5 in the linear domain the loop stops once consecutive
    # linear estimates differ by < 0.5; the estimate should be near A(4)=14.
    assert abs(est.log2_z - math.log2(dist31[4])) <= 1.0


def test_adaptive_validates_inputs(rm31):
    with pytest.raises(ValueError):
        estimate_adaptive(rm31, 4, delta=0.0, rng=0)
    with pytest.raises(ValueError):
        estimate_adaptive(rm31, 4, delta=0.1, rng=0, criterion="bogus")


def test_log_domain_bound_and_per_round_range(rm31):
    n = rm31.n
    est = estimate_fixed(rm31, 4, beta_star=2.0, t=8, tau=200, rng=11)
    assert est.log2_z <= rm31.k
    for i in range(1, 9):
        rs = ratio_estimate(rm31, 4, (i - 1) / n, i / n, t=8, tau=200, rng=11 + i)
        assert -math.log2(math.e) - 1e-12 <= math.log2(rs.mean) <= 0.0


def test_partition_monotone_to_ground_count(dist31):
    # The exact target is nonincreasing in beta and tends to A(omega).
    zs = [exact_partition(dist31.counts, 4, b / 10) for b in range(0, 120)]
    assert all(a >= b for a, b in zip(zs, zs[1:]))
    assert zs[-1] == pytest.approx(dist31[4], rel=1e-4)


def test_seed_determinism(rm42):
    a = estimate_adaptive(rm42, 8, t=6, tau=500, delta=1e-3, rng=12)
    b = estimate_adaptive(rm42, 8, t=6, tau=500, delta=1e-3, rng=12)
    assert a == b
    c = estimate_fixed(rm42, 8, beta_star=1.0, t=6, tau=500, rng=13, threads=3)
    d = estimate_fixed(rm42, 8, beta_star=1.0, t=6, tau=500, rng=13, threads=1)
    assert c == d


def test_sample_size_bound_examples():
    assert sample_size_bound(1.0, 10) == 1183
    assert sample_size_bound(4 * math.e, 1) == 1
    assert sample_size_bound(0.5, 100) == math.ceil(6400 * math.e**2)
    with pytest.raises(ValueError):
        sample_size_bound(0.0, 5)


def _estimate(log2_z: float, seed: int) -> LogEstimate:
    return LogEstimate(
        m=3, r=1, omega=4, log2_z=log2_z, rate=log2_z / 8, ell_used=4,
        beta_star=0.5, step=0.125, t=2, tau=10, delta=None, seed=seed,
    )


def test_median_boost_rules():
    single = _estimate(5.0, 0)
    assert median_boost([single]) is single
    runs = [_estimate(5.0, 0), _estimate(7.0, 1), _estimate(100.0, 2)]
    assert median_boost(runs).log2_z == 7.0
    same = [_estimate(3.0, i) for i in range(4)]
    assert median_boost(same).log2_z == 3.0
    # Even count takes the lower of the middle two.
    runs4 = [_estimate(v, i) for i, v in enumerate([1.0, 2.0, 3.0, 4.0])]
    assert median_boost(runs4).log2_z == 2.0


def test_median_boost_rejects_mismatched_params():
    a = _estimate(5.0, 0)
    b = dataclasses.replace(_estimate(6.0, 1), tau=99)
    with pytest.raises(ValueError):
        median_boost([a, b])
    with pytest.raises(ValueError):
        median_boost([])


def test_linear_helper_overflow_safe():
    big = dataclasses.replace(_estimate(5.0, 0), log2_z=2000.0)
    assert big.linear() == math.inf
    small = dataclasses.replace(_estimate(5.0, 0), log2_z=3.0)
    assert small.linear() == pytest.approx(8.0, rel=1e-12)


def test_unbiased_at_small_scale(rm31, dist31):
    # Mean of linear-domain estimates approaches the exact Z_{beta*}.
    beta_star = 2.0
    z_exact = exact_partition(dist31.counts, 4, beta_star)
    rng = master_stream(99)
    vals = []
    for _ in range(60):
        est = estimate_fixed(rm31, 4, beta_star=beta_star, t=8, tau=300, rng=rng)
        vals.append(est.linear())
    arr = np.asarray(vals)
    se = float(arr.std(ddof=1)) / math.sqrt(len(arr))
    assert abs(float(arr.mean()) - z_exact) <= 3.0 * se


def test_warm_start_mode(rm42, dist42):
    exact_rate = math.log2(dist42[8]) / 16
    a = estimate_adaptive(
        rm42, 8, t=8, tau=1500, delta=1e-3, rng=20, warm_start=True
    )
    b = estimate_adaptive(
        rm42, 8, t=8, tau=1500, delta=1e-3, rng=20, warm_start=True
    )
    assert a == b  # warm-start path is deterministic too
    assert a.converged
    # Correlated rounds settle earlier than fresh chains would, which is the
    # documented accuracy trade of warm starts; allow the looser band.
    assert abs(a.rate - exact_rate) <= 0.04
    fixed = estimate_fixed(
        rm42, 8, beta_star=2.0, t=8, tau=1500, rng=21, warm_start=True
    )
    assert fixed.log2_z <= rm42.k
