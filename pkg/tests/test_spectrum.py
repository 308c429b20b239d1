from __future__ import annotations

import json

import pytest

from rmweight import (
    BitVec,
    RmCode,
    candidate_weights,
    child_stream,
    estimate_spectrum,
    weight_check,
)
from rmweight.spectrum import VERDICT_NO_WITNESS, VERDICT_YES


def test_candidates_rm10_3():
    cs = candidate_weights(10, 3)
    assert cs.weights == tuple(range(320, 513, 8))


def test_candidates_rm10_4():
    cs = candidate_weights(10, 4)
    assert cs.weights[0] == 160 and cs.weights[-1] == 512
    assert all(w % 4 == 0 for w in cs.weights)
    for w in (164, 216, 512):
        assert w in cs.weights


def test_candidates_rm4_2_self_dual():
    # 2.5 d = 10 exceeds n/2 = 8: the default range is empty.
    assert candidate_weights(4, 2, self_dual_filter=True).weights == ()
    full = candidate_weights(4, 2, self_dual_filter=True, full_range=True)
    assert full.weights == (4, 8)


def test_candidates_divisibility_invariant():
    for m, r in [(6, 3), (8, 2), (9, 4), (10, 3)]:
        div = 1 << (-(-m // r) - 1)
        for w in candidate_weights(m, r, full_range=True).weights:
            assert w % div == 0


def test_candidates_validation():
    with pytest.raises(ValueError):
        candidate_weights(4, 0)
    with pytest.raises(ValueError):
        candidate_weights(4, 4)


def test_weight_check_zero_is_immediate(rm31):
    v = weight_check(rm31, 0, rng=0)
    assert v.found and v.trials_used == 0
    assert v.witness == BitVec(8, 0)
    assert v.message_support == ()


def test_weight_check_odd_weight_no_witness(rm31):
    # RM(3,1) has spectrum {0, 4, 8}; weight 3 cannot be witnessed.
    v = weight_check(rm31, 3, beta_star=50.0, tau=1500, trials=12, rng=1)
    assert v.verdict == VERDICT_NO_WITNESS
    assert v.witness is None and v.message_support is None
    assert v.trials_used == 12


def test_weight_check_finds_min_weight(rm31):
    v = weight_check(rm31, 4, beta_star=50.0, tau=1500, trials=12, rng=2)
    assert v.verdict == VERDICT_YES
    assert v.witness.weight == 4
    assert rm31.contains(v.witness)


def test_weight_check_bounds(rm31):
    with pytest.raises(ValueError):
        weight_check(rm31, 9, rng=0)


def test_witness_support_round_trips(rm42):
    v = weight_check(rm42, 6, beta_star=50.0, tau=2000, trials=8, rng=3)
    assert v.found
    u = BitVec.from_indices(rm42.k, [i - 1 for i in v.message_support])
    assert rm42.encode(u) == v.witness


def test_spectrum_rm31_full_range(rm31):
    cs = candidate_weights(3, 1, full_range=True)
    report = estimate_spectrum(
        rm31, cs, beta_star=50.0, tau=1500, trials=8, rng=4, full_range=True
    )
    assert report.yes_weights == (4,)
    assert report.spectrum_estimate() == (0, 4, 8)


def test_spectrum_empty_candidates(rm42):
    cs = candidate_weights(4, 2, self_dual_filter=True)
    report = estimate_spectrum(rm42, cs, rng=5)
    assert report.verdicts == ()
    assert report.spectrum_estimate() == (0, 16)


def test_spectrum_threaded_matches_serial(rm31):
    cs = candidate_weights(3, 1, full_range=True)
    a = estimate_spectrum(rm31, cs, beta_star=50.0, tau=800, trials=4, rng=6)
    b = estimate_spectrum(
        rm31, cs, beta_star=50.0, tau=800, trials=4, rng=6, threads=4
    )
    assert a == b


def test_report_json_schema(rm31):
    cs = candidate_weights(3, 1, full_range=True)
    report = estimate_spectrum(rm31, cs, beta_star=50.0, tau=800, trials=4, rng=7)
    body = json.loads(report.to_json())
    assert body["m"] == 3 and body["r"] == 1
    for check in body["checks"]:
        assert set(check) == {
            "omega", "verdict", "witness", "witness_weight",
            "message_support", "trials_used",
        }
        if check["verdict"] == VERDICT_YES:
            assert check["witness_weight"] == check["omega"]
            w = BitVec.from_hex(check["witness"], 8)
            assert w.weight == check["omega"]


def test_paper_scale_witnesses_rm10_3():
    # Witness search mirrors the published spectrum run at selected weights.
    code = RmCode(10, 3)
    for omega in (328, 480, 512):
        v = weight_check(
            code, omega, beta_star=50.0, tau=20_000, trials=16,
            rng=child_stream(8, omega),
        )
        assert v.found, f"no witness at omega={omega}"
        assert v.witness.weight == omega
        assert code.contains(v.witness)
        u = BitVec.from_indices(code.k, [i - 1 for i in v.message_support])
        assert code.encode(u) == v.witness


def test_full_candidate_sweep_rm10_3():
    # Every candidate weight for RM(10,3) has a positive enumerator: the
    # witness search certifies all 25 of them.
    code = RmCode(10, 3)
    cs = candidate_weights(10, 3)
    report = estimate_spectrum(
        code, cs, beta_star=50.0, tau=20_000, trials=16, rng=child_stream(88)
    )
    assert report.yes_weights == cs.weights
