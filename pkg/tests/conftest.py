from __future__ import annotations

import pytest
from scipy.stats import chi2

from rmweight import RmCode, WeightDistribution, brute_force_distribution, macwilliams_transform


@pytest.fixture(scope="session")
def brute_cache():
    """Session-wide cache of brute-forced weight distributions."""
    cache: dict[tuple[int, int], WeightDistribution] = {}

    def get(m: int, r: int) -> WeightDistribution:
        if (m, r) not in cache:
            cache[(m, r)] = brute_force_distribution(RmCode(m, r), k_max=32)
        return cache[(m, r)]

    return get


@pytest.fixture(scope="session")
def dist31(brute_cache):
    return brute_cache(3, 1)


@pytest.fixture(scope="session")
def dist42(brute_cache):
    return brute_cache(4, 2)


@pytest.fixture(scope="session")
def dist52(brute_cache):
    return brute_cache(5, 2)


@pytest.fixture(scope="session")
def dist62(brute_cache):
    return brute_cache(6, 2)


@pytest.fixture(scope="session")
def dist63(dist62):
    # RM(6,3) is the dual of RM(6,2); 2^42 codewords is out of brute reach.
    return macwilliams_transform(dist62, 22)


@pytest.fixture(scope="session")
def rm31():
    return RmCode(3, 1)


@pytest.fixture(scope="session")
def rm42():
    return RmCode(4, 2)


@pytest.fixture(scope="session")
def rm63():
    return RmCode(6, 3)


def chi_square_uniform_ok(observed, alpha=0.01) -> tuple[bool, float, float]:
    """Pearson test of uniformity over the given cell counts."""
    total = sum(observed)
    cells = len(observed)
    expected = total / cells
    stat = sum((o - expected) ** 2 for o in observed) / expected
    crit = float(chi2.isf(alpha, cells - 1))
    return stat <= crit, stat, crit


def enumerate_codewords(code: RmCode) -> list[int]:
    """All codeword bitsets by exhaustive message encoding (independent of
    the Gray-code kernel)."""
    from rmweight import BitVec

    words = []
    for msg in range(1 << code.k):
        words.append(code.encode(BitVec(code.k, msg)).bits)
    return words
