"""Reed-Muller weight enumerator toolkit.

Estimates weight enumerators A(omega) of RM codes by Gibbs sampling with a
telescoping partition-function product, searches weight spectra by annealed
witness hunting, and cross-validates everything against exact oracles
(brute force, MacWilliams transform, Plotkin coset recursion).
"""

__version__ = "0.1.0"

from .estimator import (
    LogEstimate,
    RatioSample,
    estimate_adaptive,
    estimate_fixed,
    median_boost,
    ratio_estimate,
    sample_size_bound,
)
from .exact import (
    CosetEnumerators,
    ResourceLimitError,
    WeightDistribution,
    brute_force_distribution,
    coset_recursion_distribution,
    coset_recursion_step,
    enumerate_cosets,
    macwilliams_transform,
    plotkin_square,
)
from .gf2 import BitVec, GF2Matrix, hamming_weight, invert, lex_index, rank, sample_full_rank, xor_add
from .rm import InfoSet, RmCode, generator_matrix
from .rng import RngStream, as_stream, child_stream, master_stream
from .sampler import ChainState, WeightEnergy, energy, metropolis_step, sample
from .spectrum import (
    CandidateSet,
    SpectrumReport,
    WeightVerdict,
    candidate_weights,
    estimate_spectrum,
    weight_check,
)

__all__ = [
    "BitVec",
    "GF2Matrix",
    "RmCode",
    "InfoSet",
    "RngStream",
    "WeightEnergy",
    "ChainState",
    "LogEstimate",
    "RatioSample",
    "WeightDistribution",
    "CosetEnumerators",
    "CandidateSet",
    "SpectrumReport",
    "WeightVerdict",
    "ResourceLimitError",
    "hamming_weight",
    "xor_add",
    "rank",
    "invert",
    "sample_full_rank",
    "lex_index",
    "generator_matrix",
    "energy",
    "metropolis_step",
    "sample",
    "ratio_estimate",
    "estimate_fixed",
    "estimate_adaptive",
    "sample_size_bound",
    "median_boost",
    "candidate_weights",
    "weight_check",
    "estimate_spectrum",
    "brute_force_distribution",
    "macwilliams_transform",
    "plotkin_square",
    "enumerate_cosets",
    "coset_recursion_step",
    "coset_recursion_distribution",
    "master_stream",
    "child_stream",
    "as_stream",
]
