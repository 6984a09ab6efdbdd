"""cskit: compressibility measurement and sparse recovery toolkit.

A signal's compressibility is measured as the transition point of its
non-increasing rearrangement under a bounded seminorm metric; the split into
an optimum index set and an absorbing tail then drives recovery, either by
orthogonal matching pursuit or in the eigenbasis of an empirical covariance.
"""

from .estimators import KarhunenLoeveBasis, MatchingPursuitRecovery, OptimumDimension
from .frechet import (
    KotheSequence,
    SeminormFamily,
    frechet_increments,
    frechet_metric,
    kothe_from_measurement,
    truncation_family,
    truncation_seminorm,
)
from .measure import (
    AbsorbingNullSpace,
    Decomposition,
    DiscreteMeasure,
    absorbing_null_space,
    cesaro_banach_limit,
    inner_regularity,
    optimum_borel_set,
    transition_point,
)
from .operators import Dictionary, Measurement
from .rearrangement import RearrangedSequence, lp_norm, rearrange, weak_l1_quasinorm
from .recovery import (
    RecoveryResult,
    cskle_basis,
    cskle_recover,
    forward,
    omp_recover,
    reflexive_check,
)
from .signals import (
    ChirpComponent,
    ensemble_chirp,
    gen_chirp,
    gen_powerlaw,
    gen_sparse,
    make_dictionary,
)

__version__ = "0.1.0"

__all__ = [
    "AbsorbingNullSpace",
    "ChirpComponent",
    "Decomposition",
    "Dictionary",
    "DiscreteMeasure",
    "KarhunenLoeveBasis",
    "KotheSequence",
    "MatchingPursuitRecovery",
    "Measurement",
    "OptimumDimension",
    "RearrangedSequence",
    "RecoveryResult",
    "SeminormFamily",
    "absorbing_null_space",
    "cesaro_banach_limit",
    "cskle_basis",
    "cskle_recover",
    "ensemble_chirp",
    "forward",
    "frechet_increments",
    "frechet_metric",
    "gen_chirp",
    "gen_powerlaw",
    "gen_sparse",
    "inner_regularity",
    "kothe_from_measurement",
    "lp_norm",
    "make_dictionary",
    "omp_recover",
    "optimum_borel_set",
    "rearrange",
    "reflexive_check",
    "transition_point",
    "truncation_family",
    "truncation_seminorm",
    "weak_l1_quasinorm",
]
