"""Best-worst choice systems, their polynomial sign test, and witnesses.

The package decides whether a finite system of best-worst choice
probabilities can arise from a probability distribution over rankings,
and when it can, constructs such a distribution explicitly.  All
arithmetic is exact rational arithmetic end to end.
"""

from .core import (
    BWSystem,
    ChoiceCountDataset,
    IngestResult,
    ValidationReport,
    as_mask,
    choice_subsets,
    exact_fraction,
    from_counts,
    full_mask,
    members,
    new_system,
    ordered_pairs,
    pair_complement_check,
    uniform_system,
    validate,
)
from .errors import (
    BwrumError,
    ConstructionInconsistent,
    DimensionTooLarge,
    DuplicateCell,
    EmptySubsetNoSmoothing,
    InconsistentDimensions,
    InputFileError,
    InvalidContext,
    MalformedDescriptor,
    MalformedPattern,
    MissingCell,
    NormalizationViolation,
    NotRepresentable,
    OutOfRange,
    OutOfRangeProbability,
    UnknownFixture,
    UsageError,
    WitnessConstructionFailed,
)
from .fixtures import emit_fixture
from .lp import LP_MAX_N, LpResult, lp_feasibility_oracle
from .measure import (
    DEFAULT_READING,
    READINGS,
    AdjudicationReport,
    Construction,
    RankingDistribution,
    VerificationReport,
    adjudicate_readings,
    build_construction,
    build_distribution,
    bw_from_distribution,
    f_prime,
    lemma_b_check,
    make_distribution,
    system_from_distribution,
    verify_reconstruction,
)
from .polynomials import (
    NOT_REPRESENTABLE,
    REPRESENTABLE,
    PolynomialTable,
    RepresentabilityReport,
    all_polynomials,
    bm_polynomial,
    check_representable,
    falmagne_inequality,
    moebius_reconstruct,
)
from .rankings import (
    PatternDescriptor,
    all_rankings,
    count_pattern,
    enumerate_pattern,
    insertion_identity_check,
    matches,
    nested_sum_identity,
    pattern,
    s_union,
    split_partition,
)
from .simulate import (
    RankingSampler,
    SeededRng,
    random_distribution,
    ranking_from_utilities,
    sample_best_worst,
    sample_ranking,
    simulate_dataset,
    utilities_from_ranking,
)

__version__ = "0.1.0"

__all__ = [
    "AdjudicationReport",
    "BWSystem",
    "BwrumError",
    "ChoiceCountDataset",
    "Construction",
    "ConstructionInconsistent",
    "DEFAULT_READING",
    "DimensionTooLarge",
    "DuplicateCell",
    "EmptySubsetNoSmoothing",
    "InconsistentDimensions",
    "IngestResult",
    "InputFileError",
    "InvalidContext",
    "LP_MAX_N",
    "LpResult",
    "MalformedDescriptor",
    "MalformedPattern",
    "MissingCell",
    "NOT_REPRESENTABLE",
    "NormalizationViolation",
    "NotRepresentable",
    "OutOfRange",
    "OutOfRangeProbability",
    "PatternDescriptor",
    "PolynomialTable",
    "READINGS",
    "REPRESENTABLE",
    "RankingDistribution",
    "RankingSampler",
    "RepresentabilityReport",
    "SeededRng",
    "UnknownFixture",
    "UsageError",
    "ValidationReport",
    "VerificationReport",
    "WitnessConstructionFailed",
    "adjudicate_readings",
    "all_polynomials",
    "all_rankings",
    "as_mask",
    "bm_polynomial",
    "build_construction",
    "build_distribution",
    "bw_from_distribution",
    "check_representable",
    "choice_subsets",
    "count_pattern",
    "emit_fixture",
    "enumerate_pattern",
    "exact_fraction",
    "f_prime",
    "falmagne_inequality",
    "from_counts",
    "full_mask",
    "insertion_identity_check",
    "lemma_b_check",
    "lp_feasibility_oracle",
    "make_distribution",
    "matches",
    "members",
    "moebius_reconstruct",
    "nested_sum_identity",
    "new_system",
    "ordered_pairs",
    "pair_complement_check",
    "pattern",
    "random_distribution",
    "ranking_from_utilities",
    "s_union",
    "sample_best_worst",
    "sample_ranking",
    "simulate_dataset",
    "split_partition",
    "system_from_distribution",
    "uniform_system",
    "utilities_from_ranking",
    "validate",
    "verify_reconstruction",
]
