"""Finite-stage calculus on Toeplitz skeleton towers."""

from .codes import (
    AlphabetMismatch,
    BlockCode,
    CodeError,
    PeriodMismatch,
    PositionwisePermutation,
    apply_block_code,
    apply_positionwise_permutation,
    parse_block_code,
    serialize_block_code,
)
from .conjugacy import (
    ChiStage,
    ConjugateCertified,
    Consistent,
    Contradicted,
    DpKind,
    DpResult,
    EfinResult,
    GammaResult,
    IncompatiblePeriods,
    InvariantComparison,
    MissingScaleDeclaration,
    NotConjugateCertified,
    Part,
    RefutedUpTo,
    StageReport,
    StarStatus,
    StarredPart,
    Undetermined,
    Unknown,
    Verdict,
    chi_stage,
    conjugacy_verdict,
    dp_equivalent,
    efin_equal,
    gamma_map,
    invariant_compare,
    parts_star,
    phase_separated,
    with_common_depth,
)
from .construction import reference_example
from .core import (
    Alphabet,
    AlphabetError,
    ConsistencyError,
    DivisibilityError,
    ParseError,
    PartialCyclicWord,
    ScaleError,
    SkeletonTower,
    TowerError,
    rotate_tower,
    symbol_at,
    validate_tower,
)
from .odometer import (
    EmptyScale,
    OdometerError,
    OdometerPoint,
    SupernaturalNumber,
    divides,
    odometer_add,
    odometer_coordinates,
    odometers_conjugate,
    supernatural_equal,
    supernatural_lcm,
)
from .oracle import (
    ExactAnalysis,
    PeriodicWord,
    SearchWitness,
    exact_conjugacy_search,
    exact_periodic_analysis,
)
from .skeleton import (
    BlockSpan,
    EssentialOutcome,
    EssentialStatus,
    FilledBlocks,
    GrowthProfile,
    GrowthRow,
    NonDivisorError,
    ResidueStatusSet,
    ScaleTruncation,
    Status,
    essential_period_status,
    filled_blocks,
    growth_profile,
    natural_factorization,
    period_status,
    periodic_part,
    scale_truncation,
    skeleton_word,
)
from .towerfile import parse_tower_text, serialize_tower

__version__ = "0.1.0"
