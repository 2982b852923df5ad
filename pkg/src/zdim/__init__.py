"""Integer-set combinatorics: counting dimension, arithmetic sums,
regularity machinery, and collision experiments for E + floor(lam*F).
"""

from .arithmetic import (
    AsymptoticReport,
    SizeGuardError,
    asymptotic_check,
    floor_scale,
    star,
    sum_scaled,
    sumset,
)
from .generators import (
    IPParameters,
    NoncompatibleParams,
    PerronReport,
    TransitionMatrix,
    cantor_set,
    integer_resonant_set,
    ip_set,
    noncompatible_pair,
    perron,
    polynomial_set,
    power_set,
    random_walk_zeros,
    resonance_sets,
    zero_density_full_dim,
)
from .intset import (
    IntegerSet,
    Interval,
    ZsetFormatError,
    read_zset,
    write_zset,
)
from .marstrand import (
    CollisionReport,
    DeltaReport,
    LambdaWindow,
    MultiSweepReport,
    PairWindow,
    SweepReport,
    collision_stats,
    delta_exact,
    multi_sweep,
    pair_window,
    sweep,
)
from .measures import (
    DegenerateSetError,
    DimensionEstimate,
    MeasureEstimate,
    ScanSchedule,
    alpha_measure_estimate,
    density_estimate,
    dimension_estimate,
    monotonicity_check,
)
from .regularity import (
    CompatibilityReport,
    ExtractedSubset,
    RegularityReport,
    SupRatio,
    ThinningTrace,
    UniversalityReport,
    compatibility_check,
    dyadic_thin,
    extract_regular_subset,
    regularity_diagnostic,
    sup_ratio,
    universality_check,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport",
    "CollisionReport",
    "CompatibilityReport",
    "DegenerateSetError",
    "DeltaReport",
    "DimensionEstimate",
    "ExtractedSubset",
    "IPParameters",
    "IntegerSet",
    "Interval",
    "LambdaWindow",
    "MeasureEstimate",
    "MultiSweepReport",
    "NoncompatibleParams",
    "PairWindow",
    "PerronReport",
    "RegularityReport",
    "ScanSchedule",
    "SizeGuardError",
    "SupRatio",
    "SweepReport",
    "ThinningTrace",
    "TransitionMatrix",
    "UniversalityReport",
    "ZsetFormatError",
    "alpha_measure_estimate",
    "asymptotic_check",
    "cantor_set",
    "collision_stats",
    "compatibility_check",
    "delta_exact",
    "density_estimate",
    "dimension_estimate",
    "dyadic_thin",
    "extract_regular_subset",
    "floor_scale",
    "integer_resonant_set",
    "ip_set",
    "monotonicity_check",
    "multi_sweep",
    "noncompatible_pair",
    "pair_window",
    "perron",
    "polynomial_set",
    "power_set",
    "random_walk_zeros",
    "read_zset",
    "regularity_diagnostic",
    "resonance_sets",
    "star",
    "sum_scaled",
    "sumset",
    "sup_ratio",
    "sweep",
    "universality_check",
    "write_zset",
    "zero_density_full_dim",
]
