"""Closed-form fractional-part integrals, constant extraction, and prime-gap statistics."""

__version__ = "0.1.0"

from .config import Config, DEFAULT_CONFIG
from .errors import (
    BudgetError,
    CacheFormatError,
    DomainError,
    FracgapError,
    QuadratureError,
)
from .fracint import (
    FloorDecomposition,
    decompose,
    integrate_floor,
    integrate_frac_exact,
    integrate_frac_quadrature,
)
from .funcspec import (
    FuncSpec,
    ReciprocalSpec,
    builtin_catalog,
    lookup,
    make_reciprocal,
    reciprocal_power,
    scaled_reciprocal,
    validate,
)
from .gapseq import (
    AssumptionPartialSums,
    ComparisonTerms,
    ResidualSample,
    SandwichValues,
    SeqSource,
    StatSweep,
    ThetaScan,
    assumption_audit,
    assumption_partial_sums,
    comparison_sweep,
    comparison_terms,
    compute_rst,
    default_rst_grid,
    integral_of_reciprocal,
    interval_reciprocal_integrals,
    primes_sequence,
    residual,
    residual_sweep,
    sequence_from_list,
    squares_sequence,
    stat_sweep,
    theta_interval_scan,
)
from .primes import (
    GapRecord,
    PrimeTable,
    gap_arrays,
    gaps,
    is_prime_trial,
    read_cache,
    sieve,
    simple_sieve,
    write_cache,
)
from .specialfn import (
    ConstantEstimate,
    gamma_via_fracint,
    harmonic,
    li_offset,
    zeta_series,
    zeta_via_fracint,
)

__all__ = [name for name in dir() if not name.startswith("_")]
