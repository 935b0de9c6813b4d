"""Frequency sequence a_n and its relation to the prime-counting function."""

from .constants import GAMMA, REFERENCE
from .core_seq import (
    ExactFrequency,
    ExactModeLimit,
    FloatSeqState,
    b_value,
    frequency_bracket,
    frequency_exact,
    frequency_fixed,
    harmonic,
    iterate_float,
    reciprocal_step_check,
    reciprocal_sum,
    s_series,
)
from .prime_count import (
    BoundPair,
    PiCheckpoint,
    li,
    log_shift_sum,
    panaitopol_bounds,
    pi_checkpoints,
    pi_trial,
    q_sum,
    rosser_schoenfeld_bounds,
)
from .report import AuditReport, ClaimRecord, Status
from .sieve_construct import (
    GoodInteger,
    SieveTrace,
    cardinality_pipeline,
    explicit_sieve,
    good_integer,
    verify_frequency_equivalence,
)

__version__ = "0.1.0"
