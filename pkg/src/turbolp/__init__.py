"""Turbo analog product codes with two-step l1 (linear programming) decoding."""

from .codec import (
    DecodeReport,
    ErrorMatrix,
    ProductCodeword,
    SyndromePair,
    burst_corrupt,
    burst_length,
    compute_syndromes,
    decode_inner,
    decode_outer,
    encode,
    project_inner,
    random_errors,
    recover_message,
    turbo_decode,
)
from .exceptions import DomainError, InvalidArgumentError, ResourceError, TurboLPError
from .l1lp import L1Problem, L1Solution, l0_min_eq, l1_min_eq, p0_p1_equivalence_check
from .matgen import (
    CodeSpec,
    Generator,
    ParityCheck,
    build_generator,
    build_hadamard,
    build_parity_check,
    coherence,
    cospark_bruteforce,
    spark_bruteforce,
)

__version__ = "0.1.0"
