"""Statistical mechanics of prefix-free program ensembles.

Simulates two-tape Chaitin machines, encodes and decodes the counting
machine's self-delimiting programs, and evaluates the partition function
Z(beta) = sum_p exp(-beta * l(p)) near the critical point beta_c = ln 2.
"""

from .bits import BitString, concat, is_prefix
from .codec import (
    CountingProgram,
    InsufficientBits,
    decode,
    encode,
    enumerate_programs,
    iterations_k,
    lambda_ladder,
    program_length,
)
from .machine import Halted, InvalidWrite, MachineSpec, ProgramExhausted, StepLimitExceeded, run, step
from .machines import counting_machine_spec, expander_machine
from .numerics import LAMBDA, PHI, Epsilon, LogScalar, iterated_lg, slog2, slog2_of_inverse
from .partition import (
    PartitionResult,
    a_factor,
    geometric_block,
    k_of_eps,
    partition_asymptotic,
    partition_exact,
    rare_case_value,
    zk_exact,
)
from .prefix_codes import (
    CountingCode,
    FibonacciCode,
    GeneralizedFibCode,
    GenerationStats,
    decay_estimate,
    generation_stats,
    kraft_partial_sum,
    power_law_singularity_check,
)
from .thermo import (
    ThermoConfig,
    ThermoPoint,
    avg_length,
    avg_length_asymptotic,
    free_energy,
    heat_capacity,
    thermo_point,
)

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "concat",
    "is_prefix",
    "CountingProgram",
    "InsufficientBits",
    "decode",
    "encode",
    "enumerate_programs",
    "iterations_k",
    "lambda_ladder",
    "program_length",
    "LAMBDA",
    "PHI",
    "Epsilon",
    "LogScalar",
    "iterated_lg",
    "slog2",
    "slog2_of_inverse",
    "PartitionResult",
    "a_factor",
    "geometric_block",
    "k_of_eps",
    "partition_asymptotic",
    "partition_exact",
    "rare_case_value",
    "zk_exact",
    "Halted",
    "InvalidWrite",
    "MachineSpec",
    "ProgramExhausted",
    "StepLimitExceeded",
    "run",
    "step",
    "counting_machine_spec",
    "expander_machine",
    "CountingCode",
    "FibonacciCode",
    "GeneralizedFibCode",
    "GenerationStats",
    "decay_estimate",
    "generation_stats",
    "kraft_partial_sum",
    "power_law_singularity_check",
    "ThermoConfig",
    "ThermoPoint",
    "avg_length",
    "avg_length_asymptotic",
    "free_energy",
    "heat_capacity",
    "thermo_point",
]
