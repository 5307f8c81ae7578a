"""Hsiao SEC-DED check matrices built from recursively balanced {0,1} matrices."""

from .balanced import (
    STRATEGIES,
    BalanceReport,
    DeltaSpec,
    InfeasibleSpec,
    OpCounter,
    SplitPoint,
    ending_state,
    generate_delta,
    generate_delta_iterative,
    l_condition,
    merge_flip,
    merge_shift,
    split_point,
    verify_balanced,
)
from .codec import DecodeOutcome, Outcome, decode, encode, syndrome
from .planner import BlockPlan, CheckMatrix, build_check_matrix, compute_check_bits, plan_blocks

__all__ = [
    "STRATEGIES",
    "BalanceReport",
    "BlockPlan",
    "CheckMatrix",
    "DecodeOutcome",
    "DeltaSpec",
    "InfeasibleSpec",
    "OpCounter",
    "Outcome",
    "SplitPoint",
    "build_check_matrix",
    "compute_check_bits",
    "decode",
    "encode",
    "ending_state",
    "generate_delta",
    "generate_delta_iterative",
    "l_condition",
    "merge_flip",
    "merge_shift",
    "plan_blocks",
    "split_point",
    "syndrome",
    "verify_balanced",
]
