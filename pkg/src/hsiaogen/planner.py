"""Check-bit sizing, odd-weight block plans and Hsiao check-matrix assembly."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .balanced import DeltaSpec, Strategy, generate_delta


def compute_check_bits(k: int) -> int:
    """Smallest R with 2**(R-1) >= k + R."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    R = 1
    while (1 << (R - 1)) < k + R:
        R += 1
    return R


@dataclass(frozen=True)
class BlockPlan:
    k: int
    R: int
    n: int
    I: int
    m: int
    blocks: tuple[DeltaSpec, ...]

    @property
    def total_ones(self) -> int:
        return sum(b.m * b.J for b in self.blocks)


def plan_blocks(k: int) -> BlockPlan:
    R = compute_check_bits(k)
    n = k + R
    blocks = []
    used = 0
    I = 0
    while True:
        J = 2 * I + 1
        full = math.comb(R, J)
        if used + full >= n:
            m = n - used
            if m:
                blocks.append(DeltaSpec(R, J, m))
            break
        blocks.append(DeltaSpec(R, J, full))
        used += full
        I += 1
    return BlockPlan(k=k, R=R, n=n, I=I, m=m, blocks=tuple(blocks))


@dataclass(frozen=True, eq=False)
class CheckMatrix:
    """An R x n Hsiao check matrix with its systematic bit layout."""

    H: np.ndarray
    parity_positions: tuple[int, ...]
    data_positions: tuple[int, ...]
    plan: BlockPlan | None = field(default=None, repr=False)

    @property
    def R(self) -> int:
        return self.H.shape[0]

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def k(self) -> int:
        return len(self.data_positions)

    @cached_property
    def column_values(self) -> np.ndarray:
        """Each column packed into an integer, row 0 as the most significant bit."""
        weights = 1 << np.arange(self.R - 1, -1, -1, dtype=np.int64)
        return weights @ self.H.astype(np.int64)

    @cached_property
    def syndrome_table(self) -> dict[int, int]:
        return {int(v): i for i, v in enumerate(self.column_values)}

    @classmethod
    def from_matrix(cls, H) -> "CheckMatrix":
        """Recover the systematic layout of an arbitrary odd-weight check matrix.

        Parity bit i sits at the unit column with its one in row i.
        """
        H = np.asarray(H, dtype=np.uint8)
        if H.ndim != 2 or H.shape[0] == 0:
            raise ValueError("check matrix must be a non-empty 2-D array")
        R = H.shape[0]
        weights = H.sum(axis=0)
        parity = []
        for row in range(R):
            hits = np.flatnonzero((weights == 1) & (H[row] == 1))
            if hits.size == 0:
                raise ValueError(f"no unit column for row {row}; matrix is not systematic")
            parity.append(int(hits[0]))
        taken = set(parity)
        data = tuple(i for i in range(H.shape[1]) if i not in taken)
        return cls(H=H, parity_positions=tuple(parity), data_positions=data)


def build_check_matrix(k: int, strategy: Strategy = "shift") -> CheckMatrix:
    plan = plan_blocks(k)
    parts = [generate_delta(b, strategy) for b in plan.blocks]
    H = np.hstack(parts)
    # the weight-1 block is Δ(R,1,R), an identity
    parity = tuple(range(plan.R))
    data = tuple(range(plan.R, plan.n))
    return CheckMatrix(H=H, parity_positions=parity, data_positions=data, plan=plan)


def hsiao_conditions(H) -> dict[str, bool]:
    """Odd column weights, distinct columns and row spread <= 1."""
    H = np.asarray(H)
    cols = H.sum(axis=0)
    rows = H.sum(axis=1)
    return {
        "odd_columns": bool(np.all(cols % 2 == 1)),
        "columns_distinct": H.shape[1] == 0 or np.unique(H, axis=1).shape[1] == H.shape[1],
        "rows_balanced": rows.size == 0 or int(rows.max() - rows.min()) <= 1,
    }
