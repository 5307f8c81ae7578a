"""Recursively balanced {0,1} matrices.

``Δ(R, J, m)`` is an ``R x m`` matrix whose ``m`` columns are pairwise
distinct, each of weight ``J``, and whose row weights differ by at most one.
Every matrix produced here also keeps its heavier rows on top.

Matrices are plain ``numpy.uint8`` arrays of shape ``(rows, cols)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

Strategy = Literal["flip", "shift"]
STRATEGIES: tuple[str, ...] = ("flip", "shift")

BitMatrix = np.ndarray


class InfeasibleSpec(ValueError):
    """Raised when a spec cannot be realised (the L-condition fails)."""


@dataclass(frozen=True)
class DeltaSpec:
    R: int
    J: int
    m: int

    def __post_init__(self) -> None:
        for name in ("R", "J", "m"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise TypeError(f"{name} must be an integer")
        if self.R < 1:
            raise ValueError(f"R must be positive, got {self.R}")

    def __iter__(self):
        return iter((self.R, self.J, self.m))

    def __str__(self) -> str:
        return f"({self.R},{self.J},{self.m})"


@dataclass(frozen=True)
class SplitPoint:
    m1: int
    r1: int
    r2: int
    r_prime: int


@dataclass(frozen=True)
class BalanceReport:
    column_weight_ok: bool
    columns_distinct: bool
    row_weights: tuple[int, ...]
    max_row_delta: int
    heavy_rows_on_top: bool

    @property
    def balanced(self) -> bool:
        return self.column_weight_ok and self.columns_distinct and self.max_row_delta <= 1

    @property
    def heavy_rows(self) -> int:
        """Number of rows at the maximum weight, 0 when all rows are equal."""
        if self.max_row_delta == 0:
            return 0
        top = max(self.row_weights)
        return sum(1 for w in self.row_weights if w == top)


@dataclass
class OpCounter:
    """Work done by one generation run.

    ``element_writes`` counts bit cells written (ending-state fills, top rows
    and every cell of a relocated row). ``row_moves`` counts rows that end up
    at a different index after a flip, rotation or sort.
    """

    element_writes: int = 0
    row_moves: int = 0
    recursion_depth: int = 0

    def reset(self) -> None:
        self.element_writes = 0
        self.row_moves = 0
        self.recursion_depth = 0


def _as_spec(spec) -> DeltaSpec:
    return spec if isinstance(spec, DeltaSpec) else DeltaSpec(*spec)


def l_condition(spec: DeltaSpec) -> bool:
    R, J, m = _as_spec(spec)
    return 0 <= J <= R and 0 <= m <= math.comb(R, J)


def l_condition_violation(spec: DeltaSpec) -> str | None:
    """Human-readable reason the L-condition fails, or None if it holds."""
    R, J, m = _as_spec(spec)
    if not 0 <= J <= R:
        return f"J={J} outside 0..R={R}"
    if m < 0:
        return f"m={m} is negative"
    limit = math.comb(R, J)
    if m > limit:
        return f"m={m} > C({R},{J})={limit}"
    return None


def _require_feasible(spec: DeltaSpec) -> None:
    reason = l_condition_violation(spec)
    if reason is not None:
        raise InfeasibleSpec(f"Δ{spec} violates the L-condition: {reason}")


def is_ending_state(spec: DeltaSpec) -> bool:
    R, J, m = _as_spec(spec)
    return m <= 1 or J <= 1 or J >= R - 1


def split_point(spec: DeltaSpec) -> SplitPoint:
    """Left-block width and the heavy-row counts of both children."""
    spec = _as_spec(spec)
    R, J, m = spec
    if not l_condition(spec) or not 2 <= J <= R - 2 or m < 2:
        raise ValueError(f"Δ{spec} is not a splittable spec")
    m1 = -(-m * J // R)
    r1 = (J - 1) * m1 % (R - 1)
    r2 = J * (m - m1) % (R - 1)
    return SplitPoint(m1, r1, r2, max(0, r1 + r2 - (R - 1)))


def _write_ending_state(buf: np.ndarray, R: int, J: int, m: int) -> bool:
    # buf must arrive zeroed; only the ones are written.
    # Case priority is fixed: m=0, J=0, J=R, m=1, J=1, J=R-1.
    if m == 0 or J == 0:
        pass
    elif J == R:
        buf[:] = 1
    elif m == 1:
        buf[:J] = 1
    elif J == 1:
        for i in range(m):
            buf[i, i] = 1
    elif J == R - 1:
        buf[:] = 1
        base = R - m
        for i in range(m):
            buf[base + i, i] = 0
    else:
        return False
    return True


def ending_state(spec: DeltaSpec) -> BitMatrix | None:
    """Closed-form matrix for a base case, or None when the spec must be split."""
    spec = _as_spec(spec)
    _require_feasible(spec)
    R, J, m = spec
    buf = np.zeros((R, m), dtype=np.uint8)
    return buf if _write_ending_state(buf, R, J, m) else None


def _relocate(
    block: np.ndarray, order: list[int], counter: OpCounter | None, moved: int | None = None
) -> None:
    """Permute rows of ``block`` in place so that new row i is old row order[i]."""
    if moved is None:
        moved = sum(1 for i, o in enumerate(order) if i != o)
    if moved == 0:
        return
    block[:] = block[order]
    if counter is not None:
        counter.row_moves += moved
        counter.element_writes += moved * block.shape[1]


def _flip_merge_inplace(block: np.ndarray, split: int, counter: OpCounter | None) -> None:
    n = block.shape[0]
    if block.shape[1] > split:
        _relocate(block[:, split:], list(range(n - 1, -1, -1)), counter, n - n % 2)
    weights = block.sum(axis=1, dtype=np.int64)
    _relocate(block, np.argsort(-weights, kind="stable").tolist(), counter)


def _shift_merge_inplace(
    block: np.ndarray, split: int, r1: int, r2: int, counter: OpCounter | None
) -> None:
    n = block.shape[0]
    if r2 == 0 or block.shape[1] == split:
        return
    if r1 + r2 <= n:
        if r1 == 0:
            return
        # cyclic rotation: right's heavy rows land on r1 .. r1+r2-1
        order = list(range(n - r1, n)) + list(range(n - r1))
        moved = n
    else:
        # heavy rows r'..r2-1 go to the bottom, overlapping rows stay put
        rp = r1 + r2 - n
        order = list(range(rp)) + list(range(r2, n)) + list(range(rp, r2))
        moved = n - rp
    _relocate(block[:, split:], order, counter, moved)


def _fill(
    buf: np.ndarray,
    R: int,
    J: int,
    m: int,
    strategy: str,
    counter: OpCounter | None,
    depth: int,
) -> None:
    if counter is not None and depth > counter.recursion_depth:
        counter.recursion_depth = depth
    if _write_ending_state(buf, R, J, m):
        if counter is not None:
            counter.element_writes += R * m
        return
    m1 = -(-m * J // R)
    buf[0, :m1] = 1
    if counter is not None:
        counter.element_writes += m
    _fill(buf[1:, :m1], R - 1, J - 1, m1, strategy, counter, depth + 1)
    _fill(buf[1:, m1:], R - 1, J, m - m1, strategy, counter, depth + 1)
    if strategy == "shift":
        r1 = (J - 1) * m1 % (R - 1)
        r2 = J * (m - m1) % (R - 1)
        _shift_merge_inplace(buf[1:], m1, r1, r2, counter)
    else:
        _flip_merge_inplace(buf[1:], m1, counter)


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def generate_delta(
    spec: DeltaSpec, strategy: Strategy = "shift", counter: OpCounter | None = None
) -> BitMatrix:
    """Build Δ(R, J, m) by recursive decomposition.

    Each level writes the top row ``<1>(m1) ⊕ <0>(m - m1)`` and fills the
    rows below with Δ(R-1, J-1, m1) next to Δ(R-1, J, m-m1). The two
    children are then reconciled either by flipping the right child and
    re-sorting rows (``"flip"``) or by a precomputed rotation of the right
    child (``"shift"``). Everything happens inside one output buffer.

    Pass an :class:`OpCounter` to record the work done.
    """
    spec = _as_spec(spec)
    _check_strategy(strategy)
    _require_feasible(spec)
    R, J, m = spec
    out = np.zeros((R, m), dtype=np.uint8)
    _fill(out, R, J, m, strategy, counter, 0)
    return out


def generate_delta_iterative(spec: DeltaSpec, counter: OpCounter | None = None) -> BitMatrix:
    """Build Δ(R, J, m) with an explicit work stack and flip merges."""
    spec = _as_spec(spec)
    _require_feasible(spec)
    R, J, m = spec
    out = np.zeros((R, m), dtype=np.uint8)
    # frames: (row0, col0, R, J, m, depth, merge_split); merge_split < 0 means "decompose"
    stack = [(0, 0, R, J, m, 0, -1)]
    while stack:
        row0, col0, r, j, w, depth, split = stack.pop()
        view = out[row0 : row0 + r, col0 : col0 + w]
        if split >= 0:
            _flip_merge_inplace(view[1:], split, counter)
            continue
        if counter is not None and depth > counter.recursion_depth:
            counter.recursion_depth = depth
        if _write_ending_state(view, r, j, w):
            if counter is not None:
                counter.element_writes += r * w
            continue
        m1 = -(-w * j // r)
        view[0, :m1] = 1
        if counter is not None:
            counter.element_writes += w
        stack.append((row0, col0, r, j, w, depth, m1))
        stack.append((row0 + 1, col0 + m1, r - 1, j, w - m1, depth + 1, -1))
        stack.append((row0 + 1, col0, r - 1, j - 1, m1, depth + 1, -1))
    return out


def _heavy_row_count(mat: np.ndarray) -> int:
    if mat.shape[1] == 0 or mat.shape[0] == 0:
        return 0
    w = mat.sum(axis=1, dtype=np.int64)
    top = w.max()
    return 0 if top == w.min() else int(np.count_nonzero(w == top))


def _check_merge_inputs(left: np.ndarray, right: np.ndarray) -> None:
    if left.ndim != 2 or right.ndim != 2:
        raise ValueError("merge operands must be 2-D matrices")
    if left.shape[0] != right.shape[0]:
        raise ValueError(
            f"row-count mismatch: left has {left.shape[0]} rows, right has {right.shape[0]}"
        )


def merge_flip(
    left: BitMatrix, right: BitMatrix, counter: OpCounter | None = None
) -> BitMatrix:
    """``left ⊕̄ right``: flip ``right`` upside down, join, move heavy rows up."""
    _check_merge_inputs(left, right)
    out = np.hstack((left, right)).astype(np.uint8)
    _flip_merge_inplace(out, left.shape[1], counter)
    return out


def merge_shift(
    left: BitMatrix, right: BitMatrix, sp: SplitPoint, counter: OpCounter | None = None
) -> BitMatrix:
    """Join two balanced blocks, rotating ``right`` so heavy rows interleave."""
    _check_merge_inputs(left, right)
    n = left.shape[0]
    if n and not (0 <= sp.r1 < n and 0 <= sp.r2 < n):
        raise ValueError(f"heavy-row counts r1={sp.r1}, r2={sp.r2} out of range for {n} rows")
    for name, mat, expected in (("left", left, sp.r1), ("right", right, sp.r2)):
        got = _heavy_row_count(mat)
        w = mat.sum(axis=1, dtype=np.int64)
        if got != expected or np.any(np.diff(w) > 0) or (w.size and w.max() - w.min() > 1):
            raise ValueError(
                f"{name} block must be balanced with {expected} heavy rows on top, found {got}"
            )
    out = np.hstack((left, right)).astype(np.uint8)
    _shift_merge_inplace(out, left.shape[1], sp.r1, sp.r2, counter)
    return out


def verify_balanced(mat: BitMatrix, J: int) -> BalanceReport:
    mat = np.asarray(mat)
    cols = mat.sum(axis=0, dtype=np.int64)
    rows = mat.sum(axis=1, dtype=np.int64)
    if mat.shape[1]:
        distinct = np.unique(mat, axis=1).shape[1] == mat.shape[1]
    else:
        distinct = True
    delta = int(rows.max() - rows.min()) if rows.size else 0
    return BalanceReport(
        column_weight_ok=bool(np.all(cols == J)),
        columns_distinct=bool(distinct),
        row_weights=tuple(int(w) for w in rows),
        max_row_delta=delta,
        heavy_rows_on_top=bool(np.all(np.diff(rows) <= 0)),
    )


def all_specs(max_R: int, min_R: int = 1):
    """Every spec with min_R <= R <= max_R satisfying the L-condition."""
    for R in range(min_R, max_R + 1):
        for J in range(R + 1):
            for m in range(math.comb(R, J) + 1):
                yield DeltaSpec(R, J, m)
