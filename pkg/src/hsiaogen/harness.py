"""Brute-force oracles, fault injection and operation-count measurements."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields
from itertools import combinations

import numpy as np

from .balanced import (
    STRATEGIES,
    DeltaSpec,
    OpCounter,
    _as_spec,
    all_specs,
    generate_delta,
    verify_balanced,
)
from .codec import OUTCOME_CODES, Outcome, decode_many, encode_many
from .planner import build_check_matrix

ORACLE_MAX_R = 6
VERIFY_MAX_R = 10
EXHAUSTIVE_MAX_N = 128
EXHAUSTIVE_ALL_WORDS_K = 12
DEFAULT_SAMPLE_WORDS = 64
_CHUNK_ROWS = 1 << 17

_CORRECTED = OUTCOME_CODES[Outcome.CORRECTED]
_NO_ERROR = OUTCOME_CODES[Outcome.NO_ERROR]
_DOUBLE = OUTCOME_CODES[Outcome.DOUBLE_ERROR]


# -- oracles ---------------------------------------------------------------


def oracle_delta_exists(spec: DeltaSpec) -> bool:
    """Search for any balanced Δ(R, J, m) by backtracking over columns.

    Columns are tried in lexicographic order of their support; a branch is
    cut when a row would exceed the ceiling weight, when a row can no longer
    reach the floor weight, or when too few candidate columns remain.
    """
    spec = _as_spec(spec)
    R, J, m = spec
    if R > ORACLE_MAX_R:
        raise ValueError(f"oracle limited to R <= {ORACLE_MAX_R}, got R={R}")
    if J < 0 or J > R or m < 0:
        return False
    cands = list(combinations(range(R), J))
    if m == 0:
        return True
    lo, hi = (m * J) // R, -(-m * J // R)
    load = [0] * R

    def search(start: int, left: int) -> bool:
        if left == 0:
            return all(lo <= w <= hi for w in load)
        if len(cands) - start < left:
            return False
        if any(w + left < lo for w in load):
            return False
        for idx in range(start, len(cands) - left + 1):
            col = cands[idx]
            if any(load[r] >= hi for r in col):
                continue
            for r in col:
                load[r] += 1
            found = search(idx + 1, left - 1)
            for r in col:
                load[r] -= 1
            if found:
                return True
        return False

    return search(0, m)


@dataclass(frozen=True)
class VerifySummary:
    limit_R: int
    instances: int
    runs: int


def oracle_verify_all(limit_R: int) -> VerifySummary:
    """Generate and check every feasible spec with R <= limit_R under both strategies."""
    if limit_R > VERIFY_MAX_R:
        raise ValueError(f"limit_R must be <= {VERIFY_MAX_R}")
    instances = runs = 0
    for spec in all_specs(limit_R):
        R, J, m = spec
        for strategy in STRATEGIES:
            mat = generate_delta(spec, strategy)
            rep = verify_balanced(mat, J)
            ok = (
                mat.shape == (R, m)
                and rep.balanced
                and rep.heavy_rows_on_top
                and rep.heavy_rows == (m * J) % R
            )
            if not ok:
                raise AssertionError(f"Δ{spec} failed with strategy={strategy}: {rep}")
            runs += 1
        instances += 1
    return VerifySummary(limit_R, instances, runs)


# -- operation counting ----------------------------------------------------


def measure_generation(spec: DeltaSpec, strategy: str = "shift") -> OpCounter:
    counter = OpCounter()
    generate_delta(spec, strategy, counter)
    return counter


def write_bound(R: int, m: int) -> float:
    """R * m * (log2 m + 1), the normaliser for write counts."""
    return R * m * (math.log2(m) + 1) if m > 0 else 0.0


@dataclass(frozen=True)
class ScalingPoint:
    R: int
    J: int
    m: int
    strategy: str
    element_writes: int
    row_moves: int
    recursion_depth: int

    @property
    def ratio(self) -> float:
        bound = write_bound(self.R, self.m)
        return self.element_writes / bound if bound else 0.0

    @property
    def overhead(self) -> float:
        """Writes per matrix cell; 1.0 means every cell was written once."""
        cells = self.R * self.m
        return self.element_writes / cells if cells else 0.0


CSV_COLUMNS = (
    "R",
    "J",
    "m",
    "strategy",
    "element_writes",
    "row_moves",
    "recursion_depth",
    "ratio",
    "overhead",
)


@dataclass
class ScalingReport:
    grid: list[ScalingPoint] = field(default_factory=list)

    def points(self, strategy: str) -> list[ScalingPoint]:
        return [p for p in self.grid if p.strategy == strategy]

    def max_ratio(self, strategy: str) -> float:
        return max((p.ratio for p in self.points(strategy)), default=0.0)

    def worst(self, strategy: str, key: str = "ratio") -> ScalingPoint | None:
        pts = self.points(strategy)
        return max(pts, key=lambda p: getattr(p, key)) if pts else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p in self.grid:
            w.writerow(
                [p.R, p.J, p.m, p.strategy, p.element_writes, p.row_moves,
                 p.recursion_depth, f"{p.ratio:.6f}", f"{p.overhead:.6f}"]
            )
        return buf.getvalue()

    def summary(self) -> str:
        lines = []
        for s in sorted({p.strategy for p in self.grid}):
            worst = self.worst(s)
            lines.append(
                f"max_ratio_{s}={self.max_ratio(s):.6f} at R={worst.R} J={worst.J} m={worst.m}"
            )
            heavy = self.worst(s, "overhead")
            lines.append(
                f"max_overhead_{s}={heavy.overhead:.6f} at R={heavy.R} J={heavy.J} m={heavy.m}"
            )
        return "\n".join(lines)


def grid_specs(R_values, J_values=None, m_values=None, full_blocks=False):
    """Feasible specs of a grid; omitted J or m axes sweep every legal value."""
    for R in R_values:
        Js = range(R + 1) if J_values is None else [j for j in J_values if 0 <= j <= R]
        for J in Js:
            top = math.comb(R, J)
            if full_blocks:
                ms = [top]
            elif m_values is None:
                ms = range(top + 1)
            else:
                ms = [m for m in m_values if 0 <= m <= top]
            for m in ms:
                yield DeltaSpec(R, J, m)


def scaling_report(specs, strategies=STRATEGIES) -> ScalingReport:
    report = ScalingReport()
    for spec in specs:
        for strategy in strategies:
            c = measure_generation(spec, strategy)
            report.grid.append(
                ScalingPoint(spec.R, spec.J, spec.m, strategy,
                             c.element_writes, c.row_moves, c.recursion_depth)
            )
    return report


# -- fault injection -------------------------------------------------------


@dataclass
class FaultReport:
    k: int
    mode: str
    seed: int
    trials: int = 0
    singles: int = 0
    doubles: int = 0
    singles_corrected: int = 0
    doubles_detected: int = 0
    miscorrections: int = 0
    residual: int = 0
    single_miscorrections: int = 0
    double_miscorrections: int = 0

    def to_keyvalue(self) -> str:
        return "\n".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self)) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "fault_class", "patterns", "handled", "miscorrections", "residual"])
        w.writerow([self.k, "single", self.singles, self.singles_corrected,
                    self.single_miscorrections,
                    self.singles - self.singles_corrected - self.single_miscorrections])
        w.writerow([self.k, "double", self.doubles, self.doubles_detected,
                    self.double_miscorrections,
                    self.doubles - self.doubles_detected - self.double_miscorrections])
        return buf.getvalue()


def _all_words(k: int) -> np.ndarray:
    values = np.arange(1 << k, dtype=np.int64)
    return ((values[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.uint8)


def _classify(report: FaultReport, check, original, corrupted, flips, positions) -> None:
    """Decode ``corrupted`` rows and score them against the injected faults.

    ``positions`` holds the flipped index for single faults (-1 for doubles).
    A single fault counts as handled only if it is corrected at the right
    position and the repaired word equals the original codeword.
    """
    codes, pos = decode_many(corrupted, check)
    single = flips == 1
    fixed = corrupted.copy()
    rows = np.flatnonzero(codes == _CORRECTED)
    fixed[rows, pos[rows]] ^= 1
    restored = np.all(fixed == original, axis=1)

    ok_single = single & (codes == _CORRECTED) & (pos == positions) & restored
    bad_single = single & ((codes == _NO_ERROR) | ((codes == _CORRECTED) & ~ok_single))
    silent = (codes == _NO_ERROR) | (codes == _CORRECTED)

    report.singles += int(single.sum())
    report.doubles += int((~single).sum())
    report.singles_corrected += int(ok_single.sum())
    report.doubles_detected += int((~single & (codes == _DOUBLE)).sum())
    report.single_miscorrections += int(bad_single.sum())
    report.double_miscorrections += int((~single & silent).sum())


def _finish(report: FaultReport) -> FaultReport:
    report.trials = report.singles + report.doubles
    report.miscorrections = report.single_miscorrections + report.double_miscorrections
    report.residual = (
        report.trials - report.singles_corrected - report.doubles_detected - report.miscorrections
    )
    return report


def _fault_patterns(n: int):
    """Every single and double flip of an n-bit word, singles first."""
    i, j = np.triu_indices(n, 1)
    doubles = np.zeros((i.size, n), dtype=np.uint8)
    doubles[np.arange(i.size), i] = 1
    doubles[np.arange(i.size), j] = 1
    patterns = np.vstack((np.eye(n, dtype=np.uint8), doubles))
    flips = np.concatenate((np.ones(n, dtype=np.int64), np.full(i.size, 2)))
    positions = np.concatenate((np.arange(n), np.full(i.size, -1)))
    return patterns, flips, positions


def inject_faults(
    k: int,
    mode: str = "exhaustive",
    trials: int | None = None,
    seed: int = 0,
    strategy: str = "shift",
) -> FaultReport:
    """Flip one or two bits of encoded words and count how the decoder reacts.

    ``exhaustive`` applies every single and double flip to every data word
    when ``k <= 12``, otherwise to ``trials`` (default 64) words drawn with
    ``numpy.random.default_rng(seed)``. ``random`` draws ``trials`` data
    words, each hit by one or two distinct flips chosen with equal odds, from
    the same generator. ``trials == 0`` yields an empty report.
    """
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")
    if trials is not None and trials < 0:
        raise ValueError("trials must be non-negative")
    report = FaultReport(k=k, mode=mode, seed=seed)
    check = build_check_matrix(k, strategy)
    n = check.n
    if mode == "exhaustive" and n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive mode needs n <= {EXHAUSTIVE_MAX_N}, got n={n}")
    if trials == 0:
        return report
    rng = np.random.default_rng(seed)

    if mode == "exhaustive":
        if k <= EXHAUSTIVE_ALL_WORDS_K:
            data = _all_words(k)
        else:
            data = rng.integers(0, 2, size=(trials or DEFAULT_SAMPLE_WORDS, k), dtype=np.uint8)
        codewords = encode_many(data, check)
        patterns, flips, positions = _fault_patterns(n)
        per_chunk = max(1, _CHUNK_ROWS // len(patterns))
        for start in range(0, len(codewords), per_chunk):
            cw = codewords[start : start + per_chunk]
            corrupted = (cw[:, None, :] ^ patterns[None, :, :]).reshape(-1, n)
            _classify(
                report,
                check,
                np.repeat(cw, len(patterns), axis=0),
                corrupted,
                np.tile(flips, len(cw)),
                np.tile(positions, len(cw)),
            )
        return _finish(report)

    count = DEFAULT_SAMPLE_WORDS if trials is None else trials
    data = rng.integers(0, 2, size=(count, k), dtype=np.uint8)
    flips = rng.integers(1, 3, size=count)
    first = rng.integers(0, n, size=count)
    second = (first + rng.integers(1, n, size=count)) % n
    codewords = encode_many(data, check)
    patterns = np.zeros((count, n), dtype=np.uint8)
    rows = np.arange(count)
    patterns[rows, first] = 1
    two = flips == 2
    patterns[rows[two], second[two]] = 1
    positions = np.where(two, -1, first)
    for start in range(0, count, _CHUNK_ROWS):
        sl = slice(start, start + _CHUNK_ROWS)
        _classify(report, check, codewords[sl], codewords[sl] ^ patterns[sl], flips[sl], positions[sl])
    return _finish(report)
