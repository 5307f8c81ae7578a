"""Systematic SEC-DED encoding and syndrome decoding over a Hsiao check matrix.

Bit position 0 is the leftmost column of H. Payloads are read from the
data positions in order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .planner import CheckMatrix


class Outcome(str, Enum):
    NO_ERROR = "no_error"
    CORRECTED = "corrected"
    DOUBLE_ERROR = "double_error"
    MULTI_ERROR = "multi_error"


# integer codes used by the batch decoder
OUTCOME_CODES = {Outcome.NO_ERROR: 0, Outcome.CORRECTED: 1, Outcome.DOUBLE_ERROR: 2, Outcome.MULTI_ERROR: 3}


@dataclass(frozen=True)
class DecodeOutcome:
    kind: Outcome
    position: int | None = None
    data: np.ndarray | None = None

    def __str__(self) -> str:
        head = self.kind.value
        if self.position is not None:
            head += f":{self.position}"
        if self.data is not None:
            head += " " + "".join(str(int(b)) for b in self.data)
        return head


def _bits(word, length: int, what: str) -> np.ndarray:
    arr = np.asarray(word, dtype=np.uint8)
    if arr.ndim != 1 or arr.size != length:
        raise ValueError(f"{what} must have length {length}, got {arr.size}")
    if np.any(arr > 1):
        raise ValueError(f"{what} must contain only 0/1 values")
    return arr


def encode(data, check: CheckMatrix) -> np.ndarray:
    d = _bits(data, check.k, "data")
    word = np.zeros(check.n, dtype=np.uint8)
    data_pos = list(check.data_positions)
    word[data_pos] = d
    # parity block is a permuted identity, so each check row fixes one parity bit
    parity = (check.H[:, data_pos].astype(np.int64) @ d) & 1
    word[list(check.parity_positions)] = parity
    return word


def encode_many(data: np.ndarray, check: CheckMatrix) -> np.ndarray:
    data = np.asarray(data, dtype=np.uint8)
    if data.ndim != 2 or data.shape[1] != check.k:
        raise ValueError(f"data must be an array of shape (N, {check.k})")
    words = np.zeros((data.shape[0], check.n), dtype=np.uint8)
    data_pos = list(check.data_positions)
    words[:, data_pos] = data
    words[:, list(check.parity_positions)] = (
        data.astype(np.int64) @ check.H[:, data_pos].T.astype(np.int64)
    ) & 1
    return words


def syndrome(word, check: CheckMatrix) -> np.ndarray:
    w = _bits(word, check.n, "word")
    return ((check.H.astype(np.int64) @ w) & 1).astype(np.uint8)


def _pack(bits: np.ndarray) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def decode(word, check: CheckMatrix) -> DecodeOutcome:
    w = _bits(word, check.n, "word")
    s = syndrome(w, check)
    weight = int(s.sum())
    data_pos = list(check.data_positions)
    if weight == 0:
        return DecodeOutcome(Outcome.NO_ERROR, data=w[data_pos].copy())
    if weight % 2 == 0:
        return DecodeOutcome(Outcome.DOUBLE_ERROR)
    pos = check.syndrome_table.get(_pack(s))
    if pos is None:
        return DecodeOutcome(Outcome.MULTI_ERROR)
    fixed = w.copy()
    fixed[pos] ^= 1
    return DecodeOutcome(Outcome.CORRECTED, position=pos, data=fixed[data_pos])


def lookup_linear(syn, check: CheckMatrix) -> int | None:
    """Column index equal to ``syn`` found by scanning H; the slow reference path."""
    s = np.asarray(syn, dtype=np.uint8)
    for i in range(check.n):
        if np.array_equal(check.H[:, i], s):
            return i
    return None


def decode_many(words: np.ndarray, check: CheckMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Classify a batch of words.

    Returns ``(codes, positions)``: outcome codes per :data:`OUTCOME_CODES`
    and the corrected position (-1 where nothing was corrected).
    """
    words = np.asarray(words, dtype=np.uint8)
    syn = (words.astype(np.int64) @ check.H.T.astype(np.int64)) & 1
    weights = 1 << np.arange(check.R - 1, -1, -1, dtype=np.int64)
    values = syn @ weights
    parity = syn.sum(axis=1) % 2
    table = np.full(1 << check.R, -1, dtype=np.int64)
    table[check.column_values] = np.arange(check.n)
    positions = np.where(parity == 1, table[values], -1)
    codes = np.full(words.shape[0], OUTCOME_CODES[Outcome.DOUBLE_ERROR], dtype=np.int8)
    codes[values == 0] = OUTCOME_CODES[Outcome.NO_ERROR]
    codes[(parity == 1) & (positions >= 0)] = OUTCOME_CODES[Outcome.CORRECTED]
    codes[(parity == 1) & (positions < 0)] = OUTCOME_CODES[Outcome.MULTI_ERROR]
    return codes, positions
