"""
defectchan.py
- Stuck-at defect channel: y = x ∘ s.

A state string uses '*' for a normal cell (λ) and '0'/'1' for a cell stuck at
that value, e.g. "*1**0". Sampling uses numpy's PCG64 generator
(``numpy.random.default_rng``); a fixed seed reproduces the same states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Optional, Tuple

import numpy as np

from config import NORMAL_CELL_CHAR, get_setting
from gf2core import BitVector
from logger import get_logger
from models import CapacityError, UsageError

logger = get_logger(__name__)

NORMAL = -1   # λ


class ChannelState:
    """Per-cell value in {λ, 0, 1}; immutable."""

    __slots__ = ("_cells",)

    def __init__(self, cells):
        arr = np.array(cells, dtype=np.int8)
        if arr.ndim != 1:
            raise UsageError("channel state must be one-dimensional")
        if ((arr < NORMAL) | (arr > 1)).any():
            raise UsageError("channel state cells must be λ (-1), 0 or 1")
        arr.setflags(write=False)
        self._cells = arr

    @classmethod
    def normal(cls, n: int) -> "ChannelState":
        return cls(np.full(n, NORMAL, dtype=np.int8))

    @classmethod
    def from_string(cls, text: str) -> "ChannelState":
        cells = []
        for ch in text.strip():
            if ch == NORMAL_CELL_CHAR:
                cells.append(NORMAL)
            elif ch in "01":
                cells.append(int(ch))
            else:
                raise UsageError(f"state string must use 0, 1 or '{NORMAL_CELL_CHAR}': {text!r}")
        return cls(cells)

    @classmethod
    def from_defects(cls, n: int, positions, values) -> "ChannelState":
        cells = np.full(n, NORMAL, dtype=np.int8)
        cells[list(positions)] = list(values)
        return cls(cells)

    @property
    def n(self) -> int:
        return int(self._cells.shape[0])

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    def __len__(self) -> int:
        return self.n

    def defect_positions(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self._cells != NORMAL))

    def stuck_values(self) -> BitVector:
        """Stuck values at the defect positions, in position order."""
        return BitVector(self._cells[self._cells != NORMAL])

    def defect_count(self) -> int:
        return int((self._cells != NORMAL).sum())

    def nonzero_defect_count(self) -> int:
        """t_{∖0}: defects whose stuck value is nonzero."""
        return int((self._cells == 1).sum())

    def is_defective(self, i: int) -> bool:
        return int(self._cells[i]) != NORMAL

    def masks(self, x: BitVector) -> bool:
        """True iff x already agrees with every stuck cell."""
        if x.len != self.n:
            raise UsageError(f"length mismatch: word {x.len} vs state {self.n}")
        defective = self._cells != NORMAL
        return bool(np.array_equal(x.bits[defective], self._cells[defective].astype(np.uint8)))

    def to_string(self) -> str:
        return "".join(NORMAL_CELL_CHAR if c == NORMAL else str(int(c)) for c in self._cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChannelState):
            return NotImplemented
        return bool(np.array_equal(self._cells, other._cells))

    def __hash__(self) -> int:
        return hash(self._cells.tobytes())

    def __repr__(self) -> str:
        return f"ChannelState('{self.to_string()}')"


@dataclass(frozen=True)
class DefectModel:
    """P(λ) = 1 − β, P(0) = P(1) = β/2, i.i.d. over cells."""
    beta: float
    seed: Optional[int] = None

    def __post_init__(self):
        if not (0.0 <= self.beta <= 1.0):
            raise UsageError(f"defect probability must lie in [0, 1], got {self.beta}")


def apply(x: BitVector, s: ChannelState) -> BitVector:
    """Channel output: x_i on normal cells, s_i on stuck cells."""
    if x.len != s.n:
        raise UsageError(f"length mismatch: word {x.len} vs state {s.n}")
    cells = s.cells
    return BitVector(np.where(cells == NORMAL, x.bits, cells).astype(np.uint8))


def sample(model: DefectModel, n: int, rng: Optional[np.random.Generator] = None) -> ChannelState:
    if rng is None:
        rng = np.random.default_rng(model.seed)
    defective = rng.random(n) < model.beta
    values = rng.integers(0, 2, size=n, dtype=np.int8)
    return ChannelState(np.where(defective, values, NORMAL).astype(np.int8))


def inject(n: int, t: int, rng: np.random.Generator) -> ChannelState:
    """Exactly t defects at uniform positions with uniform stuck values."""
    if not (0 <= t <= n):
        raise UsageError(f"cannot place {t} defects in {n} cells")
    positions = np.sort(rng.choice(n, size=t, replace=False))
    values = rng.integers(0, 2, size=t, dtype=np.int8)
    return ChannelState.from_defects(n, positions, values)


def count_states(n: int, t: int) -> int:
    return comb(n, t) * 2 ** t


def enumerate_states(n: int, t: int, cap: Optional[int] = None) -> Iterator[ChannelState]:
    """
    Every state with exactly t defects and every stuck-value assignment, once.
    Arguments and the cap (setting ``state_enumeration_cap``) are checked at call time.
    """
    if not (0 <= t <= n):
        raise UsageError(f"cannot place {t} defects in {n} cells")
    cap = get_setting("state_enumeration_cap") if cap is None else cap
    total = count_states(n, t)
    if total > cap:
        raise CapacityError(f"{total} defect states exceed the enumeration cap {cap}", cap=cap)
    logger.debug(f"enumerating {total} states (n={n}, t={t})")
    return _states(n, t)


def _states(n: int, t: int) -> Iterator[ChannelState]:
    for positions in itertools.combinations(range(n), t):
        for values in itertools.product((0, 1), repeat=t):
            yield ChannelState.from_defects(n, positions, values)
