"""
lwc.py
- 局部可重写码（LWC）编解码与分析：
  additive 掩蔽编码 c = (m, 0) + G0·p，最小重写更新编码，陪集译码 m̂ = H0ᵀ·y，
  d★ / r★ 计算，写入代价统计与界检查。

Systematic form
---------------
``build`` picks n−k parity coordinates (greedily from the last row upward) whose
rows of G0 are independent, and right-multiplies G0 by the inverse of that
block so the parity rows become the identity. Messages occupy the remaining
(information) coordinates in increasing order, so (m, 0) means "m on the
information coordinates, 0 on the parity coordinates". With the parity block
in the last rows no permutation is needed; otherwise ``perm`` lists the
information coordinates followed by the parity coordinates.

The parity vector p is expressed in the systematic basis, so p equals the
values a codeword carries on the parity coordinates.

Coset search
------------
The defect rows of G0 are row-reduced once per set of defect positions
(``MaskingPlan``), and the span of their null space is enumerated once as
packed words. Each encode then solves for one particular p and scores the
whole coset with a popcount. Codes longer than 64 cells fall back to Python
integers, so encoding has no length limit; exhaustive analysis still stops
at 64 cells with CapacityError, and such codes carry no cost bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

import config
from codes import LinearCode, covering_weights, dual, min_distance
from defectchan import NORMAL, ChannelState
from gf2core import BitMatrix, BitVector, Inconsistent, PreparedSystem, inverse
from logger import get_logger, log_performance, track_warning
from models import CapacityError, ConstructionError, CostReport, LwcAnalysis, MaskingFailure, UsageError

logger = get_logger(__name__)


class AdditiveCode:
    """An LWC instance; construct with ``build``."""

    def __init__(self, g0: BitMatrix, g0_sys: BitMatrix, info_positions: Tuple[int, ...],
                 parity_positions: Tuple[int, ...], name: str = ""):
        self.g0 = g0
        self.g0_sys = g0_sys
        self.info_positions = info_positions
        self.parity_positions = parity_positions
        self.name = name
        self.r_matrix = g0_sys.select_rows(info_positions)          # R, k×(n−k)

        decoder = np.zeros((self.k, self.n), dtype=np.uint8)       # H0ᵀ = [I_k  R] on permuted coordinates
        decoder[np.arange(self.k), list(info_positions)] = 1
        decoder[:, list(parity_positions)] = self.r_matrix.data
        self.h0 = BitMatrix(decoder).T                              # n×k
        self.c0 = LinearCode.from_generator(g0, name=f"C0({name})" if name else "")
        self._analysis: Optional[LwcAnalysis] = None
        self._r_star_unavailable = False
        self._column_words = g0_sys.column_words()
        self._plans: Dict[Tuple[int, ...], "MaskingPlan"] = {}

        if not (self.h0.T @ self.g0).is_zero():
            raise ConstructionError("H0ᵀ·G0 ≠ 0")

    @property
    def n(self) -> int:
        return self.g0.rows

    @property
    def k(self) -> int:
        return self.g0.rows - self.g0.cols

    @property
    def redundancy(self) -> int:
        return self.g0.cols

    @property
    def perm(self) -> Tuple[int, ...]:
        return self.info_positions + self.parity_positions

    @property
    def decoder(self) -> BitMatrix:
        return self.h0.T

    def place(self, m: BitVector) -> BitVector:
        """(m, 0_{n−k}) in original coordinates."""
        if m.len != self.k:
            raise UsageError(f"message length {m.len} ≠ k = {self.k}")
        u = np.zeros(self.n, dtype=np.uint8)
        u[list(self.info_positions)] = m.bits
        return BitVector(u)

    def analysis(self, cap_bits: Optional[int] = None) -> LwcAnalysis:
        if self._analysis is None or cap_bits is not None:
            result = analyze(self, cap_bits=cap_bits)
            if cap_bits is None:
                self._analysis = result
            return result
        return self._analysis

    def r_star_or_none(self) -> Optional[int]:
        if self._r_star_unavailable:
            return None
        try:
            return self.analysis().r_star
        except CapacityError as e:
            logger.debug(f"r★ unavailable for {self.name or 'code'}: {e}")
            self._r_star_unavailable = True
            return None

    def parity_word(self, p: BitVector) -> int:
        """G0_sys·p packed, coordinate i at bit i."""
        word = 0
        for j in p.support():
            word ^= self._column_words[j]
        return word

    def masking_plan(self, defects: Tuple[int, ...]) -> "MaskingPlan":
        plan = self._plans.get(defects)
        if plan is None:
            if len(self._plans) >= config.MASKING_PLAN_CACHE_SIZE:
                self._plans.clear()
            plan = self._plans[defects] = MaskingPlan(self, defects)
        return plan

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"AdditiveCode{label}(n={self.n}, k={self.k})"


def build(g0: BitMatrix, name: str = "") -> AdditiveCode:
    n, redundancy = g0.shape
    k = n - redundancy
    if redundancy == 0 or k <= 0:
        raise ConstructionError(f"degenerate additive code: n = {n}, n−k = {redundancy}")
    if g0.rank() != redundancy:
        raise ConstructionError(f"G0 must have rank n−k = {redundancy}, got {g0.rank()}")

    # 自底向上贪心选取 parity 行，使 parity 尽量落在末尾
    parity: List[int] = []
    for i in range(n - 1, -1, -1):
        if g0.select_rows(parity + [i]).rank() == len(parity) + 1:
            parity.append(i)
            if len(parity) == redundancy:
                break
    parity_positions = tuple(sorted(parity))
    info_positions = tuple(i for i in range(n) if i not in set(parity))

    g0_sys = g0 @ inverse(g0.select_rows(parity_positions))
    code = AdditiveCode(g0, g0_sys, info_positions, parity_positions, name=name)
    logger.debug(f"built {code!r}; parity coordinates {list(parity_positions)}")
    return code


@dataclass(frozen=True)
class Encoding:
    codeword: BitVector
    parity: BitVector
    report: CostReport


def _pack(bits: np.ndarray) -> int:
    """坐标 i 对应第 i 位；码长不受 64 位限制。"""
    return sum(1 << int(i) for i in np.flatnonzero(bits))


def _unpack(word: int) -> List[int]:
    return [i for i in range(word.bit_length()) if (word >> i) & 1]


def _lex_key(p: BitVector) -> int:
    # 下标 0 为最高位，整数越小字典序越小
    w = p.len
    return sum(1 << (w - 1 - j) for j in p.support())


def _from_lex_key(key: int, w: int) -> BitVector:
    return BitVector([(key >> (w - 1 - j)) & 1 for j in range(w)])


class MaskingPlan:
    """
    Defect-row system of one set of defect positions.
    The row reduction and the span of its null space depend only on where the
    defects are, so they are shared by every message and stuck-value pattern.
    """

    def __init__(self, code: AdditiveCode, defects: Tuple[int, ...]):
        self.defects = defects
        self.system = PreparedSystem(code.g0_sys.select_rows(defects))
        self.packed = code.n <= config.MAX_PACKED_LENGTH
        self._code = code
        self._span = None

    @property
    def dimension(self) -> int:
        return len(self.system.nullbasis)

    def span(self):
        """Lex keys of every null-space combination v and the matching words G0·v."""
        if self._span is None:
            if self.packed:
                keys = np.zeros(1, dtype=np.uint64)
                words = np.zeros(1, dtype=np.uint64)
            else:
                keys, words = [0], [0]
            for v in self.system.nullbasis:
                kv, wv = _lex_key(v), self._code.parity_word(v)
                if self.packed:
                    keys = np.concatenate([keys, keys ^ np.uint64(kv)])
                    words = np.concatenate([words, words ^ np.uint64(wv)])
                else:
                    keys = keys + [x ^ kv for x in keys]
                    words = words + [x ^ wv for x in words]
            self._span = (keys, words)
        return self._span

    def closest(self, key0: int, word0: int, reference: int) -> Tuple[int, int]:
        """(key, word) of the coset member nearest to reference; ties → smallest key."""
        keys, words = self.span()
        if self.packed:
            costs = np.bitwise_count(words ^ np.uint64(word0 ^ reference))
            best = int(np.lexsort((keys ^ np.uint64(key0), costs))[0])
            return key0 ^ int(keys[best]), word0 ^ int(words[best])
        # 码长超过 64 位时用 Python 整数
        target = word0 ^ reference
        best = min(range(len(keys)), key=lambda j: ((words[j] ^ target).bit_count(), keys[j] ^ key0))
        return key0 ^ keys[best], word0 ^ words[best]


def _select_parity(code: AdditiveCode, m: BitVector, s: ChannelState, reference: int,
                   cap_bits: Optional[int], strict: bool) -> Tuple[BitVector, int, bool]:
    """
    Among p with (m, 0) + G0·p masking s, pick the one whose codeword is nearest
    to the packed reference word; ties → lexicographically smallest p.
    Returns (p, packed codeword, minimal).
    """
    if s.n != code.n:
        raise UsageError(f"state length {s.n} ≠ n = {code.n}")
    u = code.place(m).bits
    defects = s.defect_positions()
    plan = code.masking_plan(defects)
    rows = list(defects)
    coset = plan.system.solve_bits(s.cells[rows].astype(np.uint8) ^ u[rows])
    if isinstance(coset, Inconsistent):
        raise MaskingFailure(tuple(defects[r] for r in coset.rows))

    key = _lex_key(coset.particular)
    word = _pack(u) ^ code.parity_word(coset.particular)
    cap_bits = config.get_setting("coset_search_cap_bits") if cap_bits is None else cap_bits
    if coset.dimension > cap_bits:
        message = f"masking coset of size 2^{coset.dimension} exceeds the search cap 2^{cap_bits}"
        if strict:
            raise CapacityError(message, cap=cap_bits)
        track_warning("CapacityFallback", message)
        return coset.particular, word, False

    key, word = plan.closest(key, word, reference)
    return _from_lex_key(key, code.redundancy), word, True


def encode_initial(code: AdditiveCode, m: BitVector, s: ChannelState,
                   cap_bits: Optional[int] = None, strict: bool = False) -> Encoding:
    """
    Store m into all-zero cells: c = (m, 0) + G0·p with c masking s.
    Among masking p the one minimizing ∥c∥ is chosen. Raises MaskingFailure.
    """
    p, word, minimal = _select_parity(code, m, s, 0, cap_bits, strict)
    defect_word = _pack(s.cells != NORMAL)
    report = CostReport(
        write_cost=word.bit_count() - s.nonzero_defect_count(),
        cells_touched=_unpack(word & ~defect_word),
        minimal=minimal,
    )
    if s.defect_count() <= 1:
        r_star = code.r_star_or_none()
        if r_star is not None:
            report.bound = m.weight() + r_star
    return Encoding(codeword=BitVector.from_int(word, code.n), parity=p, report=report)


def encode_update(code: AdditiveCode, c_prev: BitVector, m_new: BitVector, s: ChannelState,
                  cap_bits: Optional[int] = None, strict: bool = False) -> Encoding:
    """Rewrite stored c_prev to carry m_new, minimizing the number of changed cells."""
    if c_prev.len != code.n:
        raise UsageError(f"previous codeword length {c_prev.len} ≠ n = {code.n}")
    if not s.masks(c_prev):
        raise UsageError("previous codeword does not mask the channel state")
    previous = c_prev.to_int()
    p, word, minimal = _select_parity(code, m_new, s, previous, cap_bits, strict)

    diff = word ^ previous
    report = CostReport(rewrite_cost=diff.bit_count(), cells_touched=_unpack(diff), minimal=minimal)
    if s.defect_count() <= 1:
        r_star = code.r_star_or_none()
        if r_star is not None:
            report.bound = decode(code, c_prev).distance(m_new) + r_star - 1
    return Encoding(codeword=BitVector.from_int(word, code.n), parity=p, report=report)


def decode(code: AdditiveCode, y: BitVector) -> BitVector:
    """m̂ = H0ᵀ·y."""
    if y.len != code.n:
        raise UsageError(f"word length {y.len} ≠ n = {code.n}")
    return code.decoder @ y


@log_performance("analyze", "lwc")
def analyze(code: AdditiveCode, cap_bits: Optional[int] = None) -> LwcAnalysis:
    """d★ = d(C0^⊥) over 2^k words; locality from covering codewords of C0 over 2^{n−k} words."""
    d_star = min_distance(dual(code.c0), cap_bits=cap_bits)
    covering = covering_weights(code.c0, cap_bits=cap_bits)
    locality = [None if w is None else w - 1 for w in covering]
    if any(r is None for r in locality):
        track_warning("UncoveredCoordinate",
                      f"coordinates {[i for i, r in enumerate(locality) if r is None]} are covered by no C0 codeword")
        r_star = None
    else:
        r_star = max(locality)

    bound = singleton_bound(code.n, code.k, r_star) if r_star is not None and 1 <= r_star <= code.k else None
    return LwcAnalysis(
        n=code.n,
        k=code.k,
        d_star=d_star,
        locality=locality,
        r_star=r_star,
        bound=bound,
        optimal=bound is not None and d_star == bound,
        info_positions=list(code.info_positions),
        parity_positions=list(code.parity_positions),
    )


def singleton_bound(n: int, k: int, r_star: int) -> int:
    """n − k − ⌈k/r★⌉ + 2."""
    if not (1 <= r_star <= k):
        raise UsageError(f"locality must satisfy 1 ≤ r ≤ k = {k}, got {r_star}")
    return n - k - (-(-k // r_star)) + 2


@dataclass(frozen=True)
class KuznetsovBounds:
    lower: int
    upper: int

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


def kuznetsov_bounds(n: int, t: int) -> KuznetsovBounds:
    """
    Bounds on log2 of the message count for n cells with t stuck-at defects:
    n − t − ⌈log2 ln(2^t·C(n,t))⌉ ≤ log2 M ≤ n − t. At t = 0 the correction
    term is taken as 0 (lower = upper = n).
    """
    if not (0 <= t <= n):
        raise UsageError(f"need 0 ≤ t ≤ n, got t = {t}, n = {n}")
    upper = n - t
    if t == 0:
        return KuznetsovBounds(lower=n, upper=n)
    y = math.log(2 ** t * math.comb(n, t))
    e = math.ceil(math.log2(y))
    # 浮点边界修正：e 为满足 2^e ≥ y 的最小整数
    while 2.0 ** (e - 1) >= y:
        e -= 1
    while 2.0 ** e < y:
        e += 1
    correction = max(e, 0)
    return KuznetsovBounds(lower=max(upper - correction, 0), upper=upper)
