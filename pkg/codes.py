"""
codes.py
- 二元线性码：构造（显式矩阵、循环码、flip/groupflip 族）、穷举最小距离、
  对偶码、覆盖坐标的最小码重。

Codewords are enumerated exhaustively, packed into uint64 words (coordinate i
at bit i). Enumeration walks the message space in blocks: the low
``ENUMERATION_BLOCK_BITS`` generators are expanded with numpy, the remaining
ones are stepped in Gray-code order. Results do not depend on the order.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

import config
from gf2core import BinPolynomial, BitMatrix, BitVector, nullspace, polymod_divides, x_n_minus_1
from logger import get_logger, log_performance
from models import CapacityError, ConstructionError, UsageError

logger = get_logger(__name__)


class LinearCode:
    """
    Binary linear code, column-vector convention c = gen·m.
    gen is n×k, pcheck is n×(n−k); pcheckᵀ·gen = 0 is asserted at construction.
    """

    def __init__(self, gen: BitMatrix, pcheck: BitMatrix, is_cyclic: bool = False, name: str = ""):
        if gen.rows != pcheck.rows:
            raise ConstructionError(f"gen has {gen.rows} rows, pcheck has {pcheck.rows}")
        n = gen.rows
        if gen.rank() != gen.cols:
            raise ConstructionError(f"generator columns are dependent (rank {gen.rank()} < {gen.cols})")
        if pcheck.rank() != pcheck.cols or gen.cols + pcheck.cols != n:
            raise ConstructionError(f"parity-check must have full rank n−k = {n - gen.cols}")
        if not (pcheck.T @ gen).is_zero():
            raise ConstructionError("pcheckᵀ·gen ≠ 0")
        self.gen = gen
        self.pcheck = pcheck
        self.is_cyclic = is_cyclic
        self.name = name

    @classmethod
    def from_generator(cls, gen: BitMatrix, is_cyclic: bool = False, name: str = "") -> "LinearCode":
        pcheck = BitMatrix.from_columns(nullspace(gen.T), n=gen.rows)
        return cls(gen, pcheck, is_cyclic=is_cyclic, name=name)

    @classmethod
    def from_parity_check(cls, pcheck: BitMatrix, is_cyclic: bool = False, name: str = "") -> "LinearCode":
        gen = BitMatrix.from_columns(nullspace(pcheck.T), n=pcheck.rows)
        return cls(gen, pcheck, is_cyclic=is_cyclic, name=name)

    @property
    def n(self) -> int:
        return self.gen.rows

    @property
    def k(self) -> int:
        return self.gen.cols

    def encode(self, m: BitVector) -> BitVector:
        return self.gen @ m

    def contains(self, word: BitVector) -> bool:
        return (self.pcheck.T @ word).is_zero()

    def shift_closed(self) -> bool:
        """Every cyclic shift of each basis column is a codeword."""
        return all(self.contains(BitVector(np.roll(col.bits, 1))) for col in self.gen.columns())

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"LinearCode{label}(n={self.n}, k={self.k}, cyclic={self.is_cyclic})"


# --- packed enumeration ---
def _check_caps(n: int, dim: int, cap_bits: Optional[int]):
    cap_bits = config.get_setting("enumeration_cap_bits") if cap_bits is None else cap_bits
    if dim > cap_bits:
        raise CapacityError(f"enumerating 2^{dim} codewords exceeds the cap 2^{cap_bits}", cap=cap_bits)
    if n > config.MAX_PACKED_LENGTH:
        raise CapacityError(f"length {n} exceeds the packed word size {config.MAX_PACKED_LENGTH}",
                            cap=config.MAX_PACKED_LENGTH)


def span_blocks(words: Sequence[int], start: int = 0) -> Iterator[np.ndarray]:
    """All XOR combinations of `words` offset by `start`, as uint64 blocks."""
    gens = np.array(list(words), dtype=np.uint64)
    low = min(len(gens), config.ENUMERATION_BLOCK_BITS)
    base = np.array([start], dtype=np.uint64)
    for g in gens[:low]:
        base = np.concatenate([base, base ^ g])
    high = gens[low:]
    offset = np.uint64(0)
    for step in range(1 << len(high)):
        if step:
            # Gray code: flip the generator at the lowest set bit of step
            offset ^= high[(step & -step).bit_length() - 1]
        yield base ^ offset


def codeword_blocks(C: LinearCode, cap_bits: Optional[int] = None) -> Iterator[np.ndarray]:
    _check_caps(C.n, C.k, cap_bits)
    return span_blocks(C.gen.column_words())


@log_performance("min_distance", "codes")
def min_distance(C: LinearCode, cap_bits: Optional[int] = None) -> int:
    """Minimum Hamming weight over nonzero codewords (exhaustive)."""
    if C.k == 0:
        raise UsageError("zero-dimensional code has no nonzero codewords")
    best = C.n + 1
    for block in codeword_blocks(C, cap_bits):
        weights = np.bitwise_count(block[block != 0])
        if weights.size:
            best = min(best, int(weights.min()))
    return best


def weight_distribution(C: LinearCode, cap_bits: Optional[int] = None) -> List[int]:
    """A_w for w = 0..n."""
    counts = np.zeros(C.n + 1, dtype=np.int64)
    for block in codeword_blocks(C, cap_bits):
        counts += np.bincount(np.bitwise_count(block), minlength=C.n + 1)
    return counts.tolist()


def dual(C: LinearCode) -> LinearCode:
    name = f"dual({C.name})" if C.name else ""
    return LinearCode(C.pcheck, C.gen, is_cyclic=C.is_cyclic, name=name)


@log_performance("covering_weights", "codes")
def covering_weights(C: LinearCode, cap_bits: Optional[int] = None) -> List[Optional[int]]:
    """Per coordinate i: min weight of a codeword whose support contains i (None if none)."""
    best = np.full(C.n, C.n + 1, dtype=np.int64)
    one = np.uint64(1)
    for block in codeword_blocks(C, cap_bits):
        weights = np.bitwise_count(block).astype(np.int64)
        for i in range(C.n):
            covered = ((block >> np.uint64(i)) & one).astype(bool)
            if covered.any():
                best[i] = min(best[i], int(weights[covered].min()))
    return [int(w) if w <= C.n else None for w in best]


def covering_weight(C: LinearCode, i: int, cap_bits: Optional[int] = None) -> Optional[int]:
    """None means no codeword covers coordinate i."""
    if not (0 <= i < C.n):
        raise UsageError(f"coordinate {i} out of range for n = {C.n}")
    return covering_weights(C, cap_bits)[i]


def min_covering_codeword(C: LinearCode, i: int, cap_bits: Optional[int] = None) -> Optional[BitVector]:
    """A minimum-weight codeword covering i; ties → smallest packed value."""
    if not (0 <= i < C.n):
        raise UsageError(f"coordinate {i} out of range for n = {C.n}")
    bit = np.uint64(1) << np.uint64(i)
    found = None
    for block in codeword_blocks(C, cap_bits):
        covering = block[(block & bit) != 0]
        if not covering.size:
            continue
        weights = np.bitwise_count(covering)
        top = covering[weights == weights.min()]
        candidate = (int(weights.min()), int(top.min()))
        if found is None or candidate < found:
            found = candidate
    return None if found is None else BitVector.from_int(found[1], C.n)


# --- constructions ---
def cyclic_code(n: int, g: BinPolynomial, name: str = "") -> LinearCode:
    """Cyclic code generated by g(x); columns are x^i·g(x), pcheck from the reciprocal check polynomial."""
    if not polymod_divides(g, n):
        raise ConstructionError(f"g(x) = {g} does not divide x^{n} − 1")
    k = n - g.degree
    h, _ = divmod(x_n_minus_1(n), g)
    h_rec = h.reciprocal()
    gen = BitMatrix.from_columns([g.shifted(i).padded(n) for i in range(k)], n=n)
    pcheck = BitMatrix.from_columns([h_rec.shifted(j).padded(n) for j in range(n - k)], n=n)
    return LinearCode(gen, pcheck, is_cyclic=True, name=name or f"cyclic({n},{g})")


def hamming7() -> LinearCode:
    return cyclic_code(7, BinPolynomial.from_string("x^3+x+1"), name="hamming7")


def simplex7() -> LinearCode:
    return cyclic_code(7, BinPolynomial.from_string("x^4+x^2+x+1"), name="simplex7")


def repetition_code(n: int) -> LinearCode:
    return cyclic_code(n, BinPolynomial((1 << n) - 1), name=f"repetition{n}")


def even_weight_code(n: int) -> LinearCode:
    """Single-parity-check code."""
    return cyclic_code(n, BinPolynomial.from_string("x+1"), name=f"spc{n}")


def groupflip_matrix(n: int, groups: int) -> BitMatrix:
    if groups < 1 or n % groups != 0:
        raise ConstructionError(f"group count {groups} must divide n = {n}")
    size = n // groups
    if size < 2:
        raise ConstructionError(f"each group needs at least 2 cells (n/g = {size})")
    data = np.zeros((n, groups), dtype=np.uint8)
    for j in range(groups):
        data[j * size:(j + 1) * size, j] = 1
    return BitMatrix(data)


def two_group_code(n: int) -> LinearCode:
    """LRC whose parity-check matrix is the two-group block matrix."""
    return LinearCode.from_parity_check(groupflip_matrix(n, 2), name=f"twogroup{n}")


@dataclass
class CodeSpec:
    """
    Serializable code description.

    Linear constructions (explicit-G, explicit-H, cyclic) denote a code C; used as
    an additive code they give C0 = C with G0 = gen. Additive constructions
    (explicit-G0, flip, groupflip, from-lrc) denote G0 directly. `k` is the
    dimension of the denoted code: the code itself, or the LWC message length.
    """
    n: int
    k: Optional[int]
    construction: Dict
    name: str = ""

    ADDITIVE = ("explicit-G0", "flip", "groupflip", "from-lrc")
    LINEAR = ("explicit-G", "explicit-H", "cyclic")

    def __post_init__(self):
        kind = self.kind
        if kind not in self.ADDITIVE + self.LINEAR:
            raise UsageError(f"unknown construction {kind!r}")
        if kind == "groupflip":
            groups = int(self.construction.get("groups", 2))
            if groups < 1 or self.n % groups or self.n // groups < 2:
                raise ConstructionError(f"groupflip needs g | n and n/g ≥ 2 (n={self.n}, g={groups})")

    @property
    def kind(self) -> str:
        return self.construction.get("type", "")

    @property
    def is_additive(self) -> bool:
        return self.kind in self.ADDITIVE

    def linear_code(self) -> LinearCode:
        """C for linear constructions; C0 (column space of G0) for additive ones."""
        kind = self.kind
        c = self.construction
        if kind == "explicit-G":
            code = LinearCode.from_generator(BitMatrix(c["matrix"]), name=self.name)
        elif kind == "explicit-H":
            code = LinearCode.from_parity_check(BitMatrix(c["matrix"]), name=self.name)
        elif kind == "cyclic":
            code = cyclic_code(self.n, BinPolynomial.from_string(str(c["genpoly"])), name=self.name)
        else:
            return LinearCode.from_generator(self.g0(), name=self.name)
        self._check_k(code.k)
        return code

    def g0(self) -> BitMatrix:
        kind = self.kind
        c = self.construction
        if kind == "explicit-G0":
            matrix = BitMatrix(c["matrix"])
        elif kind == "flip":
            matrix = groupflip_matrix(self.n, 1)
        elif kind == "groupflip":
            matrix = groupflip_matrix(self.n, int(c.get("groups", 2)))
        elif kind == "from-lrc":
            matrix = CodeSpec.from_dict(c["lrc"]).linear_code().pcheck
        else:
            return self.linear_code().gen
        if matrix.rows != self.n:
            raise ConstructionError(f"G0 has {matrix.rows} rows, expected n = {self.n}")
        self._check_k(self.n - matrix.cols)
        return matrix

    def _check_k(self, actual: int):
        if self.k is not None and self.k != actual:
            raise ConstructionError(f"spec declares k = {self.k} but the construction gives k = {actual}")

    def to_dict(self) -> dict:
        out = {"n": self.n, "k": self.k, "construction": self.construction}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CodeSpec":
        try:
            return cls(n=int(data["n"]), k=data.get("k"), construction=dict(data["construction"]),
                       name=data.get("name", ""))
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"malformed code spec: {e}") from e


def flip_code(n: int) -> CodeSpec:
    """G0 = 1_n, k = n − 1."""
    if n < 2:
        raise ConstructionError(f"flip code needs n ≥ 2, got {n}")
    return CodeSpec(n=n, k=n - 1, construction={"type": "flip"}, name=f"flip{n}")


def groupflip_code(n: int, g: int) -> CodeSpec:
    """G0 block-diagonal with g all-ones columns of length n/g; k = n − g."""
    if g == 1:
        return flip_code(n)
    return CodeSpec(n=n, k=n - g, construction={"type": "groupflip", "groups": g}, name=f"groupflip{n}x{g}")


def _cyclic_spec(n: int, g: BinPolynomial, name: str) -> CodeSpec:
    return CodeSpec(n=n, k=n - g.degree, construction={"type": "cyclic", "genpoly": g.coeffs.to_string()}, name=name)


def _from_lrc(lrc: CodeSpec) -> CodeSpec:
    return CodeSpec(n=lrc.n, k=lrc.k, construction={"type": "from-lrc", "lrc": lrc.to_dict()},
                    name=f"{lrc.name}-lwc" if lrc.name else "")


def _two_group_spec(n: int) -> CodeSpec:
    return CodeSpec(n=n, k=n - 2, construction={"type": "explicit-H", "matrix": groupflip_matrix(n, 2).to_lists()},
                    name=f"twogroup{n}")


# 注册的常用码（CLI 可直接按名称引用）
STOCK_CODES = {
    r"flip(\d+)": lambda n: flip_code(int(n)),
    r"groupflip(\d+)(?:x(\d+))?": lambda n, g: groupflip_code(int(n), int(g or 2)),
    r"hamming7": lambda: _cyclic_spec(7, BinPolynomial.from_string("x^3+x+1"), "hamming7"),
    r"simplex7": lambda: _cyclic_spec(7, BinPolynomial.from_string("x^4+x^2+x+1"), "simplex7"),
    r"repetition(\d+)": lambda n: _cyclic_spec(int(n), BinPolynomial((1 << int(n)) - 1), f"repetition{n}"),
    r"(?:spc|evenweight)(\d+)": lambda n: _cyclic_spec(int(n), BinPolynomial.from_string("x+1"), f"spc{n}"),
    r"twogroup(\d+)": lambda n: _two_group_spec(int(n)),
    r"cyclic:(\d+):([0-9x^+]+)": lambda n, g: _cyclic_spec(int(n), BinPolynomial.from_string(g), f"cyclic:{n}:{g}"),
}


def stock_names() -> List[str]:
    return list(STOCK_CODES)


def parse_code_spec(text: str) -> CodeSpec:
    """
    Resolve a CLI code reference: a stock name (optionally suffixed ``-lwc`` to
    build the LWC from that code's parity-check matrix), a JSON file path, or
    inline JSON.
    """
    text = text.strip()
    if text.endswith("-lwc"):
        return _from_lrc(parse_code_spec(text[:-len("-lwc")]))
    for pattern, factory in STOCK_CODES.items():
        match = re.fullmatch(pattern, text)
        if match:
            return factory(*match.groups())
    if text.startswith("{"):
        try:
            return CodeSpec.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise UsageError(f"invalid inline code JSON: {e}") from e
    if os.path.isfile(text):
        with open(text, "r", encoding="utf-8") as f:
            try:
                return CodeSpec.from_dict(json.load(f))
            except json.JSONDecodeError as e:
                raise UsageError(f"invalid code file {text}: {e}") from e
    raise UsageError(f"unknown code {text!r}; stock codes: {', '.join(stock_names())}")
