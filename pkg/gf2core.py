"""
gf2core.py
- GF(2) 标量、向量、矩阵与多项式运算。

Conventions
-----------
Indexing is 0-based everywhere (the source notation is 1-based): coordinate 0
is the leftmost character of a bit string and the first row of a matrix.
Vectors are column vectors, so ``G0 @ p`` with ``G0`` of shape n×(n−k) yields a
length-n vector. Packed integers put coordinate i at bit i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from models import UsageError


def _as_bits(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    if arr.ndim != ndim:
        raise UsageError(f"expected a {ndim}-D 0/1 array, got shape {arr.shape}")
    if arr.size and ((arr < 0) | (arr > 1)).any():
        raise UsageError("entries must be 0 or 1")
    out = arr.astype(np.uint8)
    out.setflags(write=False)
    return out


class BitVector:
    """Immutable binary vector of fixed length."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[Sequence[int], np.ndarray]):
        self._bits = _as_bits(bits, 1)

    # --- constructors ---
    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        return cls(np.ones(n, dtype=np.uint8))

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        bits = np.zeros(n, dtype=np.uint8)
        bits[i] = 1
        return cls(bits)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise UsageError(f"bit string must contain only 0/1: {text!r}")
        return cls([int(ch) for ch in text])

    @classmethod
    def from_int(cls, value: int, n: int) -> "BitVector":
        return cls([(value >> i) & 1 for i in range(n)])

    # --- accessors ---
    @property
    def len(self) -> int:
        return int(self._bits.shape[0])

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return self.len

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BitVector(self._bits[i])
        return int(self._bits[i])

    def __iter__(self):
        return (int(b) for b in self._bits)

    def weight(self) -> int:
        return int(self._bits.sum())

    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self._bits))

    def complement(self) -> "BitVector":
        return BitVector(self._bits ^ 1)

    def take(self, positions: Sequence[int]) -> "BitVector":
        return BitVector(self._bits[list(positions)])

    def is_zero(self) -> bool:
        return not self._bits.any()

    # --- arithmetic ---
    def _check(self, other: "BitVector"):
        if not isinstance(other, BitVector):
            return NotImplemented
        if other.len != self.len:
            raise UsageError(f"length mismatch: {self.len} vs {other.len}")

    def __add__(self, other: "BitVector") -> "BitVector":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return BitVector(self._bits ^ other._bits)

    __sub__ = __add__
    __xor__ = __add__

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return int(np.bitwise_and(self._bits, other._bits).sum() & 1)

    def distance(self, other: "BitVector") -> int:
        return (self + other).weight()

    # --- conversions ---
    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def to_int(self) -> int:
        return sum(1 << int(i) for i in np.flatnonzero(self._bits))

    def to_list(self) -> List[int]:
        return [int(b) for b in self._bits]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.len == other.len and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((self.len, self._bits.tobytes()))

    def __lt__(self, other: "BitVector") -> bool:
        # 字典序：下标 0 最先比较
        return tuple(self) < tuple(other)

    def __repr__(self) -> str:
        return f"BitVector('{self.to_string()}')"


class BitMatrix:
    """Immutable binary matrix, row-major."""

    __slots__ = ("_data",)

    def __init__(self, data: Union[Sequence[Sequence[int]], np.ndarray]):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        self._data = _as_bits(arr, 2)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector], n: int = None) -> "BitMatrix":
        if not columns:
            return cls.zeros(n or 0, 0)
        return cls(np.stack([c.bits for c in columns], axis=1))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], n: int = None) -> "BitMatrix":
        if not rows:
            return cls.zeros(0, n or 0)
        return cls(np.stack([r.bits for r in rows], axis=0))

    @property
    def rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def cols(self) -> int:
        return int(self._data.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self._data.T)

    def row(self, i: int) -> BitVector:
        return BitVector(self._data[i])

    def column(self, j: int) -> BitVector:
        return BitVector(self._data[:, j])

    def columns(self) -> List[BitVector]:
        return [self.column(j) for j in range(self.cols)]

    def select_rows(self, positions: Sequence[int]) -> "BitMatrix":
        return BitMatrix(self._data[list(positions), :].reshape(len(positions), self.cols))

    def select_columns(self, positions: Sequence[int]) -> "BitMatrix":
        return BitMatrix(self._data[:, list(positions)].reshape(self.rows, len(positions)))

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise UsageError(f"row mismatch: {self.rows} vs {other.rows}")
        return BitMatrix(np.hstack([self._data, other._data]))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise UsageError(f"column mismatch: {self.cols} vs {other.cols}")
        return BitMatrix(np.vstack([self._data, other._data]))

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if other.len != self.cols:
                raise UsageError(f"shape mismatch: {self.shape} @ ({other.len},)")
            return BitVector((self._data.astype(np.int64) @ other.bits.astype(np.int64)) & 1)
        if isinstance(other, BitMatrix):
            if other.rows != self.cols:
                raise UsageError(f"shape mismatch: {self.shape} @ {other.shape}")
            return BitMatrix((self._data.astype(np.int64) @ other._data.astype(np.int64)) & 1)
        return NotImplemented

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch: {self.shape} vs {other.shape}")
        return BitMatrix(self._data ^ other._data)

    def is_zero(self) -> bool:
        return not self._data.any()

    def rank(self) -> int:
        return len(_row_reduce(self._data)[1])

    def rref(self) -> Tuple["BitMatrix", Tuple[int, ...]]:
        reduced, pivots = _row_reduce(self._data)
        return BitMatrix(reduced), tuple(pivots)

    def column_words(self) -> List[int]:
        """每列打包为整数，坐标 i 对应第 i 位。"""
        return [self.column(j).to_int() for j in range(self.cols)]

    def to_lists(self) -> List[List[int]]:
        return self._data.astype(int).tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        body = "; ".join("".join(str(int(b)) for b in r) for r in self._data)
        return f"BitMatrix({self.rows}x{self.cols}: {body})"


def _row_reduce(data: np.ndarray, n_pivot_cols: int = None) -> Tuple[np.ndarray, List[int]]:
    """Gauss–Jordan over GF(2) with XOR row operations.

    Pivots are searched in the first ``n_pivot_cols`` columns only; row
    operations still cover the full width (augmented systems).
    """
    R = np.array(data, dtype=np.uint8, copy=True)
    m, n = R.shape
    if n_pivot_cols is None:
        n_pivot_cols = n
    pivots: List[int] = []
    r = 0
    for col in range(n_pivot_cols):
        if r == m:
            break
        hits = np.flatnonzero(R[r:, col])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        others = R[:, col].astype(bool)
        others[r] = False
        R[others] ^= R[r]
        pivots.append(col)
        r += 1
    return R, pivots


def rref(M: BitMatrix) -> Tuple[BitMatrix, Tuple[int, ...]]:
    return M.rref()


def rank(M: BitMatrix) -> int:
    return M.rank()


@dataclass(frozen=True)
class Solution:
    particular: BitVector
    nullbasis: Tuple[BitVector, ...]

    @property
    def dimension(self) -> int:
        return len(self.nullbasis)


@dataclass(frozen=True)
class Inconsistent:
    """Rows of A whose sum is zero while the matching entries of b sum to one."""
    rows: Tuple[int, ...]


class PreparedSystem:
    """A·x = b for a fixed A and many right-hand sides.

    [A | I] is eliminated once; the identity block records the row operations,
    so each solve is one matrix-vector product plus a consistency check. The
    result is the same as eliminating [A | b | I] directly.
    """

    def __init__(self, A: BitMatrix):
        m, w = A.shape
        self.rows, self.cols = m, w
        R, pivots = _row_reduce(np.hstack([A.data, np.eye(m, dtype=np.uint8)]), n_pivot_cols=w)
        self.rank = len(pivots)
        self.pivots = np.array(pivots, dtype=np.intp)
        self._transform = R[:, w:].astype(np.int64)
        self.nullbasis: Tuple[BitVector, ...] = tuple(_null_basis(R[:self.rank, :w], pivots, w))

    def solve_bits(self, b: np.ndarray) -> Union[Solution, Inconsistent]:
        if b.shape[0] != self.rows:
            raise UsageError(f"solve: A has {self.rows} rows but b has length {b.shape[0]}")
        tb = (self._transform @ b.astype(np.int64)) & 1
        bad = np.flatnonzero(tb[self.rank:])
        if bad.size:
            certificate = self._transform[self.rank + int(bad[0])]
            return Inconsistent(rows=tuple(int(i) for i in np.flatnonzero(certificate)))
        particular = np.zeros(self.cols, dtype=np.uint8)
        particular[self.pivots] = tb[:self.rank]
        return Solution(particular=BitVector(particular), nullbasis=self.nullbasis)

    def solve(self, b: BitVector) -> Union[Solution, Inconsistent]:
        return self.solve_bits(b.bits)


def solve(A: BitMatrix, b: BitVector) -> Union[Solution, Inconsistent]:
    """Solve A·x = b over GF(2).

    Returns a particular solution plus a null-space basis of A, or
    ``Inconsistent`` carrying a certificate subset of rows.
    """
    if A.rows != b.len:
        raise UsageError(f"solve: A has {A.rows} rows but b has length {b.len}")
    return PreparedSystem(A).solve(b)


def _null_basis(reduced: np.ndarray, pivots: Sequence[int], w: int) -> List[BitVector]:
    pivot_set = set(pivots)
    basis = []
    for free in range(w):
        if free in pivot_set:
            continue
        v = np.zeros(w, dtype=np.uint8)
        v[free] = 1
        for r, col in enumerate(pivots):
            v[col] = reduced[r, free]
        basis.append(BitVector(v))
    return basis


def nullspace(A: BitMatrix) -> List[BitVector]:
    """Basis of {x : A·x = 0}; its size is cols − rank(A)."""
    R, pivots = _row_reduce(A.data)
    return _null_basis(R[:len(pivots)], pivots, A.cols)


def inverse(M: BitMatrix) -> BitMatrix:
    n = M.rows
    if M.cols != n:
        raise UsageError(f"inverse of non-square matrix {M.shape}")
    R, pivots = _row_reduce(np.hstack([M.data, np.eye(n, dtype=np.uint8)]), n_pivot_cols=n)
    if len(pivots) != n:
        raise UsageError("matrix is singular over GF(2)")
    return BitMatrix(R[:, n:])


def column_space_equal(A: BitMatrix, B: BitMatrix) -> bool:
    if A.rows != B.rows:
        return False
    ra, rb = A.rank(), B.rank()
    return ra == rb == A.hstack(B).rank()


# --- polynomials ---
def _poly_divmod(a: int, b: int) -> Tuple[int, int]:
    """GF(2)[x] long division on packed coefficients (bit i = x^i)."""
    if b == 0:
        raise UsageError("division by the zero polynomial")
    db = b.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def _poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


class BinPolynomial:
    """Polynomial over GF(2); coefficient of x^i at index i, stored normalized."""

    __slots__ = ("_value",)

    def __init__(self, coeffs: Union[BitVector, Sequence[int], int]):
        if isinstance(coeffs, int):
            if coeffs < 0:
                raise UsageError("negative packed polynomial")
            self._value = coeffs
        else:
            if not isinstance(coeffs, BitVector):
                coeffs = BitVector(coeffs)
            self._value = coeffs.to_int()

    @classmethod
    def from_string(cls, text: str) -> "BinPolynomial":
        """'1101' (coefficients low→high) or 'x^3+x+1'."""
        text = text.replace(" ", "").lower()
        if text and all(ch in "01" for ch in text):
            return cls(BitVector.from_string(text))
        value = 0
        for term in filter(None, text.split("+")):
            if term == "1":
                exp = 0
            elif term == "x":
                exp = 1
            elif term.startswith("x^") and term[2:].isdigit():
                exp = int(term[2:])
            else:
                raise UsageError(f"cannot parse polynomial term {term!r}")
            value ^= 1 << exp
        return cls(value)

    @property
    def value(self) -> int:
        return self._value

    @property
    def degree(self) -> int:
        return self._value.bit_length() - 1

    def is_zero(self) -> bool:
        return self._value == 0

    @property
    def coeffs(self) -> BitVector:
        return BitVector.from_int(self._value, max(self.degree + 1, 1))

    def padded(self, n: int) -> BitVector:
        if self.degree >= n:
            raise UsageError(f"degree {self.degree} does not fit length {n}")
        return BitVector.from_int(self._value, n)

    def reciprocal(self) -> "BinPolynomial":
        d = self.degree
        return BinPolynomial(sum(1 << (d - i) for i in range(d + 1) if (self._value >> i) & 1))

    def shifted(self, i: int) -> "BinPolynomial":
        return BinPolynomial(self._value << i)

    def __mul__(self, other: "BinPolynomial") -> "BinPolynomial":
        return BinPolynomial(_poly_mul(self._value, other._value))

    def __add__(self, other: "BinPolynomial") -> "BinPolynomial":
        return BinPolynomial(self._value ^ other._value)

    def __divmod__(self, other: "BinPolynomial") -> Tuple["BinPolynomial", "BinPolynomial"]:
        q, r = _poly_divmod(self._value, other._value)
        return BinPolynomial(q), BinPolynomial(r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinPolynomial):
            return NotImplemented
        return self._value == other._value

    def __hash__(self) -> int:
        return hash(self._value)

    def __str__(self) -> str:
        if self._value == 0:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self._value >> i) & 1:
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"BinPolynomial('{self}')"


def x_n_minus_1(n: int) -> BinPolynomial:
    return BinPolynomial((1 << n) | 1)


def polymod_divides(g: BinPolynomial, n: int) -> bool:
    """True iff g(x) divides x^n − 1 over GF(2)."""
    if g.is_zero():
        raise UsageError("generator polynomial is zero")
    if n < 1 or g.degree >= n:
        raise UsageError(f"need deg(g) < n, got deg {g.degree} with n = {n}")
    _, remainder = divmod(x_n_minus_1(n), g)
    return remainder.is_zero()
