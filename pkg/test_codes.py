"""
线性码构造、穷举最小距离、对偶码与覆盖码重测试
"""

import numpy as np
import pytest

import config
from codes import (
    CodeSpec, LinearCode, codeword_blocks, covering_weight, covering_weights, cyclic_code, dual, even_weight_code,
    flip_code, groupflip_code, groupflip_matrix, hamming7, min_covering_codeword, min_distance,
    parse_code_spec, repetition_code, simplex7, weight_distribution,
)
from gf2core import BinPolynomial, BitMatrix, BitVector, nullspace
from models import CapacityError, ConstructionError, UsageError


def test_hamming7_is_cyclic_with_distance_3():
    C = hamming7()
    assert (C.n, C.k) == (7, 4)
    assert C.is_cyclic and C.shift_closed()
    assert min_distance(C) == 3
    assert weight_distribution(C) == [1, 0, 0, 7, 7, 0, 0, 1]


def test_simplex7_has_constant_weight_4():
    C = simplex7()
    assert (C.n, C.k) == (7, 3)
    assert weight_distribution(C) == [1, 0, 0, 0, 7, 0, 0, 0]


def test_dual_of_hamming_is_simplex():
    D = dual(hamming7())
    assert (D.n, D.k) == (7, 3)
    assert min_distance(D) == 4
    assert weight_distribution(D) == weight_distribution(simplex7())


@pytest.mark.parametrize("C", [hamming7(), simplex7(), even_weight_code(6), repetition_code(5)])
def test_dual_distance_two_ways(C):
    direct = min_distance(dual(C))
    via_nullspace = min_distance(LinearCode.from_generator(BitMatrix.from_columns(nullspace(C.gen.T), n=C.n)))
    assert direct == via_nullspace


@pytest.mark.parametrize("C", [hamming7(), simplex7(), even_weight_code(5), repetition_code(4)])
def test_cyclic_covering_weight_equals_min_distance(C):
    d = min_distance(C)
    assert covering_weights(C) == [d] * C.n
    for i in range(C.n):
        assert covering_weight(C, i) >= d


def test_enumerated_codewords_are_shift_closed():
    C = hamming7()
    for m in range(1 << C.k):
        c = C.encode(BitVector.from_int(m, C.k))
        shifted = BitVector(list(c)[-1:] + list(c)[:-1])
        assert C.contains(shifted)


def test_enumeration_order_does_not_matter(monkeypatch):
    C = simplex7()
    expected = weight_distribution(C)
    # 只展开 1 个生成元，其余走 Gray 码步进
    monkeypatch.setattr(config, "ENUMERATION_BLOCK_BITS", 1)
    assert weight_distribution(C) == expected
    assert min_distance(C) == 4


def test_cyclic_code_rejects_non_divisor():
    with pytest.raises(ConstructionError):
        cyclic_code(7, BinPolynomial.from_string("x^2+x+1"))


def test_min_distance_capacity_and_zero_dimension():
    with pytest.raises(CapacityError) as exc:
        min_distance(hamming7(), cap_bits=2)
    assert exc.value.cap == 2
    with pytest.raises(UsageError):
        min_distance(LinearCode.from_parity_check(BitMatrix.identity(3)))


def test_uncovered_coordinate_is_none():
    C = LinearCode.from_generator(BitMatrix([[1], [1], [0]]))
    assert covering_weights(C) == [2, 2, None]
    assert min_covering_codeword(C, 2) is None


def test_min_covering_codeword():
    h = min_covering_codeword(dual(hamming7()), 0)
    assert h.weight() == 4
    assert h[0] == 1


def test_groupflip_matrix_blocks():
    assert groupflip_matrix(6, 2).to_lists() == [[1, 0], [1, 0], [1, 0], [0, 1], [0, 1], [0, 1]]
    with pytest.raises(ConstructionError):
        groupflip_matrix(6, 4)


@pytest.mark.parametrize("text, n, k, kind", [
    ("flip4", 4, 3, "flip"),
    ("groupflip6", 6, 4, "groupflip"),
    ("groupflip8x4", 8, 4, "groupflip"),
    ("hamming7", 7, 4, "cyclic"),
    ("simplex7", 7, 3, "cyclic"),
    ("spc5", 5, 4, "cyclic"),
    ("repetition4", 4, 1, "cyclic"),
    ("twogroup6", 6, 4, "explicit-H"),
    ("cyclic:7:x^3+x+1", 7, 4, "cyclic"),
    ("hamming7-lwc", 7, 4, "from-lrc"),
])
def test_parse_stock_codes(text, n, k, kind):
    spec = parse_code_spec(text)
    assert (spec.n, spec.k, spec.kind) == (n, k, kind)


def test_parse_inline_json_and_file(tmp_path):
    text = '{"n": 4, "k": 2, "construction": {"type": "explicit-G0", "matrix": [[1,0],[1,0],[0,1],[0,1]]}}'
    spec = parse_code_spec(text)
    assert spec.g0() == groupflip_matrix(4, 2)

    path = tmp_path / "code.json"
    path.write_text(text, encoding="utf-8")
    assert parse_code_spec(str(path)).to_dict() == spec.to_dict()


def test_parse_errors():
    with pytest.raises(UsageError):
        parse_code_spec("turbo9")
    with pytest.raises(UsageError):
        parse_code_spec("{not json")
    with pytest.raises(ConstructionError):
        parse_code_spec("groupflip6x4")


def test_declared_k_must_match():
    spec = CodeSpec(n=4, k=3, construction={"type": "explicit-G0", "matrix": [[1, 0], [1, 0], [0, 1], [0, 1]]})
    with pytest.raises(ConstructionError):
        spec.g0()


def test_two_group_parity_check_equals_groupflip_g0():
    lrc = parse_code_spec("twogroup6").linear_code()
    assert lrc.pcheck == groupflip_matrix(6, 2)
    assert parse_code_spec("twogroup6-lwc").g0() == groupflip_code(6, 2).g0()


def test_flip_and_groupflip_helpers():
    assert flip_code(5).g0().to_lists() == [[1]] * 5
    assert groupflip_code(6, 1).to_dict() == flip_code(6).to_dict()
    assert groupflip_code(6, 3).k == 3


def codeword_set(C):
    return set(np.concatenate(list(codeword_blocks(C))).tolist())


def random_code(rng, n, k):
    while True:
        gen = BitMatrix(rng.integers(0, 2, size=(n, k)))
        if gen.rank() == k:
            return LinearCode.from_generator(gen)


def test_double_dual_has_same_codewords():
    rng = np.random.default_rng(21)
    for _ in range(30):
        n = int(rng.integers(2, 11))
        C = random_code(rng, n, int(rng.integers(1, n)))
        DD = dual(dual(C))
        assert DD.k == C.k
        assert codeword_set(DD) == codeword_set(C)
