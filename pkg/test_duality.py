"""
LRC ↔ LWC 对偶测试：(d★, r★) = (d, d^⊥ − 1)
"""

import pytest

from codes import LinearCode, dual, even_weight_code, hamming7, parse_code_spec, repetition_code, simplex7
from duality import lwc_from_lrc, parse_erased, repair_locality, repair_symbol, verify_duality
from gf2core import BitMatrix, BitVector, column_space_equal
from logger import get_error_summary
from models import UnrepairableError, UsageError


CYCLIC_LRCS = [hamming7(), simplex7(), repetition_code(4)] + [even_weight_code(n) for n in range(2, 9)]


def test_hamming_repair_locality():
    profile = repair_locality(hamming7())
    assert (profile.d, profile.d_dual, profile.r) == (3, 4, 3)
    assert profile.repair_locality == [3] * 7
    assert profile.bound == 3 and profile.optimal


@pytest.mark.parametrize("C", CYCLIC_LRCS, ids=lambda C: C.name)
def test_duality_identities_for_cyclic_codes(C):
    report = verify_duality(C)
    assert report.is_cyclic and report.guaranteed
    assert report.identities_hold
    assert report.roles_hold
    assert (report.lwc.d_star, report.lwc.r_star) == (report.lrc.d, report.lrc.d_dual - 1)


def test_hamming_optimal_on_both_sides():
    report = verify_duality(hamming7())
    out = report.to_dict()
    assert out["lrc"]["optimal"] and out["lwc"]["optimal"]
    assert out["lrc"]["bound"] == out["lwc"]["bound"] == 3
    assert (out["lwc"]["d_star"], out["lwc"]["r_star"]) == (3, 3)


def test_simplex_as_lrc():
    report = verify_duality(simplex7())
    assert (report.lrc.d, report.lrc.d_dual) == (4, 3)
    assert (report.lwc.d_star, report.lwc.r_star) == (4, 2)
    assert report.lwc.bound == 4 and report.lwc.optimal


@pytest.mark.parametrize("n", range(3, 9))
def test_spc_gives_flip_code(n):
    code = lwc_from_lrc(even_weight_code(n))
    assert code.k == n - 1
    assert code.g0.to_lists() == [[1]] * n
    a = code.analysis()
    assert (a.d_star, a.r_star) == (2, n - 1)


@pytest.mark.parametrize("C", [hamming7(), simplex7(), repetition_code(5)], ids=lambda C: C.name)
def test_lwc_c0_is_dual_of_lrc(C):
    code = lwc_from_lrc(C)
    assert column_space_equal(code.c0.gen, dual(C).gen)


def test_two_group_code_is_measured_not_guaranteed():
    C = parse_code_spec("twogroup6").linear_code()
    report = verify_duality(C)
    assert not report.guaranteed
    assert report.to_dict()["identities_guaranteed"] is False
    assert (report.lwc.d_star, report.lwc.r_star) == (2, 2)
    assert report.identities_hold
    assert get_error_summary()["warning_types"].get("DualityNotGuaranteed") == 1


@pytest.mark.parametrize("i", range(7))
def test_repair_erased_symbol(i):
    C = hamming7()
    r = repair_locality(C).r
    c = C.encode(BitVector.from_string("1011"))
    observed = [None if j == i else c[j] for j in range(C.n)]
    repair = repair_symbol(C, observed)
    assert repair.position == i
    assert repair.value == c[i]
    assert i not in repair.accessed
    assert len(repair.accessed) <= r


def test_repair_from_text():
    C = even_weight_code(4)
    assert parse_erased("1?01") == [1, None, 0, 1]
    assert repair_symbol(C, "1?01").value == 0
    assert repair_symbol(C, "1?00").value == 1


def test_repair_errors():
    C = even_weight_code(4)
    with pytest.raises(UsageError):
        repair_symbol(C, "1??1")
    with pytest.raises(UsageError):
        repair_symbol(C, "1?0")
    with pytest.raises(UsageError):
        parse_erased("1x01")
    # 第 2 位不在任何对偶码字的支撑中
    lonely = LinearCode.from_generator(BitMatrix([[1, 0], [1, 0], [0, 1]]))
    with pytest.raises(UnrepairableError):
        repair_symbol(lonely, "11?")
