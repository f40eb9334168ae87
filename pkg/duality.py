"""
duality.py
- LRC 与 LWC 的对偶：用 LRC 的校验矩阵作为 G0 构造 LWC，计算 LRC 侧修复局部性，
  并独立地核对 (d★, r★) = (d, d^⊥ − 1)。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from codes import LinearCode, covering_weights, dual, min_covering_codeword, min_distance
from logger import get_logger, log_performance, track_warning
from lwc import AdditiveCode, analyze, build, singleton_bound
from models import DualityReport, LrcProfile, UnrepairableError, UsageError

logger = get_logger(__name__)

ERASED_CHAR = "?"


@log_performance("repair_locality", "duality")
def repair_locality(C: LinearCode, cap_bits: Optional[int] = None) -> LrcProfile:
    d = min_distance(C, cap_bits=cap_bits)
    C_dual = dual(C)
    d_dual = min_distance(C_dual, cap_bits=cap_bits)
    locality = [None if w is None else w - 1 for w in covering_weights(C_dual, cap_bits=cap_bits)]
    r = None if any(x is None for x in locality) else max(locality)
    bound = singleton_bound(C.n, C.k, r) if r is not None and 1 <= r <= C.k else None
    return LrcProfile(
        n=C.n,
        k=C.k,
        d=d,
        d_dual=d_dual,
        repair_locality=locality,
        r=r,
        bound=bound,
        optimal=bound is not None and d == bound,
    )


def parse_erased(text: str) -> List[Optional[int]]:
    """'1?01' → [1, None, 0, 1]."""
    out: List[Optional[int]] = []
    for ch in text.strip():
        if ch == ERASED_CHAR:
            out.append(None)
        elif ch in "01":
            out.append(int(ch))
        else:
            raise UsageError(f"observed word must use 0, 1 or '{ERASED_CHAR}': {text!r}")
    return out


@dataclass(frozen=True)
class Repair:
    position: int
    value: int
    accessed: Tuple[int, ...]


def repair_symbol(C: LinearCode, observed: Union[str, Sequence[Optional[int]]],
                  cap_bits: Optional[int] = None) -> Repair:
    """Recover the single erased symbol from a minimum-weight covering dual codeword."""
    if isinstance(observed, str):
        observed = parse_erased(observed)
    if len(observed) != C.n:
        raise UsageError(f"observed length {len(observed)} ≠ n = {C.n}")
    erased = [i for i, v in enumerate(observed) if v is None]
    if len(erased) != 1:
        raise UsageError(f"exactly one erased coordinate is supported, got {len(erased)}")
    i = erased[0]
    h = min_covering_codeword(dual(C), i, cap_bits=cap_bits)
    if h is None:
        raise UnrepairableError(f"no dual codeword covers coordinate {i}")
    accessed = tuple(j for j in h.support() if j != i)
    value = sum(observed[j] for j in accessed) & 1
    logger.debug(f"repaired c_{i} = {value} from {list(accessed)}")
    return Repair(position=i, value=value, accessed=accessed)


def lwc_from_lrc(C_lrc: LinearCode) -> AdditiveCode:
    """G0 = H_LRC."""
    name = f"{C_lrc.name}-lwc" if C_lrc.name else ""
    return build(C_lrc.pcheck, name=name)


def verify_duality(C_lrc: LinearCode, cap_bits: Optional[int] = None) -> DualityReport:
    lrc = repair_locality(C_lrc, cap_bits=cap_bits)
    code = lwc_from_lrc(C_lrc)
    lwc = analyze(code, cap_bits=cap_bits)

    identities_hold = (
        lwc.d_star == lrc.d
        and lwc.r_star is not None
        and lwc.r_star == lrc.d_dual - 1
        and lrc.r == lrc.d_dual - 1
    )
    # 对偶表中的角色互换：LRC 的生成矩阵即 LWC 的译码矩阵（相差信息位的基变换）
    stacked = code.decoder.vstack(C_lrc.gen.T)
    roles_hold = (C_lrc.gen.T @ code.g0).is_zero() and stacked.rank() == code.k

    if not C_lrc.is_cyclic:
        track_warning("DualityNotGuaranteed",
                      f"{C_lrc!r} is not cyclic; (d★, r★) = (d, d^⊥ − 1) is measured, not guaranteed")
    elif not identities_hold:
        logger.error(f"duality identities fail for cyclic {C_lrc!r}: lrc={lrc}, lwc={lwc}")
    return DualityReport(lrc=lrc, lwc=lwc, is_cyclic=C_lrc.is_cyclic,
                         identities_hold=identities_hold, roles_hold=roles_hold)
