from dataclasses import dataclass, field, asdict
from typing import List, Optional, Tuple
from enum import Enum


# === Exceptions ===
class LwcError(Exception):
    """Base class of all domain errors."""
    exit_code = 1


class UsageError(LwcError, ValueError):
    """Dimension mismatch, out-of-range parameter, malformed bit string."""
    exit_code = 2


class ConstructionError(LwcError):
    """A code cannot be built from the given matrices or polynomial."""


class CapacityError(LwcError):
    """An exhaustive enumeration would exceed its configured cap."""

    def __init__(self, message: str, cap: Optional[int] = None):
        super().__init__(message)
        self.cap = cap


class MaskingFailure(LwcError):
    """No parity vector masks the defects; `defects` is an unsatisfiable subset."""

    def __init__(self, defects: Tuple[int, ...], message: str = ""):
        self.defects = tuple(int(i) for i in defects)
        super().__init__(message or f"cannot mask stuck-at defects at {list(self.defects)}")

    def to_dict(self) -> dict:
        return {"masking_failure": True, "unsatisfiable_defects": list(self.defects)}


class UnrepairableError(LwcError):
    """No dual codeword covers the erased coordinate."""


class RunStatus(str, Enum):
    OK = "ok"
    MASKING_FAILURE = "masking-failure"


# === Reports ===
@dataclass
class CostReport:
    """
    Cost of one write operation.
    write_cost is set for initial writes (cells driven from the all-zero state),
    rewrite_cost for updates (cells whose state changes).
    """
    write_cost: Optional[int] = None
    rewrite_cost: Optional[int] = None
    bound: Optional[int] = None            # 单缺陷时的代价上界，否则为 None
    cells_touched: List[int] = field(default_factory=list)
    minimal: bool = True                   # 是否经过穷举陪集得到最小代价

    @property
    def cost(self) -> int:
        return self.rewrite_cost if self.rewrite_cost is not None else self.write_cost

    @property
    def within_bound(self) -> bool:
        return self.bound is None or self.cost <= self.bound

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LwcAnalysis:
    n: int
    k: int
    d_star: int
    locality: List[Optional[int]]          # None: no C0 codeword covers the coordinate
    r_star: Optional[int]
    bound: Optional[int]
    optimal: bool
    info_positions: List[int] = field(default_factory=list)
    parity_positions: List[int] = field(default_factory=list)

    @property
    def info_locality(self) -> Optional[int]:
        return _max_or_none(self.locality[i] for i in self.info_positions)

    @property
    def parity_locality(self) -> Optional[int]:
        return _max_or_none(self.locality[i] for i in self.parity_positions)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["info_locality"] = self.info_locality
        out["parity_locality"] = self.parity_locality
        return out


@dataclass
class LrcProfile:
    n: int
    k: int
    d: int
    d_dual: int
    repair_locality: List[Optional[int]]
    r: Optional[int]
    bound: Optional[int]
    optimal: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class DualityReport:
    lrc: LrcProfile
    lwc: LwcAnalysis
    is_cyclic: bool
    identities_hold: bool
    roles_hold: bool                       # G_LRCᵀ·G0 = 0，译码矩阵与 G_LRCᵀ 行空间一致

    @property
    def guaranteed(self) -> bool:
        return self.is_cyclic

    def to_dict(self) -> dict:
        return {
            "lrc": {
                "n": self.lrc.n,
                "k": self.lrc.k,
                "d": self.lrc.d,
                "d_dual": self.lrc.d_dual,
                "r": self.lrc.r,
                "bound": self.lrc.bound,
                "optimal": self.lrc.optimal,
            },
            "lwc": {
                "d_star": self.lwc.d_star,
                "r_star": self.lwc.r_star,
                "bound": self.lwc.bound,
                "optimal": self.lwc.optimal,
            },
            "identities_hold": self.identities_hold,
            "identities_guaranteed": self.guaranteed,
            "roles_hold": self.roles_hold,
        }


def _max_or_none(values) -> Optional[int]:
    values = list(values)
    if not values or any(v is None for v in values):
        return None
    return max(values)
