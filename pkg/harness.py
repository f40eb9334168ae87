"""
harness.py
- 蒙特卡洛写入/重写代价仿真（耐久度与功耗的代理指标）。

Every trial draws its channel state and messages from generators seeded with
``seed + trial``, so trials are independent and a fixed seed reproduces the
CSV byte for byte. A trial is an initial write into all-zero cells followed by
``updates_per_trial`` rewrites; a masking failure ends the trial.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

import config
from codes import CodeSpec, parse_code_spec
from config import UpdateModel
from defectchan import ChannelState, DefectModel, inject, sample
from gf2core import BitVector
from logger import get_error_summary, get_logger, log_performance, reset_error_tracking, track_error
from lwc import AdditiveCode, build, encode_initial, encode_update
from models import CapacityError, CostReport, MaskingFailure, RunStatus, UsageError

logger = get_logger(__name__)


@dataclass
class SimConfig:
    code: CodeSpec
    beta: float = 0.0
    trials: int = config.DEFAULT_TRIALS
    updates_per_trial: int = config.DEFAULT_UPDATES_PER_TRIAL
    # 以下三项默认值取自用户设置（~/.lwclab），未设置时为 config 中的常量
    update_model: str = field(default_factory=lambda: config.get_setting("update_model"))
    radius: int = field(default_factory=lambda: config.get_setting("update_radius"))
    seed: int = field(default_factory=lambda: config.get_setting("seed"))
    forced_defects: Optional[int] = None     # 每次试验恰好注入 t 个缺陷
    fixed_state: Optional[str] = None        # 所有试验复用同一缺陷状态，如 "*1**"

    def validate(self, k: int, n: int):
        if self.trials < 1:
            raise UsageError(f"trials must be ≥ 1, got {self.trials}")
        if self.updates_per_trial < 0:
            raise UsageError(f"updates_per_trial must be ≥ 0, got {self.updates_per_trial}")
        if not (0.0 <= self.beta <= 1.0):
            raise UsageError(f"beta must lie in [0, 1], got {self.beta}")
        if self.update_model not in {m.value for m in UpdateModel}:
            raise UsageError(f"unknown update model {self.update_model!r}")
        if self.update_model == UpdateModel.HAMMING_BALL.value and not (1 <= self.radius <= k):
            raise UsageError(f"hamming-ball radius must satisfy 1 ≤ radius ≤ k = {k}, got {self.radius}")
        if self.forced_defects is not None and not (0 <= self.forced_defects <= n):
            raise UsageError(f"forced_defects must lie in [0, {n}]")
        if self.fixed_state is not None and self.forced_defects is not None:
            raise UsageError("fixed_state and forced_defects are mutually exclusive defect sources")
        if self.fixed_state is not None and len(self.fixed_state) != n:
            raise UsageError(f"fixed_state must have length n = {n}")

    def to_dict(self) -> dict:
        return {
            "code": self.code.to_dict(),
            "beta": self.beta,
            "trials": self.trials,
            "updates_per_trial": self.updates_per_trial,
            "update_model": self.update_model,
            "radius": self.radius,
            "seed": self.seed,
            "forced_defects": self.forced_defects,
            "fixed_state": self.fixed_state,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        data = dict(data)
        code = data.pop("code", None)
        if code is None:
            raise UsageError("simulation config needs a 'code'")
        spec = parse_code_spec(code) if isinstance(code, str) else CodeSpec.from_dict(code)
        model = data.pop("update_model", None) or config.get_setting("update_model")
        if isinstance(model, dict):
            # {"type": "hamming-ball", "radius": 2}
            if "radius" in model:
                data.setdefault("radius", model["radius"])
            model = model.get("type") or config.get_setting("update_model")
        known = {"beta", "trials", "updates_per_trial", "radius", "seed", "forced_defects", "fixed_state"}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown simulation config keys: {sorted(unknown)}")
        return cls(code=spec, update_model=model, **data)


def load_sim_config(path: str) -> SimConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return SimConfig.from_dict(json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read simulation config {path}: {e}") from e


@dataclass
class TrialRecord:
    trial: int
    state: str
    defect_count: int
    reports: List[CostReport] = field(default_factory=list)
    status: RunStatus = RunStatus.OK
    failed_step: Optional[int] = None


@dataclass
class SimResult:
    config: SimConfig
    trials: List[TrialRecord]
    cell_writes: List[int]
    violations: int
    r_star: Optional[int]
    errors: dict = field(default_factory=dict)

    @property
    def masking_failure_rate(self) -> float:
        failed = sum(1 for t in self.trials if t.status is RunStatus.MASKING_FAILURE)
        return failed / len(self.trials)

    def _costs(self, initial: bool) -> List[int]:
        out = []
        for t in self.trials:
            for step, report in enumerate(t.reports):
                if (step == 0) == initial:
                    out.append(report.cost)
        return out

    def summary(self) -> dict:
        writes = self._costs(initial=True)
        rewrites = self._costs(initial=False)
        return {
            "code": self.config.code.name or self.config.code.kind,
            "trials": len(self.trials),
            "r_star": self.r_star,
            "masking_failure_rate": self.masking_failure_rate,
            "mean_write_cost": float(np.mean(writes)) if writes else None,
            "max_write_cost": max(writes) if writes else None,
            "mean_rewrite_cost": float(np.mean(rewrites)) if rewrites else None,
            "max_rewrite_cost": max(rewrites) if rewrites else None,
            "cell_writes": self.cell_writes,
            "max_cell_writes": max(self.cell_writes) if self.cell_writes else 0,
            "bound_violations": self.violations,
            "errors": self.errors,
        }

    def rows(self):
        for t in self.trials:
            for step, report in enumerate(t.reports):
                yield [t.trial, step, t.state, report.cost, "" if report.bound is None else report.bound,
                       int(report.minimal), ";".join(str(i) for i in report.cells_touched), RunStatus.OK.value]
            if t.status is RunStatus.MASKING_FAILURE:
                yield [t.trial, t.failed_step, t.state, "", "", "", "", t.status.value]


def write_csv(result: SimResult, path: str):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(config.CSV_COLUMNS)
        writer.writerows(result.rows())


def _next_message(m: BitVector, cfg: SimConfig, rng: np.random.Generator) -> BitVector:
    k = m.len
    if cfg.update_model == UpdateModel.IID_UNIFORM.value:
        return BitVector(rng.integers(0, 2, size=k))
    weight = int(rng.integers(1, cfg.radius + 1))
    flips = np.zeros(k, dtype=np.uint8)
    flips[rng.choice(k, size=weight, replace=False)] = 1
    return BitVector(m.bits ^ flips)


def _trial_state(cfg: SimConfig, n: int, trial: int, rng: np.random.Generator) -> ChannelState:
    if cfg.fixed_state is not None:
        return ChannelState.from_string(cfg.fixed_state)
    if cfg.forced_defects is not None:
        return inject(n, cfg.forced_defects, rng)
    return sample(DefectModel(cfg.beta, seed=cfg.seed + trial), n, rng=rng)


def _run_trial(code: AdditiveCode, cfg: SimConfig, trial: int, cell_writes: np.ndarray) -> TrialRecord:
    rng = np.random.default_rng(cfg.seed + trial)
    state = _trial_state(cfg, code.n, trial, rng)
    record = TrialRecord(trial=trial, state=state.to_string(), defect_count=state.defect_count())

    m = BitVector(rng.integers(0, 2, size=code.k))
    step = 0
    try:
        enc = encode_initial(code, m, state)
        record.reports.append(enc.report)
        cell_writes[enc.report.cells_touched] += 1
        c = enc.codeword
        for step in range(1, cfg.updates_per_trial + 1):
            m = _next_message(m, cfg, rng)
            enc = encode_update(code, c, m, state)
            record.reports.append(enc.report)
            cell_writes[enc.report.cells_touched] += 1
            c = enc.codeword
    except MaskingFailure as e:
        record.status = RunStatus.MASKING_FAILURE
        record.failed_step = step
        logger.debug(f"trial {trial}: masking failure at step {step}: {e}")
    except CapacityError as e:
        raise CapacityError(f"trial {trial}: {e}", cap=e.cap) from e
    return record


@log_performance("simulation", "harness")
def run(cfg: SimConfig) -> SimResult:
    code = build(cfg.code.g0(), name=cfg.code.name)
    cfg.validate(code.k, code.n)
    reset_error_tracking()
    r_star = code.r_star_or_none()
    logger.info(f"simulating {code!r}: trials={cfg.trials}, updates={cfg.updates_per_trial}, "
                f"beta={cfg.beta}, seed={cfg.seed}")

    cell_writes = np.zeros(code.n, dtype=np.int64)
    trials = [_run_trial(code, cfg, trial, cell_writes) for trial in range(cfg.trials)]

    violations = 0
    for record in trials:
        if record.defect_count > 1:
            continue
        for step, report in enumerate(record.reports):
            if report.minimal and not report.within_bound:
                violations += 1
                track_error("BoundViolation",
                            f"trial {record.trial} step {step}: cost {report.cost} > bound {report.bound}")
    result = SimResult(config=cfg, trials=trials, cell_writes=cell_writes.tolist(),
                       violations=violations, r_star=r_star, errors=get_error_summary())
    logger.info(f"simulation finished: failure rate {result.masking_failure_rate:.4f}, violations {violations}")
    return result
