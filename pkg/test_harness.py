"""
仿真器测试：掩蔽失败率与穷举结果一致、固定种子可复现、单元写入计数一致
"""

import csv
import time

import pytest
from scipy import stats

import config
from codes import parse_code_spec
from defectchan import enumerate_states
from gf2core import BitVector
from harness import SimConfig, load_sim_config, run, write_csv
from lwc import build, encode_initial
from models import MaskingFailure, RunStatus, UsageError


def make_config(code="hamming7-lwc", **kwargs) -> SimConfig:
    return SimConfig(code=parse_code_spec(code), **kwargs)


def exact_failure_fraction(text: str, t: int) -> float:
    spec = parse_code_spec(text)
    code = build(spec.g0())
    failed = total = 0
    for s in enumerate_states(code.n, t):
        for v in range(1 << code.k):
            total += 1
            try:
                encode_initial(code, BitVector.from_int(v, code.k), s)
            except MaskingFailure:
                failed += 1
    return failed / total


def test_defect_free_channel():
    result = run(make_config("flip6", beta=0.0, trials=50, updates_per_trial=5))
    assert result.masking_failure_rate == 0
    for trial in result.trials:
        assert trial.status is RunStatus.OK
        # 半径 1 的更新每次只改一位消息，无缺陷时只改一个单元
        assert [r.rewrite_cost for r in trial.reports[1:]] == [1] * 5


def test_hamming_ball_radius_caps_defect_free_rewrites():
    result = run(make_config("hamming7-lwc", beta=0.0, trials=30, updates_per_trial=6, radius=2))
    costs = [r.rewrite_cost for t in result.trials for r in t.reports[1:]]
    assert set(costs) <= {1, 2}


def test_single_defect_trials_respect_rewrite_bound():
    result = run(make_config("flip8", forced_defects=1, trials=2000, updates_per_trial=4, seed=11))
    assert result.violations == 0
    assert result.r_star == 7
    for trial in result.trials:
        for report in trial.reports:
            assert report.bound is not None
            assert report.cost <= report.bound


def test_exact_failure_fraction_for_three_defects():
    assert exact_failure_fraction("hamming7-lwc", 3) == pytest.approx(0.1)


def test_failure_rate_matches_exhaustive_oracle():
    trials = 100_000
    p = exact_failure_fraction("hamming7-lwc", 3)
    start = time.perf_counter()
    result = run(make_config("hamming7-lwc", forced_defects=3, trials=trials, updates_per_trial=0, seed=5))
    assert time.perf_counter() - start < 60
    failures = round(result.masking_failure_rate * trials)
    low, high = stats.binom.interval(0.99, trials, p)
    assert low <= failures <= high


def test_failure_ends_trial():
    # m0 ≠ m1 时两个卡 0 单元要求的 p 矛盾，每次写入各有 1/2 概率失败
    result = run(make_config("flip4", fixed_state="00**", trials=200, updates_per_trial=1,
                             update_model="iid-uniform"))
    for trial in result.trials:
        if trial.status is RunStatus.MASKING_FAILURE:
            assert len(trial.reports) == trial.failed_step
    assert 0 < result.masking_failure_rate < 1


def test_stuck_cells_are_never_written():
    state = "*1**0**"
    result = run(make_config("hamming7-lwc", fixed_state=state, trials=200, updates_per_trial=5, seed=3))
    for i, ch in enumerate(state):
        if ch != "*":
            assert result.cell_writes[i] == 0
    for trial in result.trials:
        assert sum(len(r.cells_touched) for r in trial.reports) == sum(r.cost for r in trial.reports)


def test_fixed_seed_gives_identical_csv(tmp_path):
    cfg = make_config("groupflip6", beta=0.2, trials=300, updates_per_trial=4, seed=99)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run(cfg), str(a))
    write_csv(run(cfg), str(b))
    assert a.read_bytes() == b.read_bytes()

    cfg.seed = 100
    c = tmp_path / "c.csv"
    write_csv(run(cfg), str(c))
    assert c.read_bytes() != a.read_bytes()


def test_csv_layout(tmp_path):
    result = run(make_config("flip4", fixed_state="00**", trials=10, updates_per_trial=2, seed=1))
    path = tmp_path / "out.csv"
    write_csv(result, str(path))
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == config.CSV_COLUMNS
    statuses = {row[-1] for row in rows[1:]}
    assert statuses <= {RunStatus.OK.value, RunStatus.MASKING_FAILURE.value}
    assert all(row[2] == "00**" for row in rows[1:])


def test_summary_fields():
    summary = run(make_config("groupflip6", beta=0.1, trials=100, seed=4)).summary()
    assert summary["trials"] == 100
    assert summary["r_star"] == 2
    assert len(summary["cell_writes"]) == 6
    assert summary["max_cell_writes"] == max(summary["cell_writes"])


def test_config_validation():
    with pytest.raises(UsageError):
        run(make_config("flip4", trials=0))
    with pytest.raises(UsageError):
        run(make_config("flip4", radius=4))
    with pytest.raises(UsageError):
        run(make_config("flip4", update_model="random-walk"))
    with pytest.raises(UsageError):
        run(make_config("flip4", fixed_state="***"))
    with pytest.raises(UsageError):
        run(make_config("flip4", fixed_state="*1**", forced_defects=2))
    with pytest.raises(UsageError):
        SimConfig.from_dict({"code": "flip4", "betta": 0.1})
    with pytest.raises(UsageError):
        SimConfig.from_dict({"beta": 0.1})


def test_load_config_file(tmp_path):
    path = tmp_path / "sim.json"
    path.write_text('{"code": "groupflip6", "beta": 0.05, "trials": 10, '
                    '"update_model": {"type": "hamming-ball", "radius": 2}}', encoding="utf-8")
    cfg = load_sim_config(str(path))
    assert cfg.radius == 2
    assert cfg.update_model == "hamming-ball"
    assert cfg.code.name == "groupflip6x2"
    assert SimConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()

    with pytest.raises(UsageError):
        load_sim_config(str(tmp_path / "missing.json"))


def test_defaults_follow_user_settings():
    config._settings_cache = config.apply_defaults({"seed": 7, "update_radius": 3, "update_model": "iid-uniform"})
    for cfg in (make_config("flip6"), SimConfig.from_dict({"code": "flip6"})):
        assert (cfg.seed, cfg.radius, cfg.update_model) == (7, 3, "iid-uniform")
    explicit = SimConfig.from_dict({"code": "flip6", "seed": 1, "update_model": {"type": "hamming-ball"}})
    assert (explicit.seed, explicit.radius, explicit.update_model) == (1, 3, "hamming-ball")
