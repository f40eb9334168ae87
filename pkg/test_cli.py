import json

import pytest

import main


@pytest.fixture
def cli(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def invoke(*argv):
        code = main.main(["--log-dir", str(tmp_path / "logs"), *argv])
        out = capsys.readouterr().out
        return code, (json.loads(out) if out.strip() else None)

    return invoke


def test_encode_flip4(cli):
    code, out = cli("encode", "--code", "flip4", "--msg", "101", "--state", "*1**")
    assert code == 0
    assert out["success"] and out["status"] == "ok"
    assert out["word"] == "0101"
    assert out["write_cost"] == 1
    assert out["minimal"] is True


def test_encode_masking_failure_is_data(cli):
    code, out = cli("encode", "--code", "flip4", "--msg", "100", "--state", "00**")
    assert code == 0
    assert out["status"] == "masking-failure"
    assert sorted(out["unsatisfiable_defects"]) == [0, 1]


def test_update_and_decode(cli):
    code, out = cli("update", "--code", "groupflip6", "--prev", "000000", "--msg", "1000", "--state", "0*****")
    assert code == 0
    assert (out["word"], out["rewrite_cost"], out["bound"]) == ("011000", 2, 2)

    code, out = cli("decode", "--code", "groupflip6", "--word", "011000")
    assert (code, out["message"]) == (0, "1000")


def test_analyze_hamming_lwc(cli):
    code, out = cli("analyze", "--code", "hamming7-lwc")
    assert code == 0
    assert (out["d_star"], out["r_star"], out["optimal"]) == (3, 3, True)
    assert out["locality"] == [3] * 7
    assert out["parity_positions"] == [4, 5, 6]


def test_weights_simplex(cli):
    code, out = cli("weights", "--code", "simplex7")
    assert code == 0
    assert out["weights"] == {"0": 1, "4": 7}


def test_duality_and_repair(cli):
    code, out = cli("duality", "--lrc", "hamming7")
    assert code == 0
    assert out["identities_hold"] and out["identities_guaranteed"] and out["roles_hold"]
    assert out["lrc"]["r"] == 3

    code, out = cli("repair", "--lrc", "spc4", "--observed", "1?01")
    assert (code, out["value"], out["access_count"]) == (0, 0, 3)


def test_bounds(cli):
    code, out = cli("bounds", "--n", "7", "--k", "4", "--r", "3")
    assert (code, out["d_max"]) == (0, 3)
    code, out = cli("bounds", "--kuznetsov", "--n", "8", "--t", "1")
    assert (code, out["lower"], out["upper"]) == (0, 5, 7)


@pytest.mark.parametrize("argv", [
    ("encode", "--code", "flip4", "--msg", "10a", "--state", "****"),
    ("encode", "--code", "flip4", "--msg", "10", "--state", "****"),
    ("analyze", "--code", "turbo9"),
    ("bounds", "--n", "7", "--k", "4"),
])
def test_usage_errors_exit_2(cli, argv):
    code, out = cli(*argv)
    assert code == 2
    assert out["success"] is False


def test_argparse_errors_exit_2(cli):
    code, out = cli("encode", "--code", "flip4")
    assert code == 2 and out is None


def test_construction_error_exits_1(cli):
    code, out = cli("analyze", "--code", "cyclic:7:x^2+x+1")
    assert code == 1
    assert out["error_type"] == "ConstructionError"


def test_simulate_is_deterministic(cli, tmp_path):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"code": "hamming7-lwc", "beta": 0.15, "trials": 200, "seed": 7}), encoding="utf-8")

    code, first = cli("simulate", "--config", str(cfg), "--out", str(tmp_path / "a.csv"))
    assert code == 0
    code, second = cli("simulate", "--config", str(cfg), "--out", str(tmp_path / "b.csv"))
    assert code == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert first["masking_failure_rate"] == second["masking_failure_rate"]
    assert first["r_star"] == 3


def test_simulate_default_output_name(cli, tmp_path):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"code": "flip4", "trials": 5}), encoding="utf-8")
    code, out = cli("simulate", "--config", str(cfg), "--out", str(tmp_path))
    assert code == 0
    assert out["csv"].endswith(".csv")
    assert (tmp_path / out["csv"]).exists()


def test_config_persists_settings(cli, tmp_path):
    path = tmp_path / "settings" / "lwclab.json"
    code, out = cli("config", "--path", str(path), "--set", "coset_search_cap_bits=12", "--set", "seed=7")
    assert code == 0 and out["saved"]
    assert out["settings"]["coset_search_cap_bits"] == 12
    assert out["settings"]["state_enumeration_cap"] == 2 ** 20
    assert json.loads(path.read_text(encoding="utf-8")) == {"coset_search_cap_bits": 12, "seed": 7}

    code, out = cli("config", "--path", str(path))
    assert code == 0 and not out["saved"]
    assert out["settings"]["seed"] == 7


@pytest.mark.parametrize("assignment", ["turbo=1", "seed", "update_radius=-1", "update_model=walk"])
def test_config_rejects_bad_settings(cli, tmp_path, assignment):
    path = tmp_path / "lwclab.json"
    code, out = cli("config", "--path", str(path), "--set", assignment)
    assert code == 2 and out["success"] is False
    assert not path.exists()
