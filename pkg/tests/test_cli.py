import csv
import io
import json
import subprocess
import sys

import pytest

from gapgreedy.cli import ExperimentConfig, ConfigError, main, parse_sequence


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_presets_list(capsys):
    code, out, _ = run(capsys, "presets", "list")
    assert code == 0
    for name in ("l2", "oikhberg-small", "lacunary-small", "mixedpq-paper", "additivegap-small"):
        assert name in out


@pytest.mark.parametrize("preset, vector, expected", [
    ("l2", [3, 4], "5.00000000000"),
    ("oikhberg-small", [1, 1, 1, 1], "4.00000000000"),
    ("l2", [], "0.00000000000"),
    ("lacunary-small", {"entries": {"3": -5}, "dim": 3}, "5.00000000000"),
])
def test_eval(capsys, tmp_path, preset, vector, expected):
    code, out, _ = run(capsys, "eval", write(tmp_path, "v.json", vector), "--preset", preset)
    assert code == 0 and out.strip() == expected


def test_eval_reports_json_position(capsys, tmp_path):
    code, _, err = run(capsys, "eval", write(tmp_path, "v.json", "[1,\n 2,,]"), "--preset", "l2")
    assert code == 2 and "line 2" in err


def test_eval_schema_errors(capsys, tmp_path):
    assert run(capsys, "eval", write(tmp_path, "v.json", ["a"]), "--preset", "l2")[0] == 2
    assert run(capsys, "eval", write(tmp_path, "v.json", {"dim": 3}), "--preset", "l2")[0] == 2
    assert run(capsys, "eval", write(tmp_path, "v.json", [1]), "--preset", "nope")[0] == 2


def test_constants_l2_table_is_deterministic(capsys, tmp_path):
    args = ("constants", "--preset", "l2", "--N", "8", "--seq", "geometric",
            "--kinds", "Delta_s", "Delta_osc", "Ku_ucc", "Cq_t", "Cp_t")
    code, first, _ = run(capsys, *args)
    code2, second, _ = run(capsys, *args)
    assert code == code2 == 0 and first == second
    rows = list(csv.DictReader(io.StringIO(first)))
    assert {r["kind"] for r in rows} == {"Delta_s", "Delta_osc", "Ku_ucc", "Cq_t", "Cp_t"}
    assert all(abs(float(r["value"]) - 1) <= 1e-9 for r in rows)


def test_constants_json_round_trip(capsys, tmp_path):
    out_dir = tmp_path / "out"
    code, _, _ = run(capsys, "constants", "--preset", "lacunary-small", "--N", "21", "--kinds", "Delta_osc",
                     "--max-card", "3", "--format", "json", "--out", str(out_dir))
    assert code == 0
    text = (out_dir / "constants.json").read_text()
    data = json.loads(text)
    assert json.loads(json.dumps(data)) == data
    (row,) = data
    assert row["kind"] == "Delta_osc" and row["value"] == 1 and row["direction"] == "exact"


def test_verify_l2_passes(capsys):
    code, out, _ = run(capsys, "verify", "--preset", "l2", "--N", "8", "--seq", "geometric",
                       "--checks", "ucc", "ul", "slc")
    assert code == 0 and "fail" not in out.split("\n", 1)[1]


def test_verify_json_report(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "--preset", "mixedpq-paper", "--format", "json", "--out", str(tmp_path))
    report = json.loads((tmp_path / "verify.json").read_text())
    assert code == 0 and report["checks"][0]["id"] == "mixedpq-separation"


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--preset", "mixedpq-m4", "--checks", "separation")
    assert code == 1 and "fail" in out


def test_corrupted_lacunary_config(capsys, tmp_path):
    cfg = {"norm": {"kind": "lacunary", "sequence": {"prefix": [1, 5, 64]}, "ks": [1, 2]}, "N": 20}
    code, _, err = run(capsys, "verify", "--config", write(tmp_path, "c.json", cfg))
    assert code == 2 and "3(j+1)" in err


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"norm": "l2", "bogus": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"norm": "lacunary-small", "N": 100})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"norm": "l2", "t": [0]})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"norm": "l2", "checks": ["nope"]})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"N": 4})
    cfg = ExperimentConfig.from_dict({"norm": "mixedpq-m4", "N": 30})
    assert cfg.build_sequence(cfg.build_norm()).prefix[:2] == (4, 14)


def test_parse_sequence():
    # one term past N so the gap after the last admissible size is known
    assert parse_sequence("geometric", 16).prefix == (2, 4, 8, 16, 32)
    assert parse_sequence("arithmetic:3", 9).prefix[:3] == (3, 6, 9)
    assert parse_sequence("explicit:1,7,64", 64).prefix == (1, 7, 64)
    assert parse_sequence("naturals", 5) is None
    with pytest.raises(ValueError):
        parse_sequence("primes", 5)


def test_growth(capsys):
    code, out, _ = run(capsys, "growth", "--preset", "oikhberg-small")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [float(r["c"]) for r in rows] == [2.0, 3.0]
    code, out, _ = run(capsys, "growth", "--preset", "lacunary-small")
    assert [float(r["DE_ratio"]) for r in csv.DictReader(io.StringIO(out))] == [1.0, 2.0]
    assert run(capsys, "growth")[0] == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "gapgreedy", "presets"], capture_output=True, text=True)
    assert res.returncode == 0 and "l2" in res.stdout
