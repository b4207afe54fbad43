import json
import subprocess
import sys

import pytest

from qpe import cli


def run_cli(capsys, *argv):
    code = cli.dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def data_rows(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_pea_ipea_exact(capsys):
    code, out, _ = run_cli(capsys, "pea", "ipea", "--phi", "0.3125", "--m", "4", "--shots", "1",
                           "--seed", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["data"]["estimate"] == 0.3125
    assert doc["meta"]["seed"] == 1


def test_bench_sweep_csv_schema(capsys):
    code, out, _ = run_cli(capsys, "bench", "sweep", "--id", "III", "--param", "dephasing_ratio",
                           "--values", "0.1,0.01", "--m", "4", "--trials", "20", "--seed", "7")
    rows = data_rows(out)
    assert code == 0
    assert rows[0] == "param,value,success_rate,total_measurements,m,seed"
    assert [r.split(",")[1] for r in rows[1:]] == ["0.01", "0.1"]
    assert all(r.endswith(",4,7") for r in rows[1:])
    assert "# seed: 7" in out


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"phi": 0.25, "m": 3, "seed": 5}))
    _, out, _ = run_cli(capsys, "pea", "qft", "--config", str(cfg), "--m", "4")
    doc = json.loads(out)
    assert doc["data"]["m"] == 4 and doc["meta"]["seed"] == 5


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("QPE_SEED", "42")
    _, out, _ = run_cli(capsys, "align", "rg", "--theta", "0.3", "--k", "1")
    assert json.loads(out)["meta"]["seed"] == 42
    monkeypatch.delenv("QPE_SEED")
    _, out, _ = run_cli(capsys, "align", "rg", "--theta", "0.3", "--k", "1")
    assert json.loads(out)["meta"]["seed"] == 0


@pytest.mark.parametrize("argv", [
    ["pea", "ipea", "--phi", "1.5", "--m", "3"],
    ["pea", "ipea", "--m", "3"],
    ["pea", "warp"],
    ["bench", "sweep", "--param", "banana", "--values", "1"],
    ["bench", "sweep", "--preset", "fig9"],
    ["crypto", "superdense", "--message", "2"],
    ["decomp", "euler", "--matrix", "[[1, 1], [0, 1]]"],
    ["pea", "ipea", "--phi", "0.5", "--m", "3", "--format", "csv"],
])
def test_invalid_input_exits_2(argv, capsys):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"phi": 0.25, "m": 3, "colour": "red"}))
    code, _, err = run_cli(capsys, "pea", "ipea", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_runtime_failure_exits_1(tmp_path, capsys):
    bad = tmp_path / "missing" / "out.json"
    code, _, err = run_cli(capsys, "crypto", "superdense", "--out", str(bad))
    assert code == 1 and err.startswith("runtime error")


def test_out_file(tmp_path, capsys):
    path = tmp_path / "o.csv"
    code, out, _ = run_cli(capsys, "bench", "run", "--id", "I", "--m", "3", "--trials", "4",
                           "--out", str(path))
    assert code == 0 and out == ""
    assert "param,value,success_rate" in path.read_text()


@pytest.mark.parametrize("argv", [
    ["pea", "kitaev", "--phi", "0.5", "--m", "3"],
    ["pea", "ag", "--phi", "0.25", "--m", "3"],
    ["bench", "budget", "--id", "III", "--dephasing-ratio", "0.05", "--m", "5"],
    ["crypto", "auth"], ["crypto", "auth-attack", "--R", "X"], ["crypto", "stego"],
    ["align", "bb", "--phi", "0.3", "--m", "4"],
    ["decomp", "abc", "--gate", "T"], ["decomp", "power", "--alpha", "0.2", "--k", "2"],
    ["demo", "grover", "--n", "3", "--marks", "2"], ["demo", "trotter"],
    ["demo", "energy", "--m", "4", "--shots", "10"],
])
def test_every_command_produces_json(argv, capsys):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    assert "data" in json.loads(out)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "qpe", "crypto", "superdense", "--message", "01"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["data"]["decoded"] == "01"
