import json
import math
import subprocess
import sys

import pytest

from dilatedbasis import cli
from dilatedbasis.errors import GramNotPositive, InputError
from dilatedbasis.output import emit_csv, emit_plotdata, read_csv


def run_main(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze1d_json(capsys):
    code, out, _ = run_main(["analyze1d", "--coeffs", "2,-1"], capsys)
    assert code == 0
    env = json.loads(out)
    v = env["results"]["verdict"]
    assert (v["basis"], v["complete"], v["minimal"]) == ("yes", "yes", "yes")
    assert env["command"] == "analyze1d"
    assert env["config"]["schema"] == 1
    # defaults are echoed
    assert "tolerances" in env["config"] and "root_tol" in env["config"]["tolerances"]
    assert env["wall_clock_s"] >= 0 and env["version"]


def test_integral_csv(capsys):
    code, out, _ = run_main(["integral", "--m", "4", "--delta", "0.5", "--format", "csv"], capsys)
    assert code == 0
    lines = out.split("\n")
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert float(row["reduced"]) == math.pi / 8
    assert "\r" not in out


def test_exit_code_on_invalid_input(capsys):
    code, _, err = run_main(["analyze1d", "--coeffs", "0,1"], capsys)
    assert code == 2 and "error" in err
    assert run_main(["witness", "--coeffs", "2,-1"], capsys)[0] == 2
    assert run_main(["analyze1d", "--coeffs", "1,x"], capsys)[0] == 2


def test_exit_code_on_size_limit(capsys):
    assert run_main(["analyze1d", "--coeffs", "2,-1", "--N-list", "5000"], capsys)[0] == 4
    assert run_main(["riesz", "--estar-m", "2"], capsys)[0] == 0


def test_exit_code_on_numerical_failure(capsys, monkeypatch):
    def boom(cfg):
        raise GramNotPositive("min pivot -1e-3")

    monkeypatch.setitem(cli.DISPATCH, "qm", boom)
    code, _, err = run_main(["qm", "--estar-m", "2"], capsys)
    assert code == 3 and "GramNotPositive" in err


def test_unknown_key_rejected(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"schema": 1, "command": "integral", "bogus": 1}))
    assert run_main(["integral", "--config", str(p)], capsys)[0] == 2
    p.write_text(json.dumps({"schema": 2, "command": "integral"}))
    assert run_main(["integral", "--config", str(p)], capsys)[0] == 2
    p.write_text(json.dumps({"schema": 1, "command": "integral", "cutoffs": {"samples": "many"}}))
    assert run_main(["integral", "--config", str(p)], capsys)[0] == 2
    p.write_text(json.dumps({"schema": 1, "command": "a2"}))
    assert run_main(["integral", "--config", str(p)], capsys)[0] == 2
    with pytest.raises(InputError):
        cli.resolve_config({"schema": 1, "command": "nope"})


@pytest.mark.parametrize(
    "argv",
    [
        ["integral", "--m", "4", "--samples", "500"],
        ["duals", "--coeffs", "1,-2,1", "--tau-max", "300", "--tau-range", "10,300"],
        ["a2", "--weight", "symbol", "--estar-m", "2", "--scales", "1,2,3"],
    ],
)
def test_config_echo_round_trip(argv, tmp_path, capsys):
    first = tmp_path / "a.csv"
    code, out, _ = run_main(argv, capsys)
    assert code == 0
    echo = json.loads(out)["config"]
    assert run_main(argv + ["--format", "csv", "--output", str(first)], capsys)[0] == 0
    echo["output"] = {"path": str(tmp_path / "b.csv"), "format": "csv"}
    cfg_path = tmp_path / "echo.json"
    cfg_path.write_text(json.dumps(echo))
    assert run_main([argv[0], "--config", str(cfg_path)], capsys)[0] == 0
    assert first.read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize(
    "argv, columns",
    [
        (["duals", "--coeffs", "1,-1", "--tau-max", "200", "--tau-range", "10,200"], ["tau", "norm_sq", "norm"]),
        (["series", "--estar-m", "2", "--N", "40"], ["n", "s_n", "partial_sum"]),
        (["a2", "--weight", "constant", "--m", "2", "--scales", "1,2"], ["scale", "sup_estimate", "status"]),
    ],
)
def test_csv_columns(argv, columns, tmp_path, capsys):
    path = tmp_path / "o.csv"
    assert run_main(argv + ["--format", "csv", "--output", str(path)], capsys)[0] == 0
    rows = read_csv(path)
    assert list(rows[0]) == columns
    raw = path.read_bytes()
    assert b"\r\n" not in raw and raw.endswith(b"\n")


def test_duals_values_in_csv(tmp_path, capsys):
    path = tmp_path / "o.csv"
    argv = ["duals", "--coeffs", "1,-1", "--tau-max", "200", "--tau-range", "10,200", "--format", "csv"]
    assert run_main(argv + ["--output", str(path)], capsys)[0] == 0
    rows = read_csv(path)
    assert rows[3]["norm_sq"] == 4
    assert rows[3]["norm"] == 2


def test_plot_output(tmp_path, capsys):
    path = tmp_path / "o.dat"
    argv = ["duals", "--coeffs", "1,-1", "--tau-max", "200", "--tau-range", "10,200"]
    assert run_main(argv + ["--format", "plot", "--output", str(path)], capsys)[0] == 0
    text = path.read_text()
    assert text.startswith("# log_norm_vs_log_tau")
    pairs = [ln.split() for ln in text.splitlines() if ln and not ln.startswith("#")]
    assert len(pairs) == 200 and all(len(p) == 2 for p in pairs)
    assert float(pairs[-1][1]) == pytest.approx(0.5 * math.log(201))
    assert run_main(["riesz", "--estar-m", "2", "--format", "plot"], capsys)[0] == 2


def test_csv_round_trip_lossless(tmp_path):
    vals = [0.1, 1 / 3, math.pi * 1e-300, 2.0**-1074, 1.7976931348623157e308, -0.0, 12345678901234567]
    recs = [{"k": i, "x": v, "ok": i % 2 == 0, "z": complex(v, -v)} for i, v in enumerate(vals)]
    path = emit_csv(recs, tmp_path / "r.csv")
    back = read_csv(path)
    for r, b in zip(recs, back):
        assert b["k"] == r["k"] and b["ok"] == r["ok"]
        assert b["x"] == r["x"]
        assert b["z_re"] == r["z"].real and b["z_im"] == r["z"].imag


def test_csv_rejects_heterogeneous(tmp_path):
    with pytest.raises(InputError):
        emit_csv([{"a": 1}, {"b": 2}], tmp_path / "x.csv")
    with pytest.raises(OSError, match="nowhere"):
        emit_csv([{"a": 1}], tmp_path / "nowhere" / "x.csv")


def test_plotdata_blocks(tmp_path):
    path = emit_plotdata({"a": ([1, 2], [3, 4]), "b": ([0.5], [0.25])}, tmp_path / "p.dat")
    blocks = path.read_text().split("\n\n\n")
    assert len(blocks) == 2
    assert blocks[1].startswith("# b")


def test_threads_env_recorded(monkeypatch, capsys):
    monkeypatch.setenv("DILATED_BASIS_THREADS", "3")
    code, out, _ = run_main(["integral", "--m", "4", "--samples", "300"], capsys)
    env = json.loads(out)
    assert code == 0 and env["threads"] == "3"
    monkeypatch.setenv("DILATED_BASIS_THREADS", "1")
    env1 = json.loads(run_main(["integral", "--m", "4", "--samples", "300"], capsys)[1])
    assert env1["records"] == env["records"]


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "dilatedbasis.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in cli.COMMANDS:
        assert cmd in r.stdout
