import json
import subprocess
import sys

import numpy as np
import pytest

from polariton_cr.cli import main
from polariton_cr.csvio import read_trace_csv
from polariton_cr.presets import PRESETS

SCENARIO = """\
[physics]
omega_c = 300
omega_ex = 0
g = 1000
A = 10
B = 3
gamma1 = 0
gamma2 = 0

[state]
state = number
n = 5

[grid]
t_end = 1.0
n_samples = 2000
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "scenario.ini"
    path.write_text(SCENARIO)
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_csv_format(config, tmp_path, capsys):
    out_path = tmp_path / "trace.csv"
    code, _, _ = run(["simulate", "--config", config, "--output", out_path, "--envelope"], capsys)
    assert code == 0
    lines = out_path.read_text().split("\n")
    assert lines[0] == "# method=closed_general state=number n=5 g=1e+03 A=1e+01 B=3e+00 delta=3e+02 gamma1=0e+00 gamma2=0e+00"
    assert lines[1] == "t,intensity,envelope"
    assert lines[2] == "0e+00,0e+00,1e+00"
    assert lines[-1] == "" and len(lines) == 2003
    trace = read_trace_csv(out_path.read_text())
    assert trace.times[-1] == 1.0 and trace.state.N == 5


def test_values_round_trip(config, tmp_path, capsys):
    from polariton_cr.scenario import config_from_mapping, evaluate, read_config_text

    cfg = config_from_mapping(read_config_text(SCENARIO))
    direct = evaluate(cfg.params, cfg.state, cfg.grid, cfg.method)
    code, out, _ = run(["simulate", "--config", config], capsys)
    assert code == 0
    parsed = read_trace_csv(out)
    assert np.array_equal(parsed.intensity, direct.intensity)


def test_byte_determinism_across_processes(config):
    cmd = [sys.executable, "-m", "polariton_cr.cli", "simulate", "--config", str(config), "--method", "oracle_secular"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and len(first) > 1000


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_writes_csv(name, tmp_path, capsys):
    out_path = tmp_path / f"{name}.csv"
    code, _, err = run(["simulate", "--preset", name, "--output", out_path], capsys)
    assert code == 0, err
    trace = read_trace_csv(out_path.read_text())
    assert trace.times.size == 20000 and np.all(np.isfinite(trace.intensity))


def test_presets_listing(capsys):
    code, out, _ = run(["presets"], capsys)
    assert code == 0
    assert [ln.split()[0] for ln in out.splitlines()] == list(PRESETS)


def test_compare_within_tolerance(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("g=1000\nA=10\nB=3\nomega_c=300\nstate=number\nn=5\nt_end=1.2566\nn_samples=20000\n")
    code, out, _ = run(["compare", "--config", cfg, "--method", "closed_general,oracle_secular",
                        "--tolerance", "5e-9", "--output", tmp_path / "cmp.csv"], capsys)
    assert code == 0
    assert out.startswith("max_abs=") and " rms=" in out
    assert float(out.split()[0].split("=")[1]) <= 5e-9
    assert (tmp_path / "cmp.csv").read_text().split("\n")[1] == "t,intensity_a,intensity_b,abs_diff"


def test_compare_tolerance_failure(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("g=1000\nA=10\nB=10\nstate=number\nn=2\nt_end=0.6\nn_samples=3000\n")
    code, out, _ = run(["compare", "--config", cfg, "--method", "closed_general", "--method", "oracle_full",
                        "--tolerance", "1e-12"], capsys)
    assert code == 1
    assert out.rstrip("\n").split("\n")[-1].startswith("max_abs=")


def test_compare_linear_full_oracle(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("g=1000\nstate=number\nn=2\nt_end=0.6\nn_samples=3000\ntolerance=1e-10\n")
    code, _, _ = run(["compare", "--config", cfg, "--method", "closed_general,oracle_full"], capsys)
    assert code == 0


def test_compare_mismatched_grid_files(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["simulate", "--preset", "fig1a", "--output", a], capsys)[0] == 0
    cfg = tmp_path / "c.ini"
    cfg.write_text("preset=fig1a\nn_samples=1000\n")
    assert run(["simulate", "--config", cfg, "--output", b], capsys)[0] == 0
    code, _, err = run(["compare", a, b], capsys)
    assert code == 2
    assert err.startswith("error:") and err.count("\n") == 1


@pytest.mark.parametrize("text", [
    "g=1000\nstate=number\nn=2\nt_end=1\nmethod=closed_resonant\nomega_c=5\n",
    "g=1000\nstate=number\nn=2\nt_end=1\nmethod=oracle_full\ngamma1=1\n",
    "g=-1\nstate=number\nn=2\nt_end=1\n",
    "g=1000\nstate=fock\nn=2\nt_end=1\n",
    "g=1000\nstate=number\nn=2.5\nt_end=1\n",
    "g=1000\nstate=number\nn=2\nt_end=1\nbogus=1\n",
    "preset=fig9z\n",
])
def test_invalid_config_exit_2(text, tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    code, out, err = run(["simulate", "--config", cfg], capsys)
    assert code == 2 and out == ""
    assert err.startswith("error:") and err.count("\n") == 1


def test_missing_scenario_and_bad_method(capsys):
    assert run(["simulate"], capsys)[0] == 2
    assert run(["simulate", "--preset", "fig1a", "--method", "magic"], capsys)[0] == 2


def test_preset_overrides_physics_keys(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("preset=fig1c\ng=5\nn=3\nn_samples=500\n")
    code, out, _ = run(["simulate", "--config", cfg], capsys)
    assert code == 0
    assert out.startswith("# method=closed_resonant state=number n=11 g=1e+03")
    assert len(out.splitlines()) == 502


def test_analyze_reports_json(capsys):
    code, out, _ = run(["analyze", "--preset", "fig1c"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "ok"
    assert report["revival_spacing"] == pytest.approx(2 * np.pi / 10, abs=report["grid_resolution"])
