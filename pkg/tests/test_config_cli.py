import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from lossy_twinbeam.cli import main
from lossy_twinbeam.commands import EVOLVE_COLUMNS, SWEEP_COLUMNS
from lossy_twinbeam.config import ConfigError, RunConfig, load_config, parse_override
from lossy_twinbeam.tables import Table, format_cell, render


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_config_defaults_and_params():
    cfg = RunConfig()
    assert cfg.params.xi == 1.0 and cfg.model == "quantum"
    assert cfg.objective == "asymptotic_rate"
    assert cfg.effective_gamma_tol == pytest.approx(0.005)


def test_config_round_trip(tmp_path):
    cfg = RunConfig(delta_k=11.5, gamma_b=22.7, seed_na=0.2, model="classical", gamma_tol=0.01, output="x.csv")
    path = tmp_path / "c.yaml"
    path.write_text(cfg.to_yaml())
    assert load_config(path) == cfg


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"xi": "abc"}, "xi"),
        ({"delta_k": float("inf")}, "delta_k"),
        ({"gamma_b": -1}, "gamma_b"),
        ({"z_steps": 1}, "z_steps"),
        ({"z_steps": 2.5}, "z_steps"),
        ({"model": "semi"}, "model"),
        ({"format": "xml"}, "format"),
        ({"objective": "speed"}, "objective"),
        ({"seed_na": -0.1}, "seed_na"),
        ({"seed_m_im": 5.0}, "seed_m"),
        ({"length": 0}, "length"),
    ],
)
def test_config_errors_name_the_field(changes, field):
    with pytest.raises(ConfigError, match=field):
        RunConfig(**changes)


def test_unknown_and_nested_keys(tmp_path):
    with pytest.raises(ConfigError, match="chi"):
        RunConfig.from_mapping({"chi": 1.0})
    with pytest.raises(ConfigError, match="nested"):
        RunConfig.from_mapping({"xi": {"value": 1}})
    bad = tmp_path / "bad.yaml"
    bad.write_text("xi: [1, 2\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_parse_override():
    assert parse_override("gamma_b=22.7") == ("gamma_b", 22.7)
    assert parse_override("model=classical") == ("model", "classical")
    with pytest.raises(ConfigError):
        parse_override("gamma_b")


def test_format_cell_full_precision():
    assert format_cell(0.1) == "0.10000000000000001"
    assert float(format_cell(1 / 3)) == 1 / 3
    assert format_cell(None) == "" and format_cell(True) == "true"


def test_json_mirrors_columns():
    t = Table(["a", "b"], [[1.0, float("inf")], [2.0, 3.0]])
    assert json.loads(render(t, "json")) == {"a": [1.0, 2.0], "b": [None, 3.0]}


def test_evolve_columns_and_rows(capsys):
    code, out, _ = run_cli(capsys, "evolve", "--set", "z_steps=10", "--set", "delta_k=11.5")
    rows = read_csv(out)
    assert code == 0
    assert tuple(rows[0]) == EVOLVE_COLUMNS
    assert len(rows) == 12
    assert all(r[-1] == "" for r in rows[1:])


def test_evolve_with_eof(capsys):
    code, out, _ = run_cli(
        capsys, "evolve", "--with-eof", "--set", "z_steps=200", "--set", "length=0.5", "--set", "delta_k=11.5", "--set", "gamma_b=5"
    )
    rows = read_csv(out)
    eof = [float(r[-1]) for r in rows[1:]]
    assert code == 0 and eof[0] == 0.0 and min(eof[1:]) > 0


def test_coarse_steps_reported_as_numerical_failure(capsys):
    code, _, err = run_cli(
        capsys, "evolve", "--with-eof", "--set", "z_steps=4", "--set", "delta_k=11.5", "--set", "gamma_b=22.7"
    )
    assert code == 3 and "z_steps" in err


def test_classical_zero_seed_is_all_zero(capsys):
    code, out, _ = run_cli(capsys, "evolve", "--model", "classical", "--set", "z_steps=20", "--set", "gamma_b=5")
    assert code == 0
    for row in read_csv(out)[1:]:
        assert all(float(v) == 0.0 for v in row[1:7])


def test_evolve_json(capsys):
    code, out, _ = run_cli(capsys, "evolve", "--format", "json", "--set", "z_steps=3")
    data = json.loads(out)
    assert list(data) == list(EVOLVE_COLUMNS)
    assert len(data["z"]) == 4 and data["eof"] == [None] * 4


def test_output_is_byte_identical(tmp_path, capsys):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("delta_k: 11.5\ngamma_b: 22.7\nz_steps: 50\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["evolve", "--config", str(cfg), "--out", str(a), "--with-eof"]) == 0
    assert main(["evolve", "--config", str(cfg), "--out", str(b), "--with-eof"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_echo_config_round_trips(tmp_path, capsys):
    echo1, echo2 = tmp_path / "e1.yaml", tmp_path / "e2.yaml"
    args = ["optimize-gamma", "--set", "delta_k=11.5", "--objective", "intensity"]
    assert main(args + ["--echo-config", str(echo1)]) == 0
    assert main(["optimize-gamma", "--config", str(echo1), "--echo-config", str(echo2)]) == 0
    assert echo1.read_text() == echo2.read_text()
    assert load_config(echo1).objective == "final_intensity"


def test_config_error_exit_code_and_no_file(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code, _, err = run_cli(capsys, "evolve", "--set", "gamma_b=-1", "--out", str(out))
    assert code == 2 and "gamma_b" in err
    assert not out.exists()
    code, _, err = run_cli(capsys, "evolve", "--config", str(tmp_path / "missing.yaml"))
    assert code == 2


def test_overflow_exit_code_and_no_file(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code, _, err = run_cli(capsys, "evolve", "--set", "xi=50", "--set", "length=10", "--out", str(out))
    assert code == 3 and "cap" in err
    assert not out.exists()
    assert os.listdir(tmp_path) == []


def test_sweep_command(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--with-gamma-opt", "--set", "sweep_start=-12", "--set", "sweep_stop=12",
        "--set", "sweep_points=5",
    )
    rows = read_csv(out)
    assert code == 0 and tuple(rows[0]) == SWEEP_COLUMNS
    body = np.array([[float(v) for v in r] for r in rows[1:]])
    np.testing.assert_allclose(body[:, 1], body[::-1, 1], rtol=1e-12)
    assert (body[:, 3] >= 1.0).all()


def test_optimize_gamma_and_threshold(capsys):
    code, out, _ = run_cli(capsys, "optimize-gamma", "--set", "delta_k=11.5")
    rows = read_csv(out)
    assert code == 0 and 19.3 <= float(rows[1][0]) <= 26.1
    code, out, _ = run_cli(capsys, "threshold", "--objective", "intensity", "--set", "threshold_tol=0.05")
    assert code == 0 and 2.0 <= float(read_csv(out)[1][0]) <= 6.0


def test_entanglement_command(capsys):
    code, out, _ = run_cli(capsys, "entanglement", "--n-a", "1", "--n-b", "1", "--m-re", "0", "--m-im", "1.2")
    row = dict(zip(*read_csv(out)))
    assert code == 0 and float(row["eof"]) > 0 and float(row["nu_pt_min"]) < 1
    code, _, err = run_cli(capsys, "entanglement", "--n-a", "1")
    assert code == 2
    code, _, err = run_cli(capsys, "entanglement", "--n-a", "0", "--n-b", "0", "--m-re", "0", "--m-im", "1")
    assert code == 2


def test_unknown_figure_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["reproduce", "fig9"])
    assert exc.value.code == 2


def test_reproduce_fig4_tables(tmp_path, capsys):
    code = main(["reproduce", "fig4", "--out", str(tmp_path), "--set", "points=11"])
    assert code == 0
    names = sorted(os.listdir(tmp_path))
    tables = [n for n in names if n.endswith(".csv")]
    assert len(tables) == 6 and "plot_fig4.py" in names
    for name in tables:
        rows = read_csv((tmp_path / name).read_text())
        assert rows[0] == ["z", "quantum", "classical"] and len(rows) == 12
    eof = read_csv((tmp_path / "fig4f_eof_seed_20.csv").read_text())
    assert all(float(r[2]) == 0.0 for r in eof[1:])


def test_reproduce_fig2_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["reproduce", "fig2", "--out", str(d), "--set", "points=7"]) == 0
    assert sorted(os.listdir(a)) == [
        "fig2a_spectral_density.csv", "fig2b_gamma_opt.csv", "fig2c_enhancement.csv", "plot_fig2.py"
    ]
    for name in os.listdir(a):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_reproduce_rejects_unknown_override(tmp_path, capsys):
    assert main(["reproduce", "fig3", "--out", str(tmp_path), "--set", "bogus=1"]) == 2


def test_console_script_threads_env(tmp_path):
    env = dict(os.environ, LOSSY_TWINBEAM_THREADS="4")
    cmd = [sys.executable, "-m", "lossy_twinbeam.cli", "sweep", "--set", "sweep_points=5"]
    a = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    env["LOSSY_TWINBEAM_THREADS"] = "1"
    b = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    assert a == b and a.startswith("axis_value,")
