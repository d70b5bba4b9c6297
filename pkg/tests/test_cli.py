import json

import pytest

from linmax.cli import main

GOOD_CONFIG = """
[law]
alpha = 1.5
p = 0.5

[model]
kind = "deterministic"
values = [1.0, 0.5, -0.25]

[experiment]
n_grid = [200]
replicates = 60
t_grid = [1.0]
master_seed = 7

[output]
dir = "{out}"

[thresholds]
max_ks_d = 0.9
"""


@pytest.fixture
def config_path(tmp_path):
    out = tmp_path / "out"
    path = tmp_path / "cfg.toml"
    path.write_text(GOOD_CONFIG.format(out=out))
    return path, out


def test_simulate_writes_files(config_path, capsys):
    path, out = config_path
    assert main(["simulate", "--config", str(path), "--workers", "1"]) == 0
    files = sorted(p.name for p in out.iterdir())
    assert "path_n200_r0000.csv" in files
    assert "maxima_n200_r0000.json" in files
    assert "envelope_n200_r0000.json" in files
    assert len(files) == 3 * 60
    assert "simulate: wrote" in capsys.readouterr().out


def test_simulate_missing_key_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[law]\np = 0.5\n[model]\nkind = 'deterministic'\nvalues = [1.0]\n[experiment]\nn_grid = [10]\nreplicates = 1\n")
    assert main(["simulate", "--config", str(bad)]) == 2
    assert "law.alpha" in capsys.readouterr().err


def test_seed_override_changes_and_reproduces_outputs(tmp_path):
    cfg = tmp_path / "cfg.toml"
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_c = tmp_path / "c"
    cfg.write_text(GOOD_CONFIG.format(out=tmp_path / "unused"))
    for out, seed in ((out_a, "1"), (out_b, "2"), (out_c, "1")):
        assert main([
            "simulate", "--config", str(cfg), "--seed", seed, "--out", str(out),
        ]) == 0
    name = "path_n200_r0000.csv"
    assert (out_a / name).read_text() == (out_c / name).read_text()
    assert (out_a / name).read_text() != (out_b / name).read_text()


def test_metric_identical_files(config_path, capsys):
    path, out = config_path
    main(["simulate", "--config", str(path)])
    capsys.readouterr()  # drop the simulate summary line
    f = out / "maxima_n200_r0000.json"
    assert main(["metric", str(f), str(f), "--metric", "m2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"metric": "m2", "value": 0.0, "tol": 1e-9, "certified": True}


def test_metric_shift_pair(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text('{"initial": 0.0, "jumps": [{"t": 0.5, "value": 1.0}]}')
    b.write_text('{"initial": 0.0, "jumps": [{"t": 0.6, "value": 1.0}]}')
    assert main(["metric", str(a), str(b), "--metric", "m2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["value"] - 0.1) <= 1e-9


def test_metric_unknown_name(config_path, capsys):
    path, out = config_path
    main(["simulate", "--config", str(path)])
    f = out / "maxima_n200_r0000.json"
    assert main(["metric", str(f), str(f), "--metric", "j1"]) == 2


def test_metric_monotonicity_failure_exits_1(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text('{"initial": 1.0, "jumps": [{"t": 0.5, "value": 0.0}]}')
    b.write_text('{"initial": 0.0, "jumps": []}')
    assert main(["metric", str(a), str(b), "--metric", "m1_monotone"]) == 1
    assert "monotonicity" in capsys.readouterr().err.lower()


def test_verify_pass_and_report(config_path, capsys):
    path, out = config_path
    assert main(["verify", "--config", str(path), "--experiment", "marginal", "--workers", "1"]) == 0
    assert (out / "report_marginal.json").exists()
    assert (out / "report_marginal.csv").exists()


def test_verify_unknown_experiment(config_path):
    path, _ = config_path
    assert main(["verify", "--config", str(path), "--experiment", "everything"]) == 2


def test_verify_condition_refusal_names_condition(tmp_path, capsys):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(
        "[law]\nalpha = 1.5\np = 0.5\n"
        "[model]\nkind = 'power'\nbeta = 0.9\n"
        "[experiment]\nn_grid = [50]\nreplicates = 5\n"
        f"[output]\ndir = '{tmp_path / 'o'}'\n"
    )
    assert main(["verify", "--config", str(cfg), "--experiment", "marginal"]) == 2
    err = capsys.readouterr().err
    assert "E|C_j|" in err
    assert not (tmp_path / "o").exists()  # refusal leaves no partial output


def test_verify_impossible_threshold_exits_3_with_report(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(GOOD_CONFIG.format(out=out) + "\n")
    cfg.write_text(cfg.read_text().replace("max_ks_d = 0.9", "max_ks_d = 1e-9"))
    assert main(["verify", "--config", str(cfg), "--experiment", "marginal"]) == 3
    assert (out / "report_marginal.json").exists()
    assert "FAIL" in capsys.readouterr().err
