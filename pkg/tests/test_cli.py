import json

import pytest

from maxrigid.cli import load_config, main, run_experiment, validate_config
from maxrigid.exceptions import ConfigError
from maxrigid.experiments import EXPERIMENTS


def _write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def _run_dirs(root, exp):
    return sorted((root / exp).iterdir())


def test_list_names_every_experiment(capsys):
    assert main(["list", "--json"]) == 0
    listed = json.loads(capsys.readouterr().out)
    assert set(listed) == set(EXPERIMENTS)
    covered = sorted(c for e in listed.values() for c in e["covers"])
    assert covered == sorted(f"AC{i}" for i in range(1, 13))
    for name, entry in listed.items():
        validate_config(entry["default_config"])


def test_validate_exit_codes(tmp_path, capsys):
    assert main(["validate", _write(tmp_path, {"experiment": "cone_witness", "seed": 1})]) == 0
    assert main(["validate", _write(tmp_path, {"experiment": "nope", "seed": 1}, "b.json")]) == 2
    assert main(["validate", _write(tmp_path, {"experiment": "cone_witness"}, "c.json")]) == 2
    assert main(["validate", _write(tmp_path, {"experiment": "cone_witness", "seed": 0, "params": {"bogus": 1}}, "d.json")]) == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_empty_rho_list_is_a_config_error(tmp_path):
    cfg = {"experiment": "phase_transition", "seed": 0, "params": {"rho_list": []}}
    with pytest.raises(ConfigError):
        run_experiment(cfg)
    assert main(["run", _write(tmp_path, cfg), "--outdir", str(tmp_path / "out")]) == 2


def test_run_writes_artifacts_and_passes(tmp_path, capsys):
    assert main(["run", _write(tmp_path, {"experiment": "jensen_density", "seed": 0}), "--outdir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "AC1: PASS" in out
    (run,) = _run_dirs(tmp_path, "jensen_density")
    manifest = json.loads((run / "manifest.json").read_text())
    names = {f["file"] for f in manifest["files"]}
    assert {"zero_density.csv", "report.json"} <= names
    assert (run / "zero_density.json").exists()
    report = json.loads((run / "report.json").read_text())
    assert report["passed"] and [c["name"] for c in report["checks"]].count("AC1") == 1


def test_failing_check_exits_one(tmp_path, capsys):
    # on [-200, 200] the tail minimum of n_T / T sits 2.6% below 2 rho / pi
    cfg = {"experiment": "jensen_density", "seed": 0, "params": {"bessel_types": [1.0], "bessel_T_max": 200.0}}
    assert main(["run", _write(tmp_path, cfg), "--outdir", str(tmp_path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_outputs_are_byte_identical(tmp_path):
    cfg = _write(tmp_path, {"experiment": "cone_witness", "seed": 3})
    for _ in range(2):
        assert main(["run", cfg, "--outdir", str(tmp_path)]) == 0
    a, b = _run_dirs(tmp_path, "cone_witness")
    data = sorted(p.name for p in a.iterdir() if p.name not in ("report.json", "manifest.json"))
    assert data
    for name in data:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    ma, mb = (json.loads((d / "manifest.json").read_text()) for d in (a, b))
    assert [f.get("sha256") for f in ma["files"]] == [f.get("sha256") for f in mb["files"]]


def test_outdir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MAXRIGID_OUTDIR", str(tmp_path / "env"))
    cfg = _write(tmp_path, {"experiment": "jensen_density", "seed": 0, "outdir": str(tmp_path / "cfg")})
    assert main(["run", cfg]) == 0
    assert (tmp_path / "env" / "jensen_density").is_dir() and not (tmp_path / "cfg").exists()


def test_budget_guard(tmp_path, capsys):
    # schema-valid but over the Monte-Carlo budget
    cfg = _write(tmp_path, {"experiment": "comb_crosscheck", "seed": 0, "params": {"n_seeds": 1_000_000}})
    assert main(["validate", cfg]) == 2
    assert "BudgetExceeded" in capsys.readouterr().err


def test_load_config_fills_defaults(tmp_path):
    c = load_config(_write(tmp_path, {"experiment": "patch_counterexample", "seed": 5}))
    assert c.params == EXPERIMENTS["patch_counterexample"].defaults and c.jobs == 1
