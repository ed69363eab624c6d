import json
import math
import subprocess
import sys

import pytest

from besovlab.cli import main
from besovlab.experiments import default_config, validate_config
from besovlab.errors import InputError


def test_print_defaults_all_kinds(capsys):
    assert main(["print-defaults"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"kernel_audit", "constants", "sandwich",
                        "kernel_equivalence", "jump_chain", "interpolation",
                        "truncation_convergence", "bounds_audit"}
    assert main(["print-defaults", "--kind", "jump_chain"]) == 0
    one = json.loads(capsys.readouterr().out)
    assert one["field"] == {"name": "step_1d"}


def test_constants_command(capsys, tmp_path):
    assert main(["constants", "--dim", "2", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "4.0000000000" in out
    data = json.loads((tmp_path / "constants.json").read_text())
    assert data[0]["moment1"] == 4.0
    assert data[0]["nc_residual"] <= 1e-8


def test_kernel_check_csv(capsys, tmp_path):
    assert main(["kernel-check", "--family", "logarithmic", "--omega", "0.5",
                 "--dim", "2", "--out", str(tmp_path)]) == 0
    path = tmp_path / "kernel_audit_logarithmic_N2.csv"
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    assert header[:4] == ["neg_log_eps", "epsilon", "mass", "mass_err"]
    assert any(h.startswith("tail_") for h in header)
    assert any(h.startswith("moment_") for h in header)
    assert len(lines) == 11  # header + 10 sweep points


def test_seminorm_record(capsys):
    assert main(["seminorm", "--functional", "besov-constant",
                 "--epsilon", "0.05"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["functional"] == "besov-constant"
    assert rec["epsilon"] == 0.05
    assert rec["value"] == pytest.approx(2.0, rel=1e-6)
    assert "error" in rec and "provenance" in rec


def test_sweep_csv(capsys):
    assert main(["sweep", "--functional", "spherical-variation"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "epsilon,value,error,flag"
    assert len(lines) == 11
    first = lines[1].split(",")
    assert float(first[0]) == 0.2
    assert float(first[1]) == pytest.approx(4.0, rel=1e-6)


def test_experiment_validation_error(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"kind": "jump_chain",
                               "params": {"q": 2.0, "r": 1.5}}))
    rc = main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")])
    err = capsys.readouterr().err
    assert rc == 2
    assert "params.r" in err


def test_validate_config_paths():
    with pytest.raises(InputError, match="kind"):
        validate_config({"kind": "nope"})
    with pytest.raises(InputError, match="params.p"):
        validate_config({"kind": "interpolation", "params": {"q": 2.0, "p": 1.0}})
    with pytest.raises(InputError, match="eps_grid.count"):
        validate_config({"kind": "jump_chain",
                         "eps_grid": {"eps0": 0.2, "ratio": 0.5, "count": 2}})
    with pytest.raises(InputError, match="unknown config key"):
        validate_config({"kind": "jump_chain", "mystery": 1})
    cfg = validate_config({"kind": "jump_chain", "params": {"q": 2.0, "r": 0.5}})
    assert cfg.tolerance == 0.10


def test_experiment_interpolation_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "interpolation",
                               "params": {"q": 2.0, "r": 0.5, "p": 3.0}}))
    rc = main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 0
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert summary["pass"] is True
    assert summary["verdicts"][0]["terms"]["lhs"] == pytest.approx(2.0, abs=1e-9)
    for term in summary["terms"].values():
        assert {"value", "error", "provenance"} <= set(term)


def test_installed_entry_point():
    out = subprocess.run([sys.executable, "-m", "besovlab.cli",
                          "print-defaults", "--kind", "constants"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["kind"] == "constants"


def test_default_config_rejects_unknown_kind():
    with pytest.raises(InputError):
        default_config("mystery")


def test_experiment_emits_sweep_and_plot_files(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "kind": "kernel_equivalence",
        "eps_grid": {"eps0": 0.2, "ratio": 0.5, "count": 4},
        "gagliardo_grid": {"eps0": math.exp(-2), "ratio": math.exp(-1), "count": 4},
    }))
    rc = main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 0
    names = {p.name for p in (tmp_path / "o").iterdir()}
    assert any(n.startswith("sweep_") and n.endswith(".csv") for n in names)
    assert any(n.startswith("plot_") and n.endswith(".csv") for n in names)
    plot = next(p for p in (tmp_path / "o").iterdir() if p.name.startswith("plot_"))
    assert plot.read_text().splitlines()[0] == "x,y,label"


def test_region_restricted_chain_validates_jump_clearance(tmp_path):
    # a region whose boundary sits on a jump point is rejected up front
    bad = {"kind": "jump_chain",
           "region": {"kind": "box", "lo": [0.0], "hi": [3.0]}}
    cfg = tmp_path / "bad_region.json"
    cfg.write_text(json.dumps(bad))
    rc = main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 2
    good = {"kind": "jump_chain",
            "region": {"kind": "box", "lo": [-0.7], "hi": [1.9]},
            "eps_grid": {"eps0": 0.1, "ratio": 0.5, "count": 6}}
    cfg2 = tmp_path / "good_region.json"
    cfg2.write_text(json.dumps(good))
    rc = main(["experiment", "--config", str(cfg2), "--out", str(tmp_path / "o2")])
    assert rc == 0


def test_constants_experiment_kind(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "constants", "dims": [2]}))
    rc = main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 0
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    table = summary["terms"]["N2"]["table"]
    assert table["moment1"] == 4.0
    assert table["C_N"] == 2.0
    assert table["nc_residual"] <= 1e-8


def test_three_kernel_equivalence_experiment(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "kind": "kernel_equivalence",
        "kernels": [{"kind": "trivial"},
                    {"kind": "logarithmic", "omega": 0.5},
                    {"kind": "sigma_approx", "sigma_ratio": 0.5}],
        "eps_grid": {"eps0": 0.2, "ratio": 0.5, "count": 6},
    }))
    rc = main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 0
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    terms = {k: v["value"] for k, v in summary["terms"].items()}
    assert len([k for k in terms if k.startswith("besov_constant")]) == 3
    for v in terms.values():
        assert v == pytest.approx(4.0, rel=0.02)


def test_sweep_gagliardo_constant_grid(capsys):
    assert main(["sweep", "--functional", "gagliardo-constant"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 9   # header + 8 rows of the gagliardo grid
    eps0 = float(lines[1].split(",")[0])
    assert eps0 == pytest.approx(math.exp(-2.0))
