import csv
import io
import json
import subprocess
import sys

import pytest

from dunklszasz import GridSpec
from dunklszasz.cli import main
from dunklszasz.harness import ConfigError, ExperimentConfig, run

SMALL = dict(grid=GridSpec(0.5, 2.0, 4), n_ladder=(1, 8, 64), mu_list=(0.0, 1.0),
             alpha_beta_list=((0.0, 0.0), (1.0, 2.0)))


@pytest.mark.parametrize("experiment", ["moments", "converge", "compare", "certify", "weighted"])
def test_experiments_pass_and_are_deterministic(experiment):
    cfg = ExperimentConfig(experiment, **SMALL)
    first = run(cfg)
    assert first.exit_code == 0, first.summary
    parallel = run(ExperimentConfig(experiment, workers=2, **SMALL))
    assert first.to_csv() == parallel.to_csv()
    rows = list(csv.reader(io.StringIO(first.to_csv())))
    assert len({len(r) for r in rows}) == 1 and len(rows) > 1


def test_moments_spot_checks_depend_on_seed():
    a = run(ExperimentConfig("moments", seed=1, **SMALL)).to_csv()
    b = run(ExperimentConfig("moments", seed=2, **SMALL)).to_csv()
    assert a != b and "random" in a


@pytest.mark.parametrize("bad", [
    dict(grid=GridSpec(0.4, 2.0, 4)),
    dict(n_ladder=(4, 4)),
    dict(n_ladder=(0, 4)),
    dict(mu_list=(-1.0,)),
    dict(alpha_beta_list=((2.0, 1.0),)),
    dict(function_names=("nope",)),
])
def test_validation(bad):
    with pytest.raises(ConfigError):
        ExperimentConfig("converge", **bad).validate()


def test_certify_refuses_unbounded_non_lipschitz():
    with pytest.raises(ConfigError):
        ExperimentConfig("certify", function_names=("t2",)).validate()


def test_cli_writes_csv_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code = main(["compare", "--n", "1", "4", "--mu", "0", "1", "--alpha", "0", "--beta", "0",
                 "--x-points", "3", "--out", str(out)])
    assert code == 0
    header = out.read_text().splitlines()[0]
    assert header.startswith("n,x,mu,alpha,beta")
    assert main(["moments", "--x-lo", "0.4"]) == 2
    assert "x >= 1/2" in capsys.readouterr().err


def test_cli_run_subcommand_and_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": [1, 2], "mu": [0.5], "x_points": 2, "alpha": [1], "beta": [2]}))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "--experiment", "weighted", "--config", str(cfg), "--out", str(out1)]) == 0
    # flags win over the file
    assert main(["weighted", "--config", str(cfg), "--n", "3", "--out", str(out2)]) == 0
    assert out1.read_text().splitlines()[1].startswith("1,")
    assert out2.read_text().splitlines()[1].startswith("3,")


def test_cli_rejects_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["compare", "--config", str(cfg)]) == 2


def test_cli_failure_exit_code(monkeypatch):
    from dunklszasz import harness
    real = harness.run_compare

    def broken(cfg):
        res = real(cfg)
        res.failures = 1
        return res

    monkeypatch.setitem(harness.RUNNERS, "compare", broken)
    assert main(["compare", "--n", "1", "--mu", "0", "--x-points", "2", "--out", "-"]) == 1


def test_module_entry_point_version():
    out = subprocess.run([sys.executable, "-m", "dunklszasz", "--version"],
                         capture_output=True, text=True, check=True).stdout
    assert "grid version 1" in out
