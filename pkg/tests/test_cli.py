import json

import pytest

from app import cli
from app.cli import RunConfig, main, parse_pairs, read_config_file, run
from app.core.constants import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION
from app.core.exceptions import NumericalError, UsageError, ValidationError

ZETA0_ARGS = ["estimate", "zeta0", "--k", "2", "--B", "2/5", "--profile", "poly:[0,0,1]"]


@pytest.fixture(autouse=True)
def _single_worker(single_worker):
    yield


def test_estimate_writes_json(capsys):
    assert main(ZETA0_ARGS) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == "1/100"
    assert report["config"] == {"k": 2, "B": "2/5", "C": "1/5", "a": "1/10"}


def test_json_is_byte_identical(capsys):
    main(ZETA0_ARGS)
    first = capsys.readouterr().out
    main(ZETA0_ARGS)
    assert capsys.readouterr().out == first


def test_invalid_configuration_exits_one(capsys):
    assert main(["estimate", "zeta0", "--k", "2", "--B", "1/4", "--profile", "const:1"]) == EXIT_VALIDATION
    assert capsys.readouterr().out == ""


def test_numerical_failure_exits_two(monkeypatch):
    def diverge(subcommand, params):
        raise NumericalError("oracle diverged", {"t": 0.01})

    monkeypatch.setattr(cli, "run_pipeline", diverge)
    assert main(ZETA0_ARGS) == EXIT_NUMERICAL


@pytest.mark.parametrize("argv", [
    [],
    ["--format", "json"],
    ["hologram"],
    ["axioms", "stray", "--k", "2"],
    ["flat", "sideways", "--profile", "const:1"],
])
def test_usage_errors_exit_64(argv):
    assert main(argv) == EXIT_USAGE


def test_bare_flag_for_an_integer_is_invalid():
    assert main(["estimate", "zeta0", "--k", "--B", "2/5", "--profile", "const:1"]) == EXIT_VALIDATION


def test_help_exits_zero(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "lagconf" in capsys.readouterr().out


def test_parse_pairs():
    assert parse_pairs("flat", ["phi-k", "--k", "2", "--upsilon"]) == {"mode": "phi-k", "k": "2", "upsilon": "true"}
    assert parse_pairs("estimate", ["--k-max", "-3"]) == {"k_max": "-3"}
    with pytest.raises(UsageError):
        parse_pairs("axioms", ["stray"])
    with pytest.raises(UsageError):
        parse_pairs("estimate", ["--k", "2", "loose"])


def test_config_file_values_lose_to_flags(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("# two circles by default\nk = 3\nB = 2/5\nprofile = poly:[0,0,1]\n")
    assert main(["estimate", "zeta0", "--config", str(path), "--k", "2"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["k"] == 2


def test_config_file_format(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("k 3\n")
    with pytest.raises(ValidationError):
        read_config_file(str(path))
    with pytest.raises(ValidationError):
        read_config_file(str(tmp_path / "missing.cfg"))


def test_csv_sweep(capsys):
    argv = ["estimate", "zeta0", "--ks", "2,3", "--Bs", "1/4,2/5", "--profile", "poly:[0,0,1]", "--format", "csv"]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,B,kind,value"
    assert lines[1] == "2,2/5,zeta0,1/100"
    assert len(lines) == 3


def test_csv_without_table_is_rejected():
    assert main(ZETA0_ARGS + ["--format", "csv"]) == EXIT_VALIDATION


def test_bad_option_values_are_usage_errors():
    assert main(ZETA0_ARGS + ["--format", "xml"]) == EXIT_USAGE
    assert main(ZETA0_ARGS + ["--seed", "many"]) == EXIT_USAGE


def test_seed_reaches_the_axiom_suite(tmp_path):
    output = tmp_path / "axioms.json"
    cfg = RunConfig(subcommand="axioms", params={"k": "2", "B": "2/5", "samples": "3"}, seed=5, output=str(output))
    assert run(cfg) == EXIT_OK
    report = json.loads(output.read_text())
    assert report["seed"] == 5
    assert report["passed"]


def test_seed_is_ignored_elsewhere(capsys):
    assert main(ZETA0_ARGS + ["--seed", "9"]) == EXIT_OK
    assert "seed" not in json.loads(capsys.readouterr().out)


def test_recurrence_enumeration_reports_exact_density(capsys):
    assert main(["recurrence", "enumerate", "--k", "2", "--window", "10"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["min_density"] == "1/2"


def test_constant_profile_has_unit_estimate(capsys):
    assert main(["estimate", "zeta0", "--k", "2", "--B", "2/5", "--profile", "const:1"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == "1/1"


def test_superpotential_report(capsys):
    argv = ["superpotential", "--k", "2", "--B", "2/5", "--a", "1/10", "--order", "3/10", "--oracle", "false"]
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["a"] == "1/10"
    assert report["signs"] == [1]
    assert "oracle" not in report
