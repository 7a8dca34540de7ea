import logging
import os

import pytest
import yaml

import prove_complex_heat
from prove_complex_heat import EXIT_ERROR, main

ZERO_DATUM_PARAMETER_FILE = '''---
required:
  version: "1.0"
  output_directory_path: ./proofs/zero
  pipeline: contour

initial_datum:
  - mode:
      wavenumber: 0
      re: "0"

contour:
  - segment:
      theta_over_pi: "1/3"
      t_start: "0"
      t_end: "0.01"
      step_size: "0.0025"
      fourier_order: 4
      chebyshev_order: 10
      projection_order: 0
'''


@pytest.fixture
def parameter_file(tmp_path):
    path = tmp_path / "zero.yml"
    path.write_text(ZERO_DATUM_PARAMETER_FILE)
    return str(path)


@pytest.fixture(autouse=True)
def remove_console_handlers():
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)
    for handler in list(root.handlers):
        if getattr(handler, "_provecomplexheat_console", False):
            root.removeHandler(handler)


def read_summary(directory):
    with open(os.path.join(directory, "summary.yml")) as handle:
        return yaml.safe_load(handle)


def test_contour_then_verify_then_export(parameter_file, tmp_path):
    out = str(tmp_path / "certificates")
    assert main(["contour", "--config", parameter_file, "--out", out]) == 0
    assert sorted(name for name in os.listdir(out) if name.startswith("step-")) == [
        "step-0001.yml", "step-0002.yml", "step-0003.yml", "step-0004.yml"]
    assert os.path.exists(os.path.join(out, "parameters.yml"))
    assert read_summary(out)["status"] == "completed"

    assert main(["verify", "--out", out]) == 0
    os.remove(os.path.join(out, "steps.csv"))
    assert main(["export-csv", "--out", out]) == 0
    assert os.path.exists(os.path.join(out, "steps.csv"))


def test_output_directory_defaults_to_the_parameter_file(parameter_file, tmp_path):
    assert main(["step", "--config", parameter_file]) == 0
    out = tmp_path / "proofs" / "zero"
    assert sorted(name for name in os.listdir(str(out)) if name.startswith("step-")) == ["step-0001.yml"]


def test_global_for_the_zero_datum_is_proved(parameter_file, tmp_path):
    out = str(tmp_path / "global")
    assert main(["global", "--config", parameter_file, "--out", out]) == 0
    summary = read_summary(out)
    assert summary["pipeline"] == "global" and summary["status"] == "proved"
    assert summary["details"]["zero_datum"] is True
    assert main(["verify", "--out", out]) == 0


def test_max_steps_override(parameter_file, tmp_path):
    out = str(tmp_path / "short")
    assert main(["contour", "--config", parameter_file, "--out", out, "--max-steps", "2"]) == 0
    assert read_summary(out)["steps"] == 2


def test_approx_writes_the_first_step(parameter_file, tmp_path):
    out = str(tmp_path / "approx")
    assert main(["approx", "--config", parameter_file, "--out", out]) == 0
    with open(os.path.join(out, prove_complex_heat.APPROX_FILE_NAME)) as handle:
        record = yaml.safe_load(handle)
    assert record["theta_over_pi"] == "1/3"


def test_wrapper_returns_the_warning_count(parameter_file, tmp_path):
    exit_code, warnings = prove_complex_heat.prove_complex_heat("contour", parameter_file, str(tmp_path / "w"))
    assert (exit_code, warnings) == (0, 0)


def test_configuration_error_exits_with_one(tmp_path):
    path = tmp_path / "bad.yml"
    path.write_text(ZERO_DATUM_PARAMETER_FILE.replace("projection_order: 0", "projection_order: 5"))
    assert main(["contour", "--config", str(path), "--out", str(tmp_path / "bad")]) == EXIT_ERROR


def test_missing_parameter_file_exits_with_one(tmp_path):
    assert main(["contour", "--config", str(tmp_path / "absent.yml")]) == EXIT_ERROR


def test_directory_commands_need_out():
    assert main(["verify"]) == EXIT_ERROR


def test_verify_of_an_empty_directory_is_an_error(tmp_path):
    assert main(["verify", "--out", str(tmp_path)]) == EXIT_ERROR


def test_empty_prompt_answer_exits_with_one(monkeypatch):
    monkeypatch.setattr("builtins.input", lambda prompt: "")
    assert main(["contour"]) == EXIT_ERROR


def test_unknown_subcommand_is_rejected():
    with pytest.raises(SystemExit):
        main(["sideways"])
