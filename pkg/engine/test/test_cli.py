import json
import sys
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from loguru import logger

import idcc
from conftest import HISTORY, PROGRAMS, SPECS
from frontend.parser import parse_file


STM32 = str(SPECS / "stm32_hal.tdep")
SCHEMA = json.loads((Path(__file__).parents[2] / "schemas" / "check_report.schema.json").read_text(encoding="utf-8"))


@pytest.fixture(autouse=True)
def restore_logging():
	yield
	logger.remove()
	logger.add(sys.__stderr__, level="INFO")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
	monkeypatch.delenv("IDCC_TIMEOUT", raising=False)
	monkeypatch.delenv("IDCC_JOBS", raising=False)


def _program(name):
	return str(PROGRAMS / name)


def test_correct_revision_exits_zero(capsys):
	assert idcc.main(["check", _program("skeleton.ecs"), "--spec", STM32]) == 0
	assert "Correct" in capsys.readouterr().out


def test_incorrect_revision_exits_one(capsys):
	assert idcc.main(["check", _program("skeleton_swapped.ecs"), "--spec", STM32]) == 1
	assert "HAL_SPI_Transmit called before HAL_Init" in capsys.readouterr().out


def test_unknown_revision_exits_two(tmp_path):
	source = tmp_path / "counted.ecs"
	source.write_text("void main() { int x = 0; while (x < 5) { x = x + 1; } if (x == 5) { HAL_Init(); } "
					  "HAL_SPI_Transmit(1); }\n", encoding="utf-8")
	assert idcc.main(["check", str(source), "--spec", STM32]) == 2
	assert idcc.main(["check", str(source), "--spec", STM32, "--loop-bound", "5"]) == 0


def test_parse_error_exits_three(tmp_path, capsys):
	source = tmp_path / "broken.ecs"
	source.write_text("void main() { if (*) }\n", encoding="utf-8")
	assert idcc.main(["check", str(source), "--spec", STM32]) == 3
	assert capsys.readouterr().err.startswith(f"error[parse] {source}:1:")


def test_cyclic_spec_exits_three(tmp_path, capsys):
	spec = tmp_path / "cycle.tdep"
	spec.write_text("a -> b\nb -> a\n", encoding="utf-8")
	assert idcc.main(["check", _program("skeleton.ecs"), "--spec", str(spec)]) == 3
	assert "error[" in capsys.readouterr().err


def test_missing_file_exits_three(tmp_path, capsys):
	assert idcc.main(["check", str(tmp_path / "nope.ecs"), "--spec", STM32]) == 3
	assert "error[io]" in capsys.readouterr().err


def test_usage_error_exits_three():
	with pytest.raises(SystemExit) as err:
		idcc.main(["check", _program("skeleton.ecs")])
	assert err.value.code == 3


def test_invalid_bounds_exit_three(capsys):
	assert idcc.main(["check", _program("skeleton.ecs"), "--spec", STM32, "--loop-bound", "-1"]) == 3


def test_json_report_matches_the_schema(capsys):
	assert idcc.main(["check", _program("increment.ecs"), "--spec", STM32, "--format", "json"]) == 0
	data = json.loads(capsys.readouterr().out)
	Draft202012Validator(SCHEMA).validate(data)
	assert data["lints"][0]["code"] == "DefaultZeroInit"


def test_encoding_flag(capsys):
	assert idcc.main(["check", _program("skeleton_swapped.ecs"), "--spec", STM32, "--encoding", "--format", "json"]) == 1
	assert json.loads(capsys.readouterr().out)["stats"]["mode"] == "encoded"


def test_dot_output(tmp_path):
	target = tmp_path / "main.dot"
	assert idcc.main(["check", _program("skeleton.ecs"), "--spec", STM32, "--dot", str(target)]) == 0
	assert target.exists()


def test_history_command(capsys):
	assert idcc.main(["history", str(HISTORY / "sensor_board"), "--spec", STM32]) == 0
	out = capsys.readouterr().out
	assert "006_arrays" in out


def test_history_with_faulty_revision(capsys):
	args = ["history", str(HISTORY / "sensor_board_bug.txt"), "--from-list", "--spec", STM32, "--format", "json"]
	assert idcc.main(args) == 1
	data = json.loads(capsys.readouterr().out)
	assert [d["report"]["status"] for d in data] == ["Correct"] * 3 + ["Incorrect"] + ["Correct"] * 3


def test_jobs_from_environment(monkeypatch):
	monkeypatch.setenv("IDCC_JOBS", "2")
	assert idcc.main(["history", str(HISTORY / "sensor_board"), "--spec", STM32]) == 0


def test_bad_environment_number_exits_three(monkeypatch, capsys):
	monkeypatch.setenv("IDCC_TIMEOUT", "soon")
	assert idcc.main(["check", _program("skeleton.ecs"), "--spec", STM32]) == 3
	assert "IDCC_TIMEOUT" in capsys.readouterr().err


def test_instrument_writes_a_parsable_file(tmp_path):
	target = tmp_path / "out.ecs"
	assert idcc.main(["instrument", _program("skeleton.ecs"), "--spec", STM32, "-o", str(target)]) == 0
	instrumented = parse_file(target)
	assert instrumented.function("HAL_Init") is not None
	assert "__idcc_state_d1" in target.read_text(encoding="utf-8")


def test_reach_exit_codes(capsys):
	assert idcc.main(["reach", _program("increment_harness.ecs"), "--spec", STM32]) == 0
	assert idcc.main(["reach", _program("increment.ecs"), "--spec", STM32]) == 2
	assert "hint:" in capsys.readouterr().out


def test_graph_command(capsys):
	assert idcc.main(["graph", "--spec", str(SPECS / "spi_driver.tdep"), "--order"]) == 0
	captured = capsys.readouterr()
	assert captured.out.count("->") == 13
	assert captured.out.strip().startswith("digraph")
	assert captured.err.strip().splitlines()[-1].split()[0] == "init"


def test_graph_order_goes_to_stdout_with_a_file(tmp_path, capsys):
	target = tmp_path / "spec.dot"
	assert idcc.main(["graph", "--spec", str(SPECS / "spi_driver.tdep"), "--order", "-o", str(target)]) == 0
	assert target.read_text(encoding="utf-8").count("->") == 13
	assert capsys.readouterr().out.split()[0] == "init"
