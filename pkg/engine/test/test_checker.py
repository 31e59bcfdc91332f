import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

import engine.checker
from analysis.must import MustOutcome, MustResult
from depspec.errors import InvalidSpec
from engine.checker import check_revision, dominant_reason, harness_adequacy, unmatched_names
from engine.config import CheckConfig
from engine.errors import EngineInconsistency, MergeConflict
from engine.merge import merge_hal
from engine.report import HarnessStatus, UnknownReason, VerdictKind, overall_status
from explore.explorer import ExplorationResult
from explore.trace import Bounds


SCHEMA = json.loads((Path(__file__).parents[2] / "schemas" / "check_report.schema.json").read_text(encoding="utf-8"))
HAL = "HAL_Init -> HAL_SPI_Transmit"


def _valid(report):
	Draft202012Validator(SCHEMA).validate(report.to_dict())


def _statuses(report):
	return [(e.site.callee, e.site.line, e.status) for e in report.harness.entries]


def test_skeleton_is_correct_via_must(program_file, spec_file):
	report = check_revision(program_file("skeleton.ecs"), spec_file("stm32_hal.tdep"))
	assert report.status is VerdictKind.CORRECT
	assert [(v.dep.id, v.kind, v.via) for v in report.verdicts] == [
		("d1", VerdictKind.CORRECT, "must"), ("d2", VerdictKind.CORRECT, "must"),
	]
	assert report.exhaustive and report.paths == 1
	assert report.harness.adequate
	_valid(report)


def test_swapped_skeleton_is_incorrect(program_file, spec_file):
	report = check_revision(program_file("skeleton_swapped.ecs"), spec_file("stm32_hal.tdep"))
	assert report.status is VerdictKind.INCORRECT
	d1 = report.verdict("d1")
	assert d1.kind is VerdictKind.INCORRECT
	assert len(d1.trace.steps) == 2
	data = report.to_dict()
	assert data["deps"][0]["trace"]["steps"][-1]["kind"] == "violation"
	assert data["deps"][0]["trace"]["replayable"] is True
	assert "HAL_SPI_Transmit called before HAL_Init" in report.render()
	_valid(report)


def test_missing_harness_leaves_the_transfer_unchecked(program_file, spec_file):
	report = check_revision(program_file("increment.ecs"), spec_file("stm32_hal.tdep"))
	assert report.status is VerdictKind.CORRECT
	assert not report.exhaustive
	assert _statuses(report) == [
		("HAL_Init", 13, HarnessStatus.REACHED),
		("HAL_UART_Receive", 19, HarnessStatus.REACHED),
		("HAL_SPI_Transmit", 22, HarnessStatus.NOT_REACHED),
	]
	hint = report.harness.entries[-1].suggestion
	assert "msg.type == 0x1" in hint and "line 21" in hint
	assert "`msg.type = *;`" in hint
	assert [l.code.value for l in report.lints] == ["DefaultZeroInit"]
	_valid(report)


def test_harness_makes_the_transfer_reachable(program_file, spec_file):
	report = check_revision(program_file("increment_harness.ecs"), spec_file("stm32_hal.tdep"))
	assert report.status is VerdictKind.CORRECT
	assert report.harness.adequate
	assert ("HAL_SPI_Transmit", 23, HarnessStatus.REACHED) in _statuses(report)
	assert report.lints == []


def test_harness_adequacy_alone(program_file, spec_file):
	spec = spec_file("stm32_hal.tdep")
	assert not harness_adequacy(program_file("increment.ecs"), spec).adequate
	assert harness_adequacy(program_file("increment_harness.ecs"), spec).adequate


def test_literal_false_guard_is_structurally_unreachable(program, spec):
	report = check_revision(program("void main() { HAL_Init(); if (0) { HAL_SPI_Transmit(1); } }"), spec(HAL))
	d1 = report.verdict("d1")
	assert d1.kind is VerdictKind.CORRECT and d1.vacuous
	assert report.vacuous_ids == ["d1"]
	assert report.harness.status_of("HAL_SPI_Transmit") == [HarnessStatus.UNREACHABLE]
	assert report.harness.entries[-1].suggestion is None
	assert "hold only vacuously" in report.render()
	_valid(report)


def test_unguarded_unreached_site_gets_a_generic_hint(program, spec):
	source = "void main() { HAL_Init(); if (*) { HAL_SPI_Transmit(1); } }"
	report = check_revision(program(source), spec(HAL), config=CheckConfig(bounds=Bounds(max_paths=1)))
	entry = report.harness.entries[-1]
	assert entry.status is HarnessStatus.NOT_REACHED
	assert entry.suggestion == "raise the exploration bounds or extend the harness"


COUNTED = "void main() { int x = 0; while (x < 5) { x = x + 1; } if (x == 5) { HAL_Init(); } HAL_SPI_Transmit(1); }"


def test_loop_bound_gives_unknown(program, spec):
	report = check_revision(program(COUNTED), spec(HAL))
	d1 = report.verdict("d1")
	assert (d1.kind, d1.reason) == (VerdictKind.UNKNOWN, UnknownReason.LOOP_BOUND)
	assert report.status is VerdictKind.UNKNOWN
	_valid(report)


def test_enough_loop_bound_gives_correct_via_exhaustion(program, spec):
	report = check_revision(program(COUNTED), spec(HAL), config=CheckConfig(bounds=Bounds(loop_bound=5)))
	d1 = report.verdict("d1")
	assert (d1.kind, d1.via) == (VerdictKind.CORRECT, "exhaustive")


def test_integer_choices_give_imprecision(program, spec):
	source = "void main() { int x = *; if (x == x) { HAL_Init(); } HAL_SPI_Transmit(1); }"
	d1 = check_revision(program(source), spec(HAL)).verdict("d1")
	assert (d1.kind, d1.reason) == (VerdictKind.UNKNOWN, UnknownReason.IMPRECISION)


def test_out_of_bounds_access_is_not_exhaustive(program, spec):
	source = "void main() { int a[2]; int i = 5; a[i] = 1; HAL_SPI_Transmit(1); HAL_Init(); }"
	report = check_revision(program(source), spec(HAL))
	d1 = report.verdict("d1")
	assert (d1.kind, d1.reason) == (VerdictKind.UNKNOWN, UnknownReason.OUT_OF_BOUNDS)
	assert not report.exhaustive
	_valid(report)


def test_phases_are_timed(program_file, spec_file, caplog):
	check_revision(program_file("skeleton.ecs"), spec_file("stm32_hal.tdep"))
	for phase in ("must-analysis", "exploration", "verdicts"):
		assert f"skeleton.ecs {phase} took" in caplog.text


def test_step_bound_reason(program, spec):
	source = "void main() { if (*) { HAL_Init(); } f(); f(); f(); f(); f(); f(); HAL_SPI_Transmit(1); }"
	config = CheckConfig(bounds=Bounds(max_steps=4))
	d1 = check_revision(program(source), spec(HAL), config=config).verdict("d1")
	assert (d1.kind, d1.reason) == (VerdictKind.UNKNOWN, UnknownReason.STEP_BOUND)


def test_dominant_reason_order():
	assert dominant_reason(ExplorationResult(oob_paths=1, timed_out=True)) is UnknownReason.OUT_OF_BOUNDS
	assert dominant_reason(ExplorationResult(timed_out=True, path_bound_hit=True)) is UnknownReason.TIMEOUT
	assert dominant_reason(ExplorationResult(path_bound_hit=True, step_truncations=2)) is UnknownReason.PATH_BOUND
	assert dominant_reason(ExplorationResult(step_truncations=1, loop_truncations=9)) is UnknownReason.STEP_BOUND
	assert dominant_reason(ExplorationResult(loop_truncations=1)) is UnknownReason.LOOP_BOUND
	assert dominant_reason(ExplorationResult(int_choices=3)) is UnknownReason.IMPRECISION


def test_proof_contradicted_by_exploration(monkeypatch, program_file, spec_file):
	def always_proved(cfg, spec, facts=None):
		return MustResult({dep.id: MustOutcome(dep, True) for dep in spec.deps})

	monkeypatch.setattr(engine.checker, "check_dependencies_must", always_proved)
	with pytest.raises(EngineInconsistency):
		check_revision(program_file("skeleton_swapped.ecs"), spec_file("stm32_hal.tdep"))


def test_invalid_spec_is_rejected(program_file, spec):
	with pytest.raises(InvalidSpec):
		check_revision(program_file("skeleton.ecs"), spec("a -> b\nb -> a"))


def test_hal_model_is_merged(program_file, spec_file):
	report = check_revision(program_file("skeleton.ecs"), spec_file("stm32_hal.tdep"), program_file("hal_model.ecs"))
	assert report.status is VerdictKind.CORRECT
	assert report.origin.endswith("skeleton.ecs")


def test_unmatched_spec_names_are_warned(program_file, spec_file, caplog):
	report = check_revision(program_file("skeleton.ecs"), spec_file("uart_driver.tdep"))
	assert report.unmatched == ("open", "configure", "write", "read", "close")
	assert report.status is VerdictKind.CORRECT
	assert set(report.vacuous_ids) == {"d1", "d2", "d3", "d4"}
	assert "spec function 'open' does not occur in the program" in caplog.text


def test_unmatched_names_ignore_present_functions(program, spec):
	assert unmatched_names(program("void main() { a(); }"), spec("a -> b")) == ("b",)


def test_main_view_dot_is_written(program_file, spec_file, tmp_path):
	target = tmp_path / "main.dot"
	check_revision(program_file("skeleton.ecs"), spec_file("stm32_hal.tdep"), config=CheckConfig(dot_path=str(target)))
	assert target.read_text(encoding="utf-8").startswith("digraph cfg {")


def test_merge_conflicts(program):
	app = program("void HAL_Init() { } void main() { HAL_Init(); }", "app.ecs")
	with pytest.raises(MergeConflict):
		merge_hal(app, program("void HAL_Init() { }", "hal.ecs"))
	with pytest.raises(MergeConflict):
		merge_hal(program("void HAL_Init(); void main() { }"), program("void HAL_Init(int a) { }"))
	with pytest.raises(MergeConflict):
		merge_hal(program("int g; void main() { }"), program("int g;"))


def test_merge_definition_wins(program):
	merged = merge_hal(program("void HAL_Init(); void main() { HAL_Init(); }"), program("void HAL_Init() { f(); }"))
	assert not merged.function("HAL_Init").undefined
	assert [fn.name for fn in merged.functions] == ["HAL_Init", "main"]


def test_overall_status_priority(program_file, spec_file):
	verdicts = check_revision(program_file("skeleton_swapped.ecs"), spec_file("stm32_hal.tdep")).verdicts
	assert overall_status([]) is VerdictKind.CORRECT
	assert overall_status(verdicts) is VerdictKind.INCORRECT


def test_config_validation():
	with pytest.raises(ValueError):
		CheckConfig(jobs=0)
	with pytest.raises(ValueError):
		CheckConfig(format="xml")
	with pytest.raises(ValueError):
		CheckConfig(inline_depth=0)
