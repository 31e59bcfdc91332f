import pytest

import workflow.runner
from cfg.builder import build_cfg
from conftest import HISTORY
from engine.config import CheckConfig
from engine.errors import EngineInconsistency
from engine.report import VerdictKind
from explore.explorer import replay
from workflow.errors import EmptyHistory, RevisionParseError
from workflow.history import load_history
from workflow.metrics import MIXED_NOTE, UNCHANGED_NOTE, IncrementPhase, count_loc, diff_summary, metrics
from workflow.runner import check_history


SENSOR_BOARD = HISTORY / "sensor_board"
PHASES = ["skeleton", "control-flow", "control-flow", "data-flow", "data-flow", "data-flow", "data-flow"]


@pytest.fixture
def stm32(spec_file):
	return spec_file("stm32_hal.tdep")


def test_history_is_loaded_in_name_order():
	history = load_history(SENSOR_BOARD)
	assert len(history) == 7
	assert [rev.name for rev in history][:3] == ["000_skeleton", "001_app_calls", "002_branches"]
	assert [rev.index for rev in history] == list(range(7))
	assert history.origin == str(SENSOR_BOARD)


def test_empty_directory(tmp_path):
	with pytest.raises(EmptyHistory):
		load_history(tmp_path)


def test_unparsable_revision_names_the_file(tmp_path):
	(tmp_path / "000_ok.ecs").write_text("void main() { f(); }\n", encoding="utf-8")
	bad = tmp_path / "001_bad.ecs"
	bad.write_text("void main() { if (*) }\n", encoding="utf-8")
	with pytest.raises(RevisionParseError) as err:
		load_history(tmp_path)
	assert err.value.code == "revision-parse:parse"
	assert err.value.revision == str(bad)
	assert err.value.describe().startswith(f"error[revision-parse:parse] {bad}:1:")


def test_manifest_paths_are_relative_to_the_manifest(tmp_path):
	(tmp_path / "revs").mkdir()
	(tmp_path / "revs" / "b.ecs").write_text("void main() { g(); }\n", encoding="utf-8")
	(tmp_path / "revs" / "a.ecs").write_text("void main() { f(); }\n", encoding="utf-8")
	manifest = tmp_path / "order.txt"
	manifest.write_text("# newest last\nrevs/b.ecs\n\nrevs/a.ecs  # second\n", encoding="utf-8")
	history = load_history(manifest, from_list=True)
	assert [rev.name for rev in history] == ["b", "a"]


def test_sensor_board_history_is_correct_throughout(stm32):
	report = check_history(load_history(SENSOR_BOARD), stm32)
	assert report.status is VerdictKind.CORRECT
	assert [r.status for r in report.results] == [VerdictKind.CORRECT] * 7
	assert [r.increment.phase.value for r in report.results] == PHASES
	assert report.failing() == []


def test_faulty_revision_is_flagged_alone(stm32):
	history = load_history(HISTORY / "sensor_board_bug.txt", from_list=True)
	report = check_history(history, stm32)
	assert report.status is VerdictKind.INCORRECT
	assert report.failing() == [3]
	bad = report.results[3]
	assert bad.report.verdict("d1").kind is VerdictKind.CORRECT
	trace = bad.report.verdict("d2").trace
	assert [step.kind for step in trace.steps][-1] == "violation"
	assert replay(build_cfg(bad.revision.program), trace) == trace


def test_parallel_jobs_keep_revision_order(stm32):
	history = load_history(SENSOR_BOARD)
	serial = check_history(history, stm32)
	parallel = check_history(history, stm32, config=CheckConfig(jobs=2))
	assert parallel.to_list(include_timing=False) == serial.to_list(include_timing=False)


def test_revision_metrics(stm32, program_file):
	history = load_history(SENSOR_BOARD)
	first = metrics(history[0].program, stm32)
	assert (first.loc, first.hal_calls, first.nondet_count, first.var_count) == (6, 3, 2, 0)
	assert (first.branch_count, first.loop_count, first.array_count, first.hal_loc) == (0, 0, 0, 0)

	last = metrics(history[6].program, stm32)
	assert (last.var_count, last.array_count, last.branch_count, last.loop_count) == (4, 1, 2, 1)
	assert last.hal_calls == 3
	assert last.nondet_count == 2

	hal = program_file("hal_model.ecs")
	assert metrics(history[0].program, stm32, hal).hal_loc == count_loc(hal) > 0


def test_undefined_callees_count_as_hal_without_a_spec(program):
	source = "void helper() { } void main() { helper(); HAL_Init(); other(); }"
	assert metrics(program(source)).hal_calls == 2


def test_increment_summaries():
	history = load_history(SENSOR_BOARD)
	first = diff_summary(None, history[0].program)
	assert (first.added, first.removed, first.phase) == (6, 0, IncrementPhase.SKELETON)

	calls = diff_summary(history[0].program, history[1].program)
	assert (calls.added, calls.removed, calls.modified) == (2, 0, 0)

	records = diff_summary(history[4].program, history[5].program)
	assert (records.new_vars, records.new_arrays, records.harness_added) == (1, 0, 1)
	assert records.extends_harness

	arrays = diff_summary(history[5].program, history[6].program)
	assert (arrays.new_vars, arrays.new_arrays) == (0, 1)
	assert arrays.harness_added == 1
	assert arrays.to_dict()["phase"] == "data-flow"
	assert not diff_summary(history[3].program, history[4].program).extends_harness


def test_unchanged_shape_is_mixed(program, caplog):
	same = diff_summary(program("void main() { f(); }"), program("void main() { f(); }", "<same>"))
	assert same.phase is IncrementPhase.MIXED
	assert (same.added, same.removed, same.modified) == (0, 0, 0)
	assert same.note == UNCHANGED_NOTE
	assert "<same>: mixed increment" in caplog.text

	edit = diff_summary(program("void main() { int x = 0; x = 1; }"), program("void main() { int x = 0; x = 2; }"))
	assert edit.phase is IncrementPhase.MIXED
	assert edit.modified == 1
	assert edit.note == UNCHANGED_NOTE


def test_new_variables_with_fewer_branches_are_data_flow(program):
	before = program("void main() { if (*) { f(); } }")
	after = program("void main() { int x = 0; f(); }")
	assert diff_summary(before, after).phase is IncrementPhase.DATA_FLOW


def test_mixed_increment_is_noted(program, caplog):
	before = program("void main() { a(); }")
	after = program("void main() { int x = 0; if (*) { a(); } }", "<mixed>")
	summary = diff_summary(before, after)
	assert summary.phase is IncrementPhase.MIXED
	assert summary.note == MIXED_NOTE
	assert "<mixed>: mixed increment" in caplog.text


def test_history_render_and_list(stm32):
	report = check_history(load_history(SENSOR_BOARD), stm32)
	text = report.render(color=False)
	lines = text.splitlines()
	assert lines[0].split()[:4] == ["id", "revision", "phase", "LOC"]
	assert len(lines) == 2 + 7
	assert "000_skeleton" in lines[2] and "skeleton" in lines[2] and "correct" in lines[2].lower()
	assert "yes" in lines[2 + 5]

	data = report.to_list(include_timing=False)
	assert [d["increment"]["phase"] for d in data] == PHASES
	assert all("elapsed_ms" not in d["report"]["stats"] for d in data)
	assert data[0]["revision"].endswith("000_skeleton.ecs")


def test_failing_revision_error_counts_as_unknown(monkeypatch, stm32):
	real = workflow.runner.check_revision

	def flaky(program, spec, hal=None, config=None):
		if "002_branches" in program.origin:
			raise EngineInconsistency("forced failure", origin=program.origin)
		return real(program, spec, hal, config)

	monkeypatch.setattr(workflow.runner, "check_revision", flaky)
	report = check_history(load_history(SENSOR_BOARD), stm32)
	assert report.results[2].report is None
	assert "forced failure" in report.results[2].error
	assert report.status is VerdictKind.UNKNOWN
	assert "error: revision 2 (002_branches)" in report.render(color=False)
