import pytest

from cfg.builder import build_cfg
from conftest import HISTORY, PROGRAMS, SPECS
from depspec.model import parse_spec, parse_spec_file
from engine.checker import check_revision, check_revision_encoded
from engine.config import CheckConfig
from engine.report import VerdictKind
from explore.explorer import replay
from explore.test.program_gen import generate
from frontend.parser import parse_file, parse_program
from instrument.annotate import instrument


PROGRAM_FILES = sorted(p for p in PROGRAMS.glob("*.ecs") if p.name != "hal_model.ecs") + sorted(HISTORY.glob("*/*.ecs"))
SPEC_FILES = sorted(SPECS.glob("*.tdep"))
EXTRA_SPEC = "HAL_UART_Receive -> HAL_SPI_Transmit\napp_setup -> HAL_UART_Receive\n"


def _kinds(report):
	return [(v.dep.id, v.kind) for v in report.verdicts]


def test_fixture_corpus_is_large_enough():
	assert len(PROGRAM_FILES) >= 10
	assert len(SPEC_FILES) >= 3


@pytest.mark.parametrize("spec_path", SPEC_FILES, ids=lambda p: p.stem)
@pytest.mark.parametrize("program_path", PROGRAM_FILES, ids=lambda p: f"{p.parent.name}/{p.stem}")
def test_direct_and_encoded_verdicts_agree(program_path, spec_path):
	program = parse_file(program_path)
	spec = parse_spec_file(spec_path)
	direct = check_revision(program, spec)
	encoded = check_revision_encoded(program, spec)
	assert encoded.mode == "encoded"
	assert _kinds(direct) == _kinds(encoded)


@pytest.mark.parametrize("program_path", PROGRAM_FILES, ids=lambda p: f"{p.parent.name}/{p.stem}")
def test_agreement_on_application_order(program_path):
	program = parse_file(program_path)
	spec = parse_spec(EXTRA_SPEC)
	assert _kinds(check_revision(program, spec)) == _kinds(check_revision_encoded(program, spec))


def test_encoding_flag_selects_the_encoded_mode(program_file, spec_file):
	report = check_revision(program_file("skeleton_swapped.ecs"), spec_file("stm32_hal.tdep"),
							config=CheckConfig(encoding=True))
	assert report.mode == "encoded"
	assert report.to_dict()["stats"]["mode"] == "encoded"
	assert report.status is VerdictKind.INCORRECT


def test_encoded_trace_is_relabeled_and_replays(program_file, spec_file):
	program, spec = program_file("skeleton_swapped.ecs"), spec_file("stm32_hal.tdep")
	trace = check_revision_encoded(program, spec).verdict("d1").trace
	assert trace.dep == "d1"
	assert trace.steps[-1].kind == "exit"
	assert "assertion failed" in trace.steps[-1].detail
	cfg = build_cfg(instrument(program, spec.restricted(["d1"])))
	assert replay(cfg, trace).steps == trace.steps


@pytest.mark.parametrize("seed", range(0, 40))
def test_agreement_on_generated_programs(seed):
	case = generate(seed)
	program = parse_program(case.source, f"<generated {seed}>")
	spec = parse_spec(case.spec_text)
	assert _kinds(check_revision(program, spec)) == _kinds(check_revision_encoded(program, spec)), case.source
