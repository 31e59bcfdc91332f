import pytest

from analysis.must import check_dependencies_must, forward_must, must_called_analysis, prove_asserts
from cfg.builder import build_cfg
from conftest import PROGRAMS
from frontend.parser import parse_file


HAL = "HAL_Init -> HAL_SPI_Transmit"


def _outcome(program, spec, source, dep="d1"):
	return check_dependencies_must(build_cfg(program(source)), spec(HAL))[dep]


def test_skeleton_is_proved(program_file, spec_file):
	result = check_dependencies_must(build_cfg(program_file("skeleton.ecs")), spec_file("stm32_hal.tdep"))
	assert result.proved() == ["d1", "d2"]
	assert not result["d1"].vacuous


def test_swapped_skeleton_points_at_the_transfer(program_file, spec_file):
	result = check_dependencies_must(build_cfg(program_file("skeleton_swapped.ecs")), spec_file("stm32_hal.tdep"))
	assert result.proved() == []
	assert result["d1"].label == "PotentialViolation"
	assert (result["d1"].site.callee, result["d1"].site.line) == ("HAL_SPI_Transmit", 4)
	assert (result["d2"].site.callee, result["d2"].site.line) == ("HAL_UART_Receive", 5)


def test_init_on_one_branch_only(program, spec):
	assert not _outcome(program, spec, "void main() { if (*) { HAL_Init(); } HAL_SPI_Transmit(1); }").proved


def test_init_on_both_branches(program, spec):
	source = "void main() { if (*) { HAL_Init(); } else { HAL_Init(); } HAL_SPI_Transmit(1); }"
	assert _outcome(program, spec, source).proved


def test_init_inside_a_loop_does_not_count(program, spec):
	assert not _outcome(program, spec, "void main() { while (*) { HAL_Init(); } HAL_SPI_Transmit(1); }").proved


def test_transfer_inside_a_loop_after_init(program, spec):
	assert _outcome(program, spec, "void main() { HAL_Init(); while (*) { HAL_SPI_Transmit(1); } }").proved


def test_conditions_are_not_interpreted(program, spec):
	# 실행 불가 경로도 본다: must 분석은 보수적
	source = "void main() { int x = 1; if (x) { HAL_Init(); } HAL_SPI_Transmit(1); }"
	assert not _outcome(program, spec, source).proved


def test_init_through_an_inlined_helper(program, spec):
	source = "void setup() { HAL_Init(); } void main() { setup(); HAL_SPI_Transmit(1); }"
	assert _outcome(program, spec, source).proved


def test_early_return_skips_init(program, spec):
	source = "void main() { if (*) { return; } HAL_Init(); HAL_SPI_Transmit(1); }"
	assert _outcome(program, spec, source).proved
	source = "void send() { if (*) { return; } HAL_Init(); } void main() { send(); HAL_SPI_Transmit(1); }"
	assert not _outcome(program, spec, source).proved


def test_unreachable_after_call_is_vacuous(program, spec):
	outcome = _outcome(program, spec, "void main() { HAL_Init(); if (0) { HAL_SPI_Transmit(1); } }")
	assert outcome.proved and outcome.vacuous
	outcome = _outcome(program, spec, "void main() { HAL_Init(); }")
	assert outcome.proved and outcome.vacuous


@pytest.mark.parametrize("name", sorted(p.name for p in PROGRAMS.glob("*.ecs") if p.name != "hal_model.ecs"))
def test_worklist_order_does_not_change_the_fixpoint(name):
	cfg = build_cfg(parse_file(PROGRAMS / name))
	fifo = must_called_analysis(cfg, order="fifo")
	lifo = must_called_analysis(cfg, order="lifo")
	assert fifo.facts == lifo.facts


def test_facts_at_exit(program_file):
	cfg = build_cfg(program_file("skeleton.ecs"))
	facts = must_called_analysis(cfg)
	assert facts.at(cfg.exit) == {"HAL_Init", "HAL_UART_Receive", "HAL_SPI_Transmit"}
	assert facts.at(cfg.entry) == frozenset()


def test_identity_transfer_keeps_entry_facts(program_file):
	cfg = build_cfg(program_file("increment.ecs"))
	facts = forward_must(cfg, lambda node, incoming: incoming)
	assert all(value == frozenset() for value in facts.values() if value is not None)


@pytest.mark.parametrize("body, proved", [
	("v = 1; assert(v == 1);", True),
	("if (*) { v = 1; } else { v = 1; } assert(v == 1);", True),
	("if (*) { v = 1; } assert(v == 1);", False),
	("v = 1; v = *; assert(v == 1);", False),
	("v = 1; v = 2; assert(v == 1);", False),
	("v = 1; while (*) { f(); } assert(1 == v);", True),
	("v = 1; assert(v == 2);", False),
])
def test_assert_proofs(program, body, proved):
	cfg = build_cfg(program(f"int v = 0; void main() {{ {body} }}"))
	proofs = list(prove_asserts(cfg).values())
	assert len(proofs) == 1
	assert proofs[0].proved is proved


def test_no_asserts_no_proofs(program_file):
	assert prove_asserts(build_cfg(program_file("skeleton.ecs"))) == {}
