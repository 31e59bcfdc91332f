from frontend.lint import LintCode, lint_program


def _codes(lints):
	return [l.code for l in lints]


def test_increment_reads_record_before_assignment(program_file):
	lints = lint_program(program_file("increment.ecs"))
	assert _codes(lints) == [LintCode.DEFAULT_ZERO_INIT]
	assert lints[0].location[0] == 21
	assert "'msg'" in lints[0].message


def test_harness_assignment_removes_the_lint(program_file):
	assert lint_program(program_file("increment_harness.ecs")) == []


def test_assignment_on_one_branch_only(program):
	lints = lint_program(program("void main() { int x; if (*) { x = 1; } f(x); }"))
	assert _codes(lints) == [LintCode.DEFAULT_ZERO_INIT]


def test_assignment_on_both_branches(program):
	assert lint_program(program("void main() { int x; if (*) { x = 1; } else { x = 2; } f(x); }")) == []


def test_read_inside_loop_before_assignment(program):
	lints = lint_program(program("void main() { int x; while (*) { f(x); x = 1; } }"))
	assert _codes(lints) == [LintCode.DEFAULT_ZERO_INIT]
	assert lints[0].location == (1, 36)


def test_defined_callee_with_address_counts_as_assignment(program):
	source = "void fill(int v) { v = 1; } void main() { int x; fill(&x); g(x); }"
	assert lint_program(program(source)) == []


def test_undefined_callee_with_address_does_not_assign(program):
	lints = lint_program(program("void main() { int x; fill(&x); g(x); }"))
	assert _codes(lints) == [LintCode.DEFAULT_ZERO_INIT]


def test_unsigned_char_arithmetic(program):
	lints = lint_program(program("void main() { unsigned char c = 0; c = c + 1; c = 7; }"))
	assert _codes(lints) == [LintCode.TRUNCATION_RISK]
	assert "'c'" in lints[0].message


def test_unsigned_char_large_literal(program):
	lints = lint_program(program("void main() { unsigned char c = 300; f(c); }"))
	assert _codes(lints) == [LintCode.TRUNCATION_RISK]


def test_harness_never_read(program):
	lints = lint_program(program("void main() { int x = 0; x = *; f(); }"))
	assert _codes(lints) == [LintCode.UNUSED_HARNESS]


def test_harness_read_later(program):
	assert lint_program(program("void main() { int x = 0; x = *; f(x); }")) == []


def test_harness_read_on_next_loop_iteration(program):
	source = "void main() { int x = 0; while (*) { if (x == 1) { f(); } x = *; } }"
	assert lint_program(program(source)) == []


def test_lints_are_sorted_by_location(program):
	source = "void main() { unsigned char c = 0; int y; c = c - 1; f(y); }"
	lints = lint_program(program(source))
	assert [l.location for l in lints] == sorted(l.location for l in lints)
	assert set(_codes(lints)) == {LintCode.TRUNCATION_RISK, LintCode.DEFAULT_ZERO_INIT}
