"""리비전 지표와 증분 요약

증분 단계 규칙 (권고일 뿐 오류는 아니다):
  skeleton      첫 리비전
  control-flow  새 변수/배열 없이 분기·루프·호출이 바뀌었다
  data-flow     새 변수/배열이 생겼고 분기·루프 수는 늘지 않았다
  mixed         그 밖의 경우, 메모를 단다
                (구조와 변수를 한꺼번에 바꾼 증분, 변수도 구조도 그대로인 식 수정이나 동일한 리비전)
"""
import difflib
from collections import Counter
from dataclasses import asdict, dataclass
from enum import Enum
from typing import List, Optional, Set, Tuple

from loguru import logger

from depspec.model import DependencySpec
from frontend.ast_nodes import (
	Assign, If, Nondet, Program, VarDecl, While, iter_calls, stmt_exprs, walk_expr, walk_program_stmts,
)
from frontend.emitter import emit_expr, emit_lines


class IncrementPhase(Enum):
	SKELETON = "skeleton"
	CONTROL_FLOW = "control-flow"
	DATA_FLOW = "data-flow"
	MIXED = "mixed"


MIXED_NOTE = ("this increment changes control flow and introduces variables at once; "
			  "consider separate increments for the new variables")
UNCHANGED_NOTE = ("this increment neither introduces variables nor changes control flow; "
				  "consider folding it into a neighbouring increment")


@dataclass(frozen=True)
class RevisionMetrics:
	loc: int = 0
	hal_calls: int = 0
	nondet_count: int = 0
	var_count: int = 0
	branch_count: int = 0
	loop_count: int = 0
	array_count: int = 0
	hal_loc: int = 0

	def to_dict(self) -> dict:
		return asdict(self)


@dataclass(frozen=True)
class IncrementSummary:
	added: int = 0
	removed: int = 0
	modified: int = 0
	new_vars: int = 0
	new_arrays: int = 0
	harness_added: int = 0
	phase: IncrementPhase = IncrementPhase.DATA_FLOW
	note: Optional[str] = None

	@property
	def extends_harness(self) -> bool:
		return self.harness_added > 0

	def to_dict(self) -> dict:
		data = asdict(self)
		data["phase"] = self.phase.value
		data["extends_harness"] = self.extends_harness
		return data


def source_lines(program: Program) -> List[str]:
	"""정규화된 소스 줄 (emit 결과에서 앞뒤 공백 제거, 빈 줄 제외)"""
	return [line.strip() for line in emit_lines(program) if line.strip()]


def count_loc(program: Optional[Program]) -> int:
	return 0 if program is None else len(source_lines(program))


def _declarations(program: Program) -> List[Tuple[str, VarDecl]]:
	decls = [("", d) for d in program.globals]
	decls += [(fn.name, stmt) for fn, stmt in walk_program_stmts(program) if isinstance(stmt, VarDecl)]
	return decls


def _all_exprs(program: Program):
	for decl in program.globals:
		if decl.init is not None:
			yield decl.init
	for _, stmt in walk_program_stmts(program):
		yield from stmt_exprs(stmt)


def _is_hal_call(name: str, program: Program, spec: Optional[DependencySpec]) -> bool:
	if spec is not None and len(spec):
		return name in spec.names()
	fn = program.function(name)
	return fn is None or fn.undefined


def metrics(program: Program, spec: Optional[DependencySpec] = None, hal: Optional[Program] = None) -> RevisionMetrics:
	"""
	hal_calls 는 명세에 나오는 함수의 호출 지점 수.
	명세가 없으면 프로그램 안에서 정의되지 않은 함수의 호출을 센다.
	"""
	stmts = [stmt for _, stmt in walk_program_stmts(program)]
	decls = _declarations(program)
	return RevisionMetrics(
		loc=count_loc(program),
		hal_calls=sum(1 for _, call in iter_calls(program) if _is_hal_call(call.name, program, spec)),
		nondet_count=sum(1 for expr in _all_exprs(program) for sub in walk_expr(expr) if isinstance(sub, Nondet)),
		var_count=len(decls),
		branch_count=sum(1 for s in stmts if isinstance(s, If)),
		loop_count=sum(1 for s in stmts if isinstance(s, While)),
		array_count=sum(1 for _, d in decls if d.size is not None),
		hal_loc=count_loc(hal),
	)


# ---------------------------------------------------------------- 증분

def _declared(program: Optional[Program], arrays: bool) -> Set[Tuple[str, str]]:
	if program is None:
		return set()
	return {(scope, d.name) for scope, d in _declarations(program) if (d.size is not None) == arrays}


def _harness(program: Optional[Program]) -> Counter:
	"""`v = *;` 형태의 하네스 대입 (함수별)"""
	if program is None:
		return Counter()
	return Counter(
		(fn.name, emit_expr(stmt.target))
		for fn, stmt in walk_program_stmts(program)
		if isinstance(stmt, Assign) and isinstance(stmt.value, Nondet)
	)


def _structure(program: Optional[Program]) -> Tuple[int, int]:
	if program is None:
		return (0, 0)
	stmts = [stmt for _, stmt in walk_program_stmts(program)]
	return (sum(1 for s in stmts if isinstance(s, If)), sum(1 for s in stmts if isinstance(s, While)))


def _calls(program: Optional[Program]) -> Tuple[str, ...]:
	return () if program is None else tuple(call.name for _, call in iter_calls(program))


def classify(prev: Optional[Program], next_: Program, new_vars: int, new_arrays: int) -> IncrementPhase:
	if prev is None:
		return IncrementPhase.SKELETON
	before, after = _structure(prev), _structure(next_)
	control_changed = before != after or _calls(prev) != _calls(next_)
	structure_grew = any(n > p for n, p in zip(after, before))
	flow_added = new_vars > 0 or new_arrays > 0
	if not flow_added and control_changed:
		return IncrementPhase.CONTROL_FLOW
	if flow_added and not structure_grew:
		return IncrementPhase.DATA_FLOW
	return IncrementPhase.MIXED


def diff_summary(prev: Optional[Program], next_: Program) -> IncrementSummary:
	"""정규화된 소스 줄의 LCS diff. prev 가 None 이면 첫 리비전(skeleton)"""
	before = source_lines(prev) if prev is not None else []
	after = source_lines(next_)
	added = removed = modified = 0
	matcher = difflib.SequenceMatcher(a=before, b=after, autojunk=False)
	for tag, i1, i2, j1, j2 in matcher.get_opcodes():
		if tag == "insert":
			added += j2 - j1
		elif tag == "delete":
			removed += i2 - i1
		elif tag == "replace":
			common = min(i2 - i1, j2 - j1)
			modified += common
			added += (j2 - j1) - common
			removed += (i2 - i1) - common

	new_vars = len(_declared(next_, arrays=False) - _declared(prev, arrays=False))
	new_arrays = len(_declared(next_, arrays=True) - _declared(prev, arrays=True))
	harness_added = sum((_harness(next_) - _harness(prev)).values())
	phase = classify(prev, next_, new_vars, new_arrays)
	note = None
	if phase is IncrementPhase.MIXED:
		note = MIXED_NOTE if new_vars or new_arrays else UNCHANGED_NOTE
		logger.warning(f"{next_.origin}: mixed increment, {note}")
	return IncrementSummary(added, removed, modified, new_vars, new_arrays, harness_added, phase, note)
