"""기본값 0 초기화 같은, 기대와 다를 수 있는 의미를 사용자에게 알려주는 린트"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from frontend.ast_nodes import (
	AddrOf, Assign, Binary, Block, Call, CallStmt, Expr, FieldRef, FuncDef, If, IndexRef, IntLit,
	Nondet, Program, Return, Stmt, Unary, VarDecl, VarRef, While, Assert,
	referenced_var, stmt_exprs, walk_expr, walk_stmts,
)


class LintCode(Enum):
	DEFAULT_ZERO_INIT = "DefaultZeroInit"
	TRUNCATION_RISK = "TruncationRisk"
	UNUSED_HARNESS = "UnusedHarness"


@dataclass(frozen=True)
class Lint:
	code: LintCode
	location: Tuple[int, int]
	message: str

	def to_dict(self) -> dict:
		return {"code": self.code.value, "line": self.location[0], "column": self.location[1], "message": self.message}


# ---------------------------------------------------------------- DefaultZeroInit

class _DefaultZeroScan:
	"""구문 경로 위 must-assigned 분석

	assigned 는 "모든 경로에서 이미 대입된 변수" 집합이고,
	읽을 때 그 안에 없으면 기본값 0 에 기대는 것으로 본다.
	"""

	def __init__(self, tracked: FrozenSet[str], defined: FrozenSet[str]):
		self.tracked = tracked
		self.defined = defined
		self.first_reads: Dict[str, Expr] = {}

	def _read(self, expr: Expr, assigned: FrozenSet[str]):
		for sub in walk_expr(expr):
			if isinstance(sub, AddrOf):
				continue
			if isinstance(sub, (VarRef, FieldRef, IndexRef)):
				name = referenced_var(sub)
				if name in self.tracked and name not in assigned:
					prev = self.first_reads.get(name)
					if prev is None or sub.location < prev.location:
						self.first_reads[name] = sub

	def _call_effects(self, expr: Expr, assigned: FrozenSet[str]) -> FrozenSet[str]:
		# 정의된 함수에 &x 를 넘기면 대입된 것으로 본다; 정의 없는 함수는 메모리를 건드리지 않는다
		gained = set()
		for sub in walk_expr(expr):
			if isinstance(sub, Call) and sub.name in self.defined:
				gained.update(arg.var for arg in sub.args if isinstance(arg, AddrOf))
		return assigned | gained

	def stmt(self, stmt: Stmt, assigned: Optional[FrozenSet[str]]) -> Optional[FrozenSet[str]]:
		"""None 은 도달 불가(return 이후)"""
		if assigned is None:
			return None
		if isinstance(stmt, Block):
			for child in stmt.stmts:
				assigned = self.stmt(child, assigned)
			return assigned
		if isinstance(stmt, VarDecl):
			if stmt.init is None:
				return assigned
			self._read(stmt.init, assigned)
			return self._call_effects(stmt.init, assigned) | {stmt.name}
		if isinstance(stmt, Assign):
			if not isinstance(stmt.target, VarRef):
				# 첨자식은 읽기
				if isinstance(stmt.target, IndexRef):
					self._read(stmt.target.index, assigned)
			self._read(stmt.value, assigned)
			return self._call_effects(stmt.value, assigned) | {referenced_var(stmt.target)}
		if isinstance(stmt, (CallStmt, Assert)):
			expr = stmt.call if isinstance(stmt, CallStmt) else stmt.cond
			self._read(expr, assigned)
			return self._call_effects(expr, assigned)
		if isinstance(stmt, Return):
			if stmt.value is not None:
				self._read(stmt.value, assigned)
			return None
		if isinstance(stmt, If):
			self._read(stmt.cond, assigned)
			assigned = self._call_effects(stmt.cond, assigned)
			then_out = self.stmt(stmt.then, assigned)
			else_out = self.stmt(stmt.orelse, assigned) if stmt.orelse is not None else assigned
			return _meet(then_out, else_out)
		if isinstance(stmt, While):
			self._read(stmt.cond, assigned)
			assigned = self._call_effects(stmt.cond, assigned)
			# 본문은 0회 이상: 본문 안의 읽기는 진입 시점 사실로 검사, 루프 뒤는 진입 사실 유지
			self.stmt(stmt.body, assigned)
			return assigned
		return assigned


def _meet(a: Optional[FrozenSet[str]], b: Optional[FrozenSet[str]]) -> Optional[FrozenSet[str]]:
	if a is None:
		return b
	if b is None:
		return a
	return a & b


def _default_zero_lints(program: Program) -> List[Lint]:
	lints: List[Lint] = []
	defined = program.defined_names()

	# 전역 초기화식: 선언 순서대로
	assigned: Set[str] = set()
	uninit_globals = set()
	for decl in program.globals:
		if decl.init is not None:
			for sub in walk_expr(decl.init):
				name = referenced_var(sub)
				if name in uninit_globals and name not in assigned:
					lints.append(_zero_lint(name, sub))
					assigned.add(name)
			assigned.add(decl.name)
		else:
			uninit_globals.add(decl.name)

	for fn in program.functions:
		if fn.body is None:
			continue
		tracked = frozenset(
			s.name for s in walk_stmts(fn.body) if isinstance(s, VarDecl) and s.init is None
		)
		if not tracked:
			continue
		scan = _DefaultZeroScan(tracked, defined)
		scan.stmt(fn.body, frozenset())
		for name, expr in scan.first_reads.items():
			lints.append(_zero_lint(name, expr))
	return lints


def _zero_lint(name: str, expr: Expr) -> Lint:
	return Lint(LintCode.DEFAULT_ZERO_INIT, expr.location,
				f"'{name}' is read before any assignment and relies on the implicit default value 0")


# ---------------------------------------------------------------- TruncationRisk / UnusedHarness

def _uchar_names(fn: FuncDef, program: Program) -> Set[str]:
	names = {d.name for d in program.globals if d.type.base == "unsigned char" and d.size is None}
	names |= {p.name for p in fn.params if p.type.base == "unsigned char" and not p.is_array}
	names |= {
		s.name for s in walk_stmts(fn.body)
		if isinstance(s, VarDecl) and s.type.base == "unsigned char" and s.size is None
	}
	return names


def _overflow_prone(expr: Expr) -> bool:
	for sub in walk_expr(expr):
		if isinstance(sub, Binary) and sub.op in ("+", "-"):
			return True
		if isinstance(sub, Unary) and sub.op == "-":
			return True
		if isinstance(sub, IntLit) and not 0 <= sub.value <= 255:
			return True
	return False


def _truncation_lints(program: Program) -> List[Lint]:
	lints = []
	for fn in program.functions:
		if fn.body is None:
			continue
		uchars = _uchar_names(fn, program)
		if not uchars:
			continue
		for stmt in walk_stmts(fn.body):
			target, value = None, None
			if isinstance(stmt, Assign) and isinstance(stmt.target, VarRef):
				target, value = stmt.target.name, stmt.value
			elif isinstance(stmt, VarDecl) and stmt.init is not None:
				target, value = stmt.name, stmt.init
			if target in uchars and _overflow_prone(value):
				lints.append(Lint(LintCode.TRUNCATION_RISK, stmt.location,
								  f"'{target}' is unsigned char but is assigned an overflow-prone expression"))
	return lints


def _reads_after(stmts, start: int, name: str) -> bool:
	for stmt in stmts[start:]:
		for sub_stmt in walk_stmts(stmt):
			for expr in stmt_exprs(sub_stmt):
				if isinstance(sub_stmt, Assign) and expr is sub_stmt.target:
					if isinstance(expr, IndexRef) and any(referenced_var(e) == name for e in walk_expr(expr.index)):
						return True
					continue
				for sub in walk_expr(expr):
					if not isinstance(sub, AddrOf) and referenced_var(sub) == name:
						return True
	return False


def _harness_lints(program: Program) -> List[Lint]:
	lints = []
	for fn in program.functions:
		if fn.body is None:
			continue
		# 같은 블록과 바깥 블록들의 뒤쪽 문장을 본다; 루프 안이면 루프 전체도 본다
		_scan_harness(fn.body, [], lints)
	return lints


def _scan_harness(stmt: Stmt, outer: list, lints: List[Lint]):
	"""outer: (문장 목록, 다음 인덱스) 쌍의 스택"""
	if isinstance(stmt, Block):
		for idx, child in enumerate(stmt.stmts):
			if isinstance(child, Assign) and isinstance(child.value, Nondet):
				name = referenced_var(child.target)
				later = [(list(stmt.stmts), idx + 1)] + outer
				if not any(_reads_after(stmts, start, name) for stmts, start in later):
					lints.append(Lint(LintCode.UNUSED_HARNESS, child.location,
									  f"harness assignment to '{name}' is never read afterwards"))
			_scan_harness(child, [(list(stmt.stmts), idx + 1)] + outer, lints)
	elif isinstance(stmt, If):
		_scan_harness(stmt.then, outer, lints)
		if stmt.orelse is not None:
			_scan_harness(stmt.orelse, outer, lints)
	elif isinstance(stmt, While):
		_scan_harness(stmt.body, [([stmt], 0)] + outer, lints)


def lint_program(program: Program) -> List[Lint]:
	"""모든 린트를 위치 순으로"""
	lints = _default_zero_lints(program) + _truncation_lints(program) + _harness_lints(program)
	return sorted(lints, key=lambda l: (l.location, l.code.value))
