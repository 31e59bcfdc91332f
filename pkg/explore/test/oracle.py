"""구문 트리를 그대로 따라가는 전수 경로 나열기

CFG 와 탐색기를 쓰지 않는다. 생성기가 만드는 부분 언어만 해석한다:
불리언 `*` 분기, 상수 비교 루프, 인자 없는 호출, 정의된 헬퍼 호출.
상태 = (지금까지 호출한 함수, 위반한 의존성, 정수 변수 환경).
"""
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from depspec.model import DependencySpec, TemporalDependency
from frontend.ast_nodes import (
	Assign, Binary, Block, CallStmt, Expr, If, IntLit, Nondet, Program, Stmt, VarDecl, VarRef, While,
)


State = Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[Tuple[str, int]]]

_MAX_ITERATIONS = 64


class UnsupportedByOracle(Exception):
	pass


class PathOracle:
	def __init__(self, program: Program, spec: DependencySpec):
		self.program = program
		self.by_after: Dict[str, List[TemporalDependency]] = {}
		for dep in spec.deps:
			self.by_after.setdefault(dep.after, []).append(dep)

	def _eval(self, expr: Expr, env: Dict[str, int]) -> int:
		if isinstance(expr, IntLit):
			return expr.value
		if isinstance(expr, VarRef):
			return env.get(expr.name, 0)
		if isinstance(expr, Binary):
			left, right = self._eval(expr.left, env), self._eval(expr.right, env)
			if expr.op == "+":
				return left + right
			if expr.op == "-":
				return left - right
			if expr.op == "<":
				return int(left < right)
			if expr.op == "==":
				return int(left == right)
		raise UnsupportedByOracle(f"expression {expr!r}")

	def _assign(self, states: Iterable[State], name: str, expr: Expr) -> Set[State]:
		out = set()
		for called, violated, env in states:
			values = dict(env)
			values[name] = self._eval(expr, values)
			out.add((called, violated, frozenset(values.items())))
		return out

	def _call(self, name: str, states: Set[State]) -> Set[State]:
		out = set()
		for called, violated, env in states:
			broken = {dep.id for dep in self.by_after.get(name, ()) if dep.before not in called}
			out.add((called | {name}, violated | broken, env))
		fn = self.program.function(name)
		if fn is not None and not fn.undefined:
			out = self._block(fn.body.stmts, out)
		return out

	def _block(self, stmts: Iterable[Stmt], states: Set[State]) -> Set[State]:
		for stmt in stmts:
			states = self._stmt(stmt, states)
		return states

	def _split(self, cond: Expr, states: Set[State]) -> Tuple[Set[State], Set[State]]:
		if isinstance(cond, Nondet):
			return set(states), set(states)
		taken, skipped = set(), set()
		for state in states:
			(taken if self._eval(cond, dict(state[2])) else skipped).add(state)
		return taken, skipped

	def _stmt(self, stmt: Stmt, states: Set[State]) -> Set[State]:
		if not states:
			return states
		if isinstance(stmt, Block):
			return self._block(stmt.stmts, states)
		if isinstance(stmt, VarDecl):
			return self._assign(states, stmt.name, stmt.init if stmt.init is not None else IntLit(0))
		if isinstance(stmt, Assign) and isinstance(stmt.target, VarRef):
			return self._assign(states, stmt.target.name, stmt.value)
		if isinstance(stmt, CallStmt) and not stmt.call.args:
			return self._call(stmt.call.name, states)
		if isinstance(stmt, If):
			taken, skipped = self._split(stmt.cond, states)
			then_states = self._stmt(stmt.then, taken)
			else_states = self._stmt(stmt.orelse, skipped) if stmt.orelse is not None else skipped
			return then_states | else_states
		if isinstance(stmt, While):
			done: Set[State] = set()
			current = states
			for _ in range(_MAX_ITERATIONS):
				if not current:
					return done
				taken, skipped = self._split(stmt.cond, current)
				done |= skipped
				current = self._stmt(stmt.body, taken)
			raise UnsupportedByOracle("loop does not terminate within the oracle limit")
		raise UnsupportedByOracle(f"statement {type(stmt).__name__}")

	def final_states(self) -> Set[State]:
		main = self.program.function("main")
		start: State = (frozenset(), frozenset(), frozenset())
		states = {start}
		for decl in self.program.globals:
			states = self._stmt(decl, states)
		return self._block(main.body.stmts, states)

	def violations(self) -> FrozenSet[str]:
		"""어떤 경로에서든 위반되는 의존성 id"""
		found: Set[str] = set()
		for _, violated, _ in self.final_states():
			found |= violated
		return frozenset(found)


def oracle_violations(program: Program, spec: DependencySpec) -> FrozenSet[str]:
	return PathOracle(program, spec).violations()
