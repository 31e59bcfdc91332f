"""유계 명시적 상태 탐색기

main 진입점에서 구체 실행을 깊이 우선으로 나열한다.
  - 조건 자리의 `*` 는 false → true 순서로 갈라진다
  - 정수 자리의 `*` 와 정의 없는 함수의 반환값은 nondet_domain 을 오름차순으로 돈다
  - 정의 없는 함수 호출은 메모리를 바꾸지 않는다 (&x 인자 포함)
  - 의존성마다 처음 찾은 위반 경로를 기록하고 탐색은 계속한다
  - 실패한 assert 는 그 경로를 끝낸다
  - 루프 한 인스턴스에서 참 간선을 loop_bound 번 넘게 타면 경로를 버린다
  - 배열 범위를 벗어난 접근은 그 경로를 끝내고 oob_paths 로 센다 (잘린 경로로 친다)
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from cfg.graph import Cfg, CallSite, CfgNode, NodeKind, call_sites
from debug_tools.timer import Stopwatch
from depspec.model import DependencySpec, TemporalDependency
from explore.errors import ReplayDivergence
from explore.memory import Memory, OutOfBounds, evaluate, store
from explore.trace import Bounds, Step, Trace
from frontend.ast_nodes import COMPARISON_OPS, Binary, IntLit, Nondet, Unary, referenced_var, walk_expr


RESERVED_PREFIX = "__idcc_"
_TIMEOUT_CHECK_EVERY = 512


# ---------------------------------------------------------------- 비결정 도메인

def _literal(expr) -> Optional[int]:
	if isinstance(expr, IntLit):
		return expr.value
	if isinstance(expr, Unary) and expr.op == "-" and isinstance(expr.operand, IntLit):
		return -expr.operand.value
	return None


def _mentions_reserved(expr) -> bool:
	return any((referenced_var(sub) or "").startswith(RESERVED_PREFIX) for sub in walk_expr(expr))


def nondet_domain(cfg: Cfg) -> Tuple[int, ...]:
	"""{0, 1} ∪ {k-1, k, k+1 : 비교식에 나오는 정수 리터럴 k}, 오름차순"""
	domain = {0, 1}
	for node in cfg.nodes():
		for expr in (node.value, node.target):
			if expr is None or isinstance(expr, Nondet):
				continue
			for sub in walk_expr(expr):
				if not isinstance(sub, Binary) or sub.op not in COMPARISON_OPS or _mentions_reserved(sub):
					continue
				for operand in walk_expr(sub):
					k = _literal(operand)
					if k is not None:
						domain.update((k - 1, k, k + 1))
	return tuple(sorted(domain))


# ---------------------------------------------------------------- 결과

@dataclass
class ExplorationResult:
	violations: Dict[str, Trace] = field(default_factory=dict)
	assert_failures: Dict[int, Trace] = field(default_factory=dict)
	covered_sites: Tuple[CallSite, ...] = ()
	covered_nodes: FrozenSet[int] = frozenset()
	paths_explored: int = 0
	loop_truncations: int = 0
	step_truncations: int = 0
	oob_paths: int = 0
	path_bound_hit: bool = False
	timed_out: bool = False
	int_choices: int = 0
	elapsed_ms: int = 0

	@property
	def truncation_events(self) -> int:
		return (self.loop_truncations + self.step_truncations + self.oob_paths
				+ int(self.path_bound_hit) + int(self.timed_out))

	@property
	def exhaustive(self) -> bool:
		return self.truncation_events == 0 and self.int_choices == 0

	def to_dict(self, include_timing: bool = False) -> dict:
		data = {
			"violations": {dep: t.to_json() for dep, t in sorted(self.violations.items())},
			"assert_failures": [t.to_json() for _, t in sorted(self.assert_failures.items())],
			"covered_sites": [{"callee": s.callee, "line": s.line} for s in self.covered_sites],
			"paths": self.paths_explored,
			"truncations": self.truncation_events,
			"exhaustive": self.exhaustive,
		}
		if include_timing:
			data["elapsed_ms"] = self.elapsed_ms
		return data


# ---------------------------------------------------------------- 실행기

@dataclass
class _State:
	node: int
	prev: Optional[int]
	memory: Memory
	called: FrozenSet[str]
	loops: Dict[int, int]
	steps: List[Step]
	count: int = 0

	def fork(self) -> "_State":
		return _State(self.node, self.prev, dict(self.memory), self.called, dict(self.loops), list(self.steps), self.count)


class _Stop(Exception):
	pass


class _Executor:
	def __init__(self, cfg: Cfg, spec: DependencySpec, bounds: Bounds, domain: Sequence[int],
				 watch: Optional[Stopwatch] = None, stop_on: Optional[Tuple[str, object]] = None):
		self.cfg = cfg
		self.bounds = bounds
		self.domain = tuple(domain)
		self.watch = watch or Stopwatch("explore")
		self.stop_on = stop_on
		self.by_after: Dict[str, List[TemporalDependency]] = {}
		for dep in spec.deps:
			self.by_after.setdefault(dep.after, []).append(dep)
		self.result = ExplorationResult()
		self.covered: set = set()
		self.ticks = 0

	def initial(self) -> _State:
		return _State(self.cfg.entry, None, {}, frozenset(), {}, [])

	# ------------------------------------------------------------

	def options(self, node: CfgNode) -> Optional[Tuple[int, ...]]:
		"""선택 지점이면 선택지 (탐색 순서대로)"""
		if node.kind is NodeKind.BRANCH and isinstance(node.value, Nondet):
			return (0, 1)
		if node.kind is NodeKind.HAVOC or (node.kind is NodeKind.CALL and node.target is not None):
			return self.domain
		return None

	def _step(self, state: _State, node: CfgNode, kind: str, detail: str, choice: Optional[int] = None):
		state.steps.append(Step(node.line, kind, detail, choice, node.inline_stack, node.id))

	def _monitor(self, state: _State, node: CfgNode):
		for dep in self.by_after.get(node.callee, ()):
			if dep.before in state.called or dep.id in self.result.violations:
				continue
			marker = Step(node.line, "violation", f"{dep.id}: {dep.after} called before {dep.before}",
						  None, node.inline_stack, node.id)
			trace = Trace(dep.id, tuple(state.steps) + (marker,), dep.before, dep.after)
			self.result.violations[dep.id] = trace
			logger.debug(f"{self.cfg.origin}: violation of {dep} at line {node.line}")
			if self.stop_on == ("dep", dep.id):
				raise _Stop()

	def _assert_failed(self, state: _State, node: CfgNode):
		if node.id in self.result.assert_failures:
			return
		marker = Step(node.line, "exit", f"assertion failed: {node.text}", None, node.inline_stack, node.id)
		self.result.assert_failures[node.id] = Trace(f"assert@{node.line}", tuple(state.steps) + (marker,),
													  assert_node=node.id)
		if self.stop_on == ("assert", node.id):
			raise _Stop()

	def advance(self, state: _State, choice: Optional[int]) -> Tuple[str, object]:
		"""다음 선택 지점이나 경로 끝까지 실행한다

		("choice", 선택지) | ("end", 이유) 를 돌려준다.
		이유: exit, assert, oob, loop, steps, timeout
		"""
		graph = self.cfg.graph
		while True:
			node = self.cfg.node(state.node)
			opts = self.options(node)
			if opts is not None and choice is None:
				return "choice", opts

			self.ticks += 1
			if self.ticks % _TIMEOUT_CHECK_EVERY == 0 and self.watch.expired(self.bounds.timeout):
				return "end", "timeout"
			state.count += 1
			if state.count > self.bounds.max_steps:
				return "end", "steps"

			taken: Optional[bool] = None
			try:
				if node.kind is NodeKind.EXIT:
					return "end", "exit"
				if node.kind is NodeKind.CALL:
					self.covered.add(node.id)
					self._step(state, node, "call", node.text)
					self._monitor(state, node)
					state.called = state.called | {node.callee}
					if node.target is not None:
						self.result.int_choices += 1
						store(node.target, choice, state.memory, self.cfg.slots)
						self._step(state, node, "nondet", f"{node.callee} returned", choice)
				elif node.kind is NodeKind.ASSIGN:
					store(node.target, evaluate(node.value, state.memory, self.cfg.slots), state.memory, self.cfg.slots)
					self._step(state, node, "assign", node.text)
				elif node.kind is NodeKind.HAVOC:
					self.result.int_choices += 1
					store(node.target, choice, state.memory, self.cfg.slots)
					self._step(state, node, "nondet", node.text, choice)
				elif node.kind is NodeKind.ZERO:
					state.memory.pop(node.target.name, None)
				elif node.kind is NodeKind.ASSERT:
					if not evaluate(node.value, state.memory, self.cfg.slots):
						self._assert_failed(state, node)
						return "end", "assert"
				elif node.kind is NodeKind.NOP:
					if node.loop_head is not None and not (state.prev is not None and graph.edges[state.prev, node.id]["back"]):
						state.loops[node.loop_head] = 0
				elif node.kind is NodeKind.BRANCH:
					if isinstance(node.value, Nondet):
						taken = bool(choice)
					else:
						taken = bool(evaluate(node.value, state.memory, self.cfg.slots))
					recorded = choice if isinstance(node.value, Nondet) else None
					if node.is_loop and taken:
						count = state.loops.get(node.id, 0) + 1
						if count > self.bounds.loop_bound:
							return "end", "loop"
						state.loops[node.id] = count
						self._step(state, node, "loop-iter", f"while ({node.text}) iteration {count}", recorded)
					else:
						self._step(state, node, "branch", f"{node.text} -> {'true' if taken else 'false'}", recorded)
			except OutOfBounds as exc:
				self._step(state, node, "exit", str(exc))
				return "end", "oob"
			choice = None

			succ = self.cfg.successor(node.id, taken)
			if succ is None:
				return "end", "exit"
			state.prev, state.node = node.id, succ

	def finish(self, spec_sites: List[CallSite]) -> ExplorationResult:
		self.result.covered_nodes = frozenset(self.covered)
		self.result.covered_sites = tuple(s for s in spec_sites if s.node in self.covered)
		self.result.elapsed_ms = self.watch.elapsed_ms()
		return self.result


def explore(cfg: Cfg, spec: DependencySpec, bounds: Optional[Bounds] = None) -> ExplorationResult:
	bounds = bounds or Bounds()
	watch = Stopwatch("explore")
	executor = _Executor(cfg, spec, bounds, nondet_domain(cfg), watch)
	result = executor.result

	stack: List[Tuple[_State, Optional[int]]] = [(executor.initial(), None)]
	while stack:
		if watch.expired(bounds.timeout):
			result.timed_out = True
			break
		if result.paths_explored >= bounds.max_paths:
			result.path_bound_hit = True
			break
		state, choice = stack.pop()
		outcome, detail = executor.advance(state, choice)
		if outcome == "choice":
			# 먼저 볼 선택지를 마지막에 쌓는다
			alternatives = list(detail)
			for idx, value in enumerate(reversed(alternatives)):
				stack.append((state if idx == len(alternatives) - 1 else state.fork(), value))
			continue
		result.paths_explored += 1
		if detail == "loop":
			result.loop_truncations += 1
		elif detail == "oob":
			result.oob_paths += 1
		elif detail == "steps":
			result.step_truncations += 1
		elif detail == "timeout":
			result.timed_out = True
			break

	executor.finish(call_sites(cfg, spec))
	logger.debug(
		f"explore {cfg.origin}: {result.paths_explored} paths, {result.truncation_events} truncations, "
		f"{len(result.violations)} violations, exhaustive={result.exhaustive}, {result.elapsed_ms}ms"
	)
	return result


def replay(cfg: Cfg, trace: Trace, bounds: Optional[Bounds] = None) -> Trace:
	"""기록된 선택으로 다시 실행해 같은 경로가 나오는지 확인한다"""
	bounds = bounds or Bounds(loop_bound=10_000, max_steps=10_000_000, max_paths=1, timeout=3600)
	if trace.is_assertion:
		spec = DependencySpec()
		stop_on = ("assert", trace.assert_node)
	else:
		spec = DependencySpec((TemporalDependency(trace.dep, trace.before, trace.after),))
		stop_on = ("dep", trace.dep)
	executor = _Executor(cfg, spec, bounds, nondet_domain(cfg), stop_on=stop_on)
	choices: Iterator[int] = iter(trace.choices())

	state, choice = executor.initial(), None
	try:
		while True:
			outcome, detail = executor.advance(state, choice)
			if outcome == "end":
				break
			choice = next(choices, None)
			if choice is None or choice not in detail:
				raise ReplayDivergence(f"recorded choice {choice} is not available at step {len(state.steps) + 1}",
									   len(state.steps), cfg.origin)
	except _Stop:
		pass

	produced = (executor.result.assert_failures.get(trace.assert_node) if trace.is_assertion
				else executor.result.violations.get(trace.dep))
	if produced is None:
		raise ReplayDivergence(f"replay of {trace.dep} ended without reproducing the failure", len(state.steps), cfg.origin)
	for idx, (want, got) in enumerate(zip(trace.steps, produced.steps)):
		if want != got:
			raise ReplayDivergence(f"step {idx + 1} differs: expected {want.kind} '{want.detail}', got {got.kind} '{got.detail}'",
								   idx, cfg.origin)
	if len(trace.steps) != len(produced.steps):
		raise ReplayDivergence(f"replay produced {len(produced.steps)} steps, trace has {len(trace.steps)}",
							   min(len(trace.steps), len(produced.steps)), cfg.origin)
	return produced
