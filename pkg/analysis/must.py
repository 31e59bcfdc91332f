"""main 뷰 위의 전방 must 데이터 흐름 분석

격자: 이름 집합, 순서 ⊇, meet = ∩, 아직 도달하지 않은 노드의 초기값 = 전체 집합(TOP=None).
분기 조건은 보지 않는다 (모든 분기를 가능한 것으로 본다).
"""
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional

from loguru import logger

from cfg.graph import Cfg, CallSite, CfgNode, NodeKind, call_sites
from depspec.model import DependencySpec, TemporalDependency
from frontend.ast_nodes import Binary, IntLit, VarRef, referenced_var


Facts = Optional[FrozenSet[str]]  # None = TOP
Transfer = Callable[[CfgNode, FrozenSet[str]], FrozenSet[str]]


def _meet(a: Facts, b: Facts) -> Facts:
	if a is None:
		return b
	if b is None:
		return a
	return a & b


def forward_must(cfg: Cfg, transfer: Transfer, order: str = "fifo") -> Dict[int, Facts]:
	"""각 노드의 IN 사실 (최대 고정점). order 는 worklist 순서 ("fifo" | "lifo")"""
	graph = cfg.graph
	facts_in: Dict[int, Facts] = {n: None for n in graph.nodes}
	facts_in[cfg.entry] = frozenset()
	facts_out: Dict[int, Facts] = {n: None for n in graph.nodes}

	work = deque(sorted(graph.nodes))
	queued = set(work)
	while work:
		current = work.popleft() if order == "fifo" else work.pop()
		queued.discard(current)
		if current != cfg.entry:
			merged: Facts = None
			for pred in graph.predecessors(current):
				merged = _meet(merged, facts_out[pred])
			facts_in[current] = merged
		incoming = facts_in[current]
		out = None if incoming is None else transfer(cfg.node(current), incoming)
		if out == facts_out[current]:
			continue
		facts_out[current] = out
		for succ in graph.successors(current):
			if succ not in queued:
				work.append(succ)
				queued.add(succ)
	return facts_in


@dataclass
class MustFacts:
	facts: Dict[int, Facts]
	universe: FrozenSet[str] = frozenset()

	def at(self, node_id: int) -> FrozenSet[str]:
		value = self.facts.get(node_id)
		return self.universe if value is None else value


def _called_transfer(node: CfgNode, incoming: FrozenSet[str]) -> FrozenSet[str]:
	if node.kind is NodeKind.CALL:
		return incoming | {node.callee}
	return incoming


def must_called_analysis(cfg: Cfg, order: str = "fifo") -> MustFacts:
	universe = frozenset(n.callee for n in cfg.call_nodes())
	return MustFacts(forward_must(cfg, _called_transfer, order), universe)


# ---------------------------------------------------------------- 의존성 증명

@dataclass(frozen=True)
class MustOutcome:
	dep: TemporalDependency
	proved: bool
	site: Optional[CallSite] = None  # PotentialViolation 일 때 처음 걸리는 f2 호출
	vacuous: bool = False

	@property
	def label(self) -> str:
		return "Proved" if self.proved else "PotentialViolation"


@dataclass
class MustResult:
	outcomes: Dict[str, MustOutcome] = field(default_factory=dict)

	def __getitem__(self, dep_id: str) -> MustOutcome:
		return self.outcomes[dep_id]

	def proved(self) -> List[str]:
		return [dep_id for dep_id, o in self.outcomes.items() if o.proved]


def check_dependencies_must(cfg: Cfg, spec: DependencySpec, facts: Optional[MustFacts] = None) -> MustResult:
	facts = facts or must_called_analysis(cfg)
	sites = call_sites(cfg, spec)
	result = MustResult()
	for dep in spec.deps:
		after_sites = [s for s in sites if s.callee == dep.after]
		vacuous = not any(cfg.node(s.node).reachable for s in after_sites)
		offending = next((s for s in after_sites if dep.before not in facts.at(s.node)), None)
		result.outcomes[dep.id] = MustOutcome(dep, offending is None, offending, vacuous)
		if offending is None and vacuous:
			logger.warning(f"{cfg.origin}: {dep} holds vacuously, '{dep.after}' is never reached")
		logger.debug(f"must {dep}: {result.outcomes[dep.id].label}")
	return result


# ---------------------------------------------------------------- assert(v == 1) 증명

def _flag_variable(cond) -> Optional[str]:
	"""`v == 1` (또는 `1 == v`) 모양이면 v"""
	if not isinstance(cond, Binary) or cond.op != "==":
		return None
	for var, lit in ((cond.left, cond.right), (cond.right, cond.left)):
		if isinstance(var, VarRef) and isinstance(lit, IntLit) and lit.value == 1:
			return var.name
	return None


def _flag_transfer(node: CfgNode, incoming: FrozenSet[str]) -> FrozenSet[str]:
	if node.target is None or node.kind not in (NodeKind.ASSIGN, NodeKind.HAVOC, NodeKind.ZERO, NodeKind.CALL):
		return incoming
	name = referenced_var(node.target)
	if node.kind is NodeKind.ASSIGN and isinstance(node.target, VarRef) and isinstance(node.value, IntLit) \
			and node.value.value == 1:
		return incoming | {name}
	return incoming - {name}


@dataclass(frozen=True)
class AssertProof:
	node: int
	variable: Optional[str]
	proved: bool


def prove_asserts(cfg: Cfg, order: str = "fifo") -> Dict[int, AssertProof]:
	"""모든 구문 경로에서 v 가 1 로 대입된 뒤에 오는 `assert(v == 1)` 를 증명한다"""
	asserts = [n for n in cfg.nodes() if n.kind is NodeKind.ASSERT]
	if not asserts:
		return {}
	facts = forward_must(cfg, _flag_transfer, order)
	universe = frozenset(s for s in cfg.slots)
	proofs = {}
	for node in asserts:
		variable = _flag_variable(node.value)
		holding = facts[node.id] if facts[node.id] is not None else universe
		proofs[node.id] = AssertProof(node.id, variable, variable is not None and variable in holding)
	return proofs
