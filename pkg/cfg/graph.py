"""제어 흐름 그래프 모델

main 뷰(main 에서 시작해 정의된 함수를 인라인한 그래프)와 함수별 그래프를
networkx.DiGraph 로 들고 있다. 노드 속성 "node" 에 CfgNode 가 붙고,
간선 속성은 label(True/False/None), back(루프 되돌이 간선) 이다.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx

from frontend.ast_nodes import Expr, Program, RecordDef


class NodeKind(Enum):
	ENTRY = "entry"
	EXIT = "exit"
	CALL = "call"
	ASSIGN = "assign"
	HAVOC = "havoc"  # target = *
	ZERO = "zero"  # 초기화 없는 선언: 기본값 0
	BRANCH = "branch"
	ASSERT = "assert"
	NOP = "nop"


# (함수 이름, 호출된 줄) 의 나열, main 은 줄 0
InlineStack = Tuple[Tuple[str, int], ...]


def format_stack(stack: InlineStack) -> str:
	return " > ".join(name if line == 0 else f"{name}@{line}" for name, line in stack)


@dataclass
class CfgNode:
	id: int
	kind: NodeKind
	line: int = 0
	column: int = 0
	function: str = ""
	inline_stack: InlineStack = ()
	text: str = ""  # 소스 수준 표시 문자열
	target: Optional[Expr] = None  # 슬롯 이름으로 풀린 대입 대상
	value: Optional[Expr] = None  # 슬롯 이름으로 풀린 값 / 조건식
	source: Optional[Expr] = None  # 원래 조건식 (하네스 제안용)
	callee: Optional[str] = None
	defined: bool = False
	is_loop: bool = False
	loop_head: Optional[int] = None  # 루프 진입 NOP 이 가리키는 루프 분기 노드
	reachable: bool = True

	@property
	def location(self) -> Tuple[int, int]:
		return (self.line, self.column)


@dataclass(frozen=True)
class SlotInfo:
	"""메모리 한 칸: 스칼라, 배열(size), 레코드(fields)"""
	name: str
	kind: str = "scalar"
	size: int = 0
	fields: Tuple[str, ...] = ()

	def zero(self):
		if self.kind == "array":
			return (0,) * self.size
		if self.kind == "record":
			return (0,) * len(self.fields)
		return 0


def slot_for(name: str, type_spec, size: Optional[int], program: Program) -> SlotInfo:
	if size is not None:
		return SlotInfo(name, "array", size)
	if type_spec.is_record:
		rec: Optional[RecordDef] = program.record(type_spec.record)
		return SlotInfo(name, "record", fields=rec.field_names() if rec else ())
	return SlotInfo(name)


@dataclass(frozen=True)
class CallSite:
	callee: str
	location: Tuple[int, int]
	inline_stack: InlineStack
	is_spec_function: bool
	node: int = field(default=-1, compare=False)

	@property
	def line(self) -> int:
		return self.location[0]

	def describe(self) -> str:
		return f"{self.callee} at line {self.line} ({format_stack(self.inline_stack)})"


@dataclass
class FunctionGraph:
	"""인라인 없이 만든 함수 하나의 그래프"""
	name: str
	graph: nx.DiGraph
	entry: int
	exit: int


@dataclass
class Cfg:
	program: Program
	graph: nx.DiGraph
	entry: int
	exit: int
	slots: Dict[str, SlotInfo] = field(default_factory=dict)
	functions: Dict[str, FunctionGraph] = field(default_factory=dict)
	inline_depth: int = 8
	_dom: Optional[tuple] = field(default=None, repr=False, compare=False)

	@property
	def origin(self) -> str:
		return self.program.origin

	def node(self, node_id: int) -> CfgNode:
		return self.graph.nodes[node_id]["node"]

	def nodes(self) -> Iterator[CfgNode]:
		"""생성 순서(= 소스 순서)"""
		for node_id in sorted(self.graph.nodes):
			yield self.graph.nodes[node_id]["node"]

	def call_nodes(self) -> List[CfgNode]:
		return [n for n in self.nodes() if n.kind is NodeKind.CALL]

	def successor(self, node_id: int, label: Optional[bool] = None) -> Optional[int]:
		for _, succ, data in self.graph.out_edges(node_id, data=True):
			if data.get("label") == label:
				return succ
		return None

	def edge(self, src: int, dst: int) -> dict:
		return self.graph.edges[src, dst]

	def _dominators(self) -> Tuple[Dict[int, int], Dict[int, int]]:
		if self._dom is None:
			dom = nx.immediate_dominators(self.graph, self.entry)
			postdom = nx.immediate_dominators(self.graph.reverse(copy=False), self.exit)
			self._dom = (dom, postdom)
		return self._dom

	def _postdominates(self, a: int, b: int) -> bool:
		_, postdom = self._dominators()
		current = b
		while True:
			if current == a:
				return True
			parent = postdom.get(current)
			if parent is None or parent == current:
				return False
			current = parent

	def guard_of(self, node_id: int) -> Optional[CfgNode]:
		"""node 를 지배하지만 node 가 후지배하지 않는 가장 가까운 분기 (가장 안쪽 조건)"""
		dom, _ = self._dominators()
		if node_id not in dom:
			return None
		current = dom[node_id]
		while True:
			node = self.node(current)
			if node.kind is NodeKind.BRANCH and not self._postdominates(node_id, current):
				return node
			parent = dom.get(current, current)
			if parent == current:
				return None
			current = parent


def call_sites(cfg: Cfg, spec=None) -> List[CallSite]:
	"""main 뷰의 모든 호출 지점 (소스 순서)"""
	names = spec.names() if spec is not None else frozenset()
	return [
		CallSite(n.callee, n.location, n.inline_stack, n.callee in names, node=n.id)
		for n in cfg.call_nodes()
	]
