from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx
from loguru import logger

from depspec.errors import InvalidSpec
from depspec.model import DependencySpec


@dataclass(frozen=True)
class Violation:
	kind: str  # "cycle" | "duplicate"
	functions: Tuple[str, ...]
	dep_ids: Tuple[str, ...]

	def __str__(self) -> str:
		if self.kind == "cycle":
			return f"cycle {' -> '.join(self.functions)} ({', '.join(self.dep_ids)})"
		return f"duplicate pair {self.functions[0]} -> {self.functions[1]} ({', '.join(self.dep_ids)})"


def dependency_graph(spec: DependencySpec) -> nx.DiGraph:
	"""노드/간선 삽입 순서 = 명세 순서"""
	graph = nx.DiGraph()
	graph.add_nodes_from(spec.functions)
	for dep in spec.deps:
		if graph.has_edge(dep.before, dep.after):
			graph.edges[dep.before, dep.after]["ids"].append(dep.id)
		else:
			graph.add_edge(dep.before, dep.after, ids=[dep.id])
	return graph


def validate_spec(spec: DependencySpec) -> List[Violation]:
	"""빈 목록이면 엄격한 부분 순서(비순환, 중복 없음)"""
	graph = dependency_graph(spec)
	violations: List[Violation] = []

	for before, after, data in graph.edges(data=True):
		if len(data["ids"]) > 1:
			violations.append(Violation("duplicate", (before, after), tuple(data["ids"])))

	components = [c for c in nx.strongly_connected_components(graph) if len(c) > 1]
	for component in sorted(components, key=min):
		start = min(component)
		cycle_edges = nx.find_cycle(graph.subgraph(component), source=start)
		names = tuple([cycle_edges[0][0]] + [v for _, v in cycle_edges])
		ids = tuple(graph.edges[u, v]["ids"][0] for u, v in cycle_edges)
		violations.append(Violation("cycle", names, ids))

	if violations:
		logger.warning(f"{spec.origin}: {len(violations)} spec violation(s)")
	return violations


def topological_order(spec: DependencySpec) -> List[str]:
	"""결정적 위상 순서 (동률은 이름순)"""
	return list(nx.lexicographical_topological_sort(dependency_graph(spec)))


def _quote(name: str) -> str:
	return f'"{name}"'


def spec_to_dot(spec: DependencySpec) -> str:
	lines = ["digraph {"]
	for name in spec.functions:
		lines.append(f"    {_quote(name)};")
	for dep in spec.deps:
		lines.append(f'    {_quote(dep.before)} -> {_quote(dep.after)} [label="{dep.id}"];')
	lines.append("}")
	return "\n".join(lines) + "\n"


def require_valid(spec: DependencySpec) -> DependencySpec:
	violations = validate_spec(spec)
	if violations:
		raise InvalidSpec("; ".join(str(v) for v in violations), origin=spec.origin)
	return spec
