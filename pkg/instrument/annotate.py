"""의존성 δ(f1, f2) 를 보조 변수 대입/assert 로 옮기는 소스 변환

  int __idcc_state_<id> = 0;          전역
  __idcc_state_<id> = 1;              f1 본문 첫 문장
  assert(__idcc_state_<id> == 1);     f2 본문 첫 문장

정의 없는 f1/f2 는 스텁 본문을 만들어 준다: `{ aux = 1; return *; }` (void 면 return 없이).
"""
from dataclasses import dataclass
from typing import Dict, List, Tuple

import networkx as nx
from loguru import logger

from depspec.model import DependencySpec, TemporalDependency
from frontend.ast_nodes import (
	Assert, Assign, Binary, Block, FuncDef, IntLit, Nondet, Param, Program, Return, Stmt, TypeSpec,
	VarDecl, VarRef, iter_calls, walk_stmts,
)
from instrument.errors import NameClash, OrderingParadox


RESERVED_PREFIX = "__idcc_"
AUX_PREFIX = "__idcc_state_"


@dataclass(frozen=True)
class InstrumentedDependency:
	dep: TemporalDependency
	aux_name: str
	assign_sites: Tuple[str, ...]  # 대입이 들어간 함수
	assert_sites: Tuple[str, ...]  # assert 가 들어간 함수
	synthesized: Tuple[str, ...] = ()


def aux_name(dep: TemporalDependency) -> str:
	return AUX_PREFIX + dep.id.replace("-", "__")


def _declared_names(program: Program) -> List[Tuple[str, Tuple[int, int]]]:
	names = [(d.name, d.location) for d in program.globals]
	for fn in program.functions:
		names.append((fn.name, fn.location))
		names.extend((p.name, p.location) for p in fn.params)
		if fn.body is not None:
			names.extend((s.name, s.location) for s in walk_stmts(fn.body) if isinstance(s, VarDecl))
	return names


def _check_reserved(program: Program):
	for name, location in _declared_names(program):
		if name.startswith(RESERVED_PREFIX):
			raise NameClash(f"'{name}' uses the reserved prefix '{RESERVED_PREFIX}' (already instrumented?)",
							location, program.origin)


def call_graph(program: Program) -> nx.DiGraph:
	graph = nx.DiGraph()
	graph.add_nodes_from(fn.name for fn in program.functions)
	for fn, call in iter_calls(program):
		graph.add_edge(fn.name, call.name)
	return graph


def _check_paradox(program: Program, spec: DependencySpec):
	graph = call_graph(program)
	for dep in spec.deps:
		if dep.before in graph and dep.after in graph and nx.has_path(graph, dep.before, dep.after):
			path = nx.shortest_path(graph, dep.before, dep.after)
			raise OrderingParadox(
				f"{dep}: '{dep.before}' itself reaches '{dep.after}' ({' -> '.join(path)})",
				origin=program.origin,
			)


def _implicit_declaration(name: str, program: Program) -> FuncDef:
	"""선언 없이 호출만 된 함수: int name(int p0, ...)"""
	arity = next((len(call.args) for _, call in iter_calls(program) if call.name == name), 0)
	params = tuple(Param(TypeSpec("int"), f"p{i}") for i in range(arity))
	return FuncDef(TypeSpec("int"), name, params, None)


def _aux_check(aux: str) -> Assert:
	return Assert(Binary("==", VarRef(aux), IntLit(1)))


def instrument_program(program: Program, spec: DependencySpec) -> Tuple[Program, List[InstrumentedDependency]]:
	if not spec.deps:
		return program, []
	_check_reserved(program)
	_check_paradox(program, spec)

	called = {call.name for _, call in iter_calls(program)}
	present = {fn.name for fn in program.functions} | called

	prefix_asserts: Dict[str, List[Stmt]] = {}
	prefix_assigns: Dict[str, List[Stmt]] = {}
	aux_decls: List[VarDecl] = []
	records: List[InstrumentedDependency] = []
	seen_aux: Dict[str, str] = {}
	for dep in spec.deps:
		aux = aux_name(dep)
		if aux in seen_aux:
			raise NameClash(f"dependency ids '{seen_aux[aux]}' and '{dep.id}' map to the same variable '{aux}'",
							origin=spec.origin)
		seen_aux[aux] = dep.id
		aux_decls.append(VarDecl(TypeSpec("int"), aux, None, IntLit(0)))
		assign_in = (dep.before,) if dep.before in present else ()
		assert_in = (dep.after,) if dep.after in present else ()
		if assign_in:
			prefix_assigns.setdefault(dep.before, []).append(Assign(VarRef(aux), IntLit(1)))
		if assert_in:
			prefix_asserts.setdefault(dep.after, []).append(_aux_check(aux))
		records.append(InstrumentedDependency(dep, aux, assign_in, assert_in))

	touched = set(prefix_asserts) | set(prefix_assigns)
	synthesized = []

	def annotate(fn: FuncDef) -> FuncDef:
		prefix = tuple(prefix_asserts.get(fn.name, ())) + tuple(prefix_assigns.get(fn.name, ()))
		if fn.body is not None:
			body = Block(prefix + fn.body.stmts, line=fn.body.line, column=fn.body.column)
		else:
			synthesized.append(fn.name)
			tail = () if fn.return_type.base == "void" else (Return(Nondet()),)
			body = Block(prefix + tail)
		return FuncDef(fn.return_type, fn.name, fn.params, body, line=fn.line, column=fn.column)

	functions = []
	for fn in program.functions:
		functions.append(annotate(fn) if fn.name in touched else fn)
	known = {fn.name for fn in program.functions}
	for name in sorted(touched - known):
		functions.append(annotate(_implicit_declaration(name, program)))

	result = Program(program.records, program.globals + tuple(aux_decls), tuple(functions), origin=program.origin)
	if synthesized:
		logger.debug(f"instrument {program.origin}: synthesized stubs for {', '.join(synthesized)}")
	records = [
		InstrumentedDependency(r.dep, r.aux_name, r.assign_sites, r.assert_sites,
							   tuple(n for n in synthesized if n in r.assign_sites + r.assert_sites))
		for r in records
	]
	return result, records


def instrument(program: Program, spec: DependencySpec) -> Program:
	"""spec 의 모든 의존성을 주석 인코딩으로 삽입한 Program"""
	return instrument_program(program, spec)[0]
