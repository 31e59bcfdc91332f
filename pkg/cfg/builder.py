"""Program → Cfg

main 뷰에서는 정의된 함수를 호출 지점마다 인라인한다.
식 안의 호출과 `*` 는 앞쪽 노드로 끌어올려(좌→우) 각 노드의 식이 순수해지게 만든다.

  호출 순서: 인자 안의 호출들 → CALL 노드(이벤트) → 매개변수 바인딩 → 본문 → 반환 합류 NOP
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import networkx as nx
from loguru import logger

from cfg.arith import constant_value
from cfg.errors import InlineDepthExceeded, MissingMain, RecursionBeyondBound, UnknownCalleeArity, UnsupportedConstruct
from cfg.graph import Cfg, CfgNode, FunctionGraph, InlineStack, NodeKind, SlotInfo, slot_for
from frontend.ast_nodes import (
	AddrOf, Assert, Assign, Binary, Block, Call, CallStmt, Expr, FieldRef, FuncDef, If, IndexRef,
	IntLit, Nondet, Param, Program, Return, Stmt, Unary, VarDecl, VarRef, While,
	child_exprs, iter_calls, referenced_var, stmt_exprs, walk_expr, walk_stmts,
)
from frontend.emitter import emit_expr


DEFAULT_INLINE_DEPTH = 8

# (노드 id, 다음 노드로 가는 간선 속성)
Pred = Tuple[int, dict]


@dataclass
class _Frame:
	"""인라인된 함수 인스턴스 하나"""
	function: str
	stack: InlineStack
	names: Dict[str, str] = field(default_factory=dict)
	ret_slot: Optional[str] = None
	returns: List[Pred] = field(default_factory=list)


def _has_call(expr: Expr) -> bool:
	return any(isinstance(sub, Call) for sub in walk_expr(expr))


def _referenced_names(fn: FuncDef) -> frozenset:
	names = set()
	for stmt in walk_stmts(fn.body):
		for expr in stmt_exprs(stmt):
			for sub in walk_expr(expr):
				name = referenced_var(sub)
				if name is not None:
					names.add(name)
	return frozenset(names)


def check_implicit_arity(program: Program):
	"""선언 없이 호출된 함수는 첫 사용의 인자 개수를 가진 int 함수로 본다"""
	seen: Dict[str, Tuple[int, Tuple[int, int]]] = {}
	for _, call in iter_calls(program):
		if program.function(call.name) is not None:
			continue
		first = seen.setdefault(call.name, (len(call.args), call.location))
		if first[0] != len(call.args):
			raise UnknownCalleeArity(
				f"undeclared '{call.name}' is called with {len(call.args)} arguments here "
				f"but with {first[0]} at line {first[1][0]}",
				call.location, program.origin,
			)


class CfgBuilder:
	def __init__(self, program: Program, inline_depth: int = DEFAULT_INLINE_DEPTH, inline: bool = True):
		self.program = program
		self.inline_depth = inline_depth
		self.inline = inline
		self.graph = nx.DiGraph()
		self.slots: Dict[str, SlotInfo] = {}
		self._next_id = 0
		self._instances = 0
		self._temps = 0
		self._reads: Dict[str, frozenset] = {}

	# ------------------------------------------------------------ 노드 / 간선

	def _new(self, kind: NodeKind, frame: _Frame, at=None, **attrs) -> CfgNode:
		line, column = at.location if at is not None else (0, 0)
		node = CfgNode(self._next_id, kind, line, column, function=frame.function,
					   inline_stack=frame.stack, **attrs)
		self.graph.add_node(node.id, node=node)
		self._next_id += 1
		return node

	def _link(self, preds: List[Pred], dst: int):
		for src, attrs in preds:
			label = attrs.get("label")
			back = attrs.get("back", False)
			if not self.graph.has_edge(src, dst):
				self.graph.add_edge(src, dst, label=label, back=back)
				continue
			# 분기의 두 간선이 같은 곳으로 가면 NOP 하나를 끼운다
			src_node = self.graph.nodes[src]["node"]
			hop = CfgNode(self._next_id, NodeKind.NOP, src_node.line, src_node.column,
						  function=src_node.function, inline_stack=src_node.inline_stack)
			self.graph.add_node(hop.id, node=hop)
			self._next_id += 1
			self.graph.add_edge(src, hop.id, label=label, back=False)
			self.graph.add_edge(hop.id, dst, label=None, back=back)

	def _emit(self, kind: NodeKind, preds: List[Pred], frame: _Frame, at=None, **attrs) -> List[Pred]:
		node = self._new(kind, frame, at, **attrs)
		self._link(preds, node.id)
		return [(node.id, {})]

	# ------------------------------------------------------------ 슬롯

	def _temp(self, prefix: str) -> str:
		name = f"{prefix}@{self._temps}"
		self._temps += 1
		self.slots[name] = SlotInfo(name)
		return name

	def _declare(self, frame: _Frame, name: str, type_spec, size: Optional[int], instance: int) -> str:
		slot = f"{name}@{frame.function}.{instance}"
		frame.names[name] = slot
		self.slots[slot] = slot_for(slot, type_spec, size, self.program)
		return slot

	def _slot(self, name: str, frame: _Frame) -> str:
		return frame.names.get(name, name)

	def _reads_of(self, fn: FuncDef) -> frozenset:
		if fn.name not in self._reads:
			self._reads[fn.name] = _referenced_names(fn)
		return self._reads[fn.name]

	def _unsupported(self, message: str, at) -> UnsupportedConstruct:
		return UnsupportedConstruct(message, at.location, self.program.origin)

	# ------------------------------------------------------------ 식

	def _lower_expr(self, expr: Expr, preds: List[Pred], frame: _Frame) -> Tuple[Expr, List[Pred]]:
		"""호출과 `*` 를 끌어올리고 이름을 슬롯으로 바꾼 순수 식을 돌려준다"""
		if isinstance(expr, IntLit):
			return expr, preds
		if isinstance(expr, Nondet):
			slot = self._temp("nd")
			preds = self._emit(NodeKind.HAVOC, preds, frame, expr, target=VarRef(slot), text="*")
			return VarRef(slot, line=expr.line, column=expr.column), preds
		if isinstance(expr, VarRef):
			return replace(expr, name=self._slot(expr.name, frame)), preds
		if isinstance(expr, FieldRef):
			return replace(expr, var=self._slot(expr.var, frame)), preds
		if isinstance(expr, IndexRef):
			index, preds = self._lower_expr(expr.index, preds, frame)
			return replace(expr, var=self._slot(expr.var, frame), index=index), preds
		if isinstance(expr, Unary):
			operand, preds = self._lower_expr(expr.operand, preds, frame)
			return replace(expr, operand=operand), preds
		if isinstance(expr, Binary):
			if expr.op in ("&&", "||") and _has_call(expr.right):
				raise self._unsupported(f"call inside the right operand of '{expr.op}'", expr.right)
			left, preds = self._lower_expr(expr.left, preds, frame)
			right, preds = self._lower_expr(expr.right, preds, frame)
			return replace(expr, left=left, right=right), preds
		if isinstance(expr, Call):
			result, preds = self._lower_call(expr, preds, frame, want_result=True)
			return result, preds
		raise self._unsupported("'&' is only allowed on call arguments", expr)

	def _lower_effects(self, expr: Expr, preds: List[Pred], frame: _Frame) -> List[Pred]:
		"""값은 버리고 호출만 실행한다"""
		if isinstance(expr, Call):
			_, preds = self._lower_call(expr, preds, frame, want_result=False)
			return preds
		if isinstance(expr, Binary) and expr.op in ("&&", "||") and _has_call(expr.right):
			raise self._unsupported(f"call inside the right operand of '{expr.op}'", expr.right)
		for child in child_exprs(expr):
			preds = self._lower_effects(child, preds, frame)
		return preds

	def _lower_lvalue(self, target: Expr, preds: List[Pred], frame: _Frame) -> Tuple[Expr, List[Pred]]:
		return self._lower_expr(target, preds, frame)

	def _is_opaque(self, call: Call) -> bool:
		fn = self.program.function(call.name)
		return fn is None or fn.undefined or not self.inline

	# ------------------------------------------------------------ 호출

	def _lower_call(self, call: Call, preds: List[Pred], frame: _Frame, want_result: bool,
					target: Optional[Expr] = None) -> Tuple[Optional[Expr], List[Pred]]:
		fn = self.program.function(call.name)
		if self._is_opaque(call):
			# 정의 없는 함수의 인자는 평가하지 않는다 (안쪽 호출 이벤트만 실행)
			for arg in call.args:
				preds = self._lower_effects(arg, preds, frame)
			if want_result and target is None:
				target = VarRef(self._temp("tmp"), line=call.line, column=call.column)
			preds = self._emit(
				NodeKind.CALL, preds, frame, call, callee=call.name,
				defined=fn is not None and not fn.undefined,
				target=target if want_result else None, text=emit_expr(call),
			)
			return (target if want_result else None), preds
		return self._inline_call(fn, call, preds, frame, want_result)

	def _binding(self, param: Param, arg: Expr, frame: _Frame) -> Optional[str]:
		"""참조로 묶이는 인자면 호출자 쪽 슬롯 이름 (배열과 &x), 복사면 None"""
		wanted = "array" if param.is_array else ("record" if param.type.is_record else "scalar")
		if isinstance(arg, (AddrOf, VarRef)):
			name = arg.var if isinstance(arg, AddrOf) else arg.name
			slot = self._slot(name, frame)
			info = self.slots.get(slot)
			kind = info.kind if info is not None else "scalar"
			if kind != wanted:
				raise self._unsupported(f"'{emit_expr(arg)}' ({kind}) does not match parameter '{param.name}' ({wanted})", arg)
			if isinstance(arg, AddrOf) or kind == "array":
				return slot
			return None
		if wanted != "scalar":
			raise self._unsupported(f"parameter '{param.name}' needs a {wanted} argument", arg)
		return None

	def _inline_call(self, fn: FuncDef, call: Call, preds: List[Pred], frame: _Frame,
					 want_result: bool) -> Tuple[Optional[Expr], List[Pred]]:
		if any(name == fn.name for name, _ in frame.stack):
			chain = " -> ".join([name for name, _ in frame.stack] + [fn.name])
			raise RecursionBeyondBound(
				f"recursive call chain {chain} cannot be inlined (inline depth {self.inline_depth})",
				call.location, self.program.origin,
			)
		if len(frame.stack) > self.inline_depth:
			raise InlineDepthExceeded(
				f"inlining '{fn.name}' exceeds inline depth {self.inline_depth}", call.location, self.program.origin,
			)

		reads = self._reads_of(fn)
		bindings: List[Tuple[str, object]] = []
		for param, arg in zip(fn.params, call.args):
			if param.name not in reads:
				preds = self._lower_effects(arg, preds, frame)
				bindings.append(("drop", None))
				continue
			alias = self._binding(param, arg, frame)
			if alias is not None:
				bindings.append(("alias", alias))
			else:
				value, preds = self._lower_expr(arg, preds, frame)
				bindings.append(("copy", (value, arg)))

		preds = self._emit(NodeKind.CALL, preds, frame, call, callee=fn.name, defined=True, text=emit_expr(call))

		instance = self._instances
		self._instances += 1
		inner = _Frame(fn.name, frame.stack + ((fn.name, call.line),))
		for param, (mode, payload) in zip(fn.params, bindings):
			if mode == "alias":
				inner.names[param.name] = payload
				continue
			slot = self._declare(inner, param.name, param.type, param.size if param.is_array else None, instance)
			if mode == "copy":
				value, arg = payload
				preds = self._emit(NodeKind.ASSIGN, preds, inner, param, target=VarRef(slot), value=value,
								   text=f"{param.name} = {emit_expr(arg)}")
		self._declare_locals(fn, inner, instance)
		if want_result:
			inner.ret_slot = f"ret@{instance}"
			self.slots[inner.ret_slot] = SlotInfo(inner.ret_slot)
			preds = self._emit(NodeKind.ZERO, preds, inner, call, target=VarRef(inner.ret_slot), text=f"{fn.name} result")

		preds = self._lower_block(fn.body.stmts, preds, inner)
		join = self._new(NodeKind.NOP, inner, fn, text=f"return from {fn.name}")
		self._link(preds + inner.returns, join.id)
		result = VarRef(inner.ret_slot, line=call.line, column=call.column) if want_result else None
		return result, [(join.id, {})]

	def _declare_locals(self, fn: FuncDef, frame: _Frame, instance: int):
		for stmt in walk_stmts(fn.body):
			if isinstance(stmt, VarDecl):
				self._declare(frame, stmt.name, stmt.type, stmt.size, instance)

	# ------------------------------------------------------------ 문장

	def _lower_block(self, stmts, preds: List[Pred], frame: _Frame) -> List[Pred]:
		for stmt in stmts:
			preds = self._lower_stmt(stmt, preds, frame)
		return preds

	def _lower_store(self, target_src: Expr, value_src: Expr, preds: List[Pred], frame: _Frame, at,
					 text: str) -> List[Pred]:
		target, preds = self._lower_lvalue(target_src, preds, frame)
		if isinstance(value_src, Nondet):
			return self._emit(NodeKind.HAVOC, preds, frame, at, target=target, text=text)
		if isinstance(value_src, Call) and self._is_opaque(value_src):
			_, preds = self._lower_call(value_src, preds, frame, want_result=True, target=target)
			return preds
		value, preds = self._lower_expr(value_src, preds, frame)
		return self._emit(NodeKind.ASSIGN, preds, frame, at, target=target, value=value, text=text)

	def _lower_cond(self, cond: Expr, preds: List[Pred], frame: _Frame) -> Tuple[Expr, List[Pred]]:
		# 조건 자리의 `*` 는 분기 선택으로 남긴다
		if isinstance(cond, Nondet):
			return cond, preds
		return self._lower_expr(cond, preds, frame)

	def _lower_stmt(self, stmt: Stmt, preds: List[Pred], frame: _Frame) -> List[Pred]:
		if isinstance(stmt, Block):
			return self._lower_block(stmt.stmts, preds, frame)

		if isinstance(stmt, VarDecl):
			if stmt.init is None:
				slot = self._slot(stmt.name, frame)
				return self._emit(NodeKind.ZERO, preds, frame, stmt, target=VarRef(slot), text=f"{stmt.name} = 0")
			target = VarRef(stmt.name, line=stmt.line, column=stmt.column)
			return self._lower_store(target, stmt.init, preds, frame, stmt, f"{stmt.name} = {emit_expr(stmt.init)}")

		if isinstance(stmt, Assign):
			text = f"{emit_expr(stmt.target)} = {emit_expr(stmt.value)}"
			return self._lower_store(stmt.target, stmt.value, preds, frame, stmt, text)

		if isinstance(stmt, CallStmt):
			_, preds = self._lower_call(stmt.call, preds, frame, want_result=False)
			return preds

		if isinstance(stmt, If):
			cond, preds = self._lower_cond(stmt.cond, preds, frame)
			branch = self._new(NodeKind.BRANCH, frame, stmt, value=cond, source=stmt.cond, text=emit_expr(stmt.cond))
			self._link(preds, branch.id)
			out = self._lower_stmt(stmt.then, [(branch.id, {"label": True})], frame)
			if stmt.orelse is not None:
				return out + self._lower_stmt(stmt.orelse, [(branch.id, {"label": False})], frame)
			return out + [(branch.id, {"label": False})]

		if isinstance(stmt, While):
			head = self._new(NodeKind.NOP, frame, stmt, text="loop entry")
			self._link(preds, head.id)
			cond, cond_preds = self._lower_cond(stmt.cond, [(head.id, {})], frame)
			branch = self._new(NodeKind.BRANCH, frame, stmt, value=cond, source=stmt.cond,
							   text=emit_expr(stmt.cond), is_loop=True)
			self._link(cond_preds, branch.id)
			head.loop_head = branch.id
			body = self._lower_stmt(stmt.body, [(branch.id, {"label": True})], frame)
			self._link([(src, {**attrs, "back": True}) for src, attrs in body], head.id)
			return [(branch.id, {"label": False})]

		if isinstance(stmt, Return):
			if stmt.value is not None:
				if frame.ret_slot is not None:
					target = VarRef(frame.ret_slot, line=stmt.line, column=stmt.column)
					value_src = stmt.value
					if isinstance(value_src, Nondet):
						preds = self._emit(NodeKind.HAVOC, preds, frame, stmt, target=target,
										   text=f"return {emit_expr(value_src)}")
					elif isinstance(value_src, Call) and self._is_opaque(value_src):
						_, preds = self._lower_call(value_src, preds, frame, want_result=True, target=target)
					else:
						value, preds = self._lower_expr(value_src, preds, frame)
						preds = self._emit(NodeKind.ASSIGN, preds, frame, stmt, target=target, value=value,
										   text=f"return {emit_expr(value_src)}")
				else:
					# 버려지는 반환값은 평가하지 않는다
					preds = self._lower_effects(stmt.value, preds, frame)
			frame.returns.extend(preds)
			return []

		if isinstance(stmt, Assert):
			cond, preds = self._lower_expr(stmt.cond, preds, frame)
			return self._emit(NodeKind.ASSERT, preds, frame, stmt, value=cond, source=stmt.cond,
							  text=f"assert({emit_expr(stmt.cond)})")

		raise self._unsupported(f"unexpected statement {type(stmt).__name__}", stmt)

	# ------------------------------------------------------------ 진입점

	def build_main(self) -> Tuple[int, int]:
		main = self.program.function("main")
		if main is None or main.undefined:
			raise MissingMain("program has no definition of 'main'", origin=self.program.origin)

		top = _Frame("main", (("main", 0),))
		entry = self._new(NodeKind.ENTRY, top, main, text="entry")
		preds: List[Pred] = [(entry.id, {})]

		glob = _Frame("<globals>", (("main", 0),))
		for decl in self.program.globals:
			self.slots[decl.name] = slot_for(decl.name, decl.type, decl.size, self.program)
			if decl.init is not None:
				target = VarRef(decl.name, line=decl.line, column=decl.column)
				preds = self._lower_store(target, decl.init, preds, glob, decl, f"{decl.name} = {emit_expr(decl.init)}")

		instance = self._instances
		self._instances += 1
		for param in main.params:
			self._declare(top, param.name, param.type, param.size if param.is_array else None, instance)
		self._declare_locals(main, top, instance)
		preds = self._lower_block(main.body.stmts, preds, top)
		exit_node = self._new(NodeKind.EXIT, top, main, text="exit")
		self._link(preds + top.returns, exit_node.id)
		return entry.id, exit_node.id

	def build_function(self, fn: FuncDef) -> FunctionGraph:
		frame = _Frame(fn.name, ((fn.name, 0),))
		entry = self._new(NodeKind.ENTRY, frame, fn, text="entry")
		for param in fn.params:
			self._declare(frame, param.name, param.type, param.size if param.is_array else None, 0)
		self._declare_locals(fn, frame, 0)
		preds = self._lower_block(fn.body.stmts, [(entry.id, {})], frame)
		exit_node = self._new(NodeKind.EXIT, frame, fn, text="exit")
		self._link(preds + frame.returns, exit_node.id)
		mark_reachable(self.graph, entry.id)
		return FunctionGraph(fn.name, self.graph, entry.id, exit_node.id)


def mark_reachable(graph: nx.DiGraph, entry: int):
	"""리터럴 조건(`if (0)`, `while (1)`)을 접어서 구조적 도달 가능성을 표시"""
	seen = {entry}
	stack = [entry]
	while stack:
		current = stack.pop()
		node: CfgNode = graph.nodes[current]["node"]
		const = None
		if node.kind is NodeKind.BRANCH and not isinstance(node.value, Nondet):
			const = constant_value(node.value)
		for _, succ, data in graph.out_edges(current, data=True):
			label = data.get("label")
			if const is not None and label is not None and bool(const) != label:
				continue
			if succ not in seen:
				seen.add(succ)
				stack.append(succ)
	for node_id in graph.nodes:
		graph.nodes[node_id]["node"].reachable = node_id in seen


def build_cfg(program: Program, inline_depth: int = DEFAULT_INLINE_DEPTH) -> Cfg:
	check_implicit_arity(program)
	builder = CfgBuilder(program, inline_depth)
	entry, exit_id = builder.build_main()
	mark_reachable(builder.graph, entry)

	functions = {}
	for fn in program.functions:
		if not fn.undefined:
			functions[fn.name] = CfgBuilder(program, inline_depth, inline=False).build_function(fn)

	cfg = Cfg(program, builder.graph, entry, exit_id, builder.slots, functions, inline_depth)
	unreachable = sum(1 for n in cfg.nodes() if not n.reachable)
	logger.debug(f"cfg {program.origin}: {builder.graph.number_of_nodes()} nodes, "
				 f"{builder.graph.number_of_edges()} edges, {unreachable} structurally unreachable")
	return cfg
