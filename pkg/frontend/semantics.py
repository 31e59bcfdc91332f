from typing import Dict, List, Optional

from frontend.ast_nodes import (
	AddrOf, Call, FieldRef, FuncDef, IndexRef, Program, TypeSpec, VarDecl, VarRef,
	stmt_exprs, walk_expr, walk_stmts,
)
from frontend.errors import ArityMismatch, DuplicateDefinition, UnknownName


class VarInfo:
	__slots__ = ("type", "is_array")

	def __init__(self, type_spec: TypeSpec, is_array: bool):
		self.type = type_spec
		self.is_array = is_array


def merge_functions(functions, origin: str) -> List[FuncDef]:
	"""프로토타입과 정의를 하나로 합친다 (첫 등장 위치 유지)"""
	merged: Dict[str, FuncDef] = {}
	order: List[str] = []
	for fn in functions:
		prev = merged.get(fn.name)
		if prev is None:
			merged[fn.name] = fn
			order.append(fn.name)
			continue
		if prev.arity != fn.arity:
			raise ArityMismatch(f"conflicting declarations of '{fn.name}' ({prev.arity} vs {fn.arity} parameters)",
								fn.location, origin)
		if not prev.undefined and not fn.undefined:
			raise DuplicateDefinition(f"function '{fn.name}' is defined twice", fn.location, origin)
		if fn.undefined:
			continue
		# 정의가 이기되 위치는 처음 선언 자리
		merged[fn.name] = FuncDef(fn.return_type, fn.name, fn.params, fn.body, line=prev.line, column=prev.column)
	return [merged[name] for name in order]


def _check_type(type_spec: TypeSpec, program: Program, origin: str):
	if type_spec.is_record and program.record(type_spec.record) is None:
		raise UnknownName(f"unknown record type 'struct {type_spec.record}'", type_spec.location, origin)


def check_program(program: Program) -> Program:
	"""중복 정의, 인자 개수, 이름 해석을 검사하고 정리된 Program 을 돌려준다"""
	origin = program.origin

	seen_records = set()
	for rec in program.records:
		if rec.name in seen_records:
			raise DuplicateDefinition(f"record 'struct {rec.name}' is defined twice", rec.location, origin)
		seen_records.add(rec.name)
		names = set()
		for fld in rec.fields:
			if fld.name in names:
				raise DuplicateDefinition(f"field '{fld.name}' repeated in 'struct {rec.name}'", fld.location, origin)
			names.add(fld.name)

	functions = merge_functions(program.functions, origin)
	program = Program(program.records, program.globals, tuple(functions), origin=origin)
	arity = {fn.name: fn.arity for fn in functions}

	scope_globals: Dict[str, VarInfo] = {}
	for decl in program.globals:
		_check_type(decl.type, program, origin)
		if decl.name in scope_globals:
			raise DuplicateDefinition(f"global '{decl.name}' is declared twice", decl.location, origin)
		if decl.name in arity:
			raise DuplicateDefinition(f"'{decl.name}' is both a function and a variable", decl.location, origin)
		if decl.init is not None:
			_check_expr(decl.init, scope_globals, program, arity, origin)
		scope_globals[decl.name] = VarInfo(decl.type, decl.is_array)

	for fn in functions:
		scope = dict(scope_globals)
		local_names = set()
		for param in fn.params:
			_check_type(param.type, program, origin)
			if param.name in local_names:
				raise DuplicateDefinition(f"parameter '{param.name}' repeated in '{fn.name}'", param.location, origin)
			local_names.add(param.name)
			scope[param.name] = VarInfo(param.type, param.is_array)
		if fn.body is None:
			continue
		# 함수 하나가 하나의 스코프: 선언을 먼저 모은다
		for stmt in walk_stmts(fn.body):
			if isinstance(stmt, VarDecl):
				_check_type(stmt.type, program, origin)
				if stmt.name in local_names:
					raise DuplicateDefinition(f"'{stmt.name}' is declared twice in '{fn.name}'", stmt.location, origin)
				local_names.add(stmt.name)
				scope[stmt.name] = VarInfo(stmt.type, stmt.is_array)
		for stmt in walk_stmts(fn.body):
			for expr in stmt_exprs(stmt):
				_check_expr(expr, scope, program, arity, origin)
	return program


def _check_expr(expr, scope: Dict[str, VarInfo], program: Program, arity: Dict[str, int], origin: str):
	# 집합값(레코드/배열)을 통째로 쓰는 것은 호출 인자에서만 허용
	whole_ok = {id(arg) for sub in walk_expr(expr) if isinstance(sub, Call) for arg in sub.args}
	for sub in walk_expr(expr):
		if isinstance(sub, (VarRef, FieldRef, IndexRef, AddrOf)):
			name = sub.name if isinstance(sub, VarRef) else sub.var
			info: Optional[VarInfo] = scope.get(name)
			if info is None:
				raise UnknownName(f"unknown variable '{name}'", sub.location, origin)
			if isinstance(sub, VarRef) and (info.is_array or info.type.is_record) and id(sub) not in whole_ok:
				raise UnknownName(f"aggregate '{name}' can only be passed to a call", sub.location, origin)
			if isinstance(sub, FieldRef):
				rec = program.record(info.type.record) if info.type.is_record else None
				if rec is None:
					raise UnknownName(f"'{name}' is not a record", sub.location, origin)
				if sub.field_name not in rec.field_names():
					raise UnknownName(f"'struct {rec.name}' has no field '{sub.field_name}'", sub.location, origin)
			elif isinstance(sub, IndexRef) and not info.is_array:
				raise UnknownName(f"'{name}' is not an array", sub.location, origin)
		elif isinstance(sub, Call):
			expected = arity.get(sub.name)
			if expected is not None and expected != len(sub.args):
				raise ArityMismatch(f"'{sub.name}' expects {expected} arguments, got {len(sub.args)}",
									sub.location, origin)
