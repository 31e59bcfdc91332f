from typing import List

from frontend.ast_nodes import (
	PRECEDENCE, UNARY_PRECEDENCE, AddrOf, Assert, Assign, Binary, Block, Call, CallStmt, Expr,
	FieldRef, FuncDef, If, IndexRef, IntLit, Nondet, Param, Program, RecordDef, Return, Stmt,
	Unary, VarDecl, VarRef, While,
)


INDENT = "    "


def emit_expr(expr: Expr, parent_prec: int = 0) -> str:
	"""필요한 곳에만 괄호를 넣는다 (좌결합 기준)"""
	if isinstance(expr, IntLit):
		if expr.spelling:
			return expr.spelling
		return hex(expr.value) if expr.radix == 16 else str(expr.value)
	if isinstance(expr, Nondet):
		return "*"
	if isinstance(expr, VarRef):
		return expr.name
	if isinstance(expr, FieldRef):
		return f"{expr.var}.{expr.field_name}"
	if isinstance(expr, IndexRef):
		return f"{expr.var}[{emit_expr(expr.index)}]"
	if isinstance(expr, AddrOf):
		return f"&{expr.var}"
	if isinstance(expr, Call):
		return f"{expr.name}({', '.join(emit_expr(a) for a in expr.args)})"
	if isinstance(expr, Unary):
		text = f"{expr.op}{emit_expr(expr.operand, UNARY_PRECEDENCE)}"
		# "- -x" 가 "--x" 로 붙지 않게
		if expr.op == "-" and text.startswith("--"):
			text = f"-({emit_expr(expr.operand)})"
		return f"({text})" if parent_prec > UNARY_PRECEDENCE else text
	if isinstance(expr, Binary):
		prec = PRECEDENCE[expr.op]
		left = emit_expr(expr.left, prec)
		right = emit_expr(expr.right, prec + 1)
		text = f"{left} {expr.op} {right}"
		return f"({text})" if prec < parent_prec else text
	raise TypeError(f"not an expression: {expr!r}")


def _emit_decl(decl: VarDecl) -> str:
	text = f"{decl.type.spelled()} {decl.name}"
	if decl.size is not None:
		text += f"[{decl.size}]"
	if decl.init is not None:
		text += f" = {emit_expr(decl.init)}"
	return text + ";"


def _emit_param(param: Param) -> str:
	text = f"{param.type.spelled()} {param.name}"
	if param.is_array:
		text += f"[{param.size if param.size is not None else ''}]"
	return text


def _emit_block_body(stmts, depth: int, out: List[str]):
	for stmt in stmts:
		_emit_stmt(stmt, depth, out)


def _emit_branch_body(stmt: Stmt, header: str, depth: int, out: List[str]) -> bool:
	"""`header {` ... 형태로 내보냈으면 True (닫는 괄호는 호출자 몫)"""
	pad = INDENT * depth
	if isinstance(stmt, Block):
		out.append(f"{pad}{header} {{")
		_emit_block_body(stmt.stmts, depth + 1, out)
		return True
	out.append(f"{pad}{header}")
	_emit_stmt(stmt, depth + 1, out)
	return False


def _emit_stmt(stmt: Stmt, depth: int, out: List[str]):
	pad = INDENT * depth
	if isinstance(stmt, VarDecl):
		out.append(pad + _emit_decl(stmt))
	elif isinstance(stmt, Assign):
		out.append(f"{pad}{emit_expr(stmt.target)} = {emit_expr(stmt.value)};")
	elif isinstance(stmt, CallStmt):
		out.append(f"{pad}{emit_expr(stmt.call)};")
	elif isinstance(stmt, Return):
		out.append(f"{pad}return;" if stmt.value is None else f"{pad}return {emit_expr(stmt.value)};")
	elif isinstance(stmt, Assert):
		out.append(f"{pad}assert({emit_expr(stmt.cond)});")
	elif isinstance(stmt, Block):
		out.append(pad + "{")
		_emit_block_body(stmt.stmts, depth + 1, out)
		out.append(pad + "}")
	elif isinstance(stmt, If):
		braced = _emit_branch_body(stmt.then, f"if ({emit_expr(stmt.cond)})", depth, out)
		if stmt.orelse is None:
			if braced:
				out.append(pad + "}")
			return
		if braced and isinstance(stmt.orelse, Block):
			out.append(pad + "} else {")
			_emit_block_body(stmt.orelse.stmts, depth + 1, out)
			out.append(pad + "}")
			return
		if braced:
			out.append(pad + "}")
		if _emit_branch_body(stmt.orelse, "else", depth, out):
			out.append(pad + "}")
	elif isinstance(stmt, While):
		if _emit_branch_body(stmt.body, f"while ({emit_expr(stmt.cond)})", depth, out):
			out.append(pad + "}")
	else:
		raise TypeError(f"not a statement: {stmt!r}")


def _emit_record(rec: RecordDef, out: List[str]):
	out.append(f"struct {rec.name} {{")
	for fld in rec.fields:
		out.append(f"{INDENT}{fld.type.spelled()} {fld.name};")
	out.append("};")


def _emit_function(fn: FuncDef, out: List[str]):
	params = ", ".join(_emit_param(p) for p in fn.params)
	header = f"{fn.return_type.spelled()} {fn.name}({params})"
	if fn.body is None:
		out.append(header + ";")
		return
	out.append(header)
	out.append("{")
	_emit_block_body(fn.body.stmts, 1, out)
	out.append("}")


def emit_lines(program: Program) -> List[str]:
	out: List[str] = []
	for rec in program.records:
		_emit_record(rec, out)
	for decl in program.globals:
		out.append(_emit_decl(decl))
	for fn in program.functions:
		if out:
			out.append("")
		_emit_function(fn, out)
	return out


def emit_source(program: Program) -> str:
	"""Program → ECS 텍스트 (4칸 들여쓰기, 한 줄에 한 문장)"""
	lines = emit_lines(program)
	return "\n".join(lines) + "\n" if lines else ""
