"""ECS 재귀 하강 파서

문법은 고정되어 있다: struct 레코드(정수 필드), int / unsigned char / void,
1차원 정수 배열, 선언/대입/호출/if/while/return/assert/블록 문장.
`*` 는 비결정 선택 전용이고 곱셈은 없다.
"""
from typing import FrozenSet, Iterable, List, Optional, Tuple

from loguru import logger

from frontend.ast_nodes import (
	PRECEDENCE, AddrOf, Assert, Assign, Binary, Block, Call, CallStmt, Expr, FieldDecl, FieldRef,
	FuncDef, If, IndexRef, IntLit, Nondet, Param, Program, RecordDef, Return, Stmt, TypeSpec,
	Unary, VarDecl, VarRef, While, walk_expr,
)
from frontend.errors import ParseError
from frontend.lexer import Token, tokenize
from frontend.semantics import check_program


STATEMENT_START = frozenset({"identifier", "int", "unsigned", "struct", "if", "while", "return", "assert", "{"})
EXPRESSION_START = frozenset({"integer", "identifier", "*", "(", "!", "-"})
TYPE_START = frozenset({"int", "unsigned", "void", "struct"})

_DISPLAY = {"IDENT": "identifier", "INT": "integer", "EOF": "end of input"}


def _display(token: Token) -> str:
	if token.kind in ("KEYWORD", "OP", "PUNCT"):
		return token.text
	return _DISPLAY.get(token.kind, token.kind)


class Parser:
	"""토큰 목록 → Program (의미 검사 전 단계)"""

	def __init__(self, tokens: List[Token], origin: str = "<input>"):
		self.tokens = tokens
		self.origin = origin
		self.pos = 0

	# ------------------------------------------------------------ 토큰 도우미

	def peek(self, offset: int = 0) -> Token:
		idx = min(self.pos + offset, len(self.tokens) - 1)
		return self.tokens[idx]

	def advance(self) -> Token:
		tok = self.tokens[self.pos]
		if tok.kind != "EOF":
			self.pos += 1
		return tok

	def check(self, value: str) -> bool:
		return self.peek().value == value

	def accept(self, value: str) -> Optional[Token]:
		if self.check(value):
			return self.advance()
		return None

	def error(self, expected: Iterable[str], what: Optional[str] = None) -> ParseError:
		tok = self.peek()
		expected = frozenset(expected)
		if what is None:
			what = "expected " + " or ".join(sorted(expected))
		return ParseError(f"{what}, found {_display(tok)!r}", (tok.line, tok.column), expected, _display(tok), origin=self.origin)

	def expect(self, value: str, expected: Optional[FrozenSet[str]] = None) -> Token:
		if self.check(value):
			return self.advance()
		shown = {_DISPLAY.get(value, value)}
		raise self.error(expected or shown)

	def expect_ident(self) -> Token:
		if self.peek().kind == "IDENT":
			return self.advance()
		raise self.error({"identifier"})

	def expect_int(self) -> int:
		tok = self.peek()
		if tok.kind != "INT":
			raise self.error({"integer"})
		self.advance()
		return int(tok.text, 0)

	# ------------------------------------------------------------ 최상위

	def parse_program(self) -> Program:
		records: List[RecordDef] = []
		globals_: List[VarDecl] = []
		functions: List[FuncDef] = []
		while self.peek().kind != "EOF":
			if self.check("struct") and self.peek(2).value == "{":
				records.append(self.parse_record())
				continue
			if self.peek().value not in TYPE_START:
				raise self.error(TYPE_START | {"end of input"})
			type_spec = self.parse_type()
			name = self.expect_ident()
			if self.check("("):
				functions.append(self.parse_function(type_spec, name))
			else:
				globals_.append(self.parse_decl_rest(type_spec, name, top_level=True))
		return Program(tuple(records), tuple(globals_), tuple(functions), origin=self.origin)

	def parse_record(self) -> RecordDef:
		start = self.expect("struct")
		name = self.expect_ident()
		self.expect("{")
		fields: List[FieldDecl] = []
		while not self.check("}"):
			type_spec = self.parse_type()
			if type_spec.base not in ("int", "unsigned char"):
				raise ParseError("record fields must be integer-typed", type_spec.location,
								 frozenset({"int", "unsigned"}), type_spec.spelled(), origin=self.origin)
			field_name = self.expect_ident()
			self.expect(";")
			fields.append(FieldDecl(type_spec, field_name.text, line=field_name.line, column=field_name.column))
		self.expect("}")
		self.expect(";")
		return RecordDef(name.text, tuple(fields), line=start.line, column=start.column)

	def parse_type(self) -> TypeSpec:
		tok = self.peek()
		if self.accept("int"):
			return TypeSpec("int", line=tok.line, column=tok.column)
		if self.accept("void"):
			return TypeSpec("void", line=tok.line, column=tok.column)
		if self.accept("unsigned"):
			self.expect("char")
			return TypeSpec("unsigned char", line=tok.line, column=tok.column)
		if self.accept("struct"):
			name = self.expect_ident()
			return TypeSpec("struct", name.text, line=tok.line, column=tok.column)
		raise self.error(TYPE_START)

	def parse_function(self, return_type: TypeSpec, name: Token) -> FuncDef:
		if return_type.is_record:
			raise ParseError("functions cannot return records", return_type.location,
							 frozenset({"int", "unsigned", "void"}), return_type.spelled(), origin=self.origin)
		self.expect("(")
		params: List[Param] = []
		if self.check("void") and self.peek(1).value == ")":
			self.advance()
		elif not self.check(")"):
			params.append(self.parse_param())
			while self.accept(","):
				params.append(self.parse_param())
		self.expect(")")
		body = None
		if not self.accept(";"):
			if not self.check("{"):
				raise self.error({"{", ";"})
			body = self.parse_block()
		return FuncDef(return_type, name.text, tuple(params), body, line=name.line, column=name.column)

	def parse_param(self) -> Param:
		type_spec = self.parse_type()
		if type_spec.base == "void":
			raise ParseError("parameters cannot be void", type_spec.location, TYPE_START - {"void"}, "void", origin=self.origin)
		name = self.expect_ident()
		is_array, size = False, None
		if self.accept("["):
			is_array = True
			if not self.check("]"):
				size = self.expect_int()
			self.expect("]")
		return Param(type_spec, name.text, is_array, size, line=name.line, column=name.column)

	def parse_decl_rest(self, type_spec: TypeSpec, name: Token, top_level: bool = False) -> VarDecl:
		if type_spec.base == "void":
			raise ParseError("variables cannot be void", type_spec.location, TYPE_START - {"void"}, "void", origin=self.origin)
		size = None
		if self.accept("["):
			if type_spec.is_record:
				raise ParseError("arrays of records are not supported", (name.line, name.column),
								 frozenset({"=", ";"}), "[", origin=self.origin)
			size = self.expect_int()
			self.expect("]")
		init = None
		if self.accept("="):
			if size is not None or type_spec.is_record:
				raise ParseError("aggregate initializers are not supported", (self.peek().line, self.peek().column),
								 frozenset({";"}), _display(self.peek()), origin=self.origin)
			init = self.parse_expr()
			if top_level and _contains_call(init):
				raise ParseError("calls are not allowed in global initializers", init.location,
								 frozenset(), "call", origin=self.origin)
		self.expect(";", frozenset({"=", ";"}) if size is None else frozenset({";"}))
		return VarDecl(type_spec, name.text, size, init, line=type_spec.line, column=type_spec.column)

	# ------------------------------------------------------------ 문장

	def parse_block(self) -> Block:
		start = self.expect("{")
		stmts: List[Stmt] = []
		while not self.check("}"):
			if self.peek().kind == "EOF":
				raise self.error(STATEMENT_START | {"}"})
			stmts.append(self.parse_stmt())
		self.expect("}")
		return Block(tuple(stmts), line=start.line, column=start.column)

	def parse_stmt(self) -> Stmt:
		tok = self.peek()
		if self.check("{"):
			return self.parse_block()
		if self.accept("if"):
			self.expect("(")
			cond = self.parse_expr()
			self.expect(")")
			then = self.parse_stmt()
			orelse = self.parse_stmt() if self.accept("else") else None
			return If(cond, then, orelse, line=tok.line, column=tok.column)
		if self.accept("while"):
			self.expect("(")
			cond = self.parse_expr()
			self.expect(")")
			body = self.parse_stmt()
			return While(cond, body, line=tok.line, column=tok.column)
		if self.accept("return"):
			value = None
			if not self.check(";"):
				value = self.parse_expr()
			self.expect(";")
			return Return(value, line=tok.line, column=tok.column)
		if self.accept("assert"):
			self.expect("(")
			cond = self.parse_expr()
			self.expect(")")
			self.expect(";")
			return Assert(cond, line=tok.line, column=tok.column)
		if tok.value in ("int", "unsigned", "struct"):
			type_spec = self.parse_type()
			name = self.expect_ident()
			return self.parse_decl_rest(type_spec, name)
		if tok.kind == "IDENT":
			if self.peek(1).value == "(":
				call = self.parse_call()
				self.expect(";")
				return CallStmt(call, line=tok.line, column=tok.column)
			target = self.parse_lvalue()
			self.expect("=", frozenset({"=", "("}))
			value = self.parse_expr()
			self.expect(";")
			return Assign(target, value, line=tok.line, column=tok.column)
		raise self.error(STATEMENT_START, "expected a statement")

	def parse_lvalue(self) -> Expr:
		name = self.expect_ident()
		if self.accept("."):
			field_name = self.expect_ident()
			return FieldRef(name.text, field_name.text, line=name.line, column=name.column)
		if self.accept("["):
			index = self.parse_expr()
			self.expect("]")
			return IndexRef(name.text, index, line=name.line, column=name.column)
		return VarRef(name.text, line=name.line, column=name.column)

	# ------------------------------------------------------------ 식

	def parse_expr(self, min_prec: int = 1) -> Expr:
		left = self.parse_unary()
		while True:
			tok = self.peek()
			prec = PRECEDENCE.get(tok.text) if tok.kind == "OP" else None
			if prec is None or prec < min_prec:
				return left
			self.advance()
			right = self.parse_expr(prec + 1)
			left = Binary(tok.text, left, right, line=left.line, column=left.column)

	def parse_unary(self) -> Expr:
		tok = self.peek()
		if tok.kind == "OP" and tok.text in ("!", "-"):
			self.advance()
			operand = self.parse_unary()
			return Unary(tok.text, operand, line=tok.line, column=tok.column)
		return self.parse_primary()

	def parse_primary(self) -> Expr:
		tok = self.peek()
		if tok.kind == "INT":
			self.advance()
			radix = 16 if tok.text[:2].lower() == "0x" else 10
			return IntLit(int(tok.text, 0) if radix == 16 else int(tok.text, 10), radix, tok.text,
						  line=tok.line, column=tok.column)
		if self.accept("*"):
			return Nondet(line=tok.line, column=tok.column)
		if self.accept("("):
			inner = self.parse_expr()
			self.expect(")")
			return inner
		if tok.kind == "IDENT":
			if self.peek(1).value == "(":
				return self.parse_call()
			return self.parse_lvalue()
		if self.check("&"):
			raise self.error(EXPRESSION_START, "'&' is only allowed on call arguments")
		raise self.error(EXPRESSION_START, "expected an expression")

	def parse_call(self) -> Call:
		name = self.expect_ident()
		self.expect("(")
		args: List[Expr] = []
		if not self.check(")"):
			args.append(self.parse_arg())
			while self.accept(","):
				args.append(self.parse_arg())
		self.expect(")", frozenset({",", ")"}))
		return Call(name.text, tuple(args), line=name.line, column=name.column)

	def parse_arg(self) -> Expr:
		tok = self.peek()
		if self.accept("&"):
			var = self.expect_ident()
			return AddrOf(var.text, line=tok.line, column=tok.column)
		return self.parse_expr()


def _contains_call(expr: Expr) -> bool:
	return any(isinstance(sub, Call) for sub in walk_expr(expr))


def parse_program(source: str, origin: str = "<input>") -> Program:
	"""ECS 소스 → 의미 검사를 통과한 Program

	ParseError / DuplicateDefinition / ArityMismatch / UnknownName 을 던진다.
	"""
	tokens = tokenize(source, origin)
	raw = Parser(tokens, origin).parse_program()
	program = check_program(raw)
	logger.debug(f"parsed {origin}: {len(program.functions)} functions, {len(program.globals)} globals")
	return program


def parse_file(path) -> Program:
	with open(path, "r", encoding="utf-8") as f:
		return parse_program(f.read(), origin=str(path))
