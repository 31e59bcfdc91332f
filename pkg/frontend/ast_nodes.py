"""ECS(Embedded-C-Subset) AST 노드

모든 노드는 (line, column) 을 갖지만 비교(==)에서는 제외한다.
그래서 parse(emit(parse(s))) == parse(s) 를 위치와 무관하게 확인할 수 있다.
"""
from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union


BINARY_OPS = ("||", "&&", "==", "!=", "<", "<=", ">", ">=", "+", "-", "/", "%")
COMPARISON_OPS = ("==", "!=", "<", "<=", ">", ">=")
UNARY_OPS = ("!", "-")

# 높을수록 강하게 묶인다
PRECEDENCE = {
	"||": 1,
	"&&": 2,
	"==": 3, "!=": 3,
	"<": 4, "<=": 4, ">": 4, ">=": 4,
	"+": 5, "-": 5,
	"/": 6, "%": 6,
}
UNARY_PRECEDENCE = 7


@dataclass(frozen=True)
class Node:
	line: int = field(default=0, compare=False, kw_only=True)
	column: int = field(default=0, compare=False, kw_only=True)

	@property
	def location(self) -> Tuple[int, int]:
		return (self.line, self.column)


# ---------------------------------------------------------------- 식(expression)

@dataclass(frozen=True)
class IntLit(Node):
	value: int
	radix: int = 10
	spelling: str = field(default="", compare=False)


@dataclass(frozen=True)
class Nondet(Node):
	pass


@dataclass(frozen=True)
class VarRef(Node):
	name: str


@dataclass(frozen=True)
class FieldRef(Node):
	var: str
	field_name: str


@dataclass(frozen=True)
class IndexRef(Node):
	var: str
	index: "Expr"


@dataclass(frozen=True)
class Call(Node):
	name: str
	args: Tuple["Expr", ...] = ()


@dataclass(frozen=True)
class AddrOf(Node):
	var: str


@dataclass(frozen=True)
class Unary(Node):
	op: str
	operand: "Expr"


@dataclass(frozen=True)
class Binary(Node):
	op: str
	left: "Expr"
	right: "Expr"


Expr = Union[IntLit, Nondet, VarRef, FieldRef, IndexRef, Call, AddrOf, Unary, Binary]
LValue = Union[VarRef, FieldRef, IndexRef]


# ---------------------------------------------------------------- 타입 / 선언

@dataclass(frozen=True)
class TypeSpec(Node):
	"""int | unsigned char | void | struct NAME"""
	base: str
	record: Optional[str] = None

	@property
	def is_record(self) -> bool:
		return self.base == "struct"

	def spelled(self) -> str:
		if self.is_record:
			return f"struct {self.record}"
		return self.base


@dataclass(frozen=True)
class FieldDecl(Node):
	type: TypeSpec
	name: str


@dataclass(frozen=True)
class RecordDef(Node):
	name: str
	fields: Tuple[FieldDecl, ...] = ()

	def field_names(self) -> Tuple[str, ...]:
		return tuple(f.name for f in self.fields)


@dataclass(frozen=True)
class Param(Node):
	type: TypeSpec
	name: str
	is_array: bool = False
	size: Optional[int] = None


# ---------------------------------------------------------------- 문장(statement)

@dataclass(frozen=True)
class VarDecl(Node):
	type: TypeSpec
	name: str
	size: Optional[int] = None
	init: Optional[Expr] = None

	@property
	def is_array(self) -> bool:
		return self.size is not None


@dataclass(frozen=True)
class Assign(Node):
	target: LValue
	value: Expr


@dataclass(frozen=True)
class CallStmt(Node):
	call: Call


@dataclass(frozen=True)
class Block(Node):
	stmts: Tuple["Stmt", ...] = ()


@dataclass(frozen=True)
class If(Node):
	cond: Expr
	then: "Stmt"
	orelse: Optional["Stmt"] = None


@dataclass(frozen=True)
class While(Node):
	cond: Expr
	body: "Stmt"


@dataclass(frozen=True)
class Return(Node):
	value: Optional[Expr] = None


@dataclass(frozen=True)
class Assert(Node):
	cond: Expr


Stmt = Union[VarDecl, Assign, CallStmt, If, While, Return, Assert, Block]


@dataclass(frozen=True)
class FuncDef(Node):
	return_type: TypeSpec
	name: str
	params: Tuple[Param, ...] = ()
	body: Optional[Block] = None

	@property
	def undefined(self) -> bool:
		return self.body is None

	@property
	def arity(self) -> int:
		return len(self.params)


@dataclass(frozen=True)
class Program:
	records: Tuple[RecordDef, ...] = ()
	globals: Tuple[VarDecl, ...] = ()
	functions: Tuple[FuncDef, ...] = ()
	origin: str = field(default="<input>", compare=False)

	def function(self, name: str) -> Optional[FuncDef]:
		for fn in self.functions:
			if fn.name == name:
				return fn
		return None

	def record(self, name: str) -> Optional[RecordDef]:
		for rec in self.records:
			if rec.name == name:
				return rec
		return None

	def defined_names(self) -> frozenset:
		return frozenset(fn.name for fn in self.functions if not fn.undefined)


# ---------------------------------------------------------------- 순회 도우미

def child_exprs(expr: Expr) -> Iterator[Expr]:
	if isinstance(expr, IndexRef):
		yield expr.index
	elif isinstance(expr, Call):
		yield from expr.args
	elif isinstance(expr, Unary):
		yield expr.operand
	elif isinstance(expr, Binary):
		yield expr.left
		yield expr.right


def walk_expr(expr: Expr) -> Iterator[Expr]:
	"""전위 순회 (좌→우 평가 순서와 같다)"""
	yield expr
	for child in child_exprs(expr):
		yield from walk_expr(child)


def stmt_exprs(stmt: Stmt) -> Iterator[Expr]:
	"""문장이 직접 갖는 식들 (하위 문장 제외)"""
	if isinstance(stmt, VarDecl):
		if stmt.init is not None:
			yield stmt.init
	elif isinstance(stmt, Assign):
		yield stmt.target
		yield stmt.value
	elif isinstance(stmt, CallStmt):
		yield stmt.call
	elif isinstance(stmt, (If, While, Assert)):
		yield stmt.cond
	elif isinstance(stmt, Return):
		if stmt.value is not None:
			yield stmt.value


def child_stmts(stmt: Stmt) -> Iterator[Stmt]:
	if isinstance(stmt, Block):
		yield from stmt.stmts
	elif isinstance(stmt, If):
		yield stmt.then
		if stmt.orelse is not None:
			yield stmt.orelse
	elif isinstance(stmt, While):
		yield stmt.body


def walk_stmts(stmt: Stmt) -> Iterator[Stmt]:
	yield stmt
	for child in child_stmts(stmt):
		yield from walk_stmts(child)


def walk_program_stmts(program: Program) -> Iterator[Tuple[FuncDef, Stmt]]:
	for fn in program.functions:
		if fn.body is None:
			continue
		for stmt in walk_stmts(fn.body):
			yield fn, stmt


def iter_calls(program: Program) -> Iterator[Tuple[FuncDef, Call]]:
	"""소스 순서대로 모든 호출식"""
	for fn, stmt in walk_program_stmts(program):
		for expr in stmt_exprs(stmt):
			for sub in walk_expr(expr):
				if isinstance(sub, Call):
					yield fn, sub


def referenced_var(expr: Expr) -> Optional[str]:
	"""식이 가리키는 변수 이름 (VarRef/FieldRef/IndexRef/AddrOf)"""
	if isinstance(expr, VarRef):
		return expr.name
	if isinstance(expr, (FieldRef, IndexRef, AddrOf)):
		return expr.var
	return None
