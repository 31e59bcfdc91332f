"""ECS 정수 연산 (C 의 절삭 나눗셈, 0 으로 나누면 0)"""
from typing import Optional

from frontend.ast_nodes import Binary, Expr, IntLit, Unary


def c_div(a: int, b: int) -> int:
	if b == 0:
		return 0
	q = abs(a) // abs(b)
	return q if (a >= 0) == (b >= 0) else -q


def c_mod(a: int, b: int) -> int:
	if b == 0:
		return 0
	return a - b * c_div(a, b)


def apply_binary(op: str, a: int, b: int) -> int:
	if op == "+":
		return a + b
	if op == "-":
		return a - b
	if op == "/":
		return c_div(a, b)
	if op == "%":
		return c_mod(a, b)
	if op == "==":
		return int(a == b)
	if op == "!=":
		return int(a != b)
	if op == "<":
		return int(a < b)
	if op == "<=":
		return int(a <= b)
	if op == ">":
		return int(a > b)
	if op == ">=":
		return int(a >= b)
	if op == "&&":
		return int(bool(a) and bool(b))
	if op == "||":
		return int(bool(a) or bool(b))
	raise ValueError(f"unknown binary operator {op!r}")


def apply_unary(op: str, a: int) -> int:
	if op == "!":
		return int(not a)
	if op == "-":
		return -a
	raise ValueError(f"unknown unary operator {op!r}")


def constant_value(expr: Expr) -> Optional[int]:
	"""리터럴로만 이루어진 식이면 그 값, 아니면 None"""
	if isinstance(expr, IntLit):
		return expr.value
	if isinstance(expr, Unary):
		inner = constant_value(expr.operand)
		return None if inner is None else apply_unary(expr.op, inner)
	if isinstance(expr, Binary):
		left = constant_value(expr.left)
		right = constant_value(expr.right)
		if left is None or right is None:
			return None
		return apply_binary(expr.op, left, right)
	return None
