"""슬롯 메모리 위의 식 평가

메모리는 {슬롯: int | tuple} 이고 값은 불변이라 경로 분기 때 얕은 복사로 충분하다.
없는 슬롯은 기본값 0 (배열/레코드는 0 으로 채운 튜플).
"""
from typing import Dict, Union

from cfg.arith import apply_binary, apply_unary
from cfg.graph import SlotInfo
from frontend.ast_nodes import Binary, Expr, FieldRef, IndexRef, IntLit, Unary, VarRef

Value = Union[int, tuple]
Memory = Dict[str, Value]


class OutOfBounds(Exception):
	def __init__(self, slot: str, index: int, size: int):
		super().__init__(f"index {index} out of bounds for '{slot.split('@')[0]}[{size}]'")


def _info(slots: Dict[str, SlotInfo], name: str) -> SlotInfo:
	return slots.get(name) or SlotInfo(name)


def load(memory: Memory, slots: Dict[str, SlotInfo], name: str) -> Value:
	value = memory.get(name)
	return _info(slots, name).zero() if value is None else value


def _element(memory: Memory, slots: Dict[str, SlotInfo], expr: IndexRef) -> int:
	info = _info(slots, expr.var)
	index = evaluate(expr.index, memory, slots)
	if not 0 <= index < info.size:
		raise OutOfBounds(expr.var, index, info.size)
	return index


def evaluate(expr: Expr, memory: Memory, slots: Dict[str, SlotInfo]) -> Value:
	if isinstance(expr, IntLit):
		return expr.value
	if isinstance(expr, VarRef):
		return load(memory, slots, expr.name)
	if isinstance(expr, FieldRef):
		record = load(memory, slots, expr.var)
		return record[_info(slots, expr.var).fields.index(expr.field_name)]
	if isinstance(expr, IndexRef):
		index = _element(memory, slots, expr)
		return load(memory, slots, expr.var)[index]
	if isinstance(expr, Unary):
		return apply_unary(expr.op, evaluate(expr.operand, memory, slots))
	if isinstance(expr, Binary):
		left = evaluate(expr.left, memory, slots)
		# 단락 평가: 오른쪽의 배열 범위 검사가 막혀야 한다
		if expr.op == "&&" and not left:
			return 0
		if expr.op == "||" and left:
			return 1
		return apply_binary(expr.op, left, evaluate(expr.right, memory, slots))
	raise TypeError(f"cannot evaluate {expr!r}")


def store(target: Expr, value: Value, memory: Memory, slots: Dict[str, SlotInfo]):
	if isinstance(target, VarRef):
		memory[target.name] = value
	elif isinstance(target, FieldRef):
		record = list(load(memory, slots, target.var))
		record[_info(slots, target.var).fields.index(target.field_name)] = value
		memory[target.var] = tuple(record)
	elif isinstance(target, IndexRef):
		index = _element(memory, slots, target)
		array = list(load(memory, slots, target.var))
		array[index] = value
		memory[target.var] = tuple(array)
	else:
		raise TypeError(f"cannot assign to {target!r}")
