from typing import Dict, List, Optional

from loguru import logger

from engine.errors import MergeConflict
from frontend.ast_nodes import FuncDef, Program
from frontend.semantics import check_program


def merge_hal(app: Program, hal: Optional[Program]) -> Program:
	"""애플리케이션 + HAL 모델 → 하나의 Program

	정의가 선언을 이긴다. 양쪽 모두 정의한 함수, 서로 다른 레코드,
	겹치는 전역 변수는 MergeConflict.
	"""
	if hal is None:
		return app

	records = list(app.records)
	for rec in hal.records:
		existing = app.record(rec.name)
		if existing is None:
			records.append(rec)
		elif existing != rec:
			raise MergeConflict(f"'struct {rec.name}' differs between {app.origin} and {hal.origin}",
								rec.location, hal.origin)

	app_globals = {d.name for d in app.globals}
	for decl in hal.globals:
		if decl.name in app_globals:
			raise MergeConflict(f"global '{decl.name}' is declared by both the program and the HAL model",
								decl.location, hal.origin)

	merged: Dict[str, FuncDef] = {fn.name: fn for fn in app.functions}
	order: List[str] = [fn.name for fn in app.functions]
	for fn in hal.functions:
		prev = merged.get(fn.name)
		if prev is None:
			merged[fn.name] = fn
			order.append(fn.name)
			continue
		if prev.arity != fn.arity:
			raise MergeConflict(f"'{fn.name}' has {prev.arity} parameters in {app.origin} "
								f"but {fn.arity} in {hal.origin}", fn.location, hal.origin)
		if not prev.undefined and not fn.undefined:
			raise MergeConflict(f"'{fn.name}' is defined by both the program and the HAL model",
								fn.location, hal.origin)
		if prev.undefined and not fn.undefined:
			merged[fn.name] = fn

	program = Program(tuple(records), app.globals + hal.globals, tuple(merged[n] for n in order), origin=app.origin)
	logger.debug(f"merged HAL model {hal.origin} into {app.origin}: {len(order)} functions")
	return check_program(program)
