import sys

from loguru import logger


LOG_FORMAT = "<level>{level: <8}</level> | {name}:{function} - {message}"


def setup_logging(debug: bool = False, sink=None) -> int:
	"""
	stderr 싱크 하나만 남긴다 (보고서는 stdout 전용)
	"""
	logger.remove()
	level = "DEBUG" if debug else "INFO"
	handler_id = logger.add(sink or sys.stderr, level=level, format=LOG_FORMAT, colorize=sink is None)
	logger.debug(f"logging initialized at {level}")
	return handler_id
