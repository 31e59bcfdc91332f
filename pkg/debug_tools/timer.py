import time
from typing import Optional

from loguru import logger


class Stopwatch:
	"""
	단조 시계 기반 경과 시간 측정기 (보고서의 ms 필드, 탐색기 타임아웃)

	with 블록으로 쓰면 블록 시간을 재고 끝날 때 DEBUG 로 남긴다.
	"""
	def __init__(self, name: str = "stopwatch"):
		self.name = name
		self.started: float = time.monotonic()
		self.stopped: Optional[float] = None

	def restart(self):
		self.started = time.monotonic()
		self.stopped = None

	def stop(self) -> float:
		self.stopped = time.monotonic()
		return self.elapsed_s()

	def elapsed_s(self) -> float:
		end = self.stopped if self.stopped is not None else time.monotonic()
		return end - self.started

	def elapsed_ms(self) -> int:
		return int(self.elapsed_s() * 1000)

	def expired(self, limit_s: float) -> bool:
		return self.elapsed_s() > limit_s

	def log(self, what: Optional[str] = None):
		label = f"{self.name}: {what}" if what else self.name
		logger.debug(f"{label} took {self.elapsed_s():.3f}s")

	def __enter__(self) -> "Stopwatch":
		self.restart()
		return self

	def __exit__(self, *exc):
		self.stop()
		self.log()
		return False
