from typing import Optional, Tuple


class IdccError(Exception):
	"""모든 idcc 오류의 루트 클래스

	code 는 CLI/JSON 에 그대로 노출되는 안정적인 식별자이고,
	location 은 (line, column) 이 있을 때만 채운다.
	"""
	code = "idcc-error"

	def __init__(self, message: str, location: Optional[Tuple[int, int]] = None, origin: Optional[str] = None):
		super().__init__(message)
		self.message = message
		self.location = location
		self.origin = origin

	def describe(self) -> str:
		"""stderr 한 줄 진단 메시지"""
		where = self.origin or "<input>"
		if self.location is not None:
			where = f"{where}:{self.location[0]}:{self.location[1]}"
		return f"error[{self.code}] {where}: {self.message}"
