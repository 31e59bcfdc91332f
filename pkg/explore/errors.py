from utils.errors import IdccError


class ReplayDivergence(IdccError):
	"""재실행이 기록된 경로와 어긋났다 (탐색기 결함이거나 프로그램이 바뀌었다)"""
	code = "replay-divergence"

	def __init__(self, message: str, index: int = -1, origin=None):
		super().__init__(message, origin=origin)
		self.index = index
