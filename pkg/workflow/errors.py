from typing import Optional

from utils.errors import IdccError


class WorkflowError(IdccError):
	code = "workflow"


class EmptyHistory(WorkflowError):
	code = "empty-history"


class RevisionParseError(WorkflowError):
	"""리비전 하나가 파싱되지 않았다 (cause 에 원래 오류)"""
	code = "revision-parse"

	def __init__(self, revision: str, cause: IdccError):
		super().__init__(cause.message, cause.location, revision)
		self.revision = revision
		self.cause = cause
		self.code = f"{RevisionParseError.code}:{cause.code}"
