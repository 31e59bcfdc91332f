from typing import FrozenSet, Optional, Tuple

from utils.errors import IdccError


class FrontendError(IdccError):
	code = "frontend"


class ParseError(FrontendError):
	code = "parse"

	def __init__(self, message: str, location: Tuple[int, int], expected: FrozenSet[str] = frozenset(),
				 found: Optional[str] = None, origin: Optional[str] = None):
		super().__init__(message, location=location, origin=origin)
		self.expected = frozenset(expected)
		self.found = found

	@property
	def line(self) -> int:
		return self.location[0]

	@property
	def column(self) -> int:
		return self.location[1]


class DuplicateDefinition(FrontendError):
	code = "duplicate-definition"


class ArityMismatch(FrontendError):
	code = "arity-mismatch"


class UnknownName(FrontendError):
	code = "unknown-name"
