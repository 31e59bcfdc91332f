from dataclasses import dataclass, field
from typing import Optional

from cfg.builder import DEFAULT_INLINE_DEPTH
from explore.trace import Bounds


FORMATS = ("text", "json")


@dataclass(frozen=True)
class CheckConfig:
	bounds: Bounds = field(default_factory=Bounds)
	inline_depth: int = DEFAULT_INLINE_DEPTH
	jobs: int = 1
	format: str = "text"
	dot_path: Optional[str] = None
	encoding: bool = False

	def __post_init__(self):
		if self.inline_depth <= 0:
			raise ValueError(f"inline depth must be positive, got {self.inline_depth}")
		if self.jobs <= 0:
			raise ValueError(f"jobs must be positive, got {self.jobs}")
		if self.format not in FORMATS:
			raise ValueError(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")
