from dataclasses import dataclass, field
from typing import Optional, Tuple

from cfg.graph import InlineStack


STEP_KINDS = ("call", "branch", "assign", "nondet", "loop-iter", "violation", "exit")


@dataclass(frozen=True)
class Bounds:
	loop_bound: int = 3
	max_steps: int = 10_000
	max_paths: int = 1_000_000
	timeout: float = 60.0

	def __post_init__(self):
		for name in ("loop_bound", "max_steps", "max_paths", "timeout"):
			if getattr(self, name) <= 0:
				raise ValueError(f"bound '{name}' must be positive, got {getattr(self, name)}")

	def covers(self, other: "Bounds") -> bool:
		"""성분별로 other 이상"""
		return (self.loop_bound >= other.loop_bound and self.max_steps >= other.max_steps
				and self.max_paths >= other.max_paths and self.timeout >= other.timeout)


@dataclass(frozen=True)
class Step:
	line: int
	kind: str
	detail: str
	choice: Optional[int] = None
	inline_stack: InlineStack = ()
	node: int = field(default=-1, compare=False)

	def to_json(self) -> dict:
		return {"line": self.line, "kind": self.kind, "detail": self.detail, "choice": self.choice}


@dataclass(frozen=True)
class Trace:
	"""실패 경로. dep 는 의존성 id 이거나 `assert@<line>`"""
	dep: str
	steps: Tuple[Step, ...]
	before: Optional[str] = None
	after: Optional[str] = None
	assert_node: Optional[int] = None

	@property
	def is_assertion(self) -> bool:
		return self.assert_node is not None

	def choices(self) -> Tuple[int, ...]:
		return tuple(s.choice for s in self.steps if s.choice is not None)

	def relabeled(self, dep: str) -> "Trace":
		return Trace(dep, self.steps, self.before, self.after, self.assert_node)

	def to_json(self) -> dict:
		return {"dep": self.dep, "steps": [s.to_json() for s in self.steps], "replayable": True}

	def render(self) -> str:
		lines = []
		for idx, step in enumerate(self.steps, start=1):
			choice = f" [choice={step.choice}]" if step.choice is not None else ""
			lines.append(f"  {idx:>3}. line {step.line:<4} {step.kind:<10} {step.detail}{choice}")
		return "\n".join(lines)
