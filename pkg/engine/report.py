"""판정과 보고서 (JSON 스키마: schemas/check_report.schema.json)"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from cfg.graph import CallSite, format_stack
from depspec.model import TemporalDependency
from explore.trace import Trace
from frontend.lint import Lint


class VerdictKind(Enum):
	CORRECT = "Correct"
	INCORRECT = "Incorrect"
	UNKNOWN = "Unknown"


class UnknownReason(Enum):
	OUT_OF_BOUNDS = "out-of-bounds"
	TIMEOUT = "timeout"
	PATH_BOUND = "path-bound"
	STEP_BOUND = "step-bound"
	LOOP_BOUND = "loop-bound"
	IMPRECISION = "imprecision"


class HarnessStatus(Enum):
	REACHED = "Reached"
	NOT_REACHED = "NotReachedWithinBounds"
	UNREACHABLE = "StructurallyUnreachable"


@dataclass(frozen=True)
class Verdict:
	dep: TemporalDependency
	kind: VerdictKind
	trace: Optional[Trace] = None
	reason: Optional[UnknownReason] = None
	vacuous: bool = False
	via: str = ""  # must | exploration | exhaustive | bounds

	def to_dict(self) -> dict:
		data = {"id": self.dep.id, "verdict": self.kind.value}
		if self.kind is VerdictKind.UNKNOWN:
			data["reason"] = self.reason.value
		if self.kind is VerdictKind.INCORRECT:
			data["trace"] = self.trace.to_json()
		if self.kind is VerdictKind.CORRECT:
			data["vacuous"] = self.vacuous
		return data

	def summary(self) -> str:
		if self.kind is VerdictKind.UNKNOWN:
			return f"Unknown ({self.reason.value})"
		if self.kind is VerdictKind.CORRECT and self.vacuous:
			return "Correct (vacuous)"
		return self.kind.value


@dataclass(frozen=True)
class HarnessEntry:
	site: CallSite
	status: HarnessStatus
	suggestion: Optional[str] = None

	def to_dict(self) -> dict:
		data = {"callee": self.site.callee, "line": self.site.line, "status": self.status.value}
		if self.suggestion:
			data["suggestion"] = self.suggestion
		return data


@dataclass(frozen=True)
class HarnessReport:
	entries: Tuple[HarnessEntry, ...] = ()

	def status_of(self, callee: str) -> List[HarnessStatus]:
		return [e.status for e in self.entries if e.site.callee == callee]

	@property
	def adequate(self) -> bool:
		return all(e.status is HarnessStatus.REACHED for e in self.entries)

	def to_list(self) -> List[dict]:
		return [e.to_dict() for e in self.entries]

	def render(self) -> str:
		lines = []
		for entry in self.entries:
			where = format_stack(entry.site.inline_stack)
			line = f"  {entry.site.callee:<28} line {entry.site.line:<5} {entry.status.value:<26} {where}"
			if entry.suggestion:
				line += f"\n      hint: {entry.suggestion}"
			lines.append(line)
		return "\n".join(lines) if lines else "  (no spec-function call sites)"


def overall_status(verdicts) -> VerdictKind:
	kinds = {v.kind for v in verdicts}
	if VerdictKind.INCORRECT in kinds:
		return VerdictKind.INCORRECT
	if VerdictKind.UNKNOWN in kinds:
		return VerdictKind.UNKNOWN
	return VerdictKind.CORRECT


@dataclass
class CheckReport:
	origin: str
	spec_hash: str
	verdicts: List[Verdict] = field(default_factory=list)
	harness: HarnessReport = field(default_factory=HarnessReport)
	lints: List[Lint] = field(default_factory=list)
	unmatched: Tuple[str, ...] = ()
	paths: int = 0
	truncations: int = 0
	exhaustive: bool = True
	elapsed_ms: int = 0
	mode: str = "direct"

	@property
	def status(self) -> VerdictKind:
		return overall_status(self.verdicts)

	def verdict(self, dep_id: str) -> Verdict:
		return next(v for v in self.verdicts if v.dep.id == dep_id)

	@property
	def vacuous_ids(self) -> List[str]:
		return [v.dep.id for v in self.verdicts if v.kind is VerdictKind.CORRECT and v.vacuous]

	def to_dict(self, include_timing: bool = True) -> dict:
		stats = {"paths": self.paths, "truncations": self.truncations, "exhaustive": self.exhaustive, "mode": self.mode}
		if include_timing:
			stats["elapsed_ms"] = self.elapsed_ms
		return {
			"origin": self.origin,
			"spec_hash": self.spec_hash,
			"status": self.status.value,
			"deps": [v.to_dict() for v in self.verdicts],
			"harness": self.harness.to_list(),
			"lints": [l.to_dict() for l in self.lints],
			"unmatched": list(self.unmatched),
			"stats": stats,
		}

	def render(self) -> str:
		out = [f"{self.origin}: {self.status.value}  (spec {self.spec_hash}, {self.paths} paths, {self.elapsed_ms} ms)"]
		if self.vacuous_ids:
			out.append(f"  warning: {', '.join(self.vacuous_ids)} hold only vacuously; "
					   f"their 'after' calls are never reached (see harness report)")
		for name in self.unmatched:
			out.append(f"  warning: spec function '{name}' does not occur in the program")
		out.append("dependencies:")
		for v in self.verdicts:
			out.append(f"  {v.dep.id:<6} {v.dep.before} -> {v.dep.after}: {v.summary()}")
			if v.trace is not None:
				out.append(v.trace.render())
		out.append("harness:")
		out.append(self.harness.render())
		if self.lints:
			out.append("lints:")
			for lint in self.lints:
				out.append(f"  {lint.location[0]}:{lint.location[1]} {lint.code.value}: {lint.message}")
		return "\n".join(out)
