"""이력 전체를 리비전마다 새로 검사한다 (리비전 사이에 공유하는 상태 없음)"""
import multiprocessing
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from colorama import Fore, Style
from loguru import logger

from debug_tools.timer import Stopwatch
from depspec.model import DependencySpec
from engine.checker import check_revision
from engine.config import CheckConfig
from engine.report import CheckReport, VerdictKind, overall_status
from frontend.ast_nodes import Program
from utils.errors import IdccError
from workflow.history import History, Revision
from workflow.metrics import IncrementSummary, RevisionMetrics, diff_summary, metrics


_COLORS = {
	VerdictKind.CORRECT: Fore.GREEN,
	VerdictKind.INCORRECT: Fore.RED,
	VerdictKind.UNKNOWN: Fore.YELLOW,
}


@dataclass
class RevisionResult:
	revision: Revision
	report: Optional[CheckReport]
	metrics: RevisionMetrics
	increment: IncrementSummary
	error: Optional[str] = None

	@property
	def status(self) -> Optional[VerdictKind]:
		return None if self.report is None else self.report.status

	def to_dict(self, include_timing: bool = True) -> dict:
		data = {
			"revision": self.revision.path,
			"metrics": self.metrics.to_dict(),
			"increment": self.increment.to_dict(),
		}
		if self.report is not None:
			data["report"] = self.report.to_dict(include_timing)
		if self.error is not None:
			data["error"] = self.error
		return data


@dataclass
class HistoryReport:
	origin: str
	results: List[RevisionResult] = field(default_factory=list)
	elapsed_ms: int = 0

	@property
	def status(self) -> VerdictKind:
		"""오류가 난 리비전은 Unknown 으로 친다"""
		status = overall_status([v for r in self.results if r.report is not None for v in r.report.verdicts])
		if status is not VerdictKind.INCORRECT and any(r.error is not None for r in self.results):
			return VerdictKind.UNKNOWN
		return status

	def failing(self) -> List[int]:
		return [r.revision.index for r in self.results if r.status is VerdictKind.INCORRECT]

	def to_list(self, include_timing: bool = True) -> List[dict]:
		return [r.to_dict(include_timing) for r in self.results]

	def render(self, color: bool = True) -> str:
		header = f"{'id':>3}  {'revision':<28} {'phase':<13} {'LOC':>5} {'HAL':>5} {'harness':<8} {'verdict':<10} {'time':>8}"
		lines = [header, "-" * len(header)]
		for r in self.results:
			if r.report is None:
				verdict, tint, elapsed = "error", Fore.RED, "-"
			else:
				verdict, tint, elapsed = r.status.value, _COLORS[r.status], f"{r.report.elapsed_ms} ms"
			shown = f"{tint}{verdict:<10}{Style.RESET_ALL}" if color else f"{verdict:<10}"
			harness = "yes" if r.increment.extends_harness else "-"
			lines.append(
				f"{r.revision.index:>3}  {r.revision.name:<28} {r.increment.phase.value:<13} {r.metrics.loc:>5} "
				f"{r.metrics.hal_loc:>5} {harness:<8} {shown} {elapsed:>8}"
			)
		for r in self.results:
			if r.increment.note:
				lines.append(f"note: revision {r.revision.index} ({r.revision.name}): {r.increment.note}")
			if r.error:
				lines.append(f"error: revision {r.revision.index} ({r.revision.name}): {r.error}")
		return "\n".join(lines)


def _check_one(args: Tuple[Revision, DependencySpec, Optional[Program], CheckConfig]) -> Tuple[Optional[CheckReport], Optional[str]]:
	revision, spec, hal, config = args
	try:
		return check_revision(revision.program, spec, hal, config), None
	except IdccError as exc:
		logger.error(exc.describe())
		return None, exc.describe()


def check_history(history: History, spec: DependencySpec, hal: Optional[Program] = None,
				  config: Optional[CheckConfig] = None) -> HistoryReport:
	"""
	리비전마다 독립적으로 check_revision 을 돌린다.
	실패한 리비전이 있어도 다음 리비전은 계속 검사하고, 결과 순서는 항상 리비전 순서다.
	"""
	config = config or CheckConfig()
	watch = Stopwatch("history")
	jobs = [(rev, spec, hal, config) for rev in history]
	if config.jobs > 1 and len(jobs) > 1:
		with multiprocessing.Pool(min(config.jobs, len(jobs))) as pool:
			outcomes = pool.map(_check_one, jobs)
	else:
		outcomes = [_check_one(job) for job in jobs]

	report = HistoryReport(history.origin)
	prev: Optional[Program] = None
	for rev, (check, error) in zip(history, outcomes):
		report.results.append(RevisionResult(rev, check, metrics(rev.program, spec, hal), diff_summary(prev, rev.program), error))
		prev = rev.program
	report.elapsed_ms = watch.elapsed_ms()
	logger.info(f"{history.origin}: {len(history)} revisions, overall {report.status.value}, {report.elapsed_ms} ms")
	return report
