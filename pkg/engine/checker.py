"""세 갈래 판정: must 증명 → 탐색기의 위반 경로 → 완전 탐색 → Unknown

  Correct     must 분석이 증명했거나, 탐색이 잘림 없이 끝났고 위반이 없다
  Incorrect   탐색기가 재현 가능한 위반 경로를 찾았다
  Unknown     자원 한계에 걸렸거나 범위 밖 배열 접근으로 경로가 끊겼다
              (out-of-bounds > timeout > path-bound > step-bound > loop-bound > imprecision)
"""
from typing import List, Optional, Tuple

from loguru import logger

from analysis.must import check_dependencies_must, prove_asserts
from cfg.builder import build_cfg
from cfg.dot import cfg_to_dot
from cfg.graph import Cfg, NodeKind, call_sites
from debug_tools.timer import Stopwatch
from depspec.graph import require_valid
from depspec.model import DependencySpec, TemporalDependency
from engine.config import CheckConfig
from engine.errors import EngineInconsistency
from engine.merge import merge_hal
from engine.report import (
	CheckReport, HarnessEntry, HarnessReport, HarnessStatus, UnknownReason, Verdict, VerdictKind,
)
from explore.explorer import ExplorationResult, explore
from frontend.ast_nodes import FieldRef, IndexRef, Nondet, Program, VarRef, iter_calls, walk_expr
from frontend.emitter import emit_expr
from frontend.lint import lint_program
from instrument.annotate import instrument_program


def dominant_reason(result: ExplorationResult) -> UnknownReason:
	if result.oob_paths:
		return UnknownReason.OUT_OF_BOUNDS
	if result.timed_out:
		return UnknownReason.TIMEOUT
	if result.path_bound_hit:
		return UnknownReason.PATH_BOUND
	if result.step_truncations:
		return UnknownReason.STEP_BOUND
	if result.loop_truncations:
		return UnknownReason.LOOP_BOUND
	return UnknownReason.IMPRECISION


def _vacuous(cfg: Cfg, callee: str) -> bool:
	return not any(n.reachable for n in cfg.call_nodes() if n.callee == callee)


def unmatched_names(program: Program, spec: DependencySpec) -> Tuple[str, ...]:
	present = {fn.name for fn in program.functions} | {call.name for _, call in iter_calls(program)}
	return tuple(name for name in spec.functions if name not in present)


# ---------------------------------------------------------------- 하네스 적합성

def _suggestion(cfg: Cfg, node_id: int) -> str:
	guard = cfg.guard_of(node_id)
	if guard is None or guard.source is None or isinstance(guard.source, Nondet):
		return "raise the exploration bounds or extend the harness"
	names: List[str] = []
	for sub in walk_expr(guard.source):
		if isinstance(sub, (VarRef, FieldRef, IndexRef)):
			text = emit_expr(sub)
			if text not in names:
				names.append(text)
	if not names:
		return f"guard '{guard.text}' at line {guard.line} is never satisfied"
	assignments = " ".join(f"`{name} = *;`" for name in names)
	return f"guarded by '{guard.text}' at line {guard.line}; consider a harness assignment such as {assignments}"


def classify_sites(cfg: Cfg, spec: DependencySpec, exploration: ExplorationResult) -> HarnessReport:
	entries = []
	for site in call_sites(cfg, spec):
		if not site.is_spec_function:
			continue
		if not cfg.node(site.node).reachable:
			entries.append(HarnessEntry(site, HarnessStatus.UNREACHABLE))
		elif site.node in exploration.covered_nodes:
			entries.append(HarnessEntry(site, HarnessStatus.REACHED))
		else:
			entries.append(HarnessEntry(site, HarnessStatus.NOT_REACHED, _suggestion(cfg, site.node)))
	return HarnessReport(tuple(entries))


# ---------------------------------------------------------------- 직접 모니터 검사

def _prepare(program: Program, spec: DependencySpec, hal: Optional[Program],
			 config: CheckConfig) -> Tuple[Program, Cfg]:
	require_valid(spec)
	merged = merge_hal(program, hal)
	cfg = build_cfg(merged, config.inline_depth)
	if config.dot_path:
		with open(config.dot_path, "w", encoding="utf-8") as f:
			f.write(cfg_to_dot(cfg))
		logger.debug(f"wrote main-view graph to {config.dot_path}")
	for name in unmatched_names(merged, spec):
		logger.warning(f"{program.origin}: spec function '{name}' does not occur in the program")
	return merged, cfg


def _decide(dep: TemporalDependency, proved: bool, vacuous: bool, trace, exploration: Optional[ExplorationResult]) -> Verdict:
	if proved:
		return Verdict(dep, VerdictKind.CORRECT, vacuous=vacuous, via="must")
	if trace is not None:
		return Verdict(dep, VerdictKind.INCORRECT, trace=trace, via="exploration")
	if exploration.exhaustive:
		return Verdict(dep, VerdictKind.CORRECT, vacuous=vacuous, via="exhaustive")
	return Verdict(dep, VerdictKind.UNKNOWN, reason=dominant_reason(exploration), via="bounds")


def check_revision(program: Program, spec: DependencySpec, hal: Optional[Program] = None,
				   config: Optional[CheckConfig] = None) -> CheckReport:
	"""P ⊨ φ ? 의존성마다 판정"""
	config = config or CheckConfig()
	if config.encoding:
		return check_revision_encoded(program, spec, hal, config)
	watch = Stopwatch("check")
	merged, cfg = _prepare(program, spec, hal, config)

	with Stopwatch(f"{program.origin} must-analysis"):
		must = check_dependencies_must(cfg, spec)
	with Stopwatch(f"{program.origin} exploration"):
		exploration = explore(cfg, spec, config.bounds)

	verdicts = []
	with Stopwatch(f"{program.origin} verdicts"):
		for dep in spec.deps:
			outcome = must[dep.id]
			trace = exploration.violations.get(dep.id)
			if outcome.proved and trace is not None:
				raise EngineInconsistency(f"{dep} was proved by must-analysis but exploration found a violation",
										  origin=program.origin)
			verdicts.append(_decide(dep, outcome.proved, _vacuous(cfg, dep.after), trace, exploration))

	report = CheckReport(
		origin=program.origin,
		spec_hash=spec.spec_hash(),
		verdicts=verdicts,
		harness=classify_sites(cfg, spec, exploration),
		lints=lint_program(program),
		unmatched=unmatched_names(merged, spec),
		paths=exploration.paths_explored,
		truncations=exploration.truncation_events,
		exhaustive=exploration.exhaustive,
		elapsed_ms=watch.elapsed_ms(),
	)
	logger.info(f"{program.origin}: {report.status.value} ({len(verdicts)} dependencies, {report.elapsed_ms} ms)")
	return report


# ---------------------------------------------------------------- 주석 인코딩 검사

def _aux_asserts(cfg: Cfg, aux: str) -> List[int]:
	return [
		n.id for n in cfg.nodes()
		if n.kind is NodeKind.ASSERT and any(isinstance(s, VarRef) and s.name == aux for s in walk_expr(n.value))
	]


def check_revision_encoded(program: Program, spec: DependencySpec, hal: Optional[Program] = None,
						   config: Optional[CheckConfig] = None) -> CheckReport:
	"""의존성마다 {δ} 만 삽입한 프로그램을 일반 assert 검사기로 확인한다"""
	config = config or CheckConfig()
	watch = Stopwatch("check-encoded")
	merged, base_cfg = _prepare(program, spec, hal, config)

	verdicts = []
	paths, truncations, exhaustive = 0, 0, True
	for dep in spec.deps:
		instrumented, records = instrument_program(merged, spec.restricted([dep.id]))
		cfg = build_cfg(instrumented, config.inline_depth)
		asserts = _aux_asserts(cfg, records[0].aux_name)
		vacuous = not any(cfg.node(n).reachable for n in asserts)
		proofs = prove_asserts(cfg)
		if all(proofs[n].proved for n in asserts):
			verdicts.append(_decide(dep, True, vacuous, None, None))
			continue
		exploration = explore(cfg, DependencySpec(), config.bounds)
		paths += exploration.paths_explored
		truncations += exploration.truncation_events
		exhaustive = exhaustive and exploration.exhaustive
		failure = next((t for node, t in exploration.assert_failures.items() if node in asserts), None)
		trace = failure.relabeled(dep.id) if failure is not None else None
		verdicts.append(_decide(dep, False, vacuous, trace, exploration))

	coverage = explore(base_cfg, spec, config.bounds)
	report = CheckReport(
		origin=program.origin,
		spec_hash=spec.spec_hash(),
		verdicts=verdicts,
		harness=classify_sites(base_cfg, spec, coverage),
		lints=lint_program(program),
		unmatched=unmatched_names(merged, spec),
		paths=paths,
		truncations=truncations,
		exhaustive=exhaustive,
		elapsed_ms=watch.elapsed_ms(),
		mode="encoded",
	)
	logger.info(f"{program.origin}: {report.status.value} via encoding ({len(verdicts)} dependencies)")
	return report


def harness_adequacy(program: Program, spec: DependencySpec, hal: Optional[Program] = None,
					 config: Optional[CheckConfig] = None) -> HarnessReport:
	config = config or CheckConfig()
	_, cfg = _prepare(program, spec, hal, config)
	return classify_sites(cfg, spec, explore(cfg, spec, config.bounds))
