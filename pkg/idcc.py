"""idcc 명령줄

  idcc check <file> --spec S [--hal H]        리비전 하나 검사
  idcc history <dir> --spec S [--hal H]       이력 전체 검사
  idcc instrument <file> --spec S [-o out]    주석 인코딩 소스 출력
  idcc reach <file> --spec S [--hal H]        하네스 적합성만
  idcc graph --spec S [-o out.dot] [--order]  의존성 그래프 DOT

종료 코드: 0 모두 Correct, 1 Incorrect 있음, 2 Unknown 있음(Incorrect 없음), 3 사용법/파싱/명세 오류.
진단은 stderr, 보고서는 stdout.
"""
import argparse
import json
import sys
from typing import List, Optional

from colorama import init as colorama_init
from loguru import logger

from debug_tools.logging_setup import setup_logging
from depspec.graph import require_valid, spec_to_dot, topological_order
from depspec.model import parse_spec_file
from engine.checker import check_revision, harness_adequacy
from engine.config import FORMATS, CheckConfig
from engine.merge import merge_hal
from engine.report import VerdictKind
from explore.trace import Bounds
from frontend.emitter import emit_source
from frontend.parser import parse_file
from instrument.annotate import instrument
from utils.errors import IdccError
from utils.settings import load_settings
from workflow.history import load_history
from workflow.runner import check_history


EXIT_CODES = {
	VerdictKind.CORRECT: 0,
	VerdictKind.INCORRECT: 1,
	VerdictKind.UNKNOWN: 2,
}
EXIT_ERROR = 3

DEFAULT_BOUNDS = Bounds()


class _Parser(argparse.ArgumentParser):
	"""사용법 오류도 종료 코드 3"""

	def error(self, message: str):
		self.print_usage(sys.stderr)
		self.exit(EXIT_ERROR, f"error[usage] {self.prog}: {message}\n")


def _add_bounds(parser: argparse.ArgumentParser):
	group = parser.add_argument_group("bounds")
	group.add_argument("--loop-bound", type=int, default=DEFAULT_BOUNDS.loop_bound, help="루프 인스턴스당 최대 반복 (기본값: 3)")
	group.add_argument("--max-steps", type=int, default=DEFAULT_BOUNDS.max_steps, help="경로당 최대 스텝 (기본값: 10000)")
	group.add_argument("--max-paths", type=int, default=DEFAULT_BOUNDS.max_paths, help="전체 경로 상한 (기본값: 1000000)")
	group.add_argument("--timeout", type=float, default=None, help="탐색 제한 시간(초), IDCC_TIMEOUT 보다 우선 (기본값: 60)")
	group.add_argument("--inline-depth", type=int, default=8, help="인라인 최대 깊이 (기본값: 8)")


def _add_common(parser: argparse.ArgumentParser, hal: bool = True):
	parser.add_argument("--spec", required=True, help="시간 의존성 명세 (.tdep)")
	if hal:
		parser.add_argument("--hal", default=None, help="HAL 모델 프로그램 (.ecs)")
	parser.add_argument("--debug", action="store_true", help="디버그 로깅")


def build_parser() -> argparse.ArgumentParser:
	parser = _Parser(prog="idcc", description="Incremental development, continuous checking of HAL temporal dependencies")
	sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

	check = sub.add_parser("check", help="리비전 하나를 검사")
	check.add_argument("file")
	_add_common(check)
	check.add_argument("--format", choices=FORMATS, default="text")
	check.add_argument("--encoding", action="store_true", help="주석 인코딩 + assert 검사기로 판정")
	check.add_argument("--dot", default=None, help="main 뷰 CFG 를 DOT 로 저장")
	_add_bounds(check)

	history = sub.add_parser("history", help="리비전 이력 전체를 검사")
	history.add_argument("path", help="리비전 디렉터리 (또는 --from-list 목록 파일)")
	_add_common(history)
	history.add_argument("--from-list", action="store_true", help="path 를 한 줄에 한 경로씩 적힌 목록으로 읽는다")
	history.add_argument("--jobs", type=int, default=None, help="병렬 작업 수, IDCC_JOBS 보다 우선 (기본값: 1)")
	history.add_argument("--format", choices=FORMATS, default="text")
	_add_bounds(history)

	inst = sub.add_parser("instrument", help="주석 인코딩을 삽입한 소스 출력")
	inst.add_argument("file")
	_add_common(inst)
	inst.add_argument("-o", "--output", default=None)

	reach = sub.add_parser("reach", help="하네스 적합성 (호출 지점 도달성)만 확인")
	reach.add_argument("file")
	_add_common(reach)
	reach.add_argument("--format", choices=FORMATS, default="text")
	_add_bounds(reach)

	graph = sub.add_parser("graph", help="의존성 그래프를 DOT 로 출력")
	_add_common(graph, hal=False)
	graph.add_argument("-o", "--output", default=None)
	graph.add_argument("--order", action="store_true", help="위상 순서도 출력 (DOT 가 stdout 이면 stderr 로)")
	return parser


def _config(args) -> CheckConfig:
	settings = load_settings()
	timeout = args.timeout if args.timeout is not None else settings.timeout
	jobs = getattr(args, "jobs", None)
	if jobs is None:
		jobs = settings.jobs or 1
	bounds = Bounds(
		loop_bound=args.loop_bound,
		max_steps=args.max_steps,
		max_paths=args.max_paths,
		timeout=timeout if timeout is not None else DEFAULT_BOUNDS.timeout,
	)
	return CheckConfig(
		bounds=bounds,
		inline_depth=args.inline_depth,
		jobs=jobs,
		format=getattr(args, "format", "text"),
		dot_path=getattr(args, "dot", None),
		encoding=getattr(args, "encoding", False),
	)


def _write(text: str, path: Optional[str]):
	if path is None:
		sys.stdout.write(text)
		return
	with open(path, "w", encoding="utf-8") as f:
		f.write(text)
	logger.info(f"wrote {path}")


def _emit_json(data):
	sys.stdout.write(json.dumps(data, indent=2) + "\n")


def run_check(args) -> int:
	config = _config(args)
	spec = parse_spec_file(args.spec)
	hal = parse_file(args.hal) if args.hal else None
	report = check_revision(parse_file(args.file), spec, hal, config)
	if config.format == "json":
		_emit_json(report.to_dict())
	else:
		print(report.render())
	return EXIT_CODES[report.status]


def run_history(args) -> int:
	config = _config(args)
	spec = parse_spec_file(args.spec)
	hal = parse_file(args.hal) if args.hal else None
	report = check_history(load_history(args.path, from_list=args.from_list), spec, hal, config)
	if config.format == "json":
		_emit_json(report.to_list())
	else:
		color = sys.stdout.isatty()
		if color:
			colorama_init()
		print(report.render(color=color))
	return EXIT_CODES[report.status]


def run_instrument(args) -> int:
	spec = require_valid(parse_spec_file(args.spec))
	program = merge_hal(parse_file(args.file), parse_file(args.hal) if args.hal else None)
	_write(emit_source(instrument(program, spec)), args.output)
	return 0


def run_reach(args) -> int:
	"""모든 명세 함수 호출 지점에 도달하면 0, 아니면 2"""
	config = _config(args)
	spec = parse_spec_file(args.spec)
	hal = parse_file(args.hal) if args.hal else None
	report = harness_adequacy(parse_file(args.file), spec, hal, config)
	if config.format == "json":
		_emit_json(report.to_list())
	else:
		print(report.render())
	return 0 if report.adequate else EXIT_CODES[VerdictKind.UNKNOWN]


def run_graph(args) -> int:
	spec = require_valid(parse_spec_file(args.spec))
	_write(spec_to_dot(spec), args.output)
	if args.order:
		# DOT 가 stdout 이면 순서는 stderr 로
		print(" ".join(topological_order(spec)), file=sys.stderr if args.output is None else sys.stdout)
	return 0


COMMANDS = {
	"check": run_check,
	"history": run_history,
	"instrument": run_instrument,
	"reach": run_reach,
	"graph": run_graph,
}


def main(argv: Optional[List[str]] = None) -> int:
	args = build_parser().parse_args(argv)
	setup_logging(debug=args.debug)
	try:
		return COMMANDS[args.command](args)
	except IdccError as exc:
		sys.stderr.write(exc.describe() + "\n")
	except OSError as exc:
		sys.stderr.write(f"error[io] {exc.filename or ''}: {exc.strerror or exc}\n")
	except ValueError as exc:
		sys.stderr.write(f"error[usage] {exc}\n")
	return EXIT_ERROR


if __name__ == "__main__":
	sys.exit(main())
