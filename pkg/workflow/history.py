"""리비전 이력: 디렉터리의 `.ecs` 파일을 이름순으로, 또는 목록 파일 순서대로"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

from loguru import logger

from frontend.ast_nodes import Program
from frontend.parser import parse_program
from utils.errors import IdccError
from workflow.errors import EmptyHistory, RevisionParseError


@dataclass(frozen=True)
class Revision:
	index: int
	path: str
	program: Program
	source: str

	@property
	def name(self) -> str:
		return Path(self.path).stem


@dataclass(frozen=True)
class History:
	revisions: Tuple[Revision, ...]
	origin: str = "<history>"

	def __len__(self) -> int:
		return len(self.revisions)

	def __iter__(self):
		return iter(self.revisions)

	def __getitem__(self, idx: int) -> Revision:
		return self.revisions[idx]


def _read_manifest(manifest: Path) -> List[Path]:
	paths = []
	for raw in manifest.read_text(encoding="utf-8").splitlines():
		line = raw.split("#", 1)[0].strip()
		if line:
			entry = Path(line)
			paths.append(entry if entry.is_absolute() else manifest.parent / entry)
	return paths


def load_history(path: Union[str, Path], from_list: bool = False) -> History:
	"""
	디렉터리면 `*.ecs` 를 사전순으로, from_list 면 한 줄에 한 경로씩 적힌 목록 파일을 읽는다.
	파싱 실패는 해당 리비전 이름을 단 RevisionParseError 로 중단한다.
	"""
	root = Path(path)
	files = _read_manifest(root) if from_list else sorted(root.glob("*.ecs"), key=lambda p: p.name)
	if not files:
		raise EmptyHistory(f"no .ecs revisions found in {root}", origin=str(root))

	revisions = []
	for idx, file in enumerate(files):
		source = file.read_text(encoding="utf-8")
		try:
			program = parse_program(source, origin=str(file))
		except IdccError as exc:
			raise RevisionParseError(str(file), exc) from exc
		revisions.append(Revision(idx, str(file), program, source))
	logger.debug(f"loaded history {root}: {len(revisions)} revisions")
	return History(tuple(revisions), origin=str(root))
