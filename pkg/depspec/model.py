"""시간 의존성 명세 φ: "f1 호출이 f2 호출보다 먼저" 간선들의 목록"""
import hashlib
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from loguru import logger

from depspec.errors import DuplicateId, SelfDependency, SpecSyntaxError


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_LINE = re.compile(rf"^(?:(?P<id>[A-Za-z_][A-Za-z0-9_-]*)\s*:)?\s*(?P<before>{_NAME})\s*->\s*(?P<after>{_NAME})$")


@dataclass(frozen=True)
class TemporalDependency:
	id: str
	before: str
	after: str
	line: int = field(default=0, compare=False)

	def __str__(self) -> str:
		return f"{self.id}: {self.before} -> {self.after}"


@dataclass(frozen=True)
class DependencySpec:
	deps: Tuple[TemporalDependency, ...] = ()
	origin: str = field(default="<spec>", compare=False)

	@property
	def functions(self) -> Tuple[str, ...]:
		"""언급된 함수 이름 (처음 등장 순서)"""
		seen: Dict[str, None] = {}
		for dep in self.deps:
			seen.setdefault(dep.before, None)
			seen.setdefault(dep.after, None)
		return tuple(seen)

	def names(self) -> frozenset:
		return frozenset(self.functions)

	def dependency(self, dep_id: str) -> Optional[TemporalDependency]:
		for dep in self.deps:
			if dep.id == dep_id:
				return dep
		return None

	def restricted(self, dep_ids: Iterable[str]) -> "DependencySpec":
		keep = set(dep_ids)
		return DependencySpec(tuple(d for d in self.deps if d.id in keep), origin=self.origin)

	def spec_hash(self) -> str:
		return hashlib.sha256(emit_spec(self).encode("utf-8")).hexdigest()[:16]

	def __len__(self) -> int:
		return len(self.deps)


def parse_spec(text: str, origin: str = "<spec>") -> DependencySpec:
	"""`.tdep` 텍스트 → DependencySpec

	줄마다 `[id:] before -> after`, `#` 부터 줄 끝까지 주석, 빈 줄 무시.
	id 가 없으면 파일 순서대로 d1..dn 을 붙이되, 파일 안에 명시된 id 는 건너뛴다.
	"""
	lines = []
	for lineno, raw in enumerate(text.splitlines(), start=1):
		line = raw.split("#", 1)[0].strip()
		if not line:
			continue
		match = _LINE.match(line)
		if match is None:
			raise SpecSyntaxError(f"expected '[id:] NAME -> NAME', got {line!r}", (lineno, 1), origin)
		lines.append((lineno, match))
	explicit = {match.group("id") for _, match in lines if match.group("id")}

	deps: List[TemporalDependency] = []
	seen_ids: Dict[str, int] = {}
	for lineno, match in lines:
		dep_id = match.group("id")
		if not dep_id:
			n = len(deps) + 1
			while f"d{n}" in explicit or f"d{n}" in seen_ids:
				n += 1
			dep_id = f"d{n}"
		before, after = match.group("before"), match.group("after")
		if before == after:
			raise SelfDependency(f"'{before}' cannot depend on itself", (lineno, 1), origin)
		if dep_id in seen_ids:
			raise DuplicateId(f"dependency id '{dep_id}' already used on line {seen_ids[dep_id]}", (lineno, 1), origin)
		seen_ids[dep_id] = lineno
		deps.append(TemporalDependency(dep_id, before, after, lineno))
	logger.debug(f"parsed spec {origin}: {len(deps)} dependencies")
	return DependencySpec(tuple(deps), origin=origin)


def parse_spec_file(path) -> DependencySpec:
	with open(path, "r", encoding="utf-8") as f:
		return parse_spec(f.read(), origin=str(path))


def emit_spec(spec: DependencySpec) -> str:
	return "".join(f"{dep.id}: {dep.before} -> {dep.after}\n" for dep in spec.deps)
