from utils.errors import IdccError


class SpecError(IdccError):
	code = "spec"


class SpecSyntaxError(SpecError):
	code = "spec-syntax"


class DuplicateId(SpecError):
	code = "duplicate-id"


class SelfDependency(SpecError):
	code = "self-dependency"


class InvalidSpec(SpecError):
	"""사이클이나 중복 쌍이 있어 엄격한 부분 순서가 아니다"""
	code = "invalid-spec"
