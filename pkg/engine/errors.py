from utils.errors import IdccError


class EngineError(IdccError):
	code = "engine"


class MergeConflict(EngineError):
	code = "merge-conflict"


class EngineInconsistency(EngineError):
	"""must 분석이 증명한 의존성에 탐색기가 위반 경로를 찾았다 (내부 오류)"""
	code = "engine-inconsistency"
