from utils.errors import IdccError


class CfgError(IdccError):
	code = "cfg"


class MissingMain(CfgError):
	code = "missing-main"


class RecursionBeyondBound(CfgError):
	code = "recursion"


class InlineDepthExceeded(CfgError):
	code = "inline-depth"


class UnknownCalleeArity(CfgError):
	code = "unknown-callee-arity"


class UnsupportedConstruct(CfgError):
	code = "unsupported"
