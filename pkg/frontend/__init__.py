from frontend.ast_nodes import Program
from frontend.emitter import emit_source
from frontend.errors import ArityMismatch, DuplicateDefinition, FrontendError, ParseError, UnknownName
from frontend.lint import Lint, LintCode, lint_program
from frontend.parser import parse_file, parse_program
