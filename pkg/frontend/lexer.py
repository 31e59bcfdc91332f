import re
from dataclasses import dataclass
from typing import List

from frontend.errors import ParseError


KEYWORDS = {"int", "unsigned", "char", "void", "struct", "if", "else", "while", "return", "assert"}

_TOKEN_SPEC = [
	("WS", r"[ \t\r\f\v]+"),
	("NEWLINE", r"\n"),
	("LINE_COMMENT", r"//[^\n]*"),
	("BLOCK_COMMENT", r"/\*(?:.|\n)*?\*/"),
	("HEX", r"0[xX][0-9A-Fa-f]+"),
	("INT", r"[0-9]+"),
	("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
	("UNTERMINATED", r"/\*"),
	("OP", r"\|\||&&|==|!=|<=|>=|[<>=+\-/%!*&]"),
	("PUNCT", r"[(){}\[\];,.]"),
	("MISMATCH", r"."),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
	kind: str  # IDENT | INT | KEYWORD | OP | PUNCT | EOF
	text: str
	line: int
	column: int

	@property
	def value(self) -> str:
		"""파서가 비교에 쓰는 값: 키워드/연산자는 텍스트 자체, 나머지는 종류"""
		if self.kind in ("KEYWORD", "OP", "PUNCT"):
			return self.text
		return self.kind


def tokenize(source: str, origin: str = "<input>") -> List[Token]:
	"""ECS 소스를 토큰 목록으로 변환 (주석/공백 제거, 마지막은 EOF)"""
	tokens: List[Token] = []
	line, line_start = 1, 0
	for match in _MASTER.finditer(source):
		kind = match.lastgroup
		text = match.group()
		column = match.start() - line_start + 1
		if kind == "NEWLINE":
			line += 1
			line_start = match.end()
			continue
		if kind == "BLOCK_COMMENT":
			# 블록 주석 안의 줄바꿈도 줄 번호에 반영
			newlines = text.count("\n")
			if newlines:
				line += newlines
				line_start = match.start() + text.rfind("\n") + 1
			continue
		if kind in ("WS", "LINE_COMMENT"):
			continue
		if kind == "UNTERMINATED":
			raise ParseError("unterminated block comment", (line, column), frozenset({"*/"}), "EOF", origin=origin)
		if kind == "MISMATCH":
			raise ParseError(f"unexpected character {text!r}", (line, column), frozenset(), text, origin=origin)
		if kind == "IDENT" and text in KEYWORDS:
			kind = "KEYWORD"
		elif kind == "HEX":
			kind = "INT"
		tokens.append(Token(kind, text, line, column))
	tokens.append(Token("EOF", "", line, len(source) - line_start + 1))
	return tokens
