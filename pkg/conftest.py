from pathlib import Path

import pytest
from loguru import logger

from depspec.model import parse_spec, parse_spec_file
from frontend.parser import parse_file, parse_program


FIXTURES = Path(__file__).parent / "fixtures"
PROGRAMS = FIXTURES / "programs"
SPECS = FIXTURES / "specs"
HISTORY = FIXTURES / "history"


@pytest.fixture
def fixtures_dir() -> Path:
	return FIXTURES


@pytest.fixture
def program_file():
	def load(name: str):
		return parse_file(PROGRAMS / name)
	return load


@pytest.fixture
def spec_file():
	def load(name: str):
		return parse_spec_file(SPECS / name)
	return load


@pytest.fixture
def program():
	"""소스 문자열 → Program"""
	def build(source: str, origin: str = "<test>"):
		return parse_program(source, origin)
	return build


@pytest.fixture
def spec():
	def build(text: str):
		return parse_spec(text, "<test-spec>")
	return build


@pytest.fixture
def caplog(caplog):
	"""loguru 메시지를 pytest caplog 로 전달"""
	handler_id = logger.add(caplog.handler, format="{message}", level=0)
	yield caplog
	logger.remove(handler_id)
