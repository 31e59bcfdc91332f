import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv
from loguru import logger


@dataclass(frozen=True)
class Settings:
	timeout: Optional[float] = None
	jobs: Optional[int] = None


def _read_number(name: str, cast):
	raw = os.getenv(name)
	if raw is None or raw.strip() == "":
		return None
	try:
		return cast(raw)
	except ValueError:
		raise ValueError(f"environment variable {name} must be a number, got {raw!r}")


def load_settings() -> Settings:
	"""
	.env 와 환경 변수에서 IDCC_TIMEOUT(초), IDCC_JOBS 를 읽는다 (CLI 플래그가 우선)
	"""
	load_dotenv()
	settings = Settings(timeout=_read_number("IDCC_TIMEOUT", float), jobs=_read_number("IDCC_JOBS", int))
	logger.debug(f"settings from environment: {settings}")
	return settings
