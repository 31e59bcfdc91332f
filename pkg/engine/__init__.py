from engine.checker import check_revision, check_revision_encoded, classify_sites, dominant_reason, harness_adequacy
from engine.config import FORMATS, CheckConfig
from engine.errors import EngineError, EngineInconsistency, MergeConflict
from engine.merge import merge_hal
from engine.report import (
	CheckReport, HarnessEntry, HarnessReport, HarnessStatus, UnknownReason, Verdict, VerdictKind, overall_status,
)
