from workflow.errors import EmptyHistory, RevisionParseError, WorkflowError
from workflow.history import History, Revision, load_history
from workflow.metrics import IncrementPhase, IncrementSummary, RevisionMetrics, count_loc, diff_summary, metrics
from workflow.runner import HistoryReport, RevisionResult, check_history
