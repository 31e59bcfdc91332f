from explore.errors import ReplayDivergence
from explore.explorer import ExplorationResult, explore, nondet_domain, replay
from explore.trace import STEP_KINDS, Bounds, Step, Trace
