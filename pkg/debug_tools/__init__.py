from debug_tools.logging_setup import LOG_FORMAT, setup_logging
from debug_tools.timer import Stopwatch
