import logging
from typing import Any, Dict

logger = logging.getLogger(__name__)


class RunMonitor:
    """
    Central service for run monitoring, handling structured logging of events.
    """
    def __init__(self):
        logger.info("RunMonitor initialized.")

    def log_event(self, event_name: str, data: Dict[str, Any]):
        """
        Logs a structured monitoring event.
        """
        logger.info(f"SHIFTLAB_EVENT: {event_name}", extra=data)

    def log_solver_run(self, method: str, vertices: int, chi: int, exact: bool, details: Dict[str, Any]):
        log_data = {
            "method": method,
            "vertices": vertices,
            "chi": chi,
            "exact": exact,
            **details
        }
        self.log_event("solver_run", log_data)

    def log_verification(self, construction: str, passed: bool, details: Dict[str, Any]):
        self.log_event("verification", {"construction": construction, "passed": passed, **details})
