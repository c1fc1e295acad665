import logging
import sys
from typing import Optional

from src.core.monitoring.json_formatter import JsonFormatter

TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "INFO", log_file: Optional[str] = None, json_output: bool = False):
    # stdout carries JSON artifacts, so log records go to stderr
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, mode='w'))

    formatter = JsonFormatter() if json_output else logging.Formatter(TEXT_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        handlers=handlers,
        force=True,
    )

    logging.getLogger("networkx").setLevel(logging.WARNING)
    logging.getLogger("hypothesis").setLevel(logging.WARNING)
    logging.info("Basic application logging configured.")
