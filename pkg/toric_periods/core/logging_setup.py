"""
Logging configuration: plain text by default, JSON lines on request.
"""
import logging
import sys

import json_log_formatter

from .settings import Settings


class ToricJSONFormatter(json_log_formatter.JSONFormatter):
    """JSON formatter that keeps the logger name and level."""

    def json_record(self, message, extra, record):
        extra["message"] = message
        extra["logger"] = record.name
        extra["level"] = record.levelname
        if record.exc_info:
            extra["exc_info"] = self.formatException(record.exc_info)
        return extra


def configure_logging(settings: Settings) -> None:
    """
    Install the root handler for the requested format.

    Args:
        settings: Settings carrying log_level and log_format
    """
    level = getattr(logging, settings.log_level.upper(), logging.INFO)
    if settings.log_format == "json":
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(ToricJSONFormatter())
        root = logging.getLogger()
        root.handlers = [handler]
        root.setLevel(level)
    else:
        logging.basicConfig(level=level, stream=sys.stderr)
