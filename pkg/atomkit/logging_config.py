"""
Logging configuration for atomkit
Provides structured JSON logging for verification runs
"""

import logging
import logging.config
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from pythonjsonlogger import jsonlogger

from .config import settings

# record attributes copied into JSON output when a caller passes them via ``extra``
DOMAIN_FIELDS = (
    "scenario",
    "seed",
    "verdict",
    "residual",
    "operation",
    "duration_ms",
    "error_code",
    "event",
)


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """Custom JSON formatter with additional fields"""

    def add_fields(
        self,
        log_record: Dict[str, Any],
        record: logging.LogRecord,
        message_dict: Dict[str, Any],
    ) -> None:
        """Add custom fields to log records"""
        super().add_fields(log_record, record, message_dict)

        if not log_record.get("timestamp"):
            log_record["timestamp"] = datetime.now(timezone.utc).isoformat()

        log_record["service"] = settings.SERVICE_NAME
        log_record["environment"] = settings.ENVIRONMENT
        log_record["release"] = settings.APP_RELEASE
        log_record["level"] = record.levelname
        log_record["logger"] = record.name
        log_record["module"] = record.module
        log_record["function"] = record.funcName
        log_record["line_number"] = record.lineno

        for field in DOMAIN_FIELDS:
            if hasattr(record, field):
                log_record[field] = getattr(record, field)


def _writable_logs_dir(logs_dir: Optional[str]) -> Optional[str]:
    """Return logs_dir if it exists (or can be created) and is writable"""
    if not logs_dir:
        return None
    try:
        os.makedirs(logs_dir, exist_ok=True)
    except OSError as e:
        print(f"Warning: Could not create logs directory {logs_dir}: {e}", file=sys.stderr)
        return None
    if not os.access(logs_dir, os.W_OK):
        print(f"Warning: Cannot write to logs directory {logs_dir}", file=sys.stderr)
        return None
    return logs_dir


def setup_logging(level: Optional[str] = None, quiet: bool = False) -> None:
    """
    Setup logging configuration

    Args:
        level: Override for settings.LOG_LEVEL
        quiet: Raise the console threshold to WARNING
    """
    log_level = getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.INFO)
    console_level = max(log_level, logging.WARNING) if quiet else log_level
    formatter = "json" if settings.LOG_FORMAT == "json" else "simple"
    logs_dir = _writable_logs_dir(settings.LOGS_DIR)

    handlers: Dict[str, Dict[str, Any]] = {
        "console": {
            "class": "logging.StreamHandler",
            "level": console_level,
            "formatter": formatter,
            "stream": sys.stderr,
        },
    }
    if logs_dir:
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": log_level,
            "formatter": formatter,
            "filename": os.path.join(logs_dir, "atomkit.log"),
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
        }
        handlers["error_file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": logging.ERROR,
            "formatter": formatter,
            "filename": os.path.join(logs_dir, "error.log"),
            "maxBytes": 10485760,
            "backupCount": 5,
        }

    logging_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "json": {
                "()": CustomJsonFormatter,
                "format": "%(timestamp)s %(level)s %(name)s %(message)s",
            },
            "simple": {
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
            },
        },
        "handlers": handlers,
        "loggers": {
            "atomkit": {
                "level": log_level,
                "handlers": list(handlers),
                "propagate": False,
            },
        },
    }

    logging.config.dictConfig(logging_config)

    logging.getLogger(__name__).debug(
        "Logging configured successfully",
        extra={
            "log_level": logging.getLevelName(log_level),
            "log_format": settings.LOG_FORMAT,
            "event": "logging_configured",
        },
    )

