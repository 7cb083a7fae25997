"""
Observability module for atomkit
Provides optional Sentry error reporting for the CLI
"""

from .sentry import capture_exception, init_sentry

__all__ = [
    "init_sentry",
    "capture_exception",
]
