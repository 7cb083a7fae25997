"""
Sentry integration for atomkit
Reports unexpected CLI failures when SENTRY_ENABLED and SENTRY_DSN are set
"""

import logging
from typing import Any, Dict, Optional

import sentry_sdk
from sentry_sdk.integrations.logging import LoggingIntegration

from ..config import settings

logger = logging.getLogger(__name__)


def before_send(
    event: Dict[str, Any], hint: Dict[str, Any]
) -> Optional[Dict[str, Any]]:
    """
    Sentry event processor that tags every event with service context

    Args:
        event: The Sentry event to process
        hint: Additional context about the event

    Returns:
        Processed event or None to drop the event
    """
    try:
        if "tags" not in event:
            event["tags"] = {}

        event["tags"].update(
            {
                "service": settings.SERVICE_NAME,
                "environment": settings.SENTRY_ENV,
                "release": settings.APP_RELEASE,
            }
        )

        # Scenario travels in the log record extras
        extra = event.get("extra") or {}
        if "scenario" in extra:
            event["tags"]["scenario"] = extra["scenario"]

        return event

    except Exception as e:
        logger.error(f"Error in Sentry before_send: {e}")
        return None


def init_sentry() -> bool:
    """Initialize Sentry SDK; returns whether reporting is active"""
    if not settings.SENTRY_ENABLED or not settings.SENTRY_DSN:
        logger.debug("Sentry disabled or no DSN provided")
        return False

    try:
        sentry_sdk.init(
            dsn=settings.SENTRY_DSN,
            environment=settings.SENTRY_ENV,
            release=settings.APP_RELEASE,
            before_send=before_send,
            integrations=[
                LoggingIntegration(level=logging.INFO, event_level=logging.ERROR),
            ],
            attach_stacktrace=True,
            debug=settings.is_development,
        )

        logger.info(
            f"Sentry initialized successfully for environment: {settings.SENTRY_ENV}"
        )

        sentry_sdk.set_tag("service", settings.SERVICE_NAME)
        sentry_sdk.set_tag("release", settings.APP_RELEASE)
        return True

    except Exception as e:
        logger.error(f"Failed to initialize Sentry: {e}")
        return False


def capture_exception(error: Exception, **tags) -> Optional[str]:
    """
    Capture an exception in Sentry with additional tags

    Args:
        error: The exception to capture
        **tags: Tag values such as scenario or seed

    Returns:
        Sentry event ID if successful, None otherwise
    """
    if not settings.SENTRY_ENABLED:
        return None

    try:
        for key, value in tags.items():
            sentry_sdk.set_tag(key, value)
        return sentry_sdk.capture_exception(error)

    except Exception as e:
        logger.error(f"Failed to capture exception in Sentry: {e}")
        return None
