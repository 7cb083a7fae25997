"""
atomkit Metrics Module

Prometheus metrics for suite runs, exported as a text file with
--metrics-out or ATOMKIT_METRICS_OUT.
"""

from .base import (
    CERTIFICATES_TOTAL,
    CHECK_RESIDUAL,
    INSTANCES_IN_FLIGHT,
    OPERATION_ERRORS_TOTAL,
    SUITE_DURATION_SECONDS,
    export_metrics,
    registry,
)

__all__ = [
    "CERTIFICATES_TOTAL",
    "CHECK_RESIDUAL",
    "INSTANCES_IN_FLIGHT",
    "OPERATION_ERRORS_TOTAL",
    "SUITE_DURATION_SECONDS",
    "export_metrics",
    "registry",
]
