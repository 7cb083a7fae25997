"""
atomkit Suite Metrics Definitions

This module defines the Prometheus metrics recorded while running suites.
Metrics are organized into categories:
- Certificate metrics: verdict counts and final residuals per scenario
- Error metrics: toolkit errors raised while evaluating an instance
- Suite metrics: wall time and instances currently being evaluated
"""

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

# Create a dedicated registry for suite metrics
registry = CollectorRegistry()

# Certificate metrics
CERTIFICATES_TOTAL = Counter(
    "atomkit_certificates_total",
    "Total number of certificates issued",
    ["scenario", "verdict"],
    registry=registry,
)

CHECK_RESIDUAL = Histogram(
    "atomkit_check_residual",
    "Final-level reconstruction residual r_N",
    ["scenario"],
    buckets=(1e-15, 1e-13, 1e-11, 1e-9, 1e-7, 1e-5, 1e-3, 1e-1, 1.0, 10.0),
    registry=registry,
)

# Error metrics
OPERATION_ERRORS_TOTAL = Counter(
    "atomkit_operation_errors_total",
    "Total number of toolkit errors raised during evaluation",
    ["scenario", "error_code"],
    registry=registry,
)

# Suite metrics
SUITE_DURATION_SECONDS = Histogram(
    "atomkit_suite_duration_seconds",
    "Wall time of a suite run in seconds",
    registry=registry,
)

INSTANCES_IN_FLIGHT = Gauge(
    "atomkit_instances_in_flight",
    "Number of instances currently being evaluated",
    registry=registry,
)


def export_metrics(path: str) -> None:
    """Write the registry in the Prometheus text format"""
    write_to_textfile(path, registry)
