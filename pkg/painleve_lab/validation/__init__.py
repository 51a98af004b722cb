"""
Numeric validation of symbolic results.
"""

from .errors import IntegrationError, SeriesDomainError, ValidationError
from .numeric import (
    DEFAULT_TOLERANCE,
    DEFAULT_WINDOW,
    Deviation,
    NumericSeries,
    ResidualCheck,
    Trajectory,
    convergence_order,
    deviations_over_orders,
    eval_series,
    first_order_system,
    fixed_step_endpoint,
    integral_drift,
    integrate_ode,
    residual_order_check,
    series_vs_integration,
)
from .samples import SAMPLES_PATH, SampleResult, load_samples, run_sample

__all__ = [
    "DEFAULT_TOLERANCE",
    "DEFAULT_WINDOW",
    "Deviation",
    "IntegrationError",
    "NumericSeries",
    "ResidualCheck",
    "SAMPLES_PATH",
    "SampleResult",
    "SeriesDomainError",
    "Trajectory",
    "ValidationError",
    "convergence_order",
    "deviations_over_orders",
    "eval_series",
    "first_order_system",
    "fixed_step_endpoint",
    "integral_drift",
    "integrate_ode",
    "load_samples",
    "residual_order_check",
    "run_sample",
    "series_vs_integration",
]
