"""Adversarial-link network coding: bounds, layouts, and session simulation.

Thin convenience layer over the compiled ``_znec`` core.
"""

from ._znec import (
    NetworkParams,
    bound_report,
    classify,
    identified_margin,
    keys_digest,
    plan_layout,
    run_session,
    tight,
    upper_bound,
)

__all__ = [
    "NetworkParams",
    "bound_report",
    "classify",
    "identified_margin",
    "keys_digest",
    "plan_layout",
    "run_session",
    "tight",
    "upper_bound",
]
