"""Python face of the singularity laboratory.

The compiled core returns JSON strings; the helpers here parse them into
plain dicts so callers never see the serialization layer.
"""

import json as _json

from _singlab import (  # noqa: F401
    DEFAULT_SEED,
    Polynomial,
    sample_zero_set,
)
import _singlab as _core

__all__ = [
    "DEFAULT_SEED",
    "Polynomial",
    "sample_zero_set",
    "integrate_grad_log",
    "integrate_abs_log",
    "critical_exponent",
    "radial_blowup",
    "exponent_report",
    "run_suite",
]


def integrate_grad_log(f, p, **kwargs):
    """Verdict dict for the integral of |grad f / f|**p over a box."""
    return _json.loads(_core.integrate_grad_log_json(f, p, **kwargs))


def integrate_abs_log(f, p, **kwargs):
    """Verdict dict for the integral of |log|f||**p over a box."""
    return _json.loads(_core.integrate_abs_log_json(f, p, **kwargs))


def critical_exponent(f, lo, hi, **kwargs):
    """Bisection result dict for the integrability threshold of f."""
    return _json.loads(_core.critical_exponent_json(f, lo, hi, **kwargs))


def radial_blowup(f, omega, eps=0.5):
    """Verdict dict for the 1D |phi'/phi| integral along the ray omega."""
    return _json.loads(_core.radial_blowup_json(f, omega, eps))


def exponent_report(f, **kwargs):
    """Lojasiewicz exponent estimates and the sum inequality margin."""
    return _json.loads(_core.exponent_report_json(f, **kwargs))


def run_suite(seed=DEFAULT_SEED, threads=0):
    """Full verification battery; returns {checks, rows, all_passed}."""
    return _json.loads(_core.run_suite_json(seed, threads))
