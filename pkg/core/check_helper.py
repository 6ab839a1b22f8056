"""
Check Helper
Helper functions for creating and serializing theorem-check records
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one theorem check."""

    check_name: str
    passed: bool
    measured: float
    threshold: float
    witness: Optional[complex] = None
    detail: str = ""

    def to_dict(self) -> Dict:
        """
        JSON-ready record; the witness becomes [re, im].

        Non-finite measurements are written as strings so the line stays valid JSON.
        """
        return {
            "check_name": self.check_name,
            "passed": bool(self.passed),
            "measured": _json_number(self.measured),
            "threshold": _json_number(self.threshold),
            "witness": None if self.witness is None else [self.witness.real, self.witness.imag],
            "detail": self.detail,
        }


def _json_number(value: float):
    value = float(value)
    if math.isfinite(value):
        return value
    return str(value)


def create_check_report(
    check_name: str,
    measured: float,
    threshold: float,
    passed: Optional[bool] = None,
    witness: Optional[complex] = None,
    mode: str = "at_most",
    **kwargs
) -> CheckReport:
    """
    Create a check report, deriving the verdict when not given.

    Args:
        check_name: Name of the check (e.g. "vanishing")
        measured: Measured quantity
        threshold: Threshold it is compared against
        passed: Explicit verdict; computed from mode when None
        witness: Point achieving the extreme
        mode: "at_most" (measured <= threshold) or "at_least" (measured >= threshold)
        **kwargs: detail text

    Returns:
        CheckReport
    """
    measured = float(measured)
    if passed is None:
        if math.isnan(measured):
            passed = False
        elif mode == "at_least":
            passed = measured >= threshold
        else:
            passed = measured <= threshold
    return CheckReport(
        check_name=check_name,
        passed=bool(passed),
        measured=measured,
        threshold=float(threshold),
        witness=None if witness is None else complex(witness),
        detail=str(kwargs.get("detail", "")),
    )


def failed_report(check_name: str, threshold: float, error: Exception) -> CheckReport:
    """Report for a check that could not run."""
    return create_check_report(
        check_name,
        math.nan,
        threshold,
        passed=False,
        detail=f"{type(error).__name__}: {error}",
    )
