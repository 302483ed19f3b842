"""
Error Metrics - Summaries of sampled numerical errors.

Verification checks evaluate an error quantity at many sample points and
compare it against a tolerance. This module condenses such samples into:
- count of samples within tolerance and above it
- pass percentage
- min/max/median of the finite samples
- count of non-finite samples (counted as failures)

Note: this module only summarizes; deciding which error to measure is the
caller's job.
"""

from typing import Dict, Iterable, Optional

import numpy as np
from pydantic import BaseModel


class ErrorSummary(BaseModel):
    count_samples: int
    count_within: int
    count_exceeding: int
    count_nonfinite: int
    pass_percentage: float
    min: Optional[float] = None
    max: Optional[float] = None
    median: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.count_samples > 0 and self.count_within == self.count_samples


def summarize_errors(errors: Iterable[float], tol: float) -> ErrorSummary:
    """
    Summarize absolute error samples against a tolerance.

    Args:
        errors: error values, signs ignored
        tol: a sample passes when |error| <= tol

    Returns:
        ErrorSummary; min/max/median are None if no sample is finite
    """
    # ===== STEP 1: SPLIT FINITE AND NON-FINITE =====
    arr = np.abs(np.asarray(list(errors), dtype=float))
    finite = arr[np.isfinite(arr)]
    total = int(arr.size)
    nonfinite = total - int(finite.size)

    # ===== STEP 2: COUNT =====
    within = int(np.count_nonzero(finite <= tol))
    pct = round(within / total * 100, 2) if total else 0.0

    # ===== STEP 3: STATISTICS =====
    stats: Dict[str, Optional[float]] = {"min": None, "max": None, "median": None}
    if finite.size:
        stats = {"min": float(finite.min()), "max": float(finite.max()), "median": float(np.median(finite))}

    return ErrorSummary(
        count_samples=total,
        count_within=within,
        count_exceeding=total - within,
        count_nonfinite=nonfinite,
        pass_percentage=pct,
        **stats,
    )
