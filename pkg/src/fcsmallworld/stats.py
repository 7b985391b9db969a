"""Location tests against a reference value (median or mean equal to 1 for sigma)."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import betainc


def sign_counts(values: Sequence[float], reference: float) -> tuple[int, int]:
    above = sum(1 for v in values if v > reference)
    below = sum(1 for v in values if v < reference)
    return above, below


def sign_test(values: Sequence[float], reference: float = 1.0) -> float | None:
    """Exact two-sided sign test of median == reference.

    Values equal to the reference are dropped. The p-value doubles the smaller
    binomial(n, 1/2) tail and is capped at 1. Returns None when nothing is
    left after dropping ties.
    """
    above, below = sign_counts(values, reference)
    n = above + below
    if n == 0:
        return None
    k = min(above, below)
    tail = sum(math.comb(n, i) for i in range(k + 1))
    # exact rational arithmetic until the final division
    return min(1.0, 2 * tail / 2 ** n)


def t_test_one_sample(values: Sequence[float], reference: float = 1.0) -> float | None:
    """Two-sided one-sample t-test p-value; None for < 2 values or zero spread.

    Uses P(|T| > t) = I_{nu/(nu + t^2)}(nu/2, 1/2), the regularized
    incomplete beta function.
    """
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        return None
    sd = float(np.std(x, ddof=1))
    if not sd > 0:
        return None
    nu = x.size - 1
    t = (float(np.mean(x)) - reference) / (sd / math.sqrt(x.size))
    return float(betainc(nu / 2.0, 0.5, nu / (nu + t * t)))
