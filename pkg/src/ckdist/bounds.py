"""Scalar bounds linking the CK distance, approximate bisimilarity and
finite-horizon trace errors. None of these functions looks at a chain."""

from __future__ import annotations

import math
from fractions import Fraction

from .exceptions import OutOfRange


def _check_m(m):
    if int(m) != m or m < 2:
        raise OutOfRange("m", m, "an integer >= 2")


def _check_open_unit(name, x):
    if not 0.0 < x < 1.0:
        raise OutOfRange(name, x, "(0, 1)")


def ck_upper_bound(delta: float, m: int) -> float:
    """Largest CK distance possible between two ``delta``-approximately
    bisimilar chains: ``m * delta / (m - 1 + delta)``."""
    _check_open_unit("delta", delta)
    _check_m(m)
    return m * delta / (m - 1 + delta)


def bisim_impossibility_threshold(d_lower: float, m: int) -> float:
    """Given ``d >= d_lower``, the chains are not ``delta``-approximately
    bisimilar for any ``delta`` up to the returned value ``(m-1) d / (m - d)``.

    This inverts :func:`ck_upper_bound`.
    """
    if not 0.0 < d_lower <= 1.0:
        raise OutOfRange("d_lower", d_lower, "(0, 1]")
    _check_m(m)
    return (m - 1) * d_lower / (m - d_lower)


def tv_bisim_bound(delta: float, k: int) -> float:
    """Upper bound ``1 - (1 - delta)**k`` on the horizon-``k`` TV distance of two
    ``delta``-approximately bisimilar chains."""
    _check_open_unit("delta", delta)
    if int(k) != k or k < 0:
        raise OutOfRange("k", k, "an integer >= 0")
    return -math.expm1(k * math.log1p(-delta))


def tv_from_ck_bound(d_upper: float, k: int, m: int) -> float:
    """Bound on the horizon-``k`` TV distance implied by ``d <= d_upper``,
    ``m**(k-1) * d_upper``, clamped at 1."""
    if not 0.0 <= d_upper <= 1.0:
        raise OutOfRange("d_upper", d_upper, "[0, 1]")
    if int(k) != k or k < 1:
        raise OutOfRange("k", k, "an integer >= 1")
    _check_m(m)
    return min(1.0, m ** (k - 1) * d_upper)


def max_safe_horizon(epsilon: float, d_upper: float, m: int) -> int:
    """Largest ``k`` with ``m**(k-1) * d_upper <= epsilon``, i.e. every trace
    probability up to horizon ``k`` is within ``epsilon``. Returns 0 when even
    ``k = 1`` is not covered (``d_upper > epsilon``)."""
    _check_open_unit("epsilon", epsilon)
    _check_open_unit("d_upper", d_upper)
    _check_m(m)
    eps, d = Fraction(epsilon), Fraction(d_upper)
    if d > eps:
        return 0
    k = 1
    while m**k * d <= eps:
        k += 1
    return k
