"""B-spline basis functions and rational de Boor evaluation."""

from __future__ import annotations

from bisect import bisect_right
from typing import Sequence

import numpy as np

from .errors import DomainError


def _last_nondegenerate_span(knots: Sequence[float], upper: int) -> int:
    k = upper
    while k > 0 and knots[k] >= knots[k + 1]:
        k -= 1
    return k


def find_span(knots: Sequence[float], degree: int, n_ctrl: int, u: float) -> int:
    """Index ``k`` of the knot span ``[knots[k], knots[k+1])`` holding ``u``.

    The result is clamped to the valid span range ``degree <= k < n_ctrl``; the
    right end of the domain belongs to the last non-empty span.
    """
    if u >= knots[n_ctrl]:
        return _last_nondegenerate_span(knots, n_ctrl - 1)
    k = bisect_right(knots, u) - 1
    return min(max(k, degree), n_ctrl - 1)


def nurbs_basis(degree: int, knots: Sequence[float], i: int, u: float) -> float:
    """Cox-de Boor basis value ``N_{i,degree}(u)``.

    Computed bottom-up over all degrees. Spans are half-open except at the end of
    the curve domain (``knots[n_ctrl]``) and the last knot, which are closed so
    that the basis sums to one over the whole domain.
    """
    m = len(knots)
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    n_ctrl = m - degree - 1
    if n_ctrl < 1:
        raise DomainError("knot vector too short for the degree")
    if any(b < a for a, b in zip(knots, knots[1:])):
        raise DomainError("knot vector must be nondecreasing")
    if not 0 <= i < n_ctrl:
        raise DomainError(f"basis index {i} outside [0, {n_ctrl})")
    if not knots[0] <= u <= knots[-1]:
        raise DomainError(f"u={u} outside knot range [{knots[0]}, {knots[-1]}]")

    if u == knots[n_ctrl] and knots[degree] < knots[n_ctrl]:
        span = _last_nondegenerate_span(knots, n_ctrl - 1)
    elif u == knots[-1]:
        span = _last_nondegenerate_span(knots, m - 2)
    else:
        span = bisect_right(knots, u) - 1

    # degree-0 row has m-1 entries; each raise drops one
    row = [1.0 if j == span else 0.0 for j in range(m - 1)]
    for d in range(1, degree + 1):
        nxt = []
        for j in range(m - 1 - d):
            val = 0.0
            den = knots[j + d] - knots[j]
            if den > 0.0 and row[j] != 0.0:
                val += (u - knots[j]) / den * row[j]
            den = knots[j + d + 1] - knots[j + 1]
            if den > 0.0 and row[j + 1] != 0.0:
                val += (knots[j + d + 1] - u) / den * row[j + 1]
            nxt.append(val)
        row = nxt
    return row[i]


def de_boor(degree: int, knots: Sequence[float], ctrl: np.ndarray, u: float) -> np.ndarray:
    """Evaluate a (homogeneous) B-spline with control rows ``ctrl`` at ``u``.

    ``ctrl`` has one row per control point; any column count works, so rational
    curves pass ``[w*x, w*y, w*z, w]`` rows and divide afterwards.
    """
    n_ctrl = len(ctrl)
    k = find_span(knots, degree, n_ctrl, u)
    d = ctrl[k - degree:k + 1].astype(float, copy=True)
    for r in range(1, degree + 1):
        for j in range(degree, r - 1, -1):
            lo = knots[j + k - degree]
            den = knots[j + 1 + k - r] - lo
            alpha = (u - lo) / den if den > 0.0 else 0.0
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j]
    return d[degree]


def derivative_control(degree: int, knots: Sequence[float], ctrl: np.ndarray) -> tuple[np.ndarray, tuple[float, ...]]:
    """Control rows and knots of the derivative spline (degree - 1)."""
    n_ctrl = len(ctrl)
    rows = np.zeros((n_ctrl - 1, ctrl.shape[1]))
    for i in range(n_ctrl - 1):
        den = knots[i + degree + 1] - knots[i + 1]
        if den > 0.0:
            rows[i] = degree * (ctrl[i + 1] - ctrl[i]) / den
    return rows, tuple(knots[1:-1])
