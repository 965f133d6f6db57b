"""Cubic Hermite segments and Catmull-Rom default tangents."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DegeneracyError


def default_hermite_tangents(points: Sequence, periodic: bool) -> list:
    """Catmull-Rom tangents ``(p[i+1] - p[i-1]) / 2``.

    Open splines use one-sided differences at both ends; periodic splines wrap
    the indices. Works for any point type supporting ``+``, ``-`` and scalar ``*``.
    """
    n = len(points)
    if n < 2:
        raise DegeneracyError(f"need at least 2 points for tangents, got {n}")
    out = []
    for i in range(n):
        if periodic:
            out.append((points[(i + 1) % n] - points[i - 1]) * 0.5)
        elif i == 0:
            out.append(points[1] - points[0])
        elif i == n - 1:
            out.append(points[-1] - points[-2])
        else:
            out.append((points[i + 1] - points[i - 1]) * 0.5)
    return out


def hermite_basis(u):
    """Values of (h00, h10, h01, h11) at ``u`` (scalar or array)."""
    u2 = u * u
    u3 = u2 * u
    return (2 * u3 - 3 * u2 + 1, u3 - 2 * u2 + u, -2 * u3 + 3 * u2, u3 - u2)


def hermite_basis_derivative(u):
    u2 = u * u
    return (6 * u2 - 6 * u, 3 * u2 - 4 * u + 1, -6 * u2 + 6 * u, 3 * u2 - 2 * u)


def hermite_segment(p0: np.ndarray, m0: np.ndarray, p1: np.ndarray, m1: np.ndarray, u):
    h00, h10, h01, h11 = hermite_basis(u)
    if np.ndim(u):
        h00, h10, h01, h11 = (h[:, None] for h in (h00, h10, h01, h11))
    return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1
