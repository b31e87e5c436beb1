"""Shared oracles and helpers for the test suite.

The B-spline oracle evaluates the divided-difference characterization with
confluent (repeated-knot) rules pointwise, independently of the piecewise
Cox-de Boor construction used by the package.
"""

from __future__ import annotations

import math


def truncated_power(t: float, e: int) -> float:
    """(t)_+^e with the left-closed convention used throughout."""
    return t**e if t > 0 else 0.0


def dd_bspline(knots: tuple[float, ...], x: float) -> float:
    """Normalized B-spline via confluent divided differences of (t - x)_+^(m-1).

    Only meaningful away from the knots themselves; tests sample interior
    points.
    """
    m = len(knots) - 1
    cache: dict[tuple[int, int], float] = {}

    def dd(i: int, j: int) -> float:
        key = (i, j)
        if key in cache:
            return cache[key]
        if knots[j] == knots[i]:
            r = j - i
            val = math.comb(m - 1, r) * truncated_power(knots[i] - x, m - 1 - r)
        else:
            val = (dd(i + 1, j) - dd(i, j - 1)) / (knots[j] - knots[i])
        cache[key] = val
        return val

    return (knots[-1] - knots[0]) * dd(0, m)


def triangle(p: int) -> int:
    """Number of degree pairs (p1, p2) with p1 + p2 <= p."""
    return (p + 1) * (p + 2) // 2
