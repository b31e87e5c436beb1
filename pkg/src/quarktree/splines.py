"""Cardinal B-splines, quarks and boundary-adapted splines on the unit interval.

The cardinal B-spline of order m lives on [0, m]; its symmetrized version is
centered via the shift x -> x + floor(m/2).  Quarks multiply the symmetrized
spline by a normalized monomial.  On the interval, splines come from the knot
sequence that clamps m-fold knots at 0 and 1, producing 2^j + m - 1 basis
functions per level j, indexed by k = -m+1, ..., 2^j - 1.

All functions are built as exact piecewise polynomials through one shared
routine, a piecewise Cox-de Boor recursion over the knot multiset in which
terms with a vanishing denominator are dropped (the standard limit rule for
repeated knots).
"""

from __future__ import annotations

import math
from typing import Sequence

from .exceptions import IndexRangeError
from .piecewise import PiecewisePoly, Piece, _poly_add, _poly_mul, gauss_legendre_moment

__all__ = [
    "bspline_from_knots",
    "cardinal_bspline",
    "symmetric_generator",
    "cardinal_quark",
    "generator_range",
    "interval_knot",
    "interval_knots",
    "interval_bspline",
    "scaled_bspline",
    "interval_quark",
    "moment",
]


def bspline_from_knots(knots: Sequence[float]) -> PiecewisePoly:
    """Normalized B-spline over an arbitrary non-decreasing knot multiset.

    For m+1 knots the result has order m (degree m-1).  The family built from
    a full knot sequence forms a partition of unity; single B-splines are
    nonnegative with support [knots[0], knots[-1]).
    """
    t = [float(v) for v in knots]
    order = len(t) - 1
    if order < 1:
        raise ValueError("need at least two knots")
    if any(a > b for a, b in zip(t, t[1:])):
        raise ValueError("knots must be non-decreasing")
    pieces = []
    for i0 in range(order):
        a, b = t[i0], t[i0 + 1]
        if not a < b:
            continue
        # order-1 splines restricted to [a, b), as local polynomials or None
        polys: list[tuple[float, ...] | None] = [
            (1.0,) if t[i] <= a and b <= t[i + 1] else None for i in range(order)
        ]
        for r in range(2, order + 1):
            nxt: list[tuple[float, ...] | None] = []
            for i in range(order + 1 - r):
                acc: tuple[float, ...] | None = None
                left = polys[i]
                if left is not None:
                    den = t[i + r - 1] - t[i]
                    if den > 0:
                        ramp = ((a - t[i]) / den, 1.0 / den)
                        acc = _poly_mul(left, ramp)
                right = polys[i + 1]
                if right is not None:
                    den = t[i + r] - t[i + 1]
                    if den > 0:
                        ramp = ((t[i + r] - a) / den, -1.0 / den)
                        term = _poly_mul(right, ramp)
                        acc = term if acc is None else _poly_add(acc, term)
                nxt.append(acc)
            polys = nxt
        if polys[0] is not None:
            pieces.append(Piece(a, b, polys[0]))
    return PiecewisePoly(pieces)


def cardinal_bspline(m: int) -> PiecewisePoly:
    """Cardinal B-spline of order m on the knots 0, 1, ..., m."""
    if m < 1:
        raise ValueError("order must be at least 1")
    return bspline_from_knots(range(m + 1))


def symmetric_generator(m: int) -> PiecewisePoly:
    """The centered spline x -> N_m(x + floor(m/2)), supported on
    [-floor(m/2), ceil(m/2)]."""
    return cardinal_bspline(m).shift(-(m // 2))


def cardinal_quark(m: int, p: int) -> PiecewisePoly:
    """Quark of order m and degree p: (x / ceil(m/2))**p times the centered
    spline."""
    if p < 0:
        raise ValueError("degree must be nonnegative")
    base = symmetric_generator(m)
    if p == 0:
        return base
    scale = (1.0 / math.ceil(m / 2)) ** p
    return base.mul_monomial(p) * scale


# --------------------------------------------------------------- unit interval


def generator_range(m: int, j: int) -> range:
    """Translation indices of the level-j interval splines:
    -m+1, ..., 2^j - 1."""
    return range(-m + 1, 2**j)


def interval_knot(m: int, j: int, i: int) -> float:
    """Level-j clamped knot: m-fold 0 for i <= 0, dyadic grid inside, m-fold 1
    for i >= 2^j."""
    if i <= 0:
        return 0.0
    if i >= 2**j:
        return 1.0
    return i * 2.0**-j


def interval_knots(m: int, j: int, k: int) -> tuple[float, ...]:
    """The m+1 knots of the k-th level-j interval spline."""
    return tuple(interval_knot(m, j, i) for i in range(k, k + m + 1))


def interval_bspline(m: int, j: int, k: int) -> PiecewisePoly:
    """Boundary-adapted B-spline on [0, 1] for k in the level-j range."""
    if m < 1 or j < 0:
        raise ValueError("need order >= 1 and level >= 0")
    if k not in generator_range(m, j):
        raise IndexRangeError(
            f"translation {k} outside level-{j} range "
            f"[{-m + 1}, {2**j - 1}] for order {m}"
        )
    return bspline_from_knots(interval_knots(m, j, k))


def scaled_bspline(m: int, j: int, k: int) -> PiecewisePoly:
    """L2-normalized interval spline 2^(j/2) * B(m, j, k)."""
    return interval_bspline(m, j, k) * 2.0 ** (j / 2)


def interval_quark(m: int, p: int, j: int, k: int) -> PiecewisePoly:
    """Interval quark of degree p.

    Interior translations (0 <= k <= 2^j - m) are rescaled copies of the
    cardinal quark.  Near the left boundary the monomial factor
    (2^j x / (k + m))**p equals 1 at the right end of the first knot interval;
    right-boundary quarks are mirror images of left-boundary ones.
    """
    if p < 0:
        raise ValueError("degree must be nonnegative")
    if k not in generator_range(m, j):
        raise IndexRangeError(
            f"translation {k} outside level-{j} range "
            f"[{-m + 1}, {2**j - 1}] for order {m}"
        )
    if 0 <= k <= 2**j - m:
        return cardinal_quark(m, p).affine_arg(2.0**j, -(k + m // 2)) * 2.0 ** (j / 2)
    if k < 0:
        base = scaled_bspline(m, j, k)
        if p == 0:
            return base
        factor = (2.0**j / (k + m)) ** p
        return base.mul_monomial(p) * factor
    return interval_quark(m, p, j, 2**j - m - k).reflect(0.5)


def moment(f: PiecewisePoly, q: int = 0, order: int | None = None) -> float:
    """Integral of x**q * f(x), by Gauss-Legendre rules of exact order."""
    if q < 0:
        raise ValueError("moment exponent must be nonnegative")
    return gauss_legendre_moment(f, q, order)
