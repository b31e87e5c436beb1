"""Univariate quarklets on the interval and their bivariate tensor products.

A quarklet of degree p is a finite combination of degree-p quarks on the next
finer level.  Inner quarklets reuse the filter taps of the biorthogonal
spline wavelet with m~ dual vanishing moments; boundary quarklets solve a
small moment system so that all m~ vanishing moments survive at the ends of
the interval.  Degree 0 recovers the classical spline wavelet frame.

Level conventions: translations on level j >= j0 run through 0, ..., 2^j - 1;
the coarsest slot j = j0 - 1 holds the level-j0 quarks themselves with
translations -m+1, ..., 2^j0 - 1.  Tensor functions with a level below
j0 - 1 in either direction are identically zero.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .exceptions import (
    AmbiguousBoundarySystemError,
    IndexRangeError,
    InvalidDeltaError,
    LevelTooCoarseError,
    UnsupportedOrderError,
)
from .piecewise import PiecewisePoly
from .splines import cardinal_quark, generator_range, interval_quark, moment

__all__ = [
    "PRIMAL_MASKS",
    "WAVELET_TAPS",
    "supported_orders",
    "wavelet_taps",
    "min_level",
    "wavelet_range",
    "line_quark",
    "line_quarklet",
    "inner_quarklet",
    "left_boundary_quarklet",
    "right_boundary_quarklet",
    "quarklet",
    "uni_function",
    "tensor_value",
    "weight",
]

# Two-scale masks of the centered B-spline generators.
PRIMAL_MASKS: dict[int, dict[int, float]] = {
    2: {-1: 0.5, 0: 1.0, 1: 0.5},
    3: {-1: 0.25, 0: 0.75, 1: 0.75, 2: 0.25},
}

# Wavelet filter taps b_k for psi(x) = sum_k b_k * phi(2x - k), phi the
# centered generator.  Derived from the biorthogonal spline filter banks with
# the dual mask normalized to sum 2; frozen here and enforced by the
# vanishing-moment tests.
WAVELET_TAPS: dict[tuple[int, int], dict[int, float]] = {
    (2, 2): {-1: 0.25, 0: 0.5, 1: -1.5, 2: 0.5, 3: 0.25},
    (3, 3): {
        -3: -3 / 32, -2: -9 / 32, -1: 7 / 32, 0: 45 / 32,
        1: -45 / 32, 2: -7 / 32, 3: 9 / 32, 4: 3 / 32,
    },
}

_SIGN_TOL = 1e-9


def supported_orders() -> tuple[tuple[int, int], ...]:
    return tuple(sorted(WAVELET_TAPS))


def wavelet_taps(m: int, mt: int) -> dict[int, float]:
    """Filter taps for the order pair (m, m~), validating its constraints."""
    if m < 2 or mt < m or (m + mt) % 2 != 0:
        raise UnsupportedOrderError(
            f"order pair ({m}, {mt}) violates m >= 2, m~ >= m, m + m~ even"
        )
    try:
        return WAVELET_TAPS[(m, mt)]
    except KeyError:
        raise UnsupportedOrderError(
            f"no filter bank shipped for order pair ({m}, {mt}); "
            f"available: {supported_orders()}"
        ) from None


def min_level(m: int, mt: int) -> int:
    """Smallest safe minimal level: 2^j0 >= 2 (m + m~) keeps the boundary
    constructions on the two ends of the interval disjoint."""
    j0 = 0
    while 2**j0 < 2 * (m + mt):
        j0 += 1
    return j0


def wavelet_range(j: int) -> range:
    """Translation indices on a wavelet level: 0, ..., 2^j - 1."""
    return range(0, 2**j)


def line_quark(m: int, p: int) -> PiecewisePoly:
    """Real-line quark of degree p (alias of the cardinal quark)."""
    return cardinal_quark(m, p)


@lru_cache(maxsize=None)
def line_quarklet(m: int, mt: int, p: int) -> PiecewisePoly:
    """Real-line quarklet psi_p(x) = sum_k b_k * quark_p(2x - k)."""
    taps = wavelet_taps(m, mt)
    quark = cardinal_quark(m, p)
    out = PiecewisePoly.zero()
    for t, b in sorted(taps.items()):
        out = out + quark.affine_arg(2.0, -float(t)) * b
    return out


@lru_cache(maxsize=None)
def inner_quarklet(m: int, mt: int, p: int, j: int, k: int) -> PiecewisePoly:
    """Interval quarklet away from the boundary, via the two-scale filter."""
    taps = wavelet_taps(m, mt)
    if not m - 1 <= k <= 2**j - m:
        raise IndexRangeError(
            f"translation {k} outside the inner range [{m - 1}, {2**j - m}] "
            f"on level {j}"
        )
    out = PiecewisePoly.zero()
    half = 1.0 / math.sqrt(2.0)
    for t, b in sorted(taps.items()):
        l = 2 * k - m // 2 + t
        if l not in generator_range(m, j + 1):
            raise IndexRangeError(
                f"filter reaches quark translation {l} outside level {j + 1}"
            )
        out = out + interval_quark(m, p, j + 1, l) * (half * b)
    return out


@lru_cache(maxsize=None)
def _boundary_vector(
    m: int, mt: int, p: int, j: int, k: int
) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Quark translations and coefficients of the k-th left boundary quarklet.

    The coefficients span the nullspace of the m~ x (m~ + 1) moment matrix of
    the m~ + 1 leftmost-but-k quarks on level j + 1; the solution is unique up
    to scale, normalized to unit length with positive leading entry.
    """
    wavelet_taps(m, mt)
    translations = tuple(-m + 1 + k + i for i in range(mt + 1))
    rows = []
    for q in range(mt):
        rows.append(
            [moment(interval_quark(m, p, j + 1, l), q) for l in translations]
        )
    matrix = np.array(rows, dtype=float)
    _, singular, vh = np.linalg.svd(matrix)
    rank = int(np.sum(singular > 1e-12 * max(singular[0], 1.0)))
    if rank < mt:
        raise AmbiguousBoundarySystemError(
            f"moment system for (m={m}, m~={mt}, p={p}, j={j}, k={k}) has a "
            f"nullspace of dimension {mt + 1 - rank}"
        )
    vec = vh[-1]
    for entry in vec:
        if abs(entry) > _SIGN_TOL:
            if entry < 0:
                vec = -vec
            break
    return translations, tuple(float(c) for c in vec)


def left_boundary_quarklet(m: int, mt: int, p: int, j: int, k: int) -> PiecewisePoly:
    if not 0 <= k <= m - 2:
        raise IndexRangeError(f"left boundary translation {k} not in [0, {m - 2}]")
    translations, coeffs = _boundary_vector(m, mt, p, j, k)
    out = PiecewisePoly.zero()
    for l, c in zip(translations, coeffs):
        out = out + interval_quark(m, p, j + 1, l) * c
    return out


def right_boundary_quarklet(m: int, mt: int, p: int, j: int, k: int) -> PiecewisePoly:
    if not 2**j - m + 1 <= k <= 2**j - 1:
        raise IndexRangeError(
            f"right boundary translation {k} not in [{2**j - m + 1}, {2**j - 1}]"
        )
    return left_boundary_quarklet(m, mt, p, j, 2**j - 1 - k).reflect(0.5)


@lru_cache(maxsize=None)
def quarklet(m: int, mt: int, p: int, j: int, k: int) -> PiecewisePoly:
    """The k-th level-j quarklet of degree p, 0 <= k <= 2^j - 1."""
    if k not in wavelet_range(j):
        raise IndexRangeError(f"translation {k} outside [0, {2**j - 1}] on level {j}")
    if k <= m - 2:
        return left_boundary_quarklet(m, mt, p, j, k)
    if k >= 2**j - m + 1:
        return right_boundary_quarklet(m, mt, p, j, k)
    return inner_quarklet(m, mt, p, j, k)


def uni_function(m: int, mt: int, j0: int, p: int, j: int, k: int) -> PiecewisePoly:
    """Univariate frame member at (p, j, k); level j0 - 1 holds the quarks.

    Levels below j0 - 1 are identically zero by convention.  Evaluation
    requires j0 at or above the safe floor so that the boundary constructions
    do not interfere.
    """
    if j0 < min_level(m, mt):
        raise LevelTooCoarseError(
            f"minimal level {j0} below the safe floor {min_level(m, mt)} "
            f"for orders ({m}, {mt})"
        )
    if j < j0 - 1:
        return PiecewisePoly.zero()
    if j == j0 - 1:
        return interval_quark(m, p, j0, k)
    return quarklet(m, mt, p, j, k)


def tensor_value(
    m: int,
    mt: int,
    j0: int,
    p1: int,
    j1: int,
    k1: int,
    p2: int,
    j2: int,
    k2: int,
    x1,
    x2,
):
    """Evaluate the tensor quarklet at (x1, x2); scalars or arrays."""
    f1 = uni_function(m, mt, j0, p1, j1, k1)
    f2 = uni_function(m, mt, j0, p2, j2, k2)
    return f1(x1) * f2(x2)


def weight(p1: int, p2: int, delta: float) -> float:
    """Frame weight (p1 + 1)^(delta/2) * (p2 + 1)^(delta/2), delta > 1."""
    if not delta > 1.0:
        raise InvalidDeltaError(f"weight exponent must exceed 1, got {delta}")
    return float(((p1 + 1) * (p2 + 1)) ** (delta / 2.0))
