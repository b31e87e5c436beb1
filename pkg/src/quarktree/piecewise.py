"""Exact piecewise polynomial arithmetic on half-open intervals.

Every function handled by this package (B-splines, quarks, quarklets and their
products) is a polynomial on finitely many half-open pieces [lo, hi).  A piece
stores its polynomial in the local coordinate u = x - lo with coefficients in
ascending order.  Local coordinates keep coefficient magnitudes balanced at
fine dyadic scales, where global monomial coefficients would lose many digits.

Conventions:
    * functions are right-continuous: the value at a breakpoint comes from the
      piece starting there, and the value at or beyond the last breakpoint is 0;
    * all interval endpoints produced by the callers are dyadic rationals, so
      breakpoint comparisons are exact float comparisons;
    * addition, multiplication, affine substitution, antiderivatives and
      integrals are all closed-form and exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Piece",
    "PiecewisePoly",
    "gauss_legendre_moment",
    "indicator",
    "poly_shift",
]


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    """Drop trailing zero coefficients, keeping at least the constant term."""
    last = 0
    for i, c in enumerate(coeffs):
        if c != 0.0:
            last = i
    return tuple(float(c) for c in coeffs[: last + 1])


def _poly_add(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    n = max(len(a), len(b))
    out = [0.0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _poly_mul(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0.0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def poly_shift(coeffs: Sequence[float], delta: float) -> tuple[float, ...]:
    """Coefficients of p(u + delta) given those of p(u) (Horner Taylor shift)."""
    if delta == 0.0:
        return _trim(coeffs)
    n = len(coeffs)
    out = [0.0] * n
    for c in reversed(coeffs):
        # out(u) <- out(u) * (u + delta) + c, updated in place from high degree down
        for k in range(n - 1, 0, -1):
            out[k] = out[k - 1] + out[k] * delta
        out[0] = out[0] * delta + c
    return _trim(out)


def _poly_eval(coeffs: Sequence[float], u: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def _poly_eval_array(coeffs: Sequence[float], u: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(u, dtype=float)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


@dataclass(frozen=True)
class Piece:
    """One half-open interval [lo, hi) with polynomial coefficients in u = x - lo."""

    lo: float
    hi: float
    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"empty piece [{self.lo}, {self.hi})")


class PiecewisePoly:
    """A finite list of disjoint pieces, zero everywhere else."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[Piece]):
        ordered = sorted(pieces, key=lambda p: p.lo)
        for a, b in zip(ordered, ordered[1:]):
            if a.hi > b.lo:
                raise ValueError(f"overlapping pieces at {b.lo}")
        self.pieces: tuple[Piece, ...] = tuple(
            p for p in ordered if any(c != 0.0 for c in p.coeffs)
        )

    # ------------------------------------------------------------------ basics

    @classmethod
    def zero(cls) -> "PiecewisePoly":
        return cls(())

    def is_zero(self) -> bool:
        return not self.pieces

    def support(self) -> tuple[float, float] | None:
        if not self.pieces:
            return None
        return self.pieces[0].lo, self.pieces[-1].hi

    def breakpoints(self) -> tuple[float, ...]:
        pts: list[float] = []
        for p in self.pieces:
            if not pts or pts[-1] != p.lo:
                pts.append(p.lo)
            pts.append(p.hi)
        return tuple(pts)

    def degree(self) -> int:
        if not self.pieces:
            return 0
        return max(len(p.coeffs) - 1 for p in self.pieces)

    def __call__(self, x):
        if np.ndim(x) == 0:
            return self._eval_scalar(float(x))
        xv = np.asarray(x, dtype=float)
        out = np.zeros_like(xv)
        for p in self.pieces:
            mask = (xv >= p.lo) & (xv < p.hi)
            if mask.any():
                out[mask] = _poly_eval_array(p.coeffs, xv[mask] - p.lo)
        return out

    def _eval_scalar(self, x: float) -> float:
        for p in self.pieces:
            if p.lo <= x < p.hi:
                return _poly_eval(p.coeffs, x - p.lo)
        return 0.0

    # -------------------------------------------------------------- arithmetic

    def __neg__(self) -> "PiecewisePoly":
        return PiecewisePoly(
            Piece(p.lo, p.hi, tuple(-c for c in p.coeffs)) for p in self.pieces
        )

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        cuts = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            a = self._coeffs_on(lo, hi)
            b = other._coeffs_on(lo, hi)
            if a is None and b is None:
                continue
            ca = a if a is not None else (0.0,)
            cb = b if b is not None else (0.0,)
            summed = _poly_add(ca, cb)
            pieces.append(Piece(lo, hi, summed))
        return PiecewisePoly(pieces)

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._mul_piecewise(other)
        s = float(other)
        return PiecewisePoly(
            Piece(p.lo, p.hi, tuple(s * c for c in p.coeffs)) for p in self.pieces
        )

    __rmul__ = __mul__

    def _mul_piecewise(self, other: "PiecewisePoly") -> "PiecewisePoly":
        cuts = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            a = self._coeffs_on(lo, hi)
            b = other._coeffs_on(lo, hi)
            if a is None or b is None:
                continue
            pieces.append(Piece(lo, hi, _poly_mul(a, b)))
        return PiecewisePoly(pieces)

    def _coeffs_on(self, lo: float, hi: float) -> tuple[float, ...] | None:
        """Coefficients in u = x - lo on [lo, hi), or None if zero there.

        The window [lo, hi) must not straddle one of this function's own
        breakpoints; callers always pass windows from a refined partition.
        """
        for p in self.pieces:
            if p.lo <= lo and hi <= p.hi:
                return poly_shift(p.coeffs, lo - p.lo)
        return None

    # ------------------------------------------------------------ substitution

    def affine_arg(self, scale: float, offset: float) -> "PiecewisePoly":
        """Return g with g(x) = f(scale * x + offset), scale != 0.

        For scale > 0 the substitution is exact without re-expansion; for
        scale < 0 each piece is re-expanded about its new left endpoint.
        """
        if scale == 0:
            raise ValueError("scale must be nonzero")
        pieces = []
        for p in self.pieces:
            if scale > 0:
                lo = (p.lo - offset) / scale
                hi = (p.hi - offset) / scale
                coeffs = tuple(c * scale**i for i, c in enumerate(p.coeffs))
                pieces.append(Piece(lo, hi, coeffs))
            else:
                lo = (p.hi - offset) / scale
                hi = (p.lo - offset) / scale
                # u_old = scale * v + (p.hi - p.lo) with v = x - lo
                width = p.hi - p.lo
                base = tuple(c * scale**i for i, c in enumerate(p.coeffs))
                coeffs = poly_shift(base, width / scale)
                pieces.append(Piece(lo, hi, coeffs))
        return PiecewisePoly(pieces)

    def shift(self, dx: float) -> "PiecewisePoly":
        """Translate the graph right by dx: g(x) = f(x - dx)."""
        return self.affine_arg(1.0, -dx)

    def reflect(self, center: float) -> "PiecewisePoly":
        """Mirror the graph about x = center: g(x) = f(2 * center - x)."""
        return self.affine_arg(-1.0, 2.0 * center)

    def restrict(self, lo: float, hi: float) -> "PiecewisePoly":
        """Clip to the window [lo, hi), discarding everything outside."""
        pieces = []
        for p in self.pieces:
            a = max(p.lo, lo)
            b = min(p.hi, hi)
            if a < b:
                pieces.append(Piece(a, b, poly_shift(p.coeffs, a - p.lo)))
        return PiecewisePoly(pieces)

    def mul_monomial(self, power: int) -> "PiecewisePoly":
        """Multiply by x**power (the global coordinate, not the local one)."""
        if power < 0:
            raise ValueError("power must be nonnegative")
        if power == 0:
            return self
        pieces = []
        for p in self.pieces:
            # (u + lo)**power expanded in the local coordinate
            mono = [0.0] * (power + 1)
            for i in range(power + 1):
                mono[i] = math.comb(power, i) * p.lo ** (power - i)
            pieces.append(Piece(p.lo, p.hi, _poly_mul(p.coeffs, mono)))
        return PiecewisePoly(pieces)

    # ------------------------------------------------------------- integration

    def integral(self) -> float:
        """Exact integral over the whole real line."""
        total = 0.0
        for p in self.pieces:
            w = p.hi - p.lo
            total += sum(c * w ** (i + 1) / (i + 1) for i, c in enumerate(p.coeffs))
        return total

    def inner(self, other: "PiecewisePoly") -> float:
        """Exact L2 inner product with another piecewise polynomial."""
        return self._mul_piecewise(other).integral()

    def moment_exact(self, q: int) -> float:
        """Exact integral of x**q times this function (antiderivative route)."""
        return self.mul_monomial(q).integral()


def indicator(lo: float, hi: float) -> PiecewisePoly:
    """The characteristic function of [lo, hi)."""
    return PiecewisePoly([Piece(lo, hi, (1.0,))])


def gauss_legendre_moment(
    f: PiecewisePoly, q: int = 0, order: int | None = None
) -> float:
    """Integral of x**q * f(x) by per-piece Gauss-Legendre quadrature.

    The default order is ceil((d + 1) / 2) + 1 with d the degree of the
    integrand on each piece, which integrates the polynomial exactly with one
    order to spare.
    """
    total = 0.0
    for p in f.pieces:
        deg = len(p.coeffs) - 1 + q
        n = order if order is not None else math.ceil((deg + 1) / 2) + 1
        nodes, weights = np.polynomial.legendre.leggauss(n)
        mid = 0.5 * (p.lo + p.hi)
        half = 0.5 * (p.hi - p.lo)
        x = mid + half * nodes
        vals = _poly_eval_array(p.coeffs, x - p.lo) * x**q
        total += half * float(np.dot(weights, vals))
    return total
