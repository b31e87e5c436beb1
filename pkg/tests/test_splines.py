"""Tests for cardinal and boundary-adapted splines and quarks."""

from __future__ import annotations

import math
from fractions import Fraction as Fr

import numpy as np
import numpy.testing as nptest
import pytest

from quarktree import splines as S
from quarktree.exceptions import IndexRangeError
from quarktree.piecewise import indicator

from .util import dd_bspline

RTOL = 1e-12

# Values computed symbolically from the convolution definition of the
# cardinal B-spline.
CARDINAL_TABLE = {
    2: {
        Fr(1, 4): Fr(1, 4), Fr(1, 2): Fr(1, 2), Fr(3, 4): Fr(3, 4),
        Fr(1): Fr(1), Fr(5, 4): Fr(3, 4), Fr(3, 2): Fr(1, 2),
        Fr(7, 4): Fr(1, 4), Fr(2): Fr(0),
    },
    3: {
        Fr(1, 4): Fr(1, 32), Fr(1, 2): Fr(1, 8), Fr(3, 4): Fr(9, 32),
        Fr(1): Fr(1, 2), Fr(5, 4): Fr(11, 16), Fr(3, 2): Fr(3, 4),
        Fr(2): Fr(1, 2), Fr(11, 4): Fr(1, 32),
    },
    4: {
        Fr(1, 4): Fr(1, 384), Fr(1, 2): Fr(1, 48), Fr(1): Fr(1, 6),
        Fr(3, 2): Fr(23, 48), Fr(7, 4): Fr(235, 384), Fr(2): Fr(2, 3),
        Fr(15, 4): Fr(1, 384),
    },
}

# Boundary-adapted spline values, from the divided-difference definition
# evaluated symbolically.
INTERVAL_TABLE = {
    (3, 2, -2): {Fr(1, 16): Fr(9, 16), Fr(1, 8): Fr(1, 4), Fr(5, 16): Fr(0)},
    (3, 2, -1): {Fr(1, 16): Fr(13, 32), Fr(1, 8): Fr(5, 8), Fr(5, 16): Fr(9, 32)},
    (3, 2, 0): {
        Fr(1, 16): Fr(1, 32), Fr(1, 8): Fr(1, 8),
        Fr(5, 16): Fr(11, 16), Fr(1, 2): Fr(1, 2),
    },
    (3, 2, 3): {Fr(13, 16): Fr(1, 16)},
    (2, 3, -1): {Fr(1, 16): Fr(1, 2)},
    (2, 3, 5): {Fr(13, 16): Fr(1, 2)},
}


class TestCardinalBspline:
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_frozen_values(self, m):
        N = S.cardinal_bspline(m)
        for x, expected in CARDINAL_TABLE[m].items():
            nptest.assert_allclose(N(float(x)), float(expected), rtol=RTOL, atol=1e-15)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_support_and_mass(self, m):
        N = S.cardinal_bspline(m)
        assert N.support() == (0.0, float(m))
        nptest.assert_allclose(N.integral(), 1.0, rtol=RTOL)

    def test_left_closed_convention(self):
        N1 = S.cardinal_bspline(1)
        assert N1(0.0) == 1.0
        assert N1(1.0) == 0.0

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_vanishes_at_support_ends(self, m):
        N = S.cardinal_bspline(m)
        assert N(0.0) == 0.0
        assert abs(N(float(m) - 1e-9)) < 1e-6

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_convolution_recursion(self, m):
        # N_m(x) = integral of N_{m-1} over [x-1, x]; together with
        # N_1 = indicator this characterizes the spline uniquely.
        prev = S.cardinal_bspline(m - 1)
        cur = S.cardinal_bspline(m)
        for x in np.linspace(-0.5, m + 0.5, 37):
            nptest.assert_allclose(
                cur(float(x)),
                prev.restrict(float(x) - 1.0, float(x)).integral(),
                rtol=RTOL,
                atol=1e-14,
            )

    def test_order_one_is_indicator(self):
        N1 = S.cardinal_bspline(1)
        box = indicator(0.0, 1.0)
        for x in np.linspace(-0.5, 1.5, 21):
            assert N1(float(x)) == box(float(x))

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_translates_partition_unity(self, m):
        N = S.cardinal_bspline(m)
        xs = np.linspace(0.0, 1.0, 33, endpoint=False)
        total = sum(N(xs + k) for k in range(m))
        nptest.assert_allclose(total, 1.0, rtol=RTOL)


class TestSymmetricGenerator:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_is_shifted_cardinal(self, m):
        g = S.symmetric_generator(m)
        N = S.cardinal_bspline(m)
        assert g.support() == (-float(m // 2), float(math.ceil(m / 2)))
        for x in np.linspace(-3.0, 3.0, 25):
            nptest.assert_allclose(g(float(x)), N(float(x) + m // 2), rtol=RTOL,
                                   atol=1e-15)


class TestCardinalQuark:
    @pytest.mark.parametrize("m", [2, 3])
    def test_degree_zero_is_generator(self, m):
        q = S.cardinal_quark(m, 0)
        g = S.symmetric_generator(m)
        for x in np.linspace(-2.5, 2.5, 21):
            assert q(float(x)) == g(float(x))

    def test_monomial_factor(self):
        q = S.cardinal_quark(3, 2)
        g = S.symmetric_generator(3)
        for x in (-0.75, -0.25, 0.5, 1.25):
            nptest.assert_allclose(q(x), (x / 2.0) ** 2 * g(x), rtol=RTOL)

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            S.cardinal_quark(2, -1)


class TestIntervalBspline:
    @pytest.mark.parametrize("key", sorted(INTERVAL_TABLE))
    def test_frozen_values(self, key):
        m, j, k = key
        B = S.interval_bspline(m, j, k)
        for x, expected in INTERVAL_TABLE[key].items():
            nptest.assert_allclose(B(float(x)), float(expected), rtol=RTOL, atol=1e-15)

    def test_leftmost_interpolates_origin(self):
        assert S.interval_bspline(2, 2, -1)(0.0) == 1.0
        assert S.interval_bspline(3, 3, -2)(0.0) == 1.0

    @pytest.mark.parametrize("m,j", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_partition_of_unity(self, m, j):
        xs = np.linspace(0.0, 1.0, 65, endpoint=False)
        total = sum(S.interval_bspline(m, j, k)(xs) for k in S.generator_range(m, j))
        nptest.assert_allclose(total, 1.0, rtol=RTOL)

    @pytest.mark.parametrize("m,j", [(2, 3), (3, 3)])
    def test_interior_is_rescaled_cardinal(self, m, j):
        N = S.cardinal_bspline(m)
        for k in range(0, 2**j - m + 1):
            B = S.interval_bspline(m, j, k)
            for x in np.linspace(0.0, 1.0, 19, endpoint=False):
                nptest.assert_allclose(
                    B(float(x)), N(2**j * float(x) - k), rtol=RTOL, atol=1e-15
                )

    @pytest.mark.parametrize("m,j", [(2, 2), (3, 2), (3, 3), (4, 3)])
    def test_against_divided_difference_oracle(self, m, j):
        rng = np.random.default_rng(seed=1234 + 10 * m + j)
        for k in S.generator_range(m, j):
            B = S.interval_bspline(m, j, k)
            knots = S.interval_knots(m, j, k)
            for x in rng.uniform(1e-4, 1.0 - 1e-4, size=8):
                if any(abs(x - t) < 1e-9 for t in knots):
                    continue
                nptest.assert_allclose(
                    B(float(x)), dd_bspline(knots, float(x)), rtol=1e-9, atol=1e-12
                )

    @pytest.mark.parametrize("m,j", [(2, 3), (3, 3)])
    def test_reflection_symmetry(self, m, j):
        for k in range(2**j - m + 1, 2**j):
            right = S.interval_bspline(m, j, k)
            left = S.interval_bspline(m, j, 2**j - m - k)
            for x in np.linspace(0.0, 1.0, 33, endpoint=False):
                nptest.assert_allclose(
                    right(float(x)), left(1.0 - float(x)), rtol=RTOL, atol=1e-15
                )

    def test_out_of_range_translation_rejected(self):
        with pytest.raises(IndexRangeError):
            S.interval_bspline(2, 2, 4)
        with pytest.raises(IndexRangeError):
            S.interval_bspline(2, 2, -2)

    def test_scaled_bspline_factor(self):
        B = S.interval_bspline(2, 3, 1)
        Bs = S.scaled_bspline(2, 3, 1)
        nptest.assert_allclose(Bs(0.25), 2.0**1.5 * B(0.25), rtol=RTOL)


class TestIntervalQuark:
    def test_interior_example_value(self):
        # degree-2 quark at m=2, j=3, k=3 evaluated at 7/16: the monomial
        # factor is (8 * 7/16 - 4)^2 = 1/4 and the hat value is 1/2
        val = S.interval_quark(2, 2, 3, 3)(7.0 / 16.0)
        nptest.assert_allclose(val, 0.25 * 2.0**1.5 * 0.5, rtol=RTOL)

    def test_left_boundary_value(self):
        # factor (4x)^1, scaling 2, spline value 9/16 at x = 1/16
        val = S.interval_quark(3, 1, 2, -2)(1.0 / 16.0)
        nptest.assert_allclose(val, 0.25 * 2.0 * 9.0 / 16.0, rtol=RTOL)

    @pytest.mark.parametrize("m,j", [(2, 3), (3, 3)])
    def test_degree_zero_is_scaled_spline(self, m, j):
        for k in S.generator_range(m, j):
            q = S.interval_quark(m, 0, j, k)
            B = S.scaled_bspline(m, j, k)
            for x in np.linspace(0.0, 1.0, 17, endpoint=False):
                nptest.assert_allclose(q(float(x)), B(float(x)), rtol=RTOL, atol=1e-15)

    @pytest.mark.parametrize("m,j,p", [(2, 3, 1), (2, 3, 2), (3, 3, 1)])
    def test_right_is_reflected_left(self, m, j, p):
        for k in range(2**j - m + 1, 2**j):
            right = S.interval_quark(m, p, j, k)
            left = S.interval_quark(m, p, j, 2**j - m - k)
            for x in np.linspace(0.0, 1.0, 33, endpoint=False):
                nptest.assert_allclose(
                    right(float(x)), left(1.0 - float(x)), rtol=RTOL, atol=1e-15
                )

    def test_odd_interior_quark_has_zero_mean(self):
        q = S.interval_quark(2, 1, 3, 3)
        assert abs(S.moment(q, 0)) < 1e-14

    def test_known_first_moment(self):
        q = S.interval_quark(2, 2, 3, 3)
        nptest.assert_allclose(S.moment(q, 1), math.sqrt(2.0) / 48.0, rtol=1e-12)

    @pytest.mark.parametrize("m,p,j,k,q", [
        (2, 1, 3, 3, 0), (2, 2, 3, 3, 1), (3, 2, 3, -1, 2),
        (3, 1, 3, 7, 0), (2, 3, 3, 0, 3),
    ])
    def test_moment_routes_agree(self, m, p, j, k, q):
        f = S.interval_quark(m, p, j, k)
        nptest.assert_allclose(S.moment(f, q), f.moment_exact(q), rtol=1e-11,
                               atol=1e-14)
