"""Tests for the integer-order Bessel functions and the Bessel kernel.

Oracle: scipy.special.jv / jvp, an independent implementation of the same
special functions, plus the exact double-contour representation of the
kernel, which must agree with the series route wherever both are valid.
"""

import numpy as np
import pytest
import scipy.special

from corrwishart.kernels import (
    bessel_j,
    bessel_j_prime,
    bessel_kernel,
    bessel_kernel_contour,
)


class TestBesselJ:
    @pytest.mark.parametrize("alpha", range(-4, 7))
    def test_matches_scipy(self, alpha):
        x = np.linspace(0.0, 12.0, 41)
        ours = bessel_j(alpha, x)
        ref = scipy.special.jv(alpha, x)
        assert np.abs(ours - ref).max() < 5e-13

    @pytest.mark.parametrize("alpha", range(-3, 5))
    def test_prime_matches_scipy(self, alpha):
        x = np.linspace(0.0, 10.0, 31)
        ours = bessel_j_prime(alpha, x)
        ref = scipy.special.jvp(alpha, x)
        assert np.abs(ours - ref).max() < 5e-13

    def test_negative_order_reflection(self):
        x = np.linspace(0.0, 9.0, 19)
        for alpha in (1, 2, 3):
            np.testing.assert_array_equal(
                bessel_j(-alpha, x), (-1.0) ** alpha * bessel_j(alpha, x)
            )

    def test_scalar_in_scalar_out(self):
        val = bessel_j(0, 1.5)
        assert isinstance(val, float)
        assert val == pytest.approx(scipy.special.jv(0, 1.5), abs=1e-14)

    def test_rejects_large_argument(self):
        with pytest.raises(ValueError):
            bessel_j(0, 101.0)

    def test_rejects_fractional_order(self):
        with pytest.raises(ValueError):
            bessel_j(0.5, 1.0)


class TestBesselKernel:
    def _oracle(self, alpha, x, y):
        """Kernel from scipy Bessel functions (off-diagonal formula)."""
        sx, sy = np.sqrt(x), np.sqrt(y)
        ja, jb = scipy.special.jv(alpha, sx), scipy.special.jv(alpha, sy)
        da, db = scipy.special.jvp(alpha, sx), scipy.special.jvp(alpha, sy)
        return (ja * sy * db - sx * da * jb) / (2.0 * (x - y))

    @pytest.mark.parametrize("alpha", [-2, 0, 1, 2, 3])
    def test_offdiagonal_matches_oracle(self, alpha):
        pts = [(0.3, 1.7), (2.0, 5.5), (7.0, 0.4), (10.0, 3.3)]
        for x, y in pts:
            assert bessel_kernel(alpha, x, y) == pytest.approx(
                self._oracle(alpha, x, y), abs=1e-13
            )

    def test_symmetric(self):
        for alpha in (0, 1, 2):
            for x, y in [(0.5, 2.5), (1.0, 1.0 + 1e-9), (4.0, 9.0)]:
                assert bessel_kernel(alpha, x, y) == pytest.approx(
                    bessel_kernel(alpha, y, x), rel=1e-12, abs=1e-15
                )

    def test_order_sign_invariant(self):
        for alpha in (1, 2, 3):
            for x, y in [(0.5, 2.5), (3.0, 3.0), (1.2, 0.1)]:
                assert bessel_kernel(alpha, x, y) == pytest.approx(
                    bessel_kernel(-alpha, x, y), rel=1e-13, abs=1e-16
                )

    def test_diagonal_from_scipy(self):
        # closed-form diagonal [J'^2 + (1 - a^2/x) J^2] / 4 at sqrt(x)
        for alpha in (0, 1, 2):
            for x in (0.7, 2.0, 6.0):
                sx = np.sqrt(x)
                j, d = scipy.special.jv(alpha, sx), scipy.special.jvp(alpha, sx)
                ref = (d * d + (1.0 - alpha**2 / x) * j * j) / 4.0
                assert bessel_kernel(alpha, x, x) == pytest.approx(ref, abs=1e-13)

    def test_diagonal_at_origin(self):
        assert bessel_kernel(0, 0.0, 0.0) == 0.25
        assert bessel_kernel(1, 0.0, 0.0) == 0.0
        assert bessel_kernel(2, 0.0, 0.0) == 0.0

    def test_continuous_across_diagonal(self):
        for alpha in (0, 2):
            base = bessel_kernel(alpha, 2.0, 2.0)
            for eps in (1e-5, 1e-6, 1e-8, 1e-12):
                near = bessel_kernel(alpha, 2.0, 2.0 + eps)
                assert abs(near - base) < 1.0 * eps + 1e-14

    def test_rejects_negative_argument(self):
        with pytest.raises(ValueError):
            bessel_kernel(0, -0.5, 1.0)


class TestBesselKernelContour:
    @pytest.mark.parametrize("alpha", [0, 1, 2, -1])
    def test_matches_series(self, alpha):
        for x, y in [(0.5, 1.5), (2.0, 4.0), (3.7, 0.9), (5.0, 5.5)]:
            assert bessel_kernel_contour(alpha, x, y) == pytest.approx(
                bessel_kernel(alpha, x, y), abs=1e-10
            )

    def test_radius_independent(self):
        vals = [
            bessel_kernel_contour(1, 2.0, 3.0, r=r, R=R)
            for r, R in [(1.0, 2.0), (0.7, 1.6), (1.4, 3.0)]
        ]
        assert max(vals) - min(vals) < 1e-11
