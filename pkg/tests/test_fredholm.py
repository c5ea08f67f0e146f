"""Tests for Fredholm determinants and gap probabilities.

Oracles: finite-rank kernels whose determinants are closed-form linear
algebra, the exact law det(I - K_Be^(0) on (0,s)) = exp(-s/4) at order
zero, and agreement between two independently derived first-order
routes (corrected-kernel determinant vs. resolvent identity).
"""

import math

import numpy as np
import pytest

from corrwishart import NonConvergenceError
from corrwishart.fredholm import (
    F_alpha,
    GapResult,
    fredholm_det,
    hard_edge_prediction,
    pearcey_gap,
    s_dF_ds,
)
from corrwishart.kernels import (
    HardEdgeKernelSpec,
    PearceyParams,
    hard_edge_expansion_kernel,
)


class TestFredholmDet:
    def test_rank_one_constant(self):
        res = fredholm_det(lambda x, y: 1.0, (0.0, 0.5))
        assert abs(res.value - 0.5) < 1e-12

    def test_rank_one_separable(self):
        res = fredholm_det(lambda x, y: x * y, (0.0, 1.0))
        assert abs(res.value - 2.0 / 3.0) < 1e-12

    def test_rank_two_oracle(self):
        # K(x,y) = x + y on (0,1): det(I - K) = det([[1/2, -1], [-1/3, 1/2]])
        res = fredholm_det(lambda x, y: x + y, (0.0, 1.0))
        assert abs(res.value - (-1.0 / 12.0)) < 1e-12

    def test_negative_determinant_sign(self):
        # K = 2 sin(x) sin(y) on (0, pi) has the single eigenvalue pi > 1
        res = fredholm_det(lambda x, y: 2.0 * math.sin(x) * math.sin(y), (0.0, math.pi))
        assert abs(res.value - (1.0 - math.pi)) < 1e-10

    def test_self_convergence_reported(self):
        res = fredholm_det(lambda x, y: math.exp(-x * y), (0.0, 1.0))
        assert isinstance(res, GapResult)
        assert res.error_estimate < 1e-8

    def test_nonconvergence_raises(self):
        with pytest.raises(NonConvergenceError):
            fredholm_det(
                lambda x, y: 3.0 * np.sign(x - y), (0.0, 1.0), order=8, max_order=16
            )

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            fredholm_det(lambda x, y: 1.0, (1.0, 0.0))


class TestHardEdgeGap:
    def test_order_zero_exact_law(self):
        # at order 0 the gap probability is exactly exp(-s/4)
        for s in (0.5, 1.0, 2.0, 4.0):
            assert F_alpha(0, s).value == pytest.approx(math.exp(-s / 4.0), abs=1e-10)

    def test_order_sign_invariant(self):
        for s in (1.0, 3.0):
            assert F_alpha(-1, s).value == pytest.approx(
                F_alpha(1, s).value, abs=1e-12
            )

    def test_decreasing_in_s(self):
        vals = [F_alpha(2, s).value for s in (0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert all(0.0 < v <= 1.0 for v in vals)

    def test_rejects_nonpositive_s(self):
        with pytest.raises(ValueError):
            F_alpha(1, 0.0)

    @pytest.mark.parametrize("alpha", [0, 2])
    @pytest.mark.parametrize("s", [1.0, 4.0])
    def test_identity_matches_finite_difference(self, alpha, s):
        h = 1e-4 * s
        fd = (
            s
            * (
                F_alpha(alpha, s + h, order=80).value
                - F_alpha(alpha, s - h, order=80).value
            )
            / (2.0 * h)
        )
        assert s_dF_ds(alpha, s, order=80) == pytest.approx(fd, abs=1e-8)

    def test_prediction_structure(self):
        pred = hard_edge_prediction(2, 4.08, 8.16, 100, 2.0)
        assert pred.value == pytest.approx(pred.limit + pred.correction, abs=1e-15)
        # s dF/ds < 0 (gap probability falls with s), so for alpha > 0 the
        # finite-size correction pushes the gap probability up
        assert pred.s_dF < 0
        assert pred.correction > 0

    def test_two_first_order_routes_agree(self):
        # determinant of the corrected kernel vs the resolvent identity:
        # independently derived, both first-order accurate, and they agree
        # far below the O(1/N^2) remainder either leaves
        alpha, N, s = 2, 50, 2.0
        ks = HardEdgeKernelSpec(lambdas=(1.0,) * (N + alpha), N=N, alpha=alpha)
        sig, zet = ks.sigma_N(), ks.zeta_N()
        det_route = fredholm_det(
            lambda x, y: hard_edge_expansion_kernel(alpha, sig, zet, N, x, y),
            (0.0, s),
        ).value
        identity_route = hard_edge_prediction(alpha, sig, zet, N, s).value
        assert det_route == pytest.approx(identity_route, abs=1e-9)

    def test_exact_determinant_remainder_shrinks_like_n_squared(self):
        alpha, s = 2, 1.0
        resid = {}
        for N in (50, 100):
            ks = HardEdgeKernelSpec(lambdas=(1.0,) * (N + alpha), N=N, alpha=alpha)
            det = fredholm_det(ks, (0.0, s)).value
            pred = hard_edge_prediction(alpha, ks.sigma_N(), ks.zeta_N(), N, s)
            resid[N] = abs(det - pred.value)
        assert 3.2 < resid[50] / resid[100] < 4.8


class TestPearceyGap:
    def test_converges_and_physical(self):
        res = pearcey_gap(PearceyParams(tau=0.0), (-2.0, 2.0))
        assert res.error_estimate < 1e-8
        assert 0.0 < res.value < 1.0

    def test_monotone_in_tau(self):
        # tau < 0: overlapping bulks fill the window (gap unlikely);
        # tau > 0: bulks separate (gap likely)
        vals = [
            pearcey_gap(PearceyParams(tau=t), (-2.0, 2.0)).value
            for t in (-2.0, 0.0, 2.0)
        ]
        assert vals[0] < vals[1] < vals[2]
        assert vals[0] < 0.05 and vals[2] > 0.5
