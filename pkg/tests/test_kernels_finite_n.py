"""Tests for the exact finite-size kernels.

The contour representations are exact, so the strongest checks are
structural: values must not depend on admissible contour choices or node
counts, and as N grows they must approach the universal limits at the
known first-order rates (1/N at the hard edge, N^(-1/4) at the cusp),
with the closed-form 1/N hard-edge correction improving the rate to 1/N^2.
"""

import numpy as np
import pytest

from corrwishart import PopulationSpectrum, tune_exact_cusp
from corrwishart.kernels import (
    CuspKernelIntegrand,
    HardEdgeKernelSpec,
    PearceyParams,
    bessel_kernel,
    finite_kernel_cusp,
    finite_kernel_cusp_grid,
    finite_kernel_hard,
    finite_kernel_hard_grid,
    hard_edge_expansion_kernel,
    pearcey_kernel,
)

_POINTS = [(0.5, 0.5), (1.0, 2.0), (3.0, 1.5), (4.0, 4.0), (0.2, 3.7)]


def _identity_spec(N, alpha):
    return HardEdgeKernelSpec(lambdas=(1.0,) * (N + alpha), N=N, alpha=alpha)


def _mixed_spec(N, alpha):
    n = N + alpha
    m1 = n // 2
    return HardEdgeKernelSpec(
        lambdas=(1.0,) * m1 + (2.0,) * (n - m1), N=N, alpha=alpha
    )


class TestHardEdgeKernel:
    def test_radius_independent(self):
        # the representation is exact for any admissible radii
        ks = _identity_spec(100, 2)
        vals = [
            finite_kernel_hard(
                HardEdgeKernelSpec(ks.lambdas, ks.N, ks.alpha, r=r, R=R), 2.0, 3.0
            )
            for r, R in [(1.0, 2.0), (2.5, 6.0), (0.8, 9.0)]
        ]
        assert max(vals) - min(vals) < 1e-12

    def test_grid_matches_pointwise(self):
        ks = _mixed_spec(60, -1)
        xs = np.array([0.5, 2.0, 4.1])
        ys = np.array([0.3, 1.7, 3.3])
        grid = finite_kernel_hard_grid(ks, xs, ys)
        point = np.array([[finite_kernel_hard(ks, x, y) for y in ys] for x in xs])
        assert np.abs(grid - point).max() < 1e-12

    @pytest.mark.parametrize("make", [_identity_spec, _mixed_spec])
    def test_bessel_limit_first_order_rate(self, make):
        # |K_N - limit| decays like 1/N
        alpha = 2
        errs = []
        for N in (50, 100, 200):
            ks = make(N, alpha)
            err = max(
                abs(
                    finite_kernel_hard(ks, x, y)
                    - (x / y) ** (alpha / 2) * bessel_kernel(alpha, x, y)
                )
                for x, y in _POINTS
            )
            errs.append(err)
        assert errs[2] < errs[1] < errs[0]
        for a, b in zip(errs, errs[1:]):
            assert 1.6 < a / b < 2.4

    @pytest.mark.parametrize("make", [_identity_spec, _mixed_spec])
    def test_expansion_second_order_rate(self, make):
        # the closed-form 1/N correction leaves a 1/N^2 remainder
        alpha = 2
        errs = []
        for N in (50, 100, 200):
            ks = make(N, alpha)
            sig, zet = ks.sigma_N(), ks.zeta_N()
            err = max(
                abs(
                    finite_kernel_hard(ks, x, y)
                    - hard_edge_expansion_kernel(alpha, sig, zet, N, x, y)
                )
                for x, y in _POINTS
            )
            errs.append(err)
        for a, b in zip(errs, errs[1:]):
            assert 3.2 < a / b < 4.8

    def test_negative_alpha(self):
        ks = _identity_spec(100, -1)
        val = finite_kernel_hard(ks, 1.0, 2.0)
        lim = (1.0 / 2.0) ** (-0.5) * bessel_kernel(-1, 1.0, 2.0)
        assert val == pytest.approx(lim, abs=5e-3)

    def test_constants_for_mixed_population(self):
        ks = _mixed_spec(100, 2)  # 51 atoms at 1, 51 at 2
        assert ks.sigma_N() == pytest.approx(3.06, abs=1e-12)
        assert ks.zeta_N() == pytest.approx(5.10, abs=1e-12)

    def test_expansion_forms_agree(self):
        ks = _identity_spec(100, 2)
        sig, zet = ks.sigma_N(), ks.zeta_N()
        for x, y in _POINTS:
            a = hard_edge_expansion_kernel(2, sig, zet, 100, x, y, form="direct")
            b = hard_edge_expansion_kernel(2, sig, zet, 100, x, y, form="half_sum")
            assert a == pytest.approx(b, abs=1e-14)

    def test_expansion_rejects_bad_input(self):
        with pytest.raises(ValueError):
            hard_edge_expansion_kernel(2, 4.0, 8.0, 100, 0.0, 1.0)
        with pytest.raises(ValueError):
            hard_edge_expansion_kernel(2, 4.0, 8.0, 100, 1.0, 2.0, form="auto")

    def test_spec_validates_count(self):
        with pytest.raises(ValueError):
            HardEdgeKernelSpec(lambdas=(1.0,) * 10, N=100, alpha=2)

    def test_outer_radius_capped_by_poles(self):
        ks = HardEdgeKernelSpec(lambdas=(1.0,) * 102, N=100, alpha=2, r=1.0, R=1e6)
        with pytest.raises(ValueError):
            finite_kernel_hard(ks, 1.0, 1.0)


@pytest.fixture(scope="module")
def tuned_template():
    return PopulationSpectrum(
        atoms=((1.0, 0.7), (3.0, 0.3)), gamma=0.337316782197
    )


class TestCuspKernel:
    def test_node_count_independent(self, tuned_template):
        tuned, seq = tune_exact_cusp(tuned_template, 50)
        integ = CuspKernelIntegrand.from_spectrum(tuned, seq.c_N)
        auto = finite_kernel_cusp(integ, seq.sigma_N, 1.3, -0.8)
        fixed = finite_kernel_cusp(integ, seq.sigma_N, 1.3, -0.8, nodes=2048)
        assert auto == pytest.approx(fixed, abs=1e-12)

    def test_grid_matches_pointwise(self, tuned_template):
        tuned, seq = tune_exact_cusp(tuned_template, 50)
        integ = CuspKernelIntegrand.from_spectrum(tuned, seq.c_N)
        xs = np.array([-2.0, 0.0, 1.5])
        ys = np.array([-1.0, 0.5, 2.5])
        grid = finite_kernel_cusp_grid(integ, seq.sigma_N, xs, ys)
        point = np.array(
            [[finite_kernel_cusp(integ, seq.sigma_N, x, y) for y in ys] for x in xs]
        )
        assert np.abs(grid - point).max() < 1e-13

    def test_approaches_pearcey_kernel(self, tuned_template):
        # tuned spectra have exactly critical g_N, so tau = 0; the cusp
        # kernel approaches the Pearcey kernel at the slow N^(-1/4) rate
        params = PearceyParams(tau=0.0)
        grid = np.linspace(-3.0, 3.0, 5)
        KP = np.array([[pearcey_kernel(params, x, y) for y in grid] for x in grid])
        sups = []
        for N in (50, 200):
            tuned, seq = tune_exact_cusp(tuned_template, N)
            integ = CuspKernelIntegrand.from_spectrum(tuned, seq.c_N)
            KN = finite_kernel_cusp_grid(integ, seq.sigma_N, grid, grid)
            sups.append(np.abs(KN - KP).max())
        assert sups[1] < 0.85 * sups[0]

    def test_from_spectrum_expands_multiplicities(self, tuned_template):
        tuned, seq = tune_exact_cusp(tuned_template, 50)
        integ = CuspKernelIntegrand.from_spectrum(tuned, seq.c_N)
        assert len(integ.lambdas) == integ.n == tuned.finite_n.n
        assert integ.N == 50
        assert integ.q == integ.c_N
        # a_N defaults to the image of c_N under the size-N transform
        assert integ.a_N == pytest.approx(seq.a_N, abs=1e-12)

    def test_requires_finite_size_data(self, tuned_template):
        with pytest.raises(ValueError):
            CuspKernelIntegrand.from_spectrum(tuned_template, 0.56)
