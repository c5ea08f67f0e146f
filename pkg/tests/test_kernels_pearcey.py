"""Tests for the Pearcey functions and the Pearcey kernel.

Oracle: adaptive quadrature (scipy.integrate.quad) of the defining contour
and real-line integrals with an independent parametrization and a larger
truncation radius.  The two kernel representations (assembled from the
function pair vs. the folded double contour) must also agree — they share
no quadrature rule.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from corrwishart.kernels import PearceyParams, pearcey_kernel, pearcey_phi_psi

_ORACLE_T = 9.0  # deliberately different from the default truncation 8.0


def _phi_oracle(tau, x, order):
    e = np.exp(1j * np.pi / 4)

    def h(z):
        sign = -1.0 if order % 2 else 1.0
        return (
            z**order
            * (np.exp(x * z) - sign * np.exp(-x * z))
            * np.exp(-tau * z * z / 2.0 + z**4 / 4.0)
        )

    pieces = [
        (lambda t: h(t * e) * e, _ORACLE_T, 1.0),
        (lambda th: h(np.exp(1j * th)) * 1j * np.exp(1j * th), np.pi / 4, -np.pi / 4),
        (lambda t: h(t * np.conj(e)) * np.conj(e), 1.0, _ORACLE_T),
    ]
    total = 0.0 + 0.0j
    for f, a, b in pieces:
        re = quad(lambda s: f(s).real, a, b, limit=200)[0]
        im = quad(lambda s: f(s).imag, a, b, limit=200)[0]
        total += re + 1j * im
    return (total / (2j * np.pi)).real


def _psi_oracle(tau, y, order):
    def c(s):
        if order == 0:
            return math.cos(y * s)
        if order == 1:
            return -s * math.sin(y * s)
        if order == 2:
            return -s * s * math.cos(y * s)
        return s**3 * math.sin(y * s)

    val = quad(
        lambda s: c(s) * math.exp(-tau * s * s / 2.0 - s**4 / 4.0),
        0.0,
        _ORACLE_T,
        limit=200,
    )[0]
    return val / math.pi


class TestPearceyFunctions:
    @pytest.mark.parametrize("tau", [-2.0, 2.0])
    @pytest.mark.parametrize("t", [-1.5, 2.3])
    @pytest.mark.parametrize("order", [0, 1, 2, 3])
    def test_phi_matches_adaptive_quadrature(self, tau, t, order):
        assert pearcey_phi_psi(tau, t, "phi", order) == pytest.approx(
            _phi_oracle(tau, t, order), abs=1e-10
        )

    @pytest.mark.parametrize("tau", [-2.0, 2.0])
    @pytest.mark.parametrize("t", [-1.5, 2.3])
    @pytest.mark.parametrize("order", [0, 1, 2, 3])
    def test_psi_matches_adaptive_quadrature(self, tau, t, order):
        assert pearcey_phi_psi(tau, t, "psi", order) == pytest.approx(
            _psi_oracle(tau, t, order), abs=1e-10
        )

    @pytest.mark.parametrize("tau", [-2.0, 0.0, 2.0])
    def test_differential_equations(self, tau):
        # phi''' - tau phi' + t phi = 0 and psi''' - tau psi' - t psi = 0
        for t in np.linspace(-3.0, 3.0, 7):
            phi = [pearcey_phi_psi(tau, t, "phi", k) for k in range(4)]
            psi = [pearcey_phi_psi(tau, t, "psi", k) for k in range(4)]
            assert abs(phi[3] - tau * phi[1] + t * phi[0]) < 1e-10
            assert abs(psi[3] - tau * psi[1] - t * psi[0]) < 1e-10

    def test_order_out_of_range(self):
        with pytest.raises(ValueError):
            pearcey_phi_psi(0.0, 1.0, "phi", order=4)

    def test_unknown_function_name(self):
        with pytest.raises(ValueError):
            pearcey_phi_psi(0.0, 1.0, "chi")

    def test_params_tau_must_match(self):
        with pytest.raises(ValueError):
            pearcey_phi_psi(1.0, 0.5, "phi", params=PearceyParams(tau=0.0))


class TestPearceyKernel:
    @pytest.mark.parametrize("tau", [-2.0, 0.0, 2.0])
    def test_representations_agree(self, tau):
        params = PearceyParams(tau=tau)
        grid = np.linspace(-3.0, 3.0, 5)
        worst = 0.0
        for x in grid:
            for y in grid:
                a = pearcey_kernel(params, x, y, representation="functions")
                b = pearcey_kernel(params, x, y, representation="contour")
                worst = max(worst, abs(a - b))
        assert worst < 1e-10

    def test_negation_symmetry(self):
        params = PearceyParams(tau=1.0)
        for x, y in [(0.7, -1.9), (2.5, 2.5), (-1.1, 0.0), (3.0, -3.0)]:
            assert pearcey_kernel(params, x, y) == pytest.approx(
                pearcey_kernel(params, -x, -y), abs=1e-12
            )

    def test_kernel_is_not_symmetric(self):
        # pins the (x, y) convention: transposing changes the kernel
        params = PearceyParams(tau=0.0)
        assert abs(
            pearcey_kernel(params, 1.3, 0.4) - pearcey_kernel(params, 0.4, 1.3)
        ) > 0.05

    def test_continuous_across_diagonal(self):
        params = PearceyParams(tau=-1.0)
        for x in (-0.8, 0.0, 1.7):
            base = pearcey_kernel(params, x, x)
            for eps in (1e-4, 1e-5):
                assert abs(pearcey_kernel(params, x, x + eps) - base) < 2.0 * eps

    def test_diagonal_is_positive_at_origin(self):
        # kernel diagonal = a local one-point density; positive at the cusp
        for tau in (-2.0, 0.0, 2.0):
            assert pearcey_kernel(PearceyParams(tau=tau), 0.0, 0.0) > 0.0

    def test_bad_representation(self):
        with pytest.raises(ValueError):
            pearcey_kernel(PearceyParams(tau=0.0), 1.0, 2.0, representation="exact")

    def test_params_validation(self):
        with pytest.raises(ValueError):
            PearceyParams(tau=0.0, truncation_T=0.5)
        with pytest.raises(ValueError):
            PearceyParams(tau=0.0, nodes=2)
