"""Correlation kernels: universal limits and exact finite-size forms."""

from .bessel import bessel_j, bessel_j_prime, bessel_kernel, bessel_kernel_contour
from .contours import ContourSpec, QuadratureRule
from .finite_n import (
    CuspKernelIntegrand,
    HardEdgeKernelSpec,
    finite_kernel_cusp,
    finite_kernel_cusp_grid,
    finite_kernel_hard,
    finite_kernel_hard_grid,
    hard_edge_expansion_kernel,
)
from .pearcey import PearceyParams, pearcey_kernel, pearcey_phi_psi

__all__ = [
    "ContourSpec",
    "CuspKernelIntegrand",
    "HardEdgeKernelSpec",
    "PearceyParams",
    "QuadratureRule",
    "bessel_j",
    "bessel_j_prime",
    "bessel_kernel",
    "bessel_kernel_contour",
    "finite_kernel_cusp",
    "finite_kernel_cusp_grid",
    "finite_kernel_hard",
    "finite_kernel_hard_grid",
    "hard_edge_expansion_kernel",
    "pearcey_kernel",
    "pearcey_phi_psi",
]
