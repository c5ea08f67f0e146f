"""Spectral densities, edge kernels, and gap probabilities for complex
correlated Wishart matrices.

The package computes, for sample covariance matrices ``M = (1/N) X Sigma X*``
with complex Gaussian data and an atomic population spectrum:

- the limiting eigenvalue density, its Stieltjes transform, and the exact
  support decomposition (`spectral_model`);
- locations and local laws of spectral edges: square-root soft edges,
  interior cube-root cusps, and the inverse-square-root hard edge of square
  matrices, including finite-size critical-point sequences and scaling
  constants (`edge_analysis`);
- the universal local kernels at those edges — the Pearcey kernel at a cusp
  and the Bessel kernel at the hard edge — together with their exact
  finite-size contour-integral counterparts (`kernels`);
- gap probabilities through Fredholm determinants, including the first-order
  finite-size correction to the smallest-eigenvalue law (`fredholm`);
- Monte Carlo sampling of the matrix model for cross-validation
  (`montecarlo`);
- a command-line interface over all of the above (`cli`).

Submodule attributes are loaded lazily on first access, so importing the
package (e.g. for the command-line entry point or ``--help``) does not pay
for numpy/scipy until a computation actually starts.
"""

from importlib import import_module

from ._errors import (
    NonConvergenceError,
    PoleProximityError,
    RootSelectionError,
    SpectrumFormatError,
)

__version__ = "0.1.0"

_EXPORTS = {
    "spectral_model": [
        "DensityCurve",
        "FiniteSize",
        "PopulationSpectrum",
        "StieltjesValue",
        "SupportDescription",
        "density",
        "density_grid",
        "g_eval",
        "solve_stieltjes",
        "support",
    ],
    "edge_analysis": [
        "CuspDescriptor",
        "FiniteNCuspSequence",
        "HardEdgeConstants",
        "SoftEdgeDescriptor",
        "classify_cusp",
        "classify_soft_edge",
        "critical_aspect_ratio",
        "find_critical_points",
        "finite_n_cusp",
        "hard_edge",
        "tune_exact_cusp",
    ],
    "fredholm": [
        "F_alpha",
        "GapResult",
        "HardEdgePrediction",
        "fredholm_det",
        "hard_edge_prediction",
        "pearcey_gap",
        "s_dF_ds",
    ],
    "kernels": [
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
    ],
    "montecarlo": [
        "SimulationRun",
        "empirical_cusp_counts",
        "empirical_smallest_cdf",
        "sample_eigenvalues",
        "sample_smallest",
    ],
}

_ATTR_TO_MODULE = {
    name: module for module, names in _EXPORTS.items() for name in names
}

__all__ = sorted(
    [
        "NonConvergenceError",
        "PoleProximityError",
        "RootSelectionError",
        "SpectrumFormatError",
        "__version__",
        *_ATTR_TO_MODULE,
    ]
)


def __getattr__(name: str):
    module_name = _ATTR_TO_MODULE.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    module = import_module(f".{module_name}", __name__)
    value = getattr(module, name)
    globals()[name] = value  # cache so later lookups skip __getattr__
    return value


def __dir__():
    return __all__
