"""Contours and quadrature rules for complex contour integrals.

All kernel evaluations in this package reduce to integrals of analytic
integrands over circles, segments, and arcs.  A ``QuadratureRule`` bundles
complex nodes with complex weights that already include the ``dz`` factor,
so that ``sum(weights * f(points))`` approximates ``integral f(z) dz``.

Circles use the periodic trapezoid rule (geometrically convergent for
integrands analytic in a neighbourhood of the circle); segments and arcs
use Gauss-Legendre.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ContourSpec", "QuadratureRule"]


@dataclass(frozen=True)
class ContourSpec:
    """Geometric description of one contour piece.

    ``kind`` is "circle", "segment", or "arc".  Circles are described by
    center/radius, segments by their complex endpoints (stored in start /
    end), arcs by center/radius plus start/end angles in radians.  All
    pieces are traversed counterclockwise (circles, arcs with increasing
    angle) or from start to end (segments).
    """

    kind: str
    center: complex = 0.0
    radius: float = 0.0
    start: complex = 0.0
    end: complex = 0.0
    nodes: int = 0


@dataclass(frozen=True)
class QuadratureRule:
    """Complex nodes and dz-inclusive weights for one or more contour pieces."""

    points: np.ndarray
    weights: np.ndarray

    @classmethod
    def circle(cls, center: complex, radius: float, nodes: int) -> "QuadratureRule":
        """Counterclockwise circle, periodic trapezoid rule."""
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        z = center + radius * np.exp(1j * theta)
        w = (2j * np.pi / nodes) * radius * np.exp(1j * theta)
        return cls(points=z, weights=w)

    @classmethod
    def segment(cls, start: complex, end: complex, order: int) -> "QuadratureRule":
        """Straight segment from start to end, Gauss-Legendre."""
        x, w = np.polynomial.legendre.leggauss(order)
        half = 0.5 * (end - start)
        return cls(
            points=start + half * (x + 1.0),
            weights=half * w.astype(complex),
        )

    @classmethod
    def arc(
        cls,
        center: complex,
        radius: float,
        theta_start: float,
        theta_end: float,
        order: int,
    ) -> "QuadratureRule":
        """Circular arc traversed from theta_start to theta_end, Gauss-Legendre."""
        x, w = np.polynomial.legendre.leggauss(order)
        half = 0.5 * (theta_end - theta_start)
        theta = theta_start + half * (x + 1.0)
        z = center + radius * np.exp(1j * theta)
        return cls(points=z, weights=half * w * 1j * radius * np.exp(1j * theta))

    @classmethod
    def concatenate(cls, rules: list["QuadratureRule"]) -> "QuadratureRule":
        return cls(
            points=np.concatenate([r.points for r in rules]),
            weights=np.concatenate([r.weights for r in rules]),
        )

    def integrate(self, f) -> complex:
        return complex(np.sum(self.weights * f(self.points)))
