"""The Pearcey kernel and its defining pair of special functions.

At a cusp of the density, local eigenvalue correlations are governed by the
Pearcey kernel with asymmetry parameter tau:

    K(x, y) = [ phi''(x) psi(y) - phi'(x) psi'(y) + phi(x) psi''(y)
                - tau phi(x) psi(y) ] / (x - y),

where phi solves phi''' - tau phi' + x phi = 0 and psi solves
psi''' - tau psi' - y psi = 0, given by the contour integrals

    phi(x) = (2 i pi)^-1    int_X  e^{x z - tau z^2/2 + z^4/4} dz,
    psi(y) = pi^-1 int_0^T  cos(y s) e^{-tau s^2/2 - s^4/4} ds,

with X the X-shaped contour from e^{3 i pi/4} infinity into the origin
region and out to e^{i pi/4} infinity plus its mirror.  Evaluation folds X
onto its right component (two rays at +-45 degrees joined by a unit arc),
where the quartic decays; psi and its derivatives reduce to real cosine /
sine integrals on [0, T].

A direct double-contour representation of the kernel is provided as an
independent second route.  The numerator of the kernel vanishes identically
on the diagonal, so the diagonal value is evaluated exactly by l'Hopital's
rule using the third derivative of psi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contours import QuadratureRule

__all__ = ["PearceyParams", "pearcey_phi_psi", "pearcey_kernel"]

_MAX_ORDER = 3


@dataclass(frozen=True)
class PearceyParams:
    """Parameters of a Pearcey kernel evaluation.

    tau is the asymmetry parameter; truncation_T truncates the unbounded
    contour pieces (the integrands decay like e^{-T^4/4}, so the default 8
    is far beyond double precision); nodes is the Gauss-Legendre order per
    contour piece.
    """

    tau: float
    truncation_T: float = 8.0
    nodes: int = 200

    def __post_init__(self):
        if self.truncation_T <= 1.0:
            raise ValueError("truncation_T must exceed the unit arc radius")
        if self.nodes < 4:
            raise ValueError("nodes must be at least 4")


class _Evaluator:
    """Cached quadrature data for one (tau, T, nodes) triple."""

    def __init__(self, params: PearceyParams):
        self.tau = params.tau
        T = params.truncation_T
        n = params.nodes
        root = math.sqrt(0.5)
        up = complex(root, root)  # e^{i pi/4}
        down = complex(root, -root)  # e^{-i pi/4}
        rule = QuadratureRule.concatenate(
            [
                QuadratureRule.segment(T * up, up, n),
                QuadratureRule.arc(0.0, 1.0, math.pi / 4.0, -math.pi / 4.0, n),
                QuadratureRule.segment(down, T * down, n),
            ]
        )
        z = rule.points
        self.z = z
        # weights with the tau-quartic factor folded in
        self.zw = rule.weights * np.exp(-0.5 * self.tau * z * z + 0.25 * z**4)

        s_rule = QuadratureRule.segment(0.0, T, 2 * n)
        s = s_rule.points.real
        self.s = s
        self.sw = s_rule.weights.real * np.exp(-0.5 * self.tau * s * s - 0.25 * s**4)

    def phi(self, x: float, order: int) -> float:
        z = self.z
        sign = -1.0 if order % 2 else 1.0
        vals = self.zw * z**order * (np.exp(x * z) - sign * np.exp(-x * z))
        return float((np.sum(vals) / (2j * np.pi)).real)

    def psi(self, y: float, order: int) -> float:
        s = self.s
        if order == 0:
            c = np.cos(y * s)
        elif order == 1:
            c = -s * np.sin(y * s)
        elif order == 2:
            c = -s * s * np.cos(y * s)
        else:
            c = s**3 * np.sin(y * s)
        return float(np.sum(self.sw * c) / math.pi)


_CACHE: dict[PearceyParams, _Evaluator] = {}


def _evaluator(params: PearceyParams) -> _Evaluator:
    ev = _CACHE.get(params)
    if ev is None:
        ev = _CACHE[params] = _Evaluator(params)
        if len(_CACHE) > 32:
            _CACHE.pop(next(iter(_CACHE)))
    return ev


def pearcey_phi_psi(
    tau: float, t: float, which: str, order: int = 0, params: PearceyParams | None = None
) -> float:
    """The Pearcey pair phi / psi and derivatives up to order 3.

    ``which`` selects "phi" or "psi"; ``t`` is the argument.  phi solves
    phi''' - tau phi' + t phi = 0, psi solves psi''' - tau psi' - t psi = 0.
    """
    if not 0 <= order <= _MAX_ORDER:
        raise ValueError(f"order must be in 0..{_MAX_ORDER}")
    if params is None:
        params = PearceyParams(tau=float(tau))
    elif params.tau != tau:
        raise ValueError("params.tau disagrees with tau")
    ev = _evaluator(params)
    if which == "phi":
        return ev.phi(float(t), order)
    if which == "psi":
        return ev.psi(float(t), order)
    raise ValueError(f"which must be 'phi' or 'psi', got {which!r}")


def _kernel_functions(ev: _Evaluator, x: float, y: float) -> float:
    num = (
        ev.phi(x, 2) * ev.psi(y, 0)
        - ev.phi(x, 1) * ev.psi(y, 1)
        + ev.phi(x, 0) * ev.psi(y, 2)
        - ev.tau * ev.phi(x, 0) * ev.psi(y, 0)
    )
    return num / (x - y)


def _kernel_diagonal(ev: _Evaluator, x: float) -> float:
    """Exact diagonal by l'Hopital's rule.

    The numerator N(x, y) of the kernel vanishes at y = x, so
    K(x, x) = -dN/dy at y = x, which only needs psi''' (the kernel is not
    symmetric in (x, y), so naive symmetric differencing would carry a
    first-order error).
    """
    return -(
        ev.phi(x, 2) * ev.psi(x, 1)
        - ev.phi(x, 1) * ev.psi(x, 2)
        + ev.phi(x, 0) * ev.psi(x, 3)
        - ev.tau * ev.phi(x, 0) * ev.psi(x, 1)
    )


def _kernel_contour(ev: _Evaluator, params: PearceyParams, x: float, y: float) -> float:
    """Double contour route: z on the X contour (folded), w on iR."""
    T = params.truncation_T
    n = params.nodes
    u_rule = QuadratureRule.concatenate(
        [QuadratureRule.segment(-T, 0.0, 2 * n), QuadratureRule.segment(0.0, T, 2 * n)]
    )
    u = u_rule.points.real
    uw = u_rule.weights.real
    z = ev.z[:, None]
    zw = ev.zw[:, None]
    w = (1j * u)[None, :]
    ww = (1j * uw * np.exp(-y * w[0] + 0.5 * ev.tau * w[0] ** 2 - 0.25 * w[0] ** 4))[
        None, :
    ]
    # fold of the X contour: left component contributes -integrand(-z)
    vals = zw * ww * (np.exp(x * z) / (w - z) - np.exp(-x * z) / (w + z))
    return float((vals.sum() / (2j * np.pi) ** 2).real)


def pearcey_kernel(
    params: PearceyParams, x: float, y: float, representation: str = "functions"
) -> float:
    """Pearcey kernel K(x, y) for the given parameters.

    ``representation`` selects the evaluation route: "functions" combines
    phi/psi and their derivatives (fast, used everywhere), "contour" is the
    direct double contour integral (slow, independent cross-check).  The
    diagonal of the functions route is continued by extrapolated symmetric
    differences; the contour route has no diagonal issue.
    """
    ev = _evaluator(params)
    x = float(x)
    y = float(y)
    if representation == "contour":
        return _kernel_contour(ev, params, x, y)
    if representation != "functions":
        raise ValueError(f"unknown representation {representation!r}")
    thr = 1e-7 * (1.0 + abs(x))
    d = abs(x - y)
    if d <= 0.5 * thr:
        return _kernel_diagonal(ev, 0.5 * (x + y))
    if d >= thr:
        return _kernel_functions(ev, x, y)
    t = (d - 0.5 * thr) / (0.5 * thr)
    return (1.0 - t) * _kernel_diagonal(ev, 0.5 * (x + y)) + t * _kernel_functions(
        ev, x, y
    )
