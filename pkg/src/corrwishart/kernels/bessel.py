"""Bessel functions of integer order and the hard-edge Bessel kernel.

The local eigenvalue statistics at a hard edge are governed by the Bessel
kernel

    K(x, y) = [ J_a(sx) sy J_a'(sy) - sx J_a'(sx) J_a(sy) ] / (2 (x - y)),

with sx = sqrt(x), sy = sqrt(y), continued onto the diagonal by

    K(x, x) = [ J_a'(u)^2 + (1 - a^2/u^2) J_a(u)^2 ] / 4,   u = sqrt(x).

Bessel J of integer order is evaluated from its power series with an
adaptive tail (the kernel only ever needs moderate arguments, where the
series is machine-accurate; its absolute error grows like e^|x| * 1e-16, so
very large arguments are refused).  A double-contour-integral representation
of the kernel is provided as an independent second route.
"""

from __future__ import annotations

import math

import numpy as np

from .contours import QuadratureRule

__all__ = ["bessel_j", "bessel_j_prime", "bessel_kernel", "bessel_kernel_contour"]

_MAX_ARG = 100.0
_SERIES_CAP = 600


def _as_int(alpha) -> int:
    a = int(alpha)
    if a != alpha:
        raise ValueError(f"order must be an integer, got {alpha!r}")
    return a


def bessel_j(alpha, x):
    """Bessel function J_alpha for integer alpha, by adaptive power series.

    Accepts scalars or arrays.  Negative orders use J_{-a} = (-1)^a J_a.
    Arguments with |x| > 100 are refused: the alternating series loses
    absolute accuracy like e^|x| * 1e-16, and nothing in this package needs
    such arguments.
    """
    a = _as_int(alpha)
    sign = 1.0
    if a < 0:
        a = -a
        sign = -1.0 if a % 2 else 1.0
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > _MAX_ARG):
        raise ValueError(f"|x| > {_MAX_ARG} is outside the series' useful range")
    q = 0.25 * xs * xs
    # term_0 = (x/2)^a / a!
    term = (0.5 * xs) ** a / math.factorial(a)
    total = term.copy()
    for k in range(1, _SERIES_CAP):
        term = term * (-q) / (k * (k + a))
        total += term
        if np.all(np.abs(term) <= 1e-17 * (np.abs(total) + 1e-300)) and k > np.max(q) ** 0.5:
            break
    else:  # pragma: no cover - cap is far beyond any admissible argument
        raise RuntimeError("Bessel series did not terminate")
    result = sign * total
    return float(result) if np.isscalar(x) or xs.ndim == 0 else result


def bessel_j_prime(alpha, x):
    """Derivative J_alpha'(x) = (J_{alpha-1}(x) - J_{alpha+1}(x)) / 2."""
    a = _as_int(alpha)
    return 0.5 * (bessel_j(a - 1, x) - bessel_j(a + 1, x))


def _kernel_diagonal(alpha: int, x) -> float:
    """K(x, x) via the confluent form; exact limits at x = 0."""
    a = abs(alpha)
    if x == 0.0:
        return 0.25 if a == 0 else 0.0
    u = math.sqrt(x)
    j = bessel_j(a, u)
    jp = bessel_j_prime(a, u)
    return (jp * jp + (1.0 - a * a / (u * u)) * j * j) / 4.0


def _kernel_offdiag(alpha: int, x: float, y: float) -> float:
    a = abs(alpha)
    sx, sy = math.sqrt(x), math.sqrt(y)
    return (
        bessel_j(a, sx) * sy * bessel_j_prime(a, sy)
        - sx * bessel_j_prime(a, sx) * bessel_j(a, sy)
    ) / (2.0 * (x - y))


def bessel_kernel(alpha, x, y) -> float:
    """Hard-edge Bessel kernel K_alpha(x, y) for x, y >= 0.

    The kernel is symmetric in (x, y) and invariant under alpha -> -alpha.
    Near the diagonal the subtractive formula loses accuracy, so within
    |x - y| <= 1e-6 (1 + (x+y)/2) the confluent diagonal form at the
    midpoint is used, with a linear blend across the crossover band to keep
    the evaluation continuous.
    """
    a = abs(_as_int(alpha))
    x = float(x)
    y = float(y)
    if x < 0 or y < 0:
        raise ValueError("the Bessel kernel is defined for x, y >= 0")
    thr = 1e-6 * (1.0 + 0.5 * (x + y))
    d = abs(x - y)
    if d <= 0.5 * thr:
        return _kernel_diagonal(a, 0.5 * (x + y))
    if d >= thr:
        return _kernel_offdiag(a, x, y)
    t = (d - 0.5 * thr) / (0.5 * thr)  # 0 at inner edge, 1 at outer edge
    return (1.0 - t) * _kernel_diagonal(a, 0.5 * (x + y)) + t * _kernel_offdiag(
        a, x, y
    )


def bessel_kernel_contour(
    alpha, x, y, r: float = 1.0, R: float = 2.0, nodes: int = 256
) -> float:
    """Bessel kernel by double contour integral (independent route).

    K(x, y) = (y/x)^(a/2) (2 i pi)^-2 oint_{|z|=r} dz/z oint_{|w|=R} dw/w
              (z/w)^a e^{-x/z + z/4 + y/w - w/4} / (z - w),

    with 0 < r < R.  Requires x, y > 0 (the conjugation prefactor is
    singular at 0).
    """
    a = _as_int(alpha)
    if not 0 < r < R:
        raise ValueError("need 0 < r < R")
    if not (x > 0 and y > 0):
        raise ValueError("the contour route needs x, y > 0")
    zr = QuadratureRule.circle(0.0, r, nodes)
    wr = QuadratureRule.circle(0.0, R, nodes)
    z = zr.points[:, None]
    w = wr.points[None, :]
    integrand = (
        (z / w) ** a * np.exp(-x / z + z / 4.0 + y / w - w / 4.0) / (z - w) / (z * w)
    )
    total = (zr.weights[:, None] * wr.weights[None, :] * integrand).sum()
    val = (y / x) ** (0.5 * a) * total / (2j * np.pi) ** 2
    return float(val.real)
