"""Exact finite-size correlation kernels by contour quadrature.

For a sample covariance matrix of size N with an atomic population spectrum
of integer multiplicities, the local correlation kernels admit exact double
contour integral representations whose integrands are single-valued rational
-times-exponential functions (integer multiplicities raise no branch cuts).
This module evaluates two of them without any asymptotic approximation:

- the kernel near a finite-size cusp point, rescaled to local coordinates,
  which converges to the Pearcey kernel as N grows;
- the kernel at the hard edge in smallest-eigenvalue scaling, which
  converges to the Bessel kernel with a computable 1/N correction, also
  provided here in closed form (``hard_edge_expansion_kernel``).

The cusp kernel contours are three circles crossing the real axis: two
("outer") circles around the population poles left and right of the cusp
critical point c_N carrying the growing exponential, and one circle around
the origin carrying the decaying one and passing through the pinch point at
c_N.  Crossing points are auto-tuned so the rescaled integrand stays bounded
(no saddle-point asymptotics are used; the representation is exact, so only
quadrature error matters), and node counts adapt to the total phase
variation with an a-posteriori consistency check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..spectral_model import PopulationSpectrum
from .bessel import bessel_j, bessel_kernel
from .contours import QuadratureRule

__all__ = [
    "CuspKernelIntegrand",
    "HardEdgeKernelSpec",
    "finite_kernel_cusp",
    "finite_kernel_cusp_grid",
    "finite_kernel_hard",
    "finite_kernel_hard_grid",
    "hard_edge_expansion_kernel",
]

_X_MAX = 4.0  # local-coordinate range the contour budget is tuned for
_MIN_NODES = 256
_MAX_NODES = 4096


# ---------------------------------------------------------------------------
# cusp kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CuspKernelIntegrand:
    """Data of the exact finite-size cusp kernel.

    ``lambdas`` lists the n population eigenvalues with multiplicity;
    c_N and a_N are the critical point and merging point of the size-N
    inverse transform; q is the real-axis crossing of the origin contour
    (defaults to c_N, the pinch point).
    """

    lambdas: tuple[float, ...]
    N: int
    n: int
    c_N: float
    a_N: float
    q: float

    @classmethod
    def from_spectrum(
        cls, spec: PopulationSpectrum, c_N: float, a_N: float | None = None
    ) -> "CuspKernelIntegrand":
        if spec.finite_n is None:
            raise ValueError("spec.finite_n must be set for a finite-size kernel")
        mult = spec.multiplicities()
        lams = tuple(np.repeat(spec.lambdas, mult).tolist())
        if a_N is None:
            from ..spectral_model import g_eval

            a_N = float(g_eval(spec, c_N, finite_n_mode=True).real)
        return cls(
            lambdas=lams,
            N=spec.finite_n.N,
            n=spec.finite_n.n,
            c_N=float(c_N),
            a_N=float(a_N),
            q=float(c_N),
        )


class _CuspContour:
    """Auto-tuned quadrature data for one cusp kernel."""

    def __init__(
        self, integrand: CuspKernelIntegrand, sigma_N: float, nodes: int | None
    ):
        self.N = integrand.N
        self.c = integrand.c_N
        self.a = integrand.a_N
        self.sigma = sigma_N
        self.beta = integrand.N**0.25 / sigma_N
        lam, mult = np.unique(np.asarray(integrand.lambdas), return_counts=True)
        self.lam = lam
        self.mult = mult.astype(float)

        c = self.c
        poles = np.sort(1.0 / lam)
        if np.any(np.abs(poles - c) < 1e-12 * (1.0 + np.abs(poles))):
            raise ValueError("c_N coincides with a population pole")
        left = poles[poles < c]
        right = poles[poles > c]

        self.logphase_c = float(self._logphase(np.array([c + 0j]))[0].real)

        # pinch margins: N (g'''/24) margin^4 ~ 1, capped inside the pole gap
        margin = sigma_N * (4.0 / self.N) ** 0.25
        m_minus = min(margin, 0.6 * (c - left.max())) if len(left) else margin
        m_plus = min(margin, 0.6 * (right.min() - c)) if len(right) else margin

        circles: list[tuple[float, float]] = []  # z-circles as (x_lo, x_hi)
        if len(left):
            lo_grid = np.geomspace(0.02 * left.min(), 0.90 * left.min(), 12)
            circles.append(self._pick_outer(lo_grid, c - m_minus))
        if len(right):
            hi_grid = np.geomspace(1.08 * right.max(), 4.0 * right.max() + 4.0, 12)
            circles.append(self._pick_outer(c + m_plus, hi_grid))
        if not circles:
            raise ValueError("the population transform has no poles to encircle")
        self.z_circles = circles

        # origin circle: right crossing at q, left crossing tuned
        x_L_min = circles[0][0]
        w_grid = -np.geomspace(0.05 * max(c, 0.5), 8.0 * max(c, 1.0), 12)
        w_grid = w_grid[w_grid < x_L_min - 0.5 * margin]
        if len(w_grid) == 0:
            w_grid = np.array([x_L_min - margin])
        self.w_circle = self._pick_origin(w_grid, integrand.q)

        self._build(nodes)
        if nodes is None:
            self._consistency_check()

    # -- exponent ----------------------------------------------------------

    def _logphase(self, z: np.ndarray) -> np.ndarray:
        """N f(z); its exponential is single-valued (integer multiplicities)."""
        val = self.N * (-self.a * (z - self.c) + np.log(z))
        for lam, m in zip(self.lam, self.mult):
            val = val - m * np.log(1.0 - lam * z)
        return val

    def _budget(self, z: np.ndarray, sign: float) -> np.ndarray:
        """Growth exponent of the full integrand along a contour sample.

        sign +1 for the z-side (weight e^{+Nf}), -1 for the w-side.  The
        local-coordinate factor is charged at |x| = _X_MAX.
        """
        re = np.real(self._logphase(z)) - self.logphase_c
        return sign * re + self.beta * _X_MAX * np.abs(z - self.c)

    @staticmethod
    def _circle_points(x_lo: float, x_hi: float, count: int) -> np.ndarray:
        center = 0.5 * (x_lo + x_hi)
        radius = 0.5 * (x_hi - x_lo)
        theta = 2.0 * np.pi * np.arange(count) / count
        return center + radius * np.exp(1j * theta)

    def _pick_outer(self, lo, hi) -> tuple[float, float]:
        """Choose the free crossing of a z-circle minimising the growth budget."""
        lo_c = np.atleast_1d(np.asarray(lo, dtype=float))
        hi_c = np.atleast_1d(np.asarray(hi, dtype=float))
        best, best_score = None, np.inf
        for x_lo in lo_c:
            for x_hi in hi_c:
                score = self._budget(
                    self._circle_points(x_lo, x_hi, 64), +1.0
                ).max()
                if score < best_score:
                    best, best_score = (float(x_lo), float(x_hi)), score
        return best

    def _pick_origin(self, lo_candidates: np.ndarray, q: float) -> tuple[float, float]:
        best, best_score = None, np.inf
        for x_lo in lo_candidates:
            score = self._budget(self._circle_points(x_lo, q, 64), -1.0).max()
            if score < best_score:
                best, best_score = (float(x_lo), float(q)), score
        return best

    # -- quadrature --------------------------------------------------------

    def _auto_nodes(self, x_lo: float, x_hi: float) -> int:
        pts = self._circle_points(x_lo, x_hi, 256)
        phase = np.imag(self._logphase(pts))
        cycles = np.abs(np.diff(phase)).sum() / (2.0 * np.pi)
        radius = 0.5 * (x_hi - x_lo)
        cycles += self.beta * _X_MAX * 4.0 * radius / (2.0 * np.pi)
        m = max(_MIN_NODES, int(2 ** math.ceil(math.log2(max(16.0 * cycles, 1.0)))))
        return min(m, _MAX_NODES)

    def _rules(self, scale: float) -> tuple[QuadratureRule, QuadratureRule]:
        z_rules = []
        for x_lo, x_hi in self.z_circles:
            m = min(int(self._auto_nodes(x_lo, x_hi) * scale), 2 * _MAX_NODES)
            z_rules.append(
                QuadratureRule.circle(0.5 * (x_lo + x_hi), 0.5 * (x_hi - x_lo), m)
            )
        x_lo, x_hi = self.w_circle
        m = min(int(self._auto_nodes(x_lo, x_hi) * scale), 2 * _MAX_NODES)
        w_rule = QuadratureRule.circle(0.5 * (x_lo + x_hi), 0.5 * (x_hi - x_lo), m)
        return QuadratureRule.concatenate(z_rules), w_rule

    def _build(self, nodes: int | None):
        if nodes is None:
            zr, wr = self._rules(1.0)
        else:
            z_rules = [
                QuadratureRule.circle(0.5 * (lo + hi), 0.5 * (hi - lo), nodes)
                for lo, hi in self.z_circles
            ]
            zr = QuadratureRule.concatenate(z_rules)
            lo, hi = self.w_circle
            wr = QuadratureRule.circle(0.5 * (lo + hi), 0.5 * (hi - lo), nodes)
        self.z = zr.points
        self.w = wr.points
        ez = np.exp(self._logphase(self.z) - self.logphase_c)
        ew = np.exp(-(self._logphase(self.w) - self.logphase_c))
        pref = (self.N**0.25 / self.sigma) / (2j * np.pi) ** 2
        self.C = (
            pref
            * (zr.weights * ez)[:, None]
            * (wr.weights * ew)[None, :]
            / (self.w[None, :] - self.z[:, None])
        )

    def eval_grid(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        A = np.exp(-self.beta * xs[:, None] * (self.z - self.c)[None, :])
        B = np.exp(self.beta * ys[:, None] * (self.w - self.c)[None, :])
        K = A @ self.C @ B.T
        bad = np.abs(K.imag) > 1e-6 * (1.0 + np.abs(K.real))
        if np.any(bad):
            warnings.warn(
                "cusp kernel quadrature left a non-real residue; "
                "increase nodes",
                RuntimeWarning,
                stacklevel=3,
            )
        return K.real

    def _consistency_check(self):
        probes_x = np.array([0.0, 1.3, -2.6])
        probes_y = np.array([0.7, -0.8, 2.2])
        base = self.eval_grid(probes_x, probes_y)
        saved = self.z, self.w, self.C
        zr, wr = self._rules(1.5)
        self.z, self.w = zr.points, wr.points
        ez = np.exp(self._logphase(self.z) - self.logphase_c)
        ew = np.exp(-(self._logphase(self.w) - self.logphase_c))
        pref = (self.N**0.25 / self.sigma) / (2j * np.pi) ** 2
        self.C = (
            pref
            * (zr.weights * ez)[:, None]
            * (wr.weights * ew)[None, :]
            / (self.w[None, :] - self.z[:, None])
        )
        refined = self.eval_grid(probes_x, probes_y)
        scale = 1.0 + np.abs(refined).max()
        if np.abs(base - refined).max() > 1e-9 * scale:
            # keep the refined rule; it is the better of the two
            warnings.warn(
                "cusp kernel quadrature not converged at the automatic "
                f"node count (drift {np.abs(base - refined).max():.3e}); "
                "using the refined rule",
                RuntimeWarning,
                stacklevel=3,
            )
        else:
            self.z, self.w, self.C = saved


_CUSP_CACHE: dict[tuple, _CuspContour] = {}


def _cusp_contour(
    integrand: CuspKernelIntegrand, sigma_N: float, nodes: int | None
) -> _CuspContour:
    key = (integrand, sigma_N, nodes)
    ctr = _CUSP_CACHE.get(key)
    if ctr is None:
        ctr = _CUSP_CACHE[key] = _CuspContour(integrand, sigma_N, nodes)
        if len(_CUSP_CACHE) > 8:
            _CUSP_CACHE.pop(next(iter(_CUSP_CACHE)))
    return ctr


def finite_kernel_cusp(
    integrand: CuspKernelIntegrand,
    sigma_N: float,
    x: float,
    y: float,
    nodes: int | None = None,
) -> float:
    """Exact size-N cusp kernel at local coordinates (x, y).

    The kernel is rescaled by N^(1/4)/sigma_N around the finite-size cusp
    (a_N, c_N) of ``integrand``; as N grows it converges to the Pearcey
    kernel with tau determined by the criticality rate.  ``nodes`` overrides
    the automatic per-circle node count (power of two recommended).
    """
    ctr = _cusp_contour(integrand, sigma_N, nodes)
    return float(ctr.eval_grid(np.array([float(x)]), np.array([float(y)]))[0, 0])


def finite_kernel_cusp_grid(
    integrand: CuspKernelIntegrand,
    sigma_N: float,
    xs,
    ys,
    nodes: int | None = None,
) -> np.ndarray:
    """Exact size-N cusp kernel on a grid (rows: xs, columns: ys)."""
    ctr = _cusp_contour(integrand, sigma_N, nodes)
    return ctr.eval_grid(
        np.asarray(xs, dtype=float).ravel(), np.asarray(ys, dtype=float).ravel()
    )


# ---------------------------------------------------------------------------
# hard-edge kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HardEdgeKernelSpec:
    """Data of the exact finite-size hard-edge kernel.

    ``lambdas`` lists the n = N + alpha population eigenvalues with
    multiplicity.  ``r`` and ``R`` are the two circle radii (z inner, w
    outer); leave None for automatic scaling with the evaluation point.
    """

    lambdas: tuple[float, ...]
    N: int
    alpha: int
    r: float | None = None
    R: float | None = None

    @classmethod
    def from_spectrum(cls, spec: PopulationSpectrum) -> "HardEdgeKernelSpec":
        if spec.finite_n is None:
            raise ValueError("spec.finite_n must be set for a finite-size kernel")
        mult = spec.multiplicities()
        lams = tuple(np.repeat(spec.lambdas, mult).tolist())
        return cls(
            lambdas=lams,
            N=spec.finite_n.N,
            alpha=spec.finite_n.n - spec.finite_n.N,
        )

    def __post_init__(self):
        if len(self.lambdas) != self.N + self.alpha:
            raise ValueError(
                f"{len(self.lambdas)} population eigenvalues cannot make "
                f"n = N + alpha = {self.N + self.alpha} samples"
            )

    def sigma_N(self) -> float:
        lam = np.asarray(self.lambdas)
        return float(4.0 / self.N * np.sum(1.0 / lam))

    def zeta_N(self) -> float:
        lam = np.asarray(self.lambdas)
        return float(8.0 / self.N * np.sum(1.0 / lam**2))

    def grid(self, xs, ys) -> np.ndarray:
        """Vectorized kernel evaluation (lets determinant code batch-fill)."""
        return finite_kernel_hard_grid(self, xs, ys)


def _hard_radii(kspec: HardEdgeKernelSpec, x_top: float, y_top: float):
    r = kspec.r if kspec.r is not None else 1.6 * math.sqrt(max(x_top, 1.0))
    R = kspec.R if kspec.R is not None else 2.5 * math.sqrt(max(y_top, 1.0))
    R = max(R, 1.4 * r)
    lam_min = min(kspec.lambdas)
    limit = kspec.N * kspec.sigma_N() * lam_min
    if not 0 < r < R:
        raise ValueError(f"need 0 < r < R, got r={r!r}, R={R!r}")
    if R >= 0.98 * limit:
        raise ValueError(
            f"outer radius {R!r} reaches the population singularities at "
            f"{limit!r}; reduce the evaluation range or set radii explicitly"
        )
    return r, R


def _hard_grid(
    kspec: HardEdgeKernelSpec, xs: np.ndarray, ys: np.ndarray, nodes: int
) -> np.ndarray:
    r, R = _hard_radii(kspec, float(xs.max()), float(ys.max()))
    zr = QuadratureRule.circle(0.0, r, nodes)
    wr = QuadratureRule.circle(0.0, R, nodes)
    z = zr.points
    w = wr.points
    scale = kspec.N * kspec.sigma_N()
    lam = np.asarray(kspec.lambdas)

    def logQ(zeta: np.ndarray) -> np.ndarray:
        return np.sum(np.log(1.0 - zeta[:, None] / (scale * lam[None, :])), axis=1)

    # dz/z dw/w absorbed: (2 i pi)^-1 oint f dz/z = mean over trapezoid nodes
    core = (
        (z[:, None] / w[None, :]) ** kspec.alpha
        * np.exp(-logQ(z))[:, None]
        * np.exp(logQ(w))[None, :]
        / (z[:, None] - w[None, :])
    )
    M = len(z)
    C = core / (M * len(w))
    A = np.exp(-xs[:, None] / z[None, :])
    B = np.exp(ys[:, None] / w[None, :])
    K = A @ C @ B.T
    return K.real


def finite_kernel_hard(
    kspec: HardEdgeKernelSpec, x: float, y: float, nodes: int = 256
) -> float:
    """Exact size-N hard-edge kernel in smallest-eigenvalue scaling.

    Arguments are in the N^2 sigma_N units of the rescaled smallest
    eigenvalues; the gap probability on (0, s) is the Fredholm determinant
    of this kernel.  Converges to the alpha-Bessel kernel (conjugated by
    (x/y)^(alpha/2)) with a 1/N correction given in closed form by
    ``hard_edge_expansion_kernel``.
    """
    return float(
        _hard_grid(
            kspec, np.array([float(x)]), np.array([float(y)]), nodes
        )[0, 0]
    )


def finite_kernel_hard_grid(
    kspec: HardEdgeKernelSpec, xs, ys, nodes: int = 256
) -> np.ndarray:
    """Exact size-N hard-edge kernel on a grid (rows: xs, columns: ys)."""
    return _hard_grid(
        kspec,
        np.asarray(xs, dtype=float).ravel(),
        np.asarray(ys, dtype=float).ravel(),
        nodes,
    )


# ---------------------------------------------------------------------------
# first-order hard-edge expansion
# ---------------------------------------------------------------------------


def hard_edge_expansion_kernel(
    alpha: int,
    sigma_N: float,
    zeta_N: float,
    N: int,
    x: float,
    y: float,
    form: str = "direct",
) -> float:
    """Bessel kernel with its 1/N hard-edge correction.

    K_N(x, y) = (x/y)^(a/2) { K_Be(x, y)
                - zeta_N / (4 sigma_N^2 N) [ a J_a(sx) J_a(sy)
                                             + (x - y) K_Be(x, y) ] },

    accurate to O(1/N^2) against the exact finite-size kernel.  ``form``
    selects the evaluation of the a J_a J_a term: "direct", or "half_sum"
    using a J_a(u) = (u/2)(J_{a+1}(u) + J_{a-1}(u)) (an algebraically equal
    cross-check route).
    """
    if not (x > 0 and y > 0):
        raise ValueError("the expansion kernel needs x, y > 0")
    a = int(alpha)
    sx, sy = math.sqrt(x), math.sqrt(y)
    kbe = bessel_kernel(a, x, y)
    if form == "direct":
        jterm = a * bessel_j(a, sx) * bessel_j(a, sy)
    elif form == "half_sum":
        jterm = 0.5 * (
            0.5 * sx * (bessel_j(a + 1, sx) + bessel_j(a - 1, sx)) * bessel_j(a, sy)
            + 0.5 * sy * (bessel_j(a + 1, sy) + bessel_j(a - 1, sy)) * bessel_j(a, sx)
        )
    else:
        raise ValueError(f"unknown form {form!r}")
    corr = zeta_N / (4.0 * sigma_N**2 * N) * (jterm + (x - y) * kbe)
    return (x / y) ** (0.5 * a) * (kbe - corr)
