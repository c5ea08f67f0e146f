"""Limiting spectral measure of complex correlated Wishart matrices.

The model: sample covariance matrices ``M = (1/N) X Sigma X*`` where ``X`` is
an ``N x n`` complex Gaussian matrix and the population covariance ``Sigma``
has an atomic eigenvalue distribution ``nu``.  As ``N, n -> oo`` with
``n/N -> gamma``, the eigenvalue distribution of ``M`` converges to a
deterministic measure ``mu``.  Its Stieltjes transform
``m(z) = int (z - t)^-1 mu(dt)`` is the unique solution in the closed lower
half-plane of the fixed-point equation

    m = 1 / ( z - gamma * int lam / (1 - m lam) nu(dlam) ),     Im z > 0,

and the density of the absolutely continuous part of ``mu`` is recovered from
boundary values, ``rho(x) = -Im m(x + i0) / pi``.  When ``gamma < 1`` the
measure carries an extra atom of mass ``1 - gamma`` at the origin.

Everything here is organised around the *inverse* of the Stieltjes
transform,

    g(m) = 1/m + gamma * sum_j w_j lam_j / (1 - m lam_j),

a rational function with real poles at ``m = 0`` and ``m = 1/lam_j``.  It
satisfies ``g(m(z)) = z`` wherever ``m`` solves the fixed point, and the set
of real ``m`` with ``g'(m) < 0`` parametrises the complement of the support:
each maximal interval where ``g`` decreases maps bijectively onto one gap of
the spectrum.  Support endpoints are images ``g(c)`` of critical points
``g'(c) = 0``; density blow-ups, square-root edges and interior cusps are all
read off from higher derivatives of ``g`` at those points.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from ._errors import (
    NonConvergenceError,
    PoleProximityError,
    RootSelectionError,
    SpectrumFormatError,
)

__all__ = [
    "FiniteSize",
    "PopulationSpectrum",
    "StieltjesValue",
    "DensityCurve",
    "SupportDescription",
    "g_eval",
    "solve_stieltjes",
    "density",
    "density_grid",
    "support",
]

# Tolerances shared across the module.
_WEIGHT_TOL = 1e-12          # weights must sum to 1 within this
_POLE_TOL = 1e-13            # relative pole-proximity refusal for g
_RESIDUAL_TOL = 1e-10        # accepted relative fixed-point residual
_DENSITY_CLAMP = 1e-13       # densities below this are reported as exactly 0
_MAX_ORDER = 5               # highest derivative order of g served
_SCAN_POINTS = 2048          # sign-scan resolution per domain interval


@dataclass(frozen=True)
class FiniteSize:
    """Matrix dimensions ``N`` (rows) and ``n`` (columns) attached to a model."""

    N: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or not isinstance(
            self.n, (int, np.integer)
        ):
            raise SpectrumFormatError("finite_n dimensions must be integers")
        if self.N <= 0 or self.n <= 0:
            raise SpectrumFormatError("finite_n dimensions must be positive")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class PopulationSpectrum:
    """Atomic population eigenvalue distribution plus the aspect ratio.

    ``atoms`` is a tuple of ``(lambda, weight)`` pairs with distinct positive
    locations and positive weights summing to one; ``gamma`` is the limiting
    column/row aspect ratio ``n/N``; ``finite_n`` optionally pins concrete
    matrix dimensions for finite-size computations.
    """

    atoms: tuple[tuple[float, float], ...]
    gamma: float
    finite_n: FiniteSize | None = None

    def __post_init__(self) -> None:
        atoms = tuple(
            (float(lam), float(w)) for lam, w in sorted(self.atoms, key=lambda a: a[0])
        )
        if not atoms:
            raise SpectrumFormatError("spectrum needs at least one atom")
        lams = [a[0] for a in atoms]
        ws = [a[1] for a in atoms]
        if any(lam <= 0 for lam in lams):
            raise SpectrumFormatError("atom locations must be positive")
        if any(w <= 0 for w in ws):
            raise SpectrumFormatError("atom weights must be positive")
        if any(b - a <= 1e-12 * (1 + abs(b)) for a, b in zip(lams, lams[1:])):
            raise SpectrumFormatError("atom locations must be distinct")
        if abs(sum(ws) - 1.0) > _WEIGHT_TOL:
            raise SpectrumFormatError(
                f"atom weights must sum to 1 (got {sum(ws)!r})"
            )
        if not (self.gamma > 0):
            raise SpectrumFormatError("gamma must be positive")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "gamma", float(self.gamma))
        if self.finite_n is not None and not isinstance(self.finite_n, FiniteSize):
            object.__setattr__(self, "finite_n", FiniteSize(*self.finite_n))

    # -- convenient array views ------------------------------------------------
    @property
    def lambdas(self) -> np.ndarray:
        return np.array([a[0] for a in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([a[1] for a in self.atoms])

    def effective_gamma(self, finite_n_mode: bool = False) -> float:
        """Aspect ratio used in g: the limit, or ``n/N`` in finite-size mode."""
        if not finite_n_mode:
            return self.gamma
        if self.finite_n is None:
            raise SpectrumFormatError("finite_n_mode requires finite_n dimensions")
        return self.finite_n.n / self.finite_n.N

    def multiplicities(self) -> np.ndarray:
        """Integer eigenvalue multiplicities ``w_j * n`` of the n x n covariance."""
        if self.finite_n is None:
            raise SpectrumFormatError("multiplicities require finite_n dimensions")
        raw = self.weights * self.finite_n.n
        mult = np.rint(raw).astype(int)
        if np.any(np.abs(raw - mult) > 1e-9 * self.finite_n.n):
            raise SpectrumFormatError(
                "weights times n must be integers to realise this spectrum "
                f"at n={self.finite_n.n} (got {raw.tolist()})"
            )
        if mult.sum() != self.finite_n.n:
            raise SpectrumFormatError("multiplicities must sum to n")
        return mult

    # -- JSON interchange ------------------------------------------------------
    @classmethod
    def from_json(cls, text_or_dict) -> "PopulationSpectrum":
        data = (
            json.loads(text_or_dict) if isinstance(text_or_dict, str) else text_or_dict
        )
        if not isinstance(data, dict):
            raise SpectrumFormatError("spectrum JSON must be an object")
        allowed = {"gamma", "atoms", "finite_n"}
        unknown = set(data) - allowed
        if unknown:
            raise SpectrumFormatError(f"unknown spectrum keys: {sorted(unknown)}")
        if "gamma" not in data or "atoms" not in data:
            raise SpectrumFormatError("spectrum JSON needs 'gamma' and 'atoms'")
        atoms = []
        for entry in data["atoms"]:
            if not isinstance(entry, dict) or set(entry) != {"lambda", "weight"}:
                raise SpectrumFormatError(
                    "each atom must be an object with 'lambda' and 'weight'"
                )
            atoms.append((entry["lambda"], entry["weight"]))
        finite = None
        if data.get("finite_n") is not None:
            fn = data["finite_n"]
            if not isinstance(fn, dict) or set(fn) != {"N", "n"}:
                raise SpectrumFormatError("finite_n must be an object with 'N' and 'n'")
            finite = FiniteSize(fn["N"], fn["n"])
        return cls(atoms=tuple(atoms), gamma=data["gamma"], finite_n=finite)

    def to_json(self) -> str:
        data = {
            "gamma": self.gamma,
            "atoms": [{"lambda": lam, "weight": w} for lam, w in self.atoms],
        }
        if self.finite_n is not None:
            data["finite_n"] = {"N": self.finite_n.N, "n": self.finite_n.n}
        return json.dumps(data, sort_keys=True)


@dataclass(frozen=True)
class StieltjesValue:
    """Solved Stieltjes-transform value at one point, with its residual."""

    z: complex
    m: complex
    residual: float


@dataclass(frozen=True)
class DensityCurve:
    """Sampled density of the continuous part, plus the point mass at 0."""

    grid: np.ndarray
    values: np.ndarray
    mass_at_zero: float


@dataclass(frozen=True)
class SupportDescription:
    """Closed support intervals of the continuous part and edge preimages.

    ``preimages[k] = (m_lo, m_hi)`` gives the critical points of g mapping to
    the two endpoints of ``intervals[k]``; an entry is ``None`` when the
    endpoint is not the image of a finite critical point (the inverse-square
    -root edge at 0 of a square spectrum, whose preimage lies at infinity).
    """

    intervals: tuple[tuple[float, float], ...]
    preimages: tuple[tuple[float | None, float | None], ...]


# ---------------------------------------------------------------------------
# g and its derivatives
# ---------------------------------------------------------------------------


def g_eval(spec: PopulationSpectrum, m, order: int = 0, finite_n_mode: bool = False):
    """Evaluate ``g(m)`` or its ``order``-th derivative (closed forms).

    ``g(m) = 1/m + gamma * sum w lam / (1 - m lam)`` and

    ``g^(k)(m) = (-1)^k k!/m^(k+1) + gamma * k! * sum w lam^(k+1)/(1-m lam)^(k+1)``.

    Accepts real or complex scalars and arrays.  Points within relative
    distance 1e-13 of a pole (m = 0 or m = 1/lam_j) are refused.
    """
    if not isinstance(order, (int, np.integer)) or not (0 <= order <= _MAX_ORDER):
        raise ValueError(f"order must be an integer in [0, {_MAX_ORDER}]")
    gam = spec.effective_gamma(finite_n_mode)
    lam = spec.lambdas
    w = spec.weights

    marr = np.asarray(m)
    scalar = marr.ndim == 0
    mv = np.atleast_1d(marr)
    if not np.iscomplexobj(mv):
        mv = mv.astype(float)

    if np.any(np.abs(mv) < _POLE_TOL):
        raise PoleProximityError("g evaluated too close to the pole at m = 0")
    denom = 1.0 - mv[..., None] * lam
    if np.any(np.abs(denom) < _POLE_TOL * (lam + 1.0)):
        raise PoleProximityError("g evaluated too close to a pole at m = 1/lambda")

    k = int(order)
    if k == 0:
        val = 1.0 / mv + gam * np.sum(w * lam / denom, axis=-1)
    else:
        fact = math.factorial(k)
        val = ((-1) ** k) * fact / mv ** (k + 1) + gam * fact * np.sum(
            w * lam ** (k + 1) / denom ** (k + 1), axis=-1
        )
    if scalar:
        return val[0].item()
    return val


# ---------------------------------------------------------------------------
# Fixed-point solution
# ---------------------------------------------------------------------------


def _fixed_point_poly(spec: PopulationSpectrum, z) -> np.ndarray:
    """Coefficients (ascending) of the polynomial equivalent to the fixed point.

    Clearing denominators in ``m (z - gamma sum w lam/(1 - m lam)) = 1`` gives

        P(m) = z m A(m) - gamma m B(m) - A(m),

    with ``A = prod (1 - m lam_k)`` and
    ``B = sum_j w_j lam_j prod_{k != j} (1 - m lam_k)``; degree = #atoms + 1.
    """
    lam = spec.lambdas
    w = spec.weights
    gam = spec.gamma

    A = np.array([1.0])
    for lamk in lam:
        A = npoly.polymul(A, [1.0, -lamk])
    B = np.zeros(max(len(lam), 1))
    for j in range(len(lam)):
        pj = np.array([w[j] * lam[j]])
        for k in range(len(lam)):
            if k != j:
                pj = npoly.polymul(pj, [1.0, -lam[k]])
        B = npoly.polyadd(B, pj)

    mA = np.concatenate([[0.0], A])  # m * A(m)
    mB = np.concatenate([[0.0], B])  # m * B(m)
    size = max(len(mA), len(mB), len(A))
    P = np.zeros(size, dtype=complex if np.iscomplexobj(np.asarray(z)) else float)
    P[: len(mA)] += z * mA
    P[: len(mB)] -= gam * mB
    P[: len(A)] -= A
    # Trim exactly-zero leading coefficients (z = 0 drops the degree).
    while len(P) > 1 and P[-1] == 0:
        P = P[:-1]
    return P


def _poles(spec: PopulationSpectrum) -> np.ndarray:
    return np.sort(np.concatenate([[0.0], 1.0 / spec.lambdas]))


def _newton_polish(spec: PopulationSpectrum, m0: complex, z: complex, steps: int = 60):
    """Polish a root of g(m) = z by Newton iteration; returns the best iterate.

    Near support edges and cusps the root is (nearly) multiple, so the
    iteration is run to its rounding-noise stall and the iterate with the
    smallest defect |g(m) - z| is kept.
    """
    m = complex(m0)
    best_m, best_q = m, np.inf
    worse = 0
    for _ in range(steps):
        try:
            q = g_eval(spec, m) - z
            dq = g_eval(spec, m, order=1)
        except PoleProximityError:
            break
        aq = abs(q)
        if aq < best_q:
            best_q, best_m = aq, m
            worse = 0
        else:
            worse += 1
            if worse >= 6:
                break
        if abs(dq) < 1e-300:
            break
        step = q / dq
        m = m - step
        if abs(step) < 1e-17 * (1.0 + abs(m)):
            try:
                q = g_eval(spec, m) - z
                if abs(q) < best_q:
                    best_q, best_m = abs(q), m
            except PoleProximityError:
                pass
            break
    return best_m


def _residual(spec: PopulationSpectrum, m: complex, z: complex) -> float:
    """Defect of the fixed-point equation |m - 1/(z - gamma int ...)|."""
    lam = spec.lambdas
    w = spec.weights
    bracket = z - spec.gamma * np.sum(w * lam / (1.0 - m * lam))
    if abs(bracket) < 1e-300:
        return np.inf
    return abs(m - 1.0 / bracket)


def _solve_upper(spec: PopulationSpectrum, z: complex) -> complex:
    """Unique lower-half-plane root of the fixed point for Im z > 0."""
    roots = npoly.polyroots(_fixed_point_poly(spec, z))
    order_ = np.argsort(roots.imag)
    best = roots[order_[0]]
    if best.imag >= 0:
        raise RootSelectionError(
            f"no lower-half-plane root of the fixed point at z = {z!r}"
        )
    if len(roots) > 1:
        second = roots[order_[1]]
        scale = 1.0 + np.max(np.abs(roots))
        if second.imag < -1e-8 * scale and second.imag < 0.5 * best.imag:
            raise RootSelectionError(
                f"two candidate lower-half-plane roots at z = {z!r}: "
                f"{best!r} and {second!r}"
            )
    return _newton_polish(spec, best, z)


def _reject_spurious_branch(spec: PopulationSpectrum, m: complex, x: float) -> None:
    """Refuse a real boundary solution sitting on an increasing branch of g.

    Real boundary values always lie on branches where g is non-increasing;
    a real root with g' > 0 appears only at points where the true boundary
    value diverges (an atom of the limit measure at the origin), and picking
    it would be silently wrong.
    """
    if abs(m.imag) > 1e-12 * (1.0 + abs(m)):
        return
    mr = m.real
    slope = g_eval(spec, mr, order=1).real  # refuses mr at a pole of g
    lam = spec.lambdas
    w = spec.weights
    slope_scale = 1.0 / mr**2 + spec.gamma * np.sum(
        w * lam**2 / np.abs(1.0 - mr * lam) ** 2
    )
    # Threshold is loose (1e-6 relative) on purpose: at a support edge the
    # polished double root may sit O(1e-8) past the critical point, giving a
    # harmless slope of order |g''| * 1e-8, while a genuinely spurious root
    # has slope comparable to slope_scale itself.
    if slope > 1e-6 * slope_scale:
        raise PoleProximityError(
            f"the boundary value m(x + i0) diverges at x = {x!r} "
            "(only a spurious increasing-branch root exists there)"
        )


def solve_stieltjes(spec: PopulationSpectrum, z) -> StieltjesValue:
    """Solve the fixed-point equation for m(z), z in the closed upper half-plane.

    For ``Im z > 0`` the lower-half-plane root is unique and selected
    directly.  For real ``x`` the physical boundary value is obtained by
    continuity: solve at ``x + i*eps`` (eps = 1e-9 * (1 + |x|)), match the
    root of the exact-real-x polynomial closest to it, and polish by Newton
    iteration on ``g(m) = x``.  Real points where the boundary value
    diverges (an origin atom or a hard edge puts a pole of m at x = 0) or
    where the solution would collide with a pole of g are refused.
    """
    zc = complex(z)
    if zc.imag < 0:
        raise ValueError("solve_stieltjes requires Im z >= 0")

    if zc.imag > 0:
        m = _solve_upper(spec, zc)
    else:
        x = zc.real
        eps = 1e-9 * (1.0 + abs(x))
        m_eps = _solve_upper(spec, complex(x, eps))
        roots = npoly.polyroots(_fixed_point_poly(spec, x))
        if len(roots) == 0:
            # Degree collapse: the physical root escaped to infinity.
            raise PoleProximityError(
                f"the boundary value m(x + i0) diverges at x = {x!r}"
            )
        m0 = roots[np.argmin(np.abs(roots - m_eps))]
        poles = _poles(spec)
        if np.min(np.abs(m0 - poles) / (1.0 + np.abs(poles))) < 10 * _POLE_TOL:
            raise PoleProximityError(
                f"boundary solution at x = {x!r} collides with a pole of g"
            )
        m = _newton_polish(spec, m0, complex(x))
        _reject_spurious_branch(spec, m, x)

    res = _residual(spec, m, zc)
    if not res <= _RESIDUAL_TOL * (1.0 + abs(m)):
        raise NonConvergenceError(
            f"fixed-point residual {res:.3e} at z = {zc!r} exceeds tolerance"
        )
    return StieltjesValue(z=zc, m=m, residual=res)


def density(spec: PopulationSpectrum, x) -> float:
    """Density of the continuous part at real x: ``-Im m(x + i0) / pi``.

    Values below 1e-13 are clamped to exactly 0 so that gap points report a
    clean zero.  At x = 0 exactly the transform itself may diverge, but the
    continuous density still has a well-defined value: 0 when the origin
    carries an atom (the bulk then stays away from 0), +inf at a hard edge.
    """
    x = float(x)
    if x == 0.0:
        gamma = spec.gamma
        if gamma < 1.0:
            return 0.0
        if gamma == 1.0:
            return math.inf
    val = solve_stieltjes(spec, x)
    rho = max(0.0, -val.m.imag / math.pi)
    return 0.0 if rho < _DENSITY_CLAMP else rho


def density_grid(
    spec: PopulationSpectrum, x_min: float, x_max: float, n_points: int
) -> DensityCurve:
    """Density sampled on a uniform grid, with the origin mass made explicit."""
    if not (x_max > x_min):
        raise ValueError("x_max must exceed x_min")
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    grid = np.linspace(x_min, x_max, int(n_points))
    values = np.array([density(spec, x) for x in grid])
    return DensityCurve(
        grid=grid, values=values, mass_at_zero=max(0.0, 1.0 - spec.gamma)
    )


# ---------------------------------------------------------------------------
# Critical points of g on the real line and the support
# ---------------------------------------------------------------------------


def _scan_grid(lo: float, hi: float) -> np.ndarray:
    """Scan nodes on (lo, hi): uniform bulk plus geometric refinement at ends.

    The geometric tails matter twice over: they resolve the steep variation
    of g' next to its poles, and on the huge capped tail segments they are
    the only nodes spaced finely enough (per decade) to see sign changes.
    """
    width = hi - lo
    mlo = 1e-9 * (1.0 + abs(lo))
    mhi = 1e-9 * (1.0 + abs(hi))
    if mlo + mhi >= 0.5 * width:
        return np.linspace(lo + 0.25 * width, hi - 0.25 * width, 64)
    base = np.linspace(lo + mlo, hi - mhi, _SCAN_POINTS)
    lo_tail = lo + np.geomspace(mlo, width / 4.0, 256)
    hi_tail = hi - np.geomspace(mhi, width / 4.0, 256)
    return np.unique(np.concatenate([base, lo_tail, hi_tail]))


def _refine_gprime_root(spec, lo, hi, finite_n_mode) -> float:
    """Bracketed g' root: brentq then a few Newton steps with g''."""

    def f(mm):
        return g_eval(spec, mm, order=1, finite_n_mode=finite_n_mode)

    r = brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    for _ in range(4):
        fp = f(r)
        fpp = g_eval(spec, r, order=2, finite_n_mode=finite_n_mode)
        if fpp == 0:
            break
        step = fp / fpp
        rn = r - step
        if not (lo <= rn <= hi):
            break
        r = rn
        if abs(step) <= 1e-16 * (1.0 + abs(r)):
            break
    return r


def _scan_segment(spec, lo, hi, finite_n_mode):
    """All g' roots on (lo, hi): sign-change crossings plus double-root touches.

    Returns (crossings, touches).  Touch points are places where g' reaches 0
    without changing sign (an exact interior cusp); they are located through
    sign changes of g'' (extrema of g'), which also rescues pairs of
    crossings falling inside a single scan cell.
    """
    grid = _scan_grid(lo, hi)
    v1 = g_eval(spec, grid, order=1, finite_n_mode=finite_n_mode)
    v2 = g_eval(spec, grid, order=2, finite_n_mode=finite_n_mode)

    crossings = []
    s1 = np.sign(v1)
    for i in np.nonzero(s1[:-1] * s1[1:] < 0)[0]:
        crossings.append(_refine_gprime_root(spec, grid[i], grid[i + 1], finite_n_mode))

    touches = []
    s2 = np.sign(v2)
    for i in np.nonzero(s2[:-1] * s2[1:] < 0)[0]:
        if s1[i] * s1[i + 1] < 0:
            continue  # already handled as a crossing
        # Locate the extremum of g' inside the cell.
        e = brentq(
            lambda mm: g_eval(spec, mm, order=2, finite_n_mode=finite_n_mode),
            grid[i],
            grid[i + 1],
            xtol=1e-15,
            rtol=8.9e-16,
            maxiter=200,
        )
        ge = g_eval(spec, e, order=1, finite_n_mode=finite_n_mode)
        if s1[i] != 0 and np.sign(ge) == -s1[i]:
            # Two crossings hidden inside one scan cell.
            warnings.warn(
                "two critical points inside one scan cell; refine results",
                RuntimeWarning,
            )
            crossings.append(_refine_gprime_root(spec, grid[i], e, finite_n_mode))
            crossings.append(_refine_gprime_root(spec, e, grid[i + 1], finite_n_mode))
        elif abs(ge) <= 1e-7 * (abs(v1[i]) + abs(v1[i + 1])) + 1e-14:
            touches.append(e)
    return crossings, touches


def _segments_for_interval(spec, lo, hi):
    """Finite scan segments covering a pole-free interval (lo, hi), which may
    be unbounded; unbounded tails are capped where g' provably keeps one sign."""
    poles = _poles(spec)
    scale = 10.0 * (1.0 + np.max(np.abs(poles)))
    segs = []
    if math.isinf(lo) and math.isinf(hi):  # cannot happen: poles exist
        raise AssertionError
    if math.isinf(lo):
        # (-inf, hi): scan [hi - reach, hi - margin] plus a far-tail chart.
        segs.append((hi - scale, hi))
        segs.append((hi - 1e14, hi - scale))
    elif math.isinf(hi):
        segs.append((lo, lo + scale))
        segs.append((lo + scale, lo + 1e14))
    else:
        segs.append((lo, hi))
    return segs


def _critical_points_real(spec, finite_n_mode=False):
    """Sorted critical points of g on the real domain, split by kind.

    Returns (crossings, touches): m-values where g' changes sign, and where
    g' touches zero without crossing (interior cusps).
    """
    poles = _poles(spec)
    bounds = [-math.inf, *poles.tolist(), math.inf]
    crossings, touches = [], []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        for slo, shi in _segments_for_interval(spec, lo, hi):
            c, t = _scan_segment(spec, slo, shi, finite_n_mode)
            crossings.extend(c)
            touches.extend(t)

    def dedup(vals):
        out = []
        for v in sorted(vals):
            if not out or abs(v - out[-1]) > 1e-12 * (1.0 + abs(v)):
                out.append(v)
        return out

    return dedup(crossings), dedup(touches)


def _g_limit_at(spec, point: float, side: int) -> float:
    """Limit of g approaching ``point`` (a pole or +-inf) from ``side`` (+1 right / -1 left)."""
    if math.isinf(point):
        return 0.0
    if point == 0.0:
        return math.inf if side > 0 else -math.inf
    # Pole at 1/lambda_j: the term gamma w lam/(1 - m lam) dominates;
    # from the left 1 - m lam -> 0+ so g -> +inf, from the right -> -inf.
    return -math.inf if side > 0 else math.inf


def support(spec: PopulationSpectrum) -> SupportDescription:
    """Closed support intervals of the continuous part of the limit measure.

    Each maximal real interval where g decreases maps onto one gap of the
    spectrum; the support is the complement of the union of those images.
    Endpoints are images of critical points of g (except the 0 endpoint of a
    square spectrum, where the density blows up like x^(-1/2)).
    """
    poles = _poles(spec)
    bounds = [-math.inf, *poles.tolist(), math.inf]
    crossings, touches = _critical_points_real(spec)

    gaps = []  # (x_lo, x_hi, m_at_lo, m_at_hi); m entries None at limits
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        rts = [r for r in crossings if lo < r < hi]
        pts = [lo, *sorted(rts), hi]
        for a, b in zip(pts[:-1], pts[1:]):
            # Representative point of (a, b) for the sign of g'.
            if math.isinf(a):
                rep = b - max(1.0, abs(b))
            elif math.isinf(b):
                rep = a + max(1.0, abs(a))
            else:
                rep = 0.5 * (a + b)
            if g_eval(spec, rep, order=1) >= 0:
                continue
            # g decreases on (a, b): image is a spectral gap.
            if a == lo:  # interval boundary: a pole of g or -inf
                x_hi, m_hi = _g_limit_at(spec, a, +1), None
            else:
                x_hi, m_hi = g_eval(spec, a), a
            if b == hi:  # interval boundary: a pole of g or +inf
                x_lo, m_lo = _g_limit_at(spec, b, -1), None
            else:
                x_lo, m_lo = g_eval(spec, b), b
            if x_lo < x_hi:
                gaps.append((x_lo, x_hi, m_lo, m_hi))

    gaps.sort(key=lambda gvals: gvals[0])
    finite_vals = [abs(v) for gp in gaps for v in gp[:2] if not math.isinf(v)]
    tol = 1e-9 * (1.0 + (max(finite_vals) if finite_vals else 0.0))

    merged = []
    for gp in gaps:
        if merged and gp[0] <= merged[-1][1] + tol:
            last = merged[-1]
            if gp[1] > last[1]:
                merged[-1] = (last[0], gp[1], last[2], gp[3])
        else:
            merged.append(gp)

    intervals = []
    preimages = []
    for left, right in zip(merged[:-1], merged[1:]):
        a, b = left[1], right[0]
        if b - a > tol:
            intervals.append((a, b))
            preimages.append((left[3], right[2]))
    if not merged:
        raise NonConvergenceError("support scan produced no spectral gaps")
    if not math.isinf(merged[0][0]):
        raise NonConvergenceError("support scan missed the lower unbounded gap")
    if not math.isinf(merged[-1][1]):
        raise NonConvergenceError("support scan missed the upper unbounded gap")
    return SupportDescription(
        intervals=tuple(intervals), preimages=tuple(preimages)
    )
