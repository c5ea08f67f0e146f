"""Classification of spectral edges, cusps, and the hard edge.

The density of the limit measure is organised by the critical points of the
inverse transform g on the real line: simple zeros of g' map to square-root
edges of the support, double zeros (g' = g'' = 0 with g''' > 0) map to cusp
points where two bulk components merge and the density vanishes like a cube
root, and the behaviour of g at infinity governs the inverse-square-root hard
edge at the origin when the aspect ratio is exactly 1.

This module locates and classifies those points, computes the constants of
the local density laws, finds the critical aspect ratio at which a gap
closes, and builds finite-size cusp data: the critical-point sequence c_N of
the size-N inverse transform and, for simulation work, a "tuned" spectrum
whose size-N transform has an exact cusp (both g' and g'' vanish) with
integer atom multiplicities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._errors import NonConvergenceError
from .spectral_model import (
    FiniteSize,
    PopulationSpectrum,
    _critical_points_real,
    _poles,
    g_eval,
)

__all__ = [
    "CuspDescriptor",
    "SoftEdgeDescriptor",
    "HardEdgeConstants",
    "FiniteNCuspSequence",
    "find_critical_points",
    "classify_cusp",
    "classify_soft_edge",
    "hard_edge",
    "critical_aspect_ratio",
    "finite_n_cusp",
    "tune_exact_cusp",
]


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CuspDescriptor:
    """A cusp of the density: two bulks touching with cube-root vanishing.

    Attributes
    ----------
    a : location of the cusp on the spectral axis (a = g(c)).
    c : the critical point of g producing it (g'(c) = g''(c) = 0).
    g3 : third derivative g'''(c) > 0.
    sigma_limit : limiting scale (6 / g3)**(1/4) used by the local kernel.
    kappa : optional rate of approach to criticality (sqrt(N) * g_N'(c_N)).
    tau : kernel asymmetry parameter -kappa * sqrt(6 / g3); None when kappa
        is not supplied.
    cube_root_coeff : C in the local law rho(x) ~ C |x - a|**(1/3).
    """

    a: float
    c: float
    g3: float
    sigma_limit: float
    kappa: float | None
    tau: float | None
    cube_root_coeff: float


@dataclass(frozen=True)
class SoftEdgeDescriptor:
    """A square-root edge of the support.

    ``side`` is "left" when the edge is the left endpoint of a support
    interval (density grows to its right; g''(c) < 0) and "right" otherwise.
    ``sqrt_coeff`` is the constant in rho(x) ~ sqrt_coeff * sqrt(|x - a|).
    """

    a: float
    c: float
    g2: float
    side: str
    sqrt_coeff: float


@dataclass(frozen=True)
class HardEdgeConstants:
    """Constants of the inverse-square-root blow-up at the origin.

    Present only when the aspect ratio equals 1 exactly.  ``g2_inf`` is the
    limit of g'' at infinity, ``blowup_coeff`` the B in
    rho(x) ~ B * x**(-1/2).  The finite-size scale constants sigma_N and
    zeta_N (and the index offset alpha = n - N) are filled in when N is
    supplied.
    """

    present: bool
    g2_inf: float | None = None
    blowup_coeff: float | None = None
    sigma_N: float | None = None
    zeta_N: float | None = None
    alpha: int | None = None


@dataclass(frozen=True)
class FiniteNCuspSequence:
    """Finite-size counterpart of a cusp: data of the size-N transform.

    c_N solves g_N''(c_N) = 0; a_N = g_N(c_N) is the merging point;
    sigma_N = (6 / g_N'''(c_N))**(1/4) the local scale; and
    kappa_N = sqrt(N) * g_N'(c_N) measures the distance from exact
    criticality (kappa_N = 0 for a tuned spectrum).
    """

    N: int
    c_N: float
    a_N: float
    sigma_N: float
    kappa_N: float


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _derivative_scale(
    spec: PopulationSpectrum, c: float, order: int, finite_n_mode: bool = False
) -> float:
    """Sum of the magnitudes of the terms of g^(order)(c).

    Cancellation-aware reference scale: a computed derivative should be
    considered zero when it is a tiny fraction of this.
    """
    gamma = spec.effective_gamma(finite_n_mode)
    lam = spec.lambdas
    w = spec.weights
    k = order
    return math.factorial(k) * (
        1.0 / abs(c) ** (k + 1)
        + gamma * float(np.sum(w * lam ** (k + 1) / np.abs(1.0 - c * lam) ** (k + 1)))
    )


def _gap_containing(spec: PopulationSpectrum, c: float) -> tuple[float, float]:
    """The open interval between consecutive poles of g containing c."""
    poles = _poles(spec)
    if c < poles[0]:
        return (-math.inf, poles[0])
    if c > poles[-1]:
        return (poles[-1], math.inf)
    idx = int(np.searchsorted(poles, c))
    lo, hi = poles[idx - 1], poles[idx]
    if not (lo < c < hi):
        raise ValueError(f"point {c!r} coincides with a pole of g")
    return (lo, hi)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def find_critical_points(
    spec: PopulationSpectrum, finite_n_mode: bool = False
) -> list[tuple[float, str]]:
    """Real critical points of g with their kind, sorted by location.

    Returns ``(m, kind)`` pairs where kind is ``"edge"`` for a simple zero
    of g' (square-root support edge) and ``"cusp"`` for a double zero
    (g' = g'' = 0, cube-root density).
    """
    crossings, touches = _critical_points_real(spec, finite_n_mode)
    out: list[tuple[float, str]] = []
    for c in crossings:
        g2 = float(g_eval(spec, c, order=2, finite_n_mode=finite_n_mode).real)
        scale2 = _derivative_scale(spec, c, 2, finite_n_mode)
        kind = "cusp" if abs(g2) < 1e-8 * scale2 else "edge"
        out.append((float(c), kind))
    out.extend((float(c), "cusp") for c in touches)
    out.sort(key=lambda pair: pair[0])
    return out


def classify_cusp(
    spec: PopulationSpectrum,
    c: float,
    kappa: float | None = None,
    finite_n_mode: bool = False,
) -> CuspDescriptor:
    """Describe the cusp whose critical point is c (g'(c) = g''(c) = 0).

    Validates that c really is a degenerate critical point with g'''(c) > 0
    and returns the location a = g(c) together with the constants of the
    local cube-root law and of the local kernel scaling.
    """
    g1 = float(g_eval(spec, c, order=1, finite_n_mode=finite_n_mode).real)
    g2 = float(g_eval(spec, c, order=2, finite_n_mode=finite_n_mode).real)
    g3 = float(g_eval(spec, c, order=3, finite_n_mode=finite_n_mode).real)
    if abs(g1) > 1e-6 * _derivative_scale(spec, c, 1, finite_n_mode):
        raise ValueError(f"g'({c!r}) = {g1!r} does not vanish: not a critical point")
    if abs(g2) > 1e-6 * _derivative_scale(spec, c, 2, finite_n_mode):
        raise ValueError(f"g''({c!r}) = {g2!r} does not vanish: not a cusp")
    if g3 <= 0:
        raise ValueError(f"g'''({c!r}) = {g3!r} must be positive at a cusp")
    a = float(g_eval(spec, c, finite_n_mode=finite_n_mode).real)
    sigma_limit = (6.0 / g3) ** 0.25
    tau = None if kappa is None else -kappa * math.sqrt(6.0 / g3)
    coeff = math.sqrt(3.0) / (2.0 * math.pi) * (6.0 / g3) ** (1.0 / 3.0)
    return CuspDescriptor(
        a=a,
        c=float(c),
        g3=g3,
        sigma_limit=sigma_limit,
        kappa=kappa,
        tau=tau,
        cube_root_coeff=coeff,
    )


def classify_soft_edge(
    spec: PopulationSpectrum, c: float, finite_n_mode: bool = False
) -> SoftEdgeDescriptor:
    """Describe the square-root support edge whose critical point is c."""
    g1 = float(g_eval(spec, c, order=1, finite_n_mode=finite_n_mode).real)
    g2 = float(g_eval(spec, c, order=2, finite_n_mode=finite_n_mode).real)
    if abs(g1) > 1e-6 * _derivative_scale(spec, c, 1, finite_n_mode):
        raise ValueError(f"g'({c!r}) = {g1!r} does not vanish: not a critical point")
    if abs(g2) <= 1e-8 * _derivative_scale(spec, c, 2, finite_n_mode):
        raise ValueError(f"g''({c!r}) vanishes: degenerate point, not a simple edge")
    a = float(g_eval(spec, c, finite_n_mode=finite_n_mode).real)
    side = "left" if g2 < 0 else "right"
    coeff = math.sqrt(2.0 / abs(g2)) / math.pi
    return SoftEdgeDescriptor(a=a, c=float(c), g2=g2, side=side, sqrt_coeff=coeff)


def hard_edge(
    spec: PopulationSpectrum, N: int | None = None, alpha: int | None = None
) -> HardEdgeConstants:
    """Hard-edge data at the origin.

    The density blows up like blowup_coeff * x**(-1/2) as x -> 0+ exactly
    when the aspect ratio is 1.  With a matrix size ``N`` (and index offset
    ``alpha = n - N``, default 0) the finite-size scale constants are

        sigma_N = (4 n / N) * sum_j w_j / lambda_j,
        zeta_N  = (8 n / N) * sum_j w_j / lambda_j**2.
    """
    if abs(spec.gamma - 1.0) > 1e-12:
        return HardEdgeConstants(present=False)
    lam = spec.lambdas
    w = spec.weights
    g2_inf = -2.0 * spec.gamma * float(np.sum(w / lam))
    blowup = math.sqrt(-g2_inf / 2.0) / math.pi
    sigma_N = zeta_N = None
    if N is not None:
        if alpha is None:
            alpha = 0
        n = N + alpha
        if n < 1:
            raise ValueError("sample count N + alpha must be positive")
        sigma_N = (4.0 * n / N) * float(np.sum(w / lam))
        zeta_N = (8.0 * n / N) * float(np.sum(w / lam**2))
    return HardEdgeConstants(
        present=True,
        g2_inf=g2_inf,
        blowup_coeff=blowup,
        sigma_N=sigma_N,
        zeta_N=zeta_N,
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# critical aspect ratio
# ---------------------------------------------------------------------------


def _power_sum(lam: np.ndarray, w: np.ndarray, k: int, c: float) -> float:
    """S_k(c) = sum_j w_j lambda_j**k / (1 - c lambda_j)**k."""
    return float(np.sum(w * lam**k / (1.0 - c * lam) ** k))


def critical_aspect_ratio(
    lambdas, weights, bracket: tuple[float, float] | None = None
) -> tuple[float, float]:
    """Aspect ratio at which a gap of the support closes into a cusp.

    For a discrete population spectrum, a cusp requires g'(c) = g''(c) = 0
    simultaneously; eliminating gamma between the two equations leaves the
    gamma-free condition

        h(c) = c * S_3(c) + S_2(c) = 0,    S_k(c) = sum w lam^k/(1-c lam)^k,

    with one root in a gap between consecutive poles 1/lambda of g.  The
    corresponding ratio is gamma* = 1 / (c**2 S_2(c)).  Returns
    ``(gamma_star, c_star)``.  With more than two atoms several gaps can
    close; pass ``bracket`` (a (lo, hi) range for c) to select one.
    """
    lam = np.sort(np.asarray(lambdas, dtype=float))
    order = np.argsort(np.asarray(lambdas, dtype=float))
    w = np.asarray(weights, dtype=float)[order]
    if len(lam) < 2:
        raise ValueError("a cusp needs at least two distinct population atoms")

    def h(c: float) -> float:
        return c * _power_sum(lam, w, 3, c) + _power_sum(lam, w, 2, c)

    # gaps between consecutive poles of g at 1/lambda (descending in lambda)
    gaps = [(1.0 / lam[j + 1], 1.0 / lam[j]) for j in range(len(lam) - 1)]
    if bracket is not None:
        gaps = [
            (max(lo, bracket[0]), min(hi, bracket[1]))
            for lo, hi in gaps
            if hi > bracket[0] and lo < bracket[1]
        ]

    candidates: list[tuple[float, float]] = []
    for lo, hi in gaps:
        margin = 1e-9 * (abs(lo) + abs(hi))
        grid = np.linspace(lo + margin, hi - margin, 512)
        vals = np.array([h(c) for c in grid])
        sign_flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in sign_flips:
            c_star = brentq(h, grid[i], grid[i + 1], xtol=1e-15, rtol=8.9e-16)
            s2 = _power_sum(lam, w, 2, c_star)
            gamma_star = 1.0 / (c_star**2 * s2)
            spec = PopulationSpectrum(
                atoms=tuple(zip(lam.tolist(), w.tolist())), gamma=gamma_star
            )
            g3 = float(g_eval(spec, c_star, order=3).real)
            if g3 > 0:
                candidates.append((gamma_star, c_star))

    if not candidates:
        raise ValueError("no gap of this spectrum closes into a cusp")
    if len(candidates) > 1:
        raise ValueError(
            "several gaps close into cusps; pass bracket= to select one of "
            f"c = {[c for _, c in candidates]!r}"
        )
    return candidates[0]


# ---------------------------------------------------------------------------
# finite-size cusp data
# ---------------------------------------------------------------------------


def _cusp_scale_data(spec: PopulationSpectrum, c: float, N: int) -> FiniteNCuspSequence:
    g1 = float(g_eval(spec, c, order=1, finite_n_mode=True).real)
    g3 = float(g_eval(spec, c, order=3, finite_n_mode=True).real)
    if g3 <= 0:
        raise NonConvergenceError(
            f"g_N'''({c!r}) = {g3!r} is not positive: no cusp-type critical point"
        )
    return FiniteNCuspSequence(
        N=N,
        c_N=float(c),
        a_N=float(g_eval(spec, c, finite_n_mode=True).real),
        sigma_N=(6.0 / g3) ** 0.25,
        kappa_N=math.sqrt(N) * g1,
    )


def finite_n_cusp(spec: PopulationSpectrum, c_seed: float) -> FiniteNCuspSequence:
    """Cusp data of the size-N inverse transform g_N near c_seed.

    Solves g_N''(c_N) = 0 by a guarded Newton iteration started at c_seed
    (kept inside the pole gap containing the seed) and returns the location,
    scale, and criticality-rate constants of the finite-size cusp.
    """
    if spec.finite_n is None:
        raise ValueError("spec.finite_n must be set for finite-size analysis")
    lo, hi = _gap_containing(spec, c_seed)
    c = float(c_seed)
    for _ in range(100):
        g2 = float(g_eval(spec, c, order=2, finite_n_mode=True).real)
        g3 = float(g_eval(spec, c, order=3, finite_n_mode=True).real)
        if abs(g2) <= 1e-12 * _derivative_scale(spec, c, 2, True):
            return _cusp_scale_data(spec, c, spec.finite_n.N)
        if g3 == 0.0:
            raise NonConvergenceError("flat g_N'' encountered while locating c_N")
        step = g2 / g3
        c_new = c - step
        # keep the iterate strictly inside the pole gap of the seed
        while not (lo < c_new < hi):
            step *= 0.5
            c_new = c - step
            if abs(step) < 1e-300:
                raise NonConvergenceError("c_N iteration pinned at a pole gap end")
        c = c_new
    raise NonConvergenceError(f"c_N iteration did not converge from seed {c_seed!r}")


def _largest_remainder(weights: np.ndarray, n: int) -> np.ndarray:
    """Integer multiplicities summing to n, closest to weights * n."""
    target = weights * n
    base = np.floor(target).astype(int)
    deficit = n - int(base.sum())
    if deficit:
        order = np.argsort(target - base)[::-1]
        base[order[:deficit]] += 1
    if np.any(base < 1):
        raise NonConvergenceError(
            f"an atom would receive zero multiplicity at n = {n}; N is too small"
        )
    return base


def _tuned_g_derivs(
    gamma: float, lam: np.ndarray, w: np.ndarray, c: float, orders: tuple[int, ...]
) -> list[float]:
    out = []
    for k in orders:
        fac = math.factorial(k)
        val = (-1.0) ** k * fac / c ** (k + 1) + gamma * fac * float(
            np.sum(w * lam ** (k + 1) / (1.0 - c * lam) ** (k + 1))
        )
        out.append(val)
    return out


def tune_exact_cusp(
    template: PopulationSpectrum, N: int, tunable_index: int = 0
) -> tuple[PopulationSpectrum, FiniteNCuspSequence]:
    """Adjust a near-critical spectrum so g_N has an exact cusp at size N.

    Starting from ``template`` (a spectrum at or near its critical aspect
    ratio), fixes n = round(gamma * N) samples and returns a spectrum with
    integer atom multiplicities whose size-N transform satisfies
    g_N'(c_N) = g_N''(c_N) = 0 exactly (kappa_N = 0), together with its
    cusp data.

    Stage 1 tunes the weight of atom ``tunable_index`` (the others are
    rescaled proportionally) jointly with c by a 2-d Newton iteration.
    Stage 2 rounds the weights to integer multiplicities m_j / n (largest
    remainder) and restores the exact cusp by tuning the position of the
    largest other atom jointly with c.
    """
    lam = np.array(template.lambdas, dtype=float)
    w0 = np.array(template.weights, dtype=float)
    K = len(lam)
    if K < 2:
        raise ValueError("a cusp needs at least two distinct population atoms")
    if not 0 <= tunable_index < K:
        raise ValueError("tunable_index out of range")
    n = round(template.gamma * N)
    if n < K:
        raise ValueError(f"n = {n} samples cannot carry {K} distinct atoms")
    gamma_n = n / N

    t0 = w0[tunable_index]
    s0 = 1.0 - t0
    if not (0.0 < t0 < 1.0):
        raise ValueError("the tunable atom must have weight strictly inside (0, 1)")

    # gamma-free cusp condition of the template locates the seed for c
    def h(c: float) -> float:
        return c * _power_sum(lam, w0, 3, c) + _power_sum(lam, w0, 2, c)

    gaps = [(1.0 / lam[j + 1], 1.0 / lam[j]) for j in range(K - 1)]
    c = None
    for lo, hi in gaps:
        margin = 1e-9 * (abs(lo) + abs(hi))
        grid = np.linspace(lo + margin, hi - margin, 256)
        vals = np.array([h(x) for x in grid])
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if len(flips):
            i = flips[0]
            c = brentq(h, grid[i], grid[i + 1], xtol=1e-15, rtol=8.9e-16)
            break
    if c is None:
        raise NonConvergenceError("template has no closing gap to tune")

    def weights_of(t: float) -> np.ndarray:
        w = w0 * (1.0 - t) / s0
        w[tunable_index] = t
        return w

    def tangent_t(c: float) -> np.ndarray:
        """d(g', g'')/dt at fixed c for the weight family above."""
        rows = []
        for k in (1, 2):
            fac = math.factorial(k)
            T = fac * lam ** (k + 1) / (1.0 - c * lam) ** (k + 1)
            d = T[tunable_index] - float(
                np.sum(np.delete(w0, tunable_index) * np.delete(T, tunable_index))
            ) / s0
            rows.append(gamma_n * d)
        return np.array(rows)

    # --- stage 1: tune (weight, c) to an exact cusp of g_N -----------------
    t = t0
    for _ in range(80):
        w = weights_of(t)
        g1, g2 = _tuned_g_derivs(gamma_n, lam, w, c, (1, 2))
        scale1 = math.factorial(1) / abs(c) ** 2 + gamma_n * float(
            np.sum(w * lam**2 / np.abs(1.0 - c * lam) ** 2)
        )
        scale2 = math.factorial(2) / abs(c) ** 3 + gamma_n * 2.0 * float(
            np.sum(w * lam**3 / np.abs(1.0 - c * lam) ** 3)
        )
        if abs(g1) <= 1e-13 * scale1 and abs(g2) <= 1e-13 * scale2:
            break
        g2_, g3_ = _tuned_g_derivs(gamma_n, lam, w, c, (2, 3))
        col_t = tangent_t(c)
        jac = np.array([[col_t[0], g2_], [col_t[1], g3_]])
        try:
            dt, dc = np.linalg.solve(jac, [-g1, -g2])
        except np.linalg.LinAlgError as exc:
            raise NonConvergenceError("singular Jacobian in cusp tuning") from exc
        t += dt
        c += dc
        if not (0.0 < t < 1.0):
            raise NonConvergenceError("tuned weight left (0, 1)")
    else:
        raise NonConvergenceError("stage-1 cusp tuning did not converge")

    # --- stage 2: integer multiplicities, retune (secondary lambda, c) -----
    w = weights_of(t)
    mult = _largest_remainder(w, n)
    w_int = mult / n
    others = [j for j in range(K) if j != tunable_index]
    sec = max(others, key=lambda j: lam[j])
    lam2 = lam.copy()

    if np.max(np.abs(w_int - w)) > 1e-15:
        for _ in range(80):
            g1, g2 = _tuned_g_derivs(gamma_n, lam2, w_int, c, (1, 2))
            scale1 = 1.0 / abs(c) ** 2 + gamma_n * float(
                np.sum(w_int * lam2**2 / np.abs(1.0 - c * lam2) ** 2)
            )
            scale2 = 2.0 / abs(c) ** 3 + gamma_n * 2.0 * float(
                np.sum(w_int * lam2**3 / np.abs(1.0 - c * lam2) ** 3)
            )
            if abs(g1) <= 1e-13 * scale1 and abs(g2) <= 1e-13 * scale2:
                break
            g2_, g3_ = _tuned_g_derivs(gamma_n, lam2, w_int, c, (2, 3))
            col_lam = np.array(
                [
                    gamma_n
                    * w_int[sec]
                    * math.factorial(k + 1)
                    * lam2[sec] ** k
                    / (1.0 - c * lam2[sec]) ** (k + 2)
                    for k in (1, 2)
                ]
            )
            jac = np.array([[col_lam[0], g2_], [col_lam[1], g3_]])
            try:
                dlam, dc = np.linalg.solve(jac, [-g1, -g2])
            except np.linalg.LinAlgError as exc:
                raise NonConvergenceError(
                    "singular Jacobian in multiplicity repair"
                ) from exc
            lam2[sec] += dlam
            c += dc
            if lam2[sec] <= 0:
                raise NonConvergenceError("secondary atom position left (0, inf)")
        else:
            raise NonConvergenceError("stage-2 cusp tuning did not converge")

    tuned = PopulationSpectrum(
        atoms=tuple(zip(lam2.tolist(), w_int.tolist())),
        gamma=gamma_n,
        finite_n=FiniteSize(N=N, n=n),
    )
    return tuned, _cusp_scale_data(tuned, c, N)
