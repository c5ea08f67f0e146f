"""The hard edge: smallest eigenvalues of square correlated Wishart matrices.

When the matrix is square (n = N + alpha with alpha fixed), the smallest
eigenvalues pile up against zero and the density blows up like x^(-1/2).
After rescaling by N^2 sigma_N, the smallest-eigenvalue law converges to
the Bessel-kernel gap probability F_alpha(s), and the leading finite-size
error is an explicit 1/N correction.  This demo computes the limit law,
its correction, and compares both against the exact finite-size
determinant.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from corrwishart import (
    F_alpha,
    HardEdgeKernelSpec,
    PopulationSpectrum,
    fredholm_det,
    hard_edge,
    hard_edge_prediction,
)

HERE = Path(__file__).parent

# --- hard-edge constants of a population -------------------------------------

spec = PopulationSpectrum(atoms=((1.0, 0.5), (2.0, 0.5)), gamma=1.0)
constants = hard_edge(spec, N=100, alpha=2)
print("population 0.5 delta_1 + 0.5 delta_2, gamma = 1, N = 100, alpha = 2:")
print(f"  density blowup:  rho(x) ~ {constants.blowup_coeff:.6f} x^(-1/2)")
print(f"  scale constant   sigma_N = {constants.sigma_N}")
print(f"  correction const zeta_N  = {constants.zeta_N}")

# --- the limiting gap law F_alpha ----------------------------------------------

ss = np.linspace(0.25, 16.0, 64)
fig, ax = plt.subplots(figsize=(7, 4))
for alpha in (0, 1, 2):
    vals = [F_alpha(alpha, s).value for s in ss]
    ax.plot(ss, vals, lw=1.4, label=f"alpha = {alpha}")
# alpha = 0 has a closed form, a useful oracle:
worst = max(abs(F_alpha(0, s).value - np.exp(-s / 4.0)) for s in (1.0, 4.0, 9.0))
print(f"\nF_0(s) vs exp(-s/4): {worst:.2e}")
ax.set_xlabel("s")
ax.set_ylabel("P(rescaled smallest eigenvalue > s)")
ax.set_title("Bessel-kernel gap probabilities at the hard edge")
ax.legend()
fig.tight_layout()
fig.savefig(HERE / "hard_edge_laws.png", dpi=120)
print(f"wrote {HERE / 'hard_edge_laws.png'}")

# --- first-order finite-size correction vs the exact determinant ---------------
#
# The exact size-N law is a Fredholm determinant of a contour-integral
# kernel.  Its deviation from the limit F_alpha(s) is captured to O(1/N^2)
# by the correction -(alpha zeta_N / (sigma_N^2 N)) s F_alpha'(s), computed
# here via a resolvent identity (no finite differences involved).

alpha, s = 2, 4.0
print(f"\nexact determinant vs first-order theory (alpha = {alpha}, s = {s}):")
print(f"{'N':>5} {'exact':>12} {'limit':>12} {'corrected':>12} {'|error|':>10}")
for N in (25, 50, 100, 200):
    ks = HardEdgeKernelSpec(lambdas=(1.0,) * (N + alpha), N=N, alpha=alpha)
    det = fredholm_det(ks, (0.0, s)).value
    pred = hard_edge_prediction(alpha, ks.sigma_N(), ks.zeta_N(), N, s)
    print(
        f"{N:>5} {det:>12.8f} {pred.limit:>12.8f} "
        f"{pred.value:>12.8f} {abs(det - pred.value):>10.2e}"
    )
print("halving 1/N divides the residual error by ~4: the theory is exact at")
print("first order, and the error is genuinely second order.")
