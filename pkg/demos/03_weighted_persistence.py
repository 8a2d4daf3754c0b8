"""Spatial decay rides along with the flow, at a measurable exponential cost.

If the data and its first two derivatives decay like 1/(1+|x|)^2 (or even
like e^{-|x|/2} with polynomial-log corrections), the weighted triple norm

    W(t) = ||u w_N||_p + ||u_x w_N||_p + ||u_xx w_N||_p

can grow at most like W(0) exp(C M t), with M the sup-norm bound of the
solution.  This demo measures the smallest C that makes the bound true,
shows it is stable under grid refinement, and runs the two-tier variant
for the borderline weight e^{|x|}, whose kernel integral diverges but
whose L-infinity comparison still closes the argument.
"""

import numpy as np

from gch import (
    Grid,
    WeightSpec,
    persistence_ledger,
    sample,
    simulate,
    two_tier_persistence_check,
)
from gch.dynamics import RhsForm

print("power and exponential-log weights, T = 1")
for n in (4096, 8192):
    grid = Grid(n, 48.0)
    u0 = sample(grid, lambda x: 0.05 / np.cosh(x) ** 2)
    traj = simulate(u0, 1.0, RhsForm.FORM_B, snapshot_stride=5)
    for spec in (WeightSpec(0, 0, 2, 0), WeightSpec(0.5, 1, 0.5, 1)):
        led = persistence_ledger(traj, spec, np.inf)
        print(
            f"  n={n}: phi={spec}  M={led.M:.4f}  C_fit={led.C_fit:.4f}  "
            f"W: {led.W[0]:.4f} -> {led.W[-1]:.4f}  (truncation N={led.N_used:.3g})"
        )

print("\nledger for phi = (1+|x|)^2, with the fitted envelope next to W:")
grid = Grid(4096, 48.0)
u0 = sample(grid, lambda x: 0.05 / np.cosh(x) ** 2)
traj = simulate(u0, 1.0, RhsForm.FORM_B, snapshot_stride=10)
led = persistence_ledger(traj, WeightSpec(0, 0, 2, 0), np.inf)
for t, w, b in zip(led.times, led.W, led.bound()):
    marker = "  <- binding" if b > 0 and abs(w - b) < 1e-12 * b else ""
    print(f"  t={t:5.2f}  W={w:.6f}  bound={b:.6f}{marker}")

print("\ntwo-tier check for the fast-growing weight e^{|x|} (T = 0.5):")
grid = Grid(2048, 30.0)
u0 = sample(grid, lambda x: 0.05 / np.cosh(x) ** 2)
traj = simulate(u0, 0.5, RhsForm.FORM_B, snapshot_stride=5)
rep = two_tier_persistence_check(traj, WeightSpec(1, 1, 0, 0), np.inf)
print(f"  hypothesis (v e^-|x| in L^p) satisfied: {rep.condition_ok}")
print(
    f"  (phi, inf) tier:      W_max = {rep.ledger_primary.W.max():.4f}, "
    f"C_fit = {rep.ledger_primary.C_fit:.4f}"
)
print(
    f"  (sqrt(phi), 2) tier:  W_max = {rep.ledger_root.W.max():.4f}, "
    f"C_fit = {rep.ledger_root.C_fit:.4f}"
)
print(
    f"  convolution sources bounded by K e^(2CMt) with K = "
    f"{rep.envelope_plain:.4g} / {rep.envelope_differentiated:.4g}"
)
