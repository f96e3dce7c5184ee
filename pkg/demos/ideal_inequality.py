"""Tour of the lossless inequality: why higher spins still violate it.

The counterfactual bound  s <|m_A - m_B|>  >=  <m_A m_C> + <m_B m_C>
holds for every local model with perfect anticorrelation at equal settings.
For the two-spin singlet the left side vanishes when Alice's two analyzers
are antiparallel, while placing Bob's analyzer at right angles makes the
right side grow linearly -- a violation window opens for every spin.
"""

import math

import numpy as np

from merminbell import (
    HalfInt,
    chsh_spin_s,
    chsh_threshold_spin,
    ideal_correlation,
    ideal_mermin_sides,
    theta_triple,
)

# %% The spin-s CHSH warm-up: the classical bound 6s/(s+1) outgrows the
# quantum maximum 2*sqrt(2) once s exceeds a threshold spin, so the plain
# CHSH combination stops being a useful test for higher spins.
print("CHSH combination at the standard optimal angles:")
for s in (0.5, 1.0, 1.5, 2.0):
    rec = chsh_spin_s(s, 0.0, math.pi / 4, math.pi / 2, -math.pi / 4)
    marker = "violated" if not rec.satisfied else "satisfied"
    print(f"  s={s:3}: |combination| = {rec.lhs_abs:.4f} vs bound {rec.bound:.4f} -> {marker}")
print(f"threshold spin where the bound meets 2*sqrt(2): {chsh_threshold_spin():.4f}\n")

# %% Singlet correlations: -(1/3) s(s+1) cos(delta) for any analyzer
# separation delta.
for s in (HalfInt(1), HalfInt(2)):
    vals = ", ".join(f"{ideal_correlation(s, d):+.3f}" for d in np.linspace(0, math.pi, 5))
    print(f"correlation s={s}: delta 0..pi -> [{vals}]")
print()

# %% The violation window of the one-parameter analyzer family
# (alpha, beta, gamma) = (pi/2 + theta, -pi/2 - theta, 0).
print("violation vs theta (positive = no local model can reproduce it):")
thetas = np.linspace(0.02, 1.0, 15)
header = "theta " + " ".join(f"s={HalfInt(t)}" for t in range(1, 6))
print("  " + header)
for theta in thetas:
    row = [ideal_mermin_sides(HalfInt(t), theta_triple(float(theta))).violation for t in range(1, 6)]
    print(f"  {theta:5.2f} " + " ".join(f"{v:+.3f}" for v in row))

# %% The window shrinks roughly like 1/s while the raw peak value grows;
# scaled to outcomes normalized to +-1 (divide by s^2) the peak decreases,
# which is the form in which higher spins look "more classical".
print("\npeak violation, raw and normalized by s^2:")
for t in range(1, 10):
    s = HalfInt(t)
    best = max(ideal_mermin_sides(s, theta_triple(float(x))).violation for x in np.linspace(1e-3, 1.2, 300))
    print(f"  s={s}: raw {best:.4f}   normalized {best / s.value**2:.4f}")
