"""Violation vs detector efficiency for spins 1/2 through 9/2.

Each spin is evaluated at its own optimal angles for perfect detection,
then the efficiency is lowered with the angles held fixed.  Higher spins
lose their violation much sooner; weaker squeezing is more forgiving
because the lower sectors dominate the source and crossover contamination
from above is weaker.
"""

import numpy as np

from merminbell import HalfInt, LossConfig, LossyEngine, TruncationPolicy, optimize_angles

ETAS = np.arange(1.0, 0.549, -0.05)
SPINS = [HalfInt(t) for t in range(1, 10)]

# %% optimal angles at eta = 1 (independent of squeezing once conditioned)
angles = {}
for s in SPINS:
    angles[s], rec = optimize_angles(s, 0.3, LossConfig.equal_eta(1.0))
    print(f"s={s}: eta=1 optimum violation {rec.violation:+.5f}")

# %% efficiency curves for two squeezing strengths
for r in (0.2, 0.4):
    print(f"\nviolation vs eta at r={r} (rows: eta, columns: s=1/2..9/2)")
    print(" eta  " + " ".join(f"{str(s):>7}" for s in SPINS))
    for eta in ETAS:
        eng = LossyEngine(r, LossConfig.equal_eta(float(eta)))
        row = []
        for s in SPINS:
            policy = TruncationPolicy.for_sector(s)
            row.append(eng.mermin_sides(s, angles[s], policy).violation)
        print(f"{eta:5.2f} " + " ".join(f"{v:+7.4f}" for v in row))

print(
    "\nnote: with outcomes normalized to +-1 (divide each column by s^2) the\n"
    "curves order strictly by spin at every efficiency; the raw curves cross\n"
    "near eta = 1 where the undecohered optimum still grows with s."
)
