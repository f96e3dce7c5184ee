"""Anatomy of the photodetection loss channel on an effective spin.

A detector of efficiency eta acts like a beamsplitter that removes each
photon independently.  On the two-mode encoding this maps a spin-s state
down a ladder of surviving spins sigma = s, s-1/2, ..., 0, and the same
mechanism lets higher sectors contaminate a lower measured sector.
"""

from merminbell import HalfInt, decohere_fock, decohere_spin_op
from merminbell.loss import decohere_single

# %% One mode, diagonal: the photon-number distribution after loss is the
# familiar binomial thinning.
print("binomial thinning of |3> at eta = 0.75:")
for k, p in decohere_fock(3, 0.75).items():
    print(f"  {k} photons kept: p = {p:.4f}")

# %% One mode, off-diagonal: coherences |n><n'| survive with square-rooted
# binomial weights and a fixed photon-number offset.
print("\nterm ladder of |3><1| at eta = 0.75:")
for term in decohere_single(3, 1, 0.75):
    print(f"  |{term.ket}><{term.bra}|  weight {term.value:.4f}")

# %% Two modes, spin language: |s m><s' m'| spreads over surviving labels
# (sigma, mu).  The trace over the diagonal input is exactly preserved.
s, m = HalfInt(3), HalfInt(1)  # s = 3/2, m = 1/2 (three photons, 2 vs 1)
print(f"\ndecohered |{s} {m}><{s} {m}| at eta = (0.8, 0.6):")
terms = decohere_spin_op(s, m, s, m, 0.8, 0.6)
trace = 0.0
for t in terms:
    tag = "diag" if t.ket == t.bra else "    "
    if t.ket == t.bra:
        trace += t.value
    print(f"  {tag} |{t.ket.s} {t.ket.m}><{t.bra.s} {t.bra.m}|  weight {t.value:.5f}")
print(f"trace of the decohered diagonal operator: {trace:.12f}")

# %% Sector crossover: a four-photon sector feeding the two-photon sector.
print("\nweight reaching sigma = 1 from a spin-2 input at eta = 0.85:")
total = 0.0
for t in decohere_spin_op(HalfInt(4), HalfInt(0), HalfInt(4), HalfInt(0), 0.85, 0.85):
    if t.ket == t.bra and t.ket.s == HalfInt(2):
        total += t.value
print(f"  crossover probability: {total:.5f}")
print("this contamination is what erodes the violation at eta < 1.")
