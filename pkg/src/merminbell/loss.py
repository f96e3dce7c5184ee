"""Beamsplitter loss channel on Fock states, mode pairs, and spin operators.

A detector of quantum efficiency eta is modeled as a beamsplitter of
transmissivity eta with vacuum on the idle port, traced over the loss port.
On a single mode this turns |n><n'| into a ladder of |k><k+n'-n| terms with
square-rooted binomial weights; on a mode pair the channel factorizes, and
the combined term ladder can be relabeled by the surviving effective spin
(sigma, mu).  Out-of-range binomial coefficients are exact zeros, which is
what enforces every summation bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import HalfInt, LogMagnitude, binom
from .schwinger import SpinLabel

__all__ = [
    "LossConfig",
    "ModeOperatorTerm",
    "SpinOperatorTerm",
    "decohere_fock",
    "decohere_single",
    "min_output_spin",
    "decohere_spin_op",
]


@dataclass(frozen=True)
class LossConfig:
    """Per-detector transmissivities for the four optical paths."""

    eta_a1: float
    eta_a2: float
    eta_b1: float
    eta_b2: float

    def __post_init__(self):
        for name in ("eta_a1", "eta_a2", "eta_b1", "eta_b2"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
            object.__setattr__(self, name, v)

    @classmethod
    def equal_eta(cls, eta: float) -> "LossConfig":
        return cls(eta, eta, eta, eta)

    @property
    def equal(self) -> bool:
        return self.eta_a1 == self.eta_a2 == self.eta_b1 == self.eta_b2

    def etas(self) -> tuple[float, float, float, float]:
        return (self.eta_a1, self.eta_a2, self.eta_b1, self.eta_b2)


@dataclass(frozen=True)
class ModeOperatorTerm:
    """One |ket><bra| term of a decohered single-mode operator."""

    ket: int
    bra: int
    weight: LogMagnitude

    @property
    def value(self) -> float:
        return self.weight.to_float()


@dataclass(frozen=True)
class SpinOperatorTerm:
    """One |ket><bra| term of a decohered two-mode (spin) operator."""

    ket: SpinLabel
    bra: SpinLabel
    weight: LogMagnitude

    @property
    def value(self) -> float:
        return self.weight.to_float()


def decohere_fock(n: int, eta: float) -> dict[int, float]:
    """Output photon-number distribution of |n> after loss eta.

    p(k) = C(n,k) eta^k (1-eta)^(n-k); sums to one.
    """
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    out: dict[int, float] = {}
    for k in range(n + 1):
        w = (
            binom(n, k)
            * LogMagnitude.from_pow(eta, k)
            * LogMagnitude.from_pow(1.0 - eta, n - k)
        )
        out[k] = w.to_float()
    return out


def decohere_single(n: int, n_prime: int, eta: float) -> list[ModeOperatorTerm]:
    """Decohered single-mode operator |n><n'| as a list of weighted terms.

    Iterates the surviving ket count k (an integer), which fixes the bra
    count k + n' - n; the shared number of lost photons is n - k.
    """
    if n < 0 or n_prime < 0:
        raise ValueError("photon numbers must be nonnegative")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    terms: list[ModeOperatorTerm] = []
    for k in range(max(0, n - n_prime), n + 1):
        kp = k + n_prime - n
        w = (
            binom(n, k).sqrt()
            * binom(n_prime, kp).sqrt()
            * LogMagnitude.from_pow(eta, 0.5 * (k + kp))
            * LogMagnitude.from_pow(1.0 - eta, n - k)
        )
        if w.sign != 0:
            terms.append(ModeOperatorTerm(ket=k, bra=kp, weight=w))
    return terms


def min_output_spin(s, m, s_p, m_p) -> HalfInt:
    """Case-split lower bound for the surviving spin sigma.

    Determined by comparing the mode occupations n1 vs n2 on the ket and the
    bra, i.e. by the signs of m and m'; clamped below at zero.  This bound
    never excludes a term with nonzero binomial support, but for mixed-sign
    labels the true support can start higher -- the zero-binomial guard is
    authoritative, the bound only saves loop iterations.
    """
    ts, tm = HalfInt.of(s).twice, HalfInt.of(m).twice
    tsp, tmp = HalfInt.of(s_p).twice, HalfInt.of(m_p).twice
    if tm >= 0 and tmp >= 0:
        t = ts - tsp
    elif tm <= 0 and tmp <= 0:
        t = 0
    elif tm >= 0 and tmp <= 0:
        t = (ts - tsp + tm - tmp) // 2
    else:
        t = (ts - tsp - tm + tmp) // 2
    return HalfInt(max(0, t))


def decohere_spin_op(s, m, s_p, m_p, eta1: float, eta2: float) -> list[SpinOperatorTerm]:
    """Decohered spin-basis operator |s m><s' m'| under per-mode losses.

    Returns the double sum over surviving labels: kets |sigma, mu>, bras
    <sigma + s'-s, mu + m'-m|, with weights
    eta1^(sigma+mu+(s'-s+m'-m)/2) * eta2^(sigma-mu+(s'-s-m'+m)/2)
    * (1-eta1)^(s+m-sigma-mu) * (1-eta2)^(s-m-sigma+mu)
    times the four square-rooted binomials.  Terms whose binomials fall out
    of range are omitted.
    """
    ts, tm = HalfInt.of(s).twice, HalfInt.of(m).twice
    tsp, tmp = HalfInt.of(s_p).twice, HalfInt.of(m_p).twice
    if not 0.0 <= eta1 <= 1.0 or not 0.0 <= eta2 <= 1.0:
        raise ValueError("efficiencies must lie in [0, 1]")
    # occupations of the two modes for ket and bra labels
    n_up, n_dn = (ts + tm) // 2, (ts - tm) // 2
    np_up, np_dn = (tsp + tmp) // 2, (tsp - tmp) // 2
    if min(n_up, n_dn, np_up, np_dn) < 0:
        raise ValueError("invalid spin labels")
    terms: list[SpinOperatorTerm] = []
    t_lo = min_output_spin(s, m, s_p, m_p).twice
    for tsig in range(t_lo, ts + 1):  # sigma in half-integer steps
        for tmu in range(-tsig, tsig + 1, 2):
            k_up = (tsig + tmu) // 2
            k_dn = (tsig - tmu) // 2
            kp_up = k_up + (np_up - n_up)
            kp_dn = k_dn + (np_dn - n_dn)
            w = (
                binom(n_up, k_up).sqrt()
                * binom(np_up, kp_up).sqrt()
                * binom(n_dn, k_dn).sqrt()
                * binom(np_dn, kp_dn).sqrt()
                * LogMagnitude.from_pow(eta1, 0.5 * (k_up + kp_up))
                * LogMagnitude.from_pow(eta2, 0.5 * (k_dn + kp_dn))
                * LogMagnitude.from_pow(1.0 - eta1, n_up - k_up)
                * LogMagnitude.from_pow(1.0 - eta2, n_dn - k_dn)
            )
            if w.sign == 0:
                continue
            ket = SpinLabel(HalfInt(tsig), HalfInt(tmu))
            bra = SpinLabel(HalfInt(kp_up + kp_dn), HalfInt(kp_up - kp_dn))
            terms.append(SpinOperatorTerm(ket=ket, bra=bra, weight=w))
    return terms
