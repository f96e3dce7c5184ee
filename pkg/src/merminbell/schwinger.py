"""Mapping between two-mode photon counts and effective-spin labels.

A pair of bosonic modes with occupations (n1, n2) carries an effective spin
s = (n1+n2)/2 with projection m = (n1-n2)/2.  Bob's side of the experiment
uses the reflected convention m = (n2-n1)/2, which is handled where his
outcomes are read out; the labels here are convention-free bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import HalfInt

__all__ = ["ModePair", "SpinLabel", "modes_to_spin", "spin_to_modes", "projections", "ladder_coeff"]


@dataclass(frozen=True, order=True)
class ModePair:
    """Photon occupation of a two-mode pair."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("photon counts must be nonnegative")


@dataclass(frozen=True, order=True)
class SpinLabel:
    """(s, m) label of a two-mode Fock state; s±m must be nonnegative integers."""

    s: HalfInt
    m: HalfInt

    def __post_init__(self):
        s, m = HalfInt.of(self.s), HalfInt.of(self.m)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "m", m)
        if s.twice < 0 or abs(m.twice) > s.twice or (s.twice + m.twice) % 2 != 0:
            raise ValueError(f"invalid spin label (s={s}, m={m})")


def modes_to_spin(mp: ModePair) -> SpinLabel:
    """s = (n1+n2)/2, m = (n1-n2)/2."""
    return SpinLabel(HalfInt(mp.n1 + mp.n2), HalfInt(mp.n1 - mp.n2))


def spin_to_modes(sl: SpinLabel) -> ModePair:
    """Inverse of modes_to_spin: n1 = s+m, n2 = s-m."""
    return ModePair((sl.s.twice + sl.m.twice) // 2, (sl.s.twice - sl.m.twice) // 2)


def projections(s) -> list[HalfInt]:
    """All projections -s..s in unit steps."""
    ts = HalfInt.of(s).twice
    return [HalfInt(t) for t in range(-ts, ts + 1, 2)]


def ladder_coeff(sign: int, sigma, mu) -> float:
    """Matrix element sqrt(sigma(sigma+1) - mu(mu +- 1)) of S_+ / S_-.

    ``sign`` is +1 for the raising and -1 for the lowering operator; the
    coefficient vanishes at the corresponding ladder edge.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    sig = HalfInt.of(sigma).value
    m = HalfInt.of(mu).value
    if abs(m) > sig:
        raise ValueError("|mu| must not exceed sigma")
    val = sig * (sig + 1) - m * (m + sign)
    return math.sqrt(max(val, 0.0))
