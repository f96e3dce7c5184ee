"""Joint outcome statistics and inequality evaluation under detection loss.

The source emits two effective spins in the singlet of every sector s with
weight w_s = (2s+1) tanh(r)^(4s) / cosh(r)^4.  Loss maps each side's
|s w><s w'| onto surviving spins sigma <= s; the weights are products of two
per-mode binomial loss ladders, assembled in the log domain.  Analyzer
rotations contract those weights with pairs of rotation-matrix elements.
Everything is accumulated sector by sector so the infinite source sum can be
cut off dynamically, with an exact geometric bound on the discarded weight.

Bob's spin convention is m_B = (n_B2 - n_B1)/2, so his "up" mode is the
second one; the per-side weight tables below are generic in (w, w') and the
two sides differ only in which detector efficiency feeds which mode and in
the substitution (w, w') -> (-m, -m').
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .ideal import AngleTriple, theta_triple
from .loss import LossConfig
from .numerics import HalfInt, wigner_d_matrix
from .source import sector_weight_tail

__all__ = [
    "TruncationPolicy",
    "JointOutcomeDistribution",
    "ViolationRecord",
    "DegenerateSectorError",
    "InternalConsistencyError",
    "LossyEngine",
    "lossy_joint_distribution",
    "lossy_correlation",
    "lossy_mermin_sides",
    "sweep",
    "optimize_angles",
    "correlation_alt_bookkeeping",
]

_NEG_INF = float("-inf")
# covers photon counts up to twice the deepest allowed source cutoff
_MAX_SOURCE_TWICE = 400
_LGF = np.array([math.lgamma(i + 1.0) for i in range(2 * _MAX_SOURCE_TWICE + 4)])


class DegenerateSectorError(RuntimeError):
    """Raised when the post-selected sector carries essentially no weight."""


class InternalConsistencyError(RuntimeError):
    """Raised when signed sums produce a negative probability beyond noise."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Dynamic cutoff control for the source-sector sum.

    The sum is evaluated at ``s_start``, then repeatedly extended by
    ``extend_by`` until the relative change of every requested quantity
    drops below ``rel_tol`` or ``max_s`` is reached.
    """

    s_start: HalfInt
    max_s: HalfInt
    rel_tol: float = 1e-6
    extend_by: HalfInt = HalfInt(2)

    def __post_init__(self):
        object.__setattr__(self, "s_start", HalfInt.of(self.s_start))
        object.__setattr__(self, "max_s", HalfInt.of(self.max_s))
        object.__setattr__(self, "extend_by", HalfInt.of(self.extend_by))
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.s_start.twice > self.max_s.twice:
            raise ValueError("s_start must not exceed max_s")
        if self.extend_by.twice <= 0:
            raise ValueError("extend_by must be positive")
        if self.max_s.twice > _MAX_SOURCE_TWICE:
            raise ValueError(f"max_s is capped at {_MAX_SOURCE_TWICE / 2:.0f}")

    @classmethod
    def for_sector(cls, s_star, rel_tol: float = 1e-6, margin=HalfInt(30)) -> "TruncationPolicy":
        """Default policy for a post-selected sector: cap at s_star + margin."""
        t = HalfInt.of(s_star).twice
        return cls(
            s_start=HalfInt(t + 4),
            max_s=HalfInt(t + HalfInt.of(margin).twice),
            rel_tol=rel_tol,
        )


@dataclass
class JointOutcomeDistribution:
    """Probabilities of joint readouts (s_a, m_a, s_b, m_b).

    For unrestricted runs the entries plus ``tail_bound`` account for all
    probability; sector-restricted runs hold only the requested sectors.
    Convergence is judged on the entry set fixed at the initial cutoff.
    """

    entries: dict[tuple[HalfInt, HalfInt, HalfInt, HalfInt], float]
    tail_bound: float
    s_cutoff_used: HalfInt
    converged: bool

    def total_mass(self) -> float:
        return sum(self.entries.values())

    def sector_probability(self, s_a, s_b) -> float:
        ta, tb = HalfInt.of(s_a), HalfInt.of(s_b)
        return sum(p for (sa, _, sb, _), p in self.entries.items() if sa == ta and sb == tb)

    def correlation(self, sector: tuple | None = None, conditioned: bool = False) -> float:
        """Moment sum m_a * m_b, optionally restricted to one sector pair."""
        num = 0.0
        den = 0.0
        if sector is not None:
            ta, tb = HalfInt.of(sector[0]), HalfInt.of(sector[1])
        for (sa, ma, sb, mb), p in self.entries.items():
            if sector is not None and (sa != ta or sb != tb):
                continue
            num += ma.value * mb.value * p
            den += p
        if not conditioned:
            return num
        if den <= 0:
            raise DegenerateSectorError("empty sector in correlation moment")
        return num / den

    def mean_abs_difference(self, sector: tuple) -> float:
        """E[|m_a - m_b|] conditioned on the given sector pair."""
        ta, tb = HalfInt.of(sector[0]), HalfInt.of(sector[1])
        num = 0.0
        den = 0.0
        for (sa, ma, sb, mb), p in self.entries.items():
            if sa != ta or sb != tb:
                continue
            num += abs(ma.value - mb.value) * p
            den += p
        if den <= 0:
            raise DegenerateSectorError("empty sector in |m_a - m_b| moment")
        return num / den


@dataclass
class ViolationRecord:
    """One evaluated point of the inequality."""

    s_star: HalfInt
    r: float
    loss: LossConfig
    angles: AngleTriple
    lhs: float
    rhs: float
    violation: float
    sector_probability: float
    s_cutoff_used: HalfInt
    converged: bool
    convention: str = "conditioned"
    error: str | None = None


def _lc(n: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Vectorized ln C(n, k): -inf outside 0 <= k <= n (or n < 0)."""
    valid = (n >= 0) & (k >= 0) & (k <= n)
    nn = np.where(valid, n, 0)
    kk = np.where(valid, k, 0)
    out = _LGF[nn] - _LGF[kk] - _LGF[nn - kk]
    return np.where(valid, out, _NEG_INF)


def _pow_log(base: float, e: np.ndarray) -> np.ndarray:
    """Log-domain contribution of base**e for base >= 0 with 0**0 = 1."""
    if base > 0.0:
        return e * math.log(base)
    return np.where(e == 0, 0.0, _NEG_INF)


def _pow_log1m(eta: float, e: np.ndarray) -> np.ndarray:
    """Log-domain contribution of (1-eta)**e."""
    if eta < 1.0:
        return e * math.log1p(-eta)
    return np.where(e == 0, 0.0, _NEG_INF)


def _pair_products(d: np.ndarray, shift: int) -> np.ndarray:
    """E[mu_idx, m_idx] = d[mu_idx + shift, m_idx] * d[mu_idx, m_idx]."""
    n = d.shape[0]
    out = np.zeros_like(d)
    lo = max(0, -shift)
    hi = min(n, n - shift)
    if hi > lo:
        out[lo:hi, :] = d[lo + shift : hi + shift, :] * d[lo:hi, :]
    return out


def _rel_change(new: np.ndarray, old: np.ndarray) -> float:
    denom = np.maximum(np.maximum(np.abs(new), np.abs(old)), 1e-300)
    return float(np.max(np.abs(new - old) / denom))


class LossyEngine:
    """Shared caches for repeated evaluations at one (r, loss) setting.

    All public methods are deterministic pure functions of their arguments;
    the caches are write-once memo tables.
    """

    def __init__(self, r: float, loss: LossConfig):
        if r < 0 or not math.isfinite(r):
            raise ValueError("squeezing parameter must be finite and nonnegative")
        self.r = float(r)
        self.loss = loss
        self._logw_cache: dict = {}
        self._tblock_cache: dict = {}
        self._corr_cache: dict = {}

    # ---------------------------------------------------------------- weights

    def _log_tau2(self, ts: int) -> float:
        """ln of the per-side sector amplitude squared, tanh(r)^(2s)/cosh(r)^2."""
        if ts == 0:
            return -2.0 * math.log(math.cosh(self.r))
        if self.r == 0.0:
            return _NEG_INF
        return ts * math.log(math.tanh(self.r)) - 2.0 * math.log(math.cosh(self.r))

    def _side_etas(self, side: str) -> tuple[float, float]:
        # Alice's up mode is a1; Bob's up mode is b2.
        if side == "a":
            return self.loss.eta_a1, self.loss.eta_a2
        return self.loss.eta_b2, self.loss.eta_b1

    def _logw(self, side: str, ts: int, tso: int, dw_cap: int, _force_general: bool = False) -> np.ndarray:
        """Log weights W[w_idx, dw_idx, mu_idx] for one side and one sector.

        w runs over the source projections of spin s (ts+1 values), dw over
        integer bra-ket offsets w'-w in [-dw_cap, dw_cap], mu over the
        projections of the surviving spin sigma = tso/2.
        """
        key = (side, ts, tso, dw_cap, _force_general)
        got = self._logw_cache.get(key)
        if got is not None:
            return got
        eta_up, eta_dn = self._side_etas(side)
        tw = np.arange(-ts, ts + 1, 2)
        n_up = (ts + tw) // 2
        n_dn = (ts - tw) // 2
        dws = np.arange(-dw_cap, dw_cap + 1)
        k_up = np.arange(0, tso + 1)
        k_dn = tso - k_up

        NU = n_up[:, None, None]
        ND = n_dn[:, None, None]
        DW = dws[None, :, None]
        KU = k_up[None, None, :]
        KD = k_dn[None, None, :]
        NUp = NU + DW
        NDp = ND - DW
        KUp = KU + DW
        KDp = KD - DW

        with np.errstate(invalid="ignore"):
            logw = 0.5 * (_lc(NU, KU) + _lc(NUp, KUp) + _lc(ND, KD) + _lc(NDp, KDp))
            if eta_up == eta_dn and not _force_general:
                # equal transmissivity per side: the exponents collapse to
                # eta^(2 sigma) (1-eta)^(2s - 2 sigma), constant over the table
                eta = eta_up
                if eta == 0.0 and tso > 0:
                    logw = np.full_like(logw, _NEG_INF)
                elif eta == 1.0 and ts != tso:
                    logw = np.full_like(logw, _NEG_INF)
                else:
                    if eta > 0.0 and tso > 0:
                        logw = logw + tso * math.log(eta)
                    if eta < 1.0 and ts != tso:
                        logw = logw + (ts - tso) * math.log1p(-eta)
            else:
                logw = logw + _pow_log(eta_up, 0.5 * (KU + KUp))
                logw = logw + _pow_log(eta_dn, 0.5 * (KD + KDp))
                logw = logw + _pow_log1m(eta_up, NU - KU)
                logw = logw + _pow_log1m(eta_dn, ND - KD)
        logw = np.where(np.isnan(logw), _NEG_INF, logw)
        logw.setflags(write=False)
        self._logw_cache[key] = logw
        return logw

    # --------------------------------------------------------- joint outcomes

    def _t_sector(self, tsa: int, tsb: int, ts: int, _force_general: bool = False) -> np.ndarray | None:
        """Angle-independent kernel T[dw_idx, mu_a, mu_b] of one source sector.

        T[dw][i, j] = sign(dw) tau^4 sum_w WA(w, dw)[i] WB(-w, -dw)[j], where
        the sign (-1)^(w'-w) is what remains of the singlet phases.
        """
        if ts < max(tsa, tsb):
            return None
        key = (tsa, tsb, ts, _force_general)
        got = self._tblock_cache.get(key)
        if got is not None:
            return got
        dmax = min(tsa, tsb)
        lt2 = self._log_tau2(ts)
        la = self._logw("a", ts, tsa, tsa, _force_general)
        lb = self._logw("b", ts, tsb, tsb, _force_general)
        with np.errstate(over="ignore"):
            wa = np.exp(la + lt2)
            wb = np.exp(lb + lt2)
        out = np.zeros((2 * dmax + 1, tsa + 1, tsb + 1))
        for dl in range(-dmax, dmax + 1):
            a = wa[:, dl + tsa, :]
            b = wb[::-1, tsb - dl, :]
            blk = a.T @ b
            out[dl + dmax] = -blk if dl % 2 else blk
        out.setflags(write=False)
        self._tblock_cache[key] = out
        return out

    def _contract_joint(self, tcum: np.ndarray, tsa: int, tsb: int, alpha: float, beta: float) -> np.ndarray:
        da = wigner_d_matrix(HalfInt(tsa), alpha)
        db = wigner_d_matrix(HalfInt(tsb), beta)
        dmax = (tcum.shape[0] - 1) // 2
        p = np.zeros((tsa + 1, tsb + 1))
        for dl in range(-dmax, dmax + 1):
            t = tcum[dl + dmax]
            if not t.any():
                continue
            ea = _pair_products(da, dl)
            eb = _pair_products(db, -dl)
            p += np.einsum("ij,ia,jb->ab", t, ea, eb)
        return p

    def _converge(
        self,
        policy: TruncationPolicy,
        t_floor: int,
        extend: Callable[[int], None],
        snapshot: Callable[[], np.ndarray],
    ) -> tuple[np.ndarray, int, bool]:
        """Run the dynamic-cutoff loop; returns (value, cutoff_used, converged)."""
        t_start = max(policy.s_start.twice, t_floor)
        t_max = max(policy.max_s.twice, t_floor)
        step = policy.extend_by.twice
        extend(t_start)
        prev = snapshot()
        tcut = t_start
        if tcut >= t_max:
            return prev, tcut, sector_weight_tail(HalfInt(tcut), self.r) == 0.0
        while True:
            tnext = min(tcut + step, t_max)
            extend(tnext)
            cur = snapshot()
            if _rel_change(cur, prev) <= policy.rel_tol:
                return cur, tnext, True
            if tnext >= t_max:
                return cur, tnext, False
            prev, tcut = cur, tnext

    def joint(
        self,
        alpha: float,
        beta: float,
        policy: TruncationPolicy,
        sectors: tuple | None = None,
        _force_general: bool = False,
    ) -> JointOutcomeDistribution:
        """Joint readout distribution at analyzer angles (alpha, beta).

        ``sectors`` restricts the computed entries to one (s_a, s_b) pair;
        otherwise every outcome reachable below the cutoff is returned.
        """
        if sectors is not None:
            tsa = HalfInt.of(sectors[0]).twice
            tsb = HalfInt.of(sectors[1]).twice
            return self._joint_restricted(tsa, tsb, alpha, beta, policy, _force_general)
        return self._joint_full(alpha, beta, policy, _force_general)

    def _joint_restricted(self, tsa, tsb, alpha, beta, policy, _force_general=False):
        dmax = min(tsa, tsb)
        tcum = np.zeros((2 * dmax + 1, tsa + 1, tsb + 1))
        applied = -1

        def extend(tcut: int) -> None:
            nonlocal applied, tcum
            for ts in range(max(applied + 1, max(tsa, tsb)), tcut + 1):
                blk = self._t_sector(tsa, tsb, ts, _force_general)
                if blk is not None:
                    tcum = tcum + blk
            applied = max(applied, tcut)

        def snapshot() -> np.ndarray:
            return self._contract_joint(tcum, tsa, tsb, alpha, beta)

        p, tcut, ok = self._converge(policy, max(tsa, tsb), extend, snapshot)
        entries = self._entries_from_block(p, tsa, tsb)
        return JointOutcomeDistribution(
            entries=entries,
            tail_bound=sector_weight_tail(HalfInt(tcut), self.r),
            s_cutoff_used=HalfInt(tcut),
            converged=ok,
        )

    def _joint_full(self, alpha, beta, policy, _force_general=False):
        cum: dict[tuple[int, int], np.ndarray] = {}
        applied = -1

        def extend(tcut: int) -> None:
            nonlocal applied
            for ts in range(applied + 1, tcut + 1):
                for tsa in range(0, ts + 1):
                    for tsb in range(0, ts + 1):
                        blk = self._t_sector(tsa, tsb, ts, _force_general)
                        if blk is None:
                            continue
                        key = (tsa, tsb)
                        if key in cum:
                            cum[key] = cum[key] + blk
                        else:
                            cum[key] = blk.copy()
            applied = max(applied, tcut)

        watched: list[tuple[int, int]] = []

        def snapshot() -> np.ndarray:
            # convergence is judged on the outcome sectors present at the
            # first cutoff; later sectors are covered by the tail bound
            if not watched:
                watched.extend(sorted(cum.keys()))
            vals = []
            for key in watched:
                tsa, tsb = key
                vals.append(self._contract_joint(cum[key], tsa, tsb, alpha, beta).ravel())
            return np.concatenate(vals) if vals else np.zeros(1)

        _, tcut, ok = self._converge(policy, 0, extend, snapshot)
        entries: dict = {}
        for (tsa, tsb), tcum in sorted(cum.items()):
            p = self._contract_joint(tcum, tsa, tsb, alpha, beta)
            entries.update(self._entries_from_block(p, tsa, tsb))
        return JointOutcomeDistribution(
            entries=entries,
            tail_bound=sector_weight_tail(HalfInt(tcut), self.r),
            s_cutoff_used=HalfInt(tcut),
            converged=ok,
        )

    @staticmethod
    def _entries_from_block(p: np.ndarray, tsa: int, tsb: int) -> dict:
        sa = HalfInt(tsa)
        sb = HalfInt(tsb)
        entries: dict = {}
        for ia in range(tsa + 1):
            for ib in range(tsb + 1):
                v = p[ia, ib]
                if v < -1e-9:
                    raise InternalConsistencyError(
                        f"negative probability {v:.3e} at sector ({sa}, {sb})"
                    )
                if v < 0.0:
                    v = 0.0
                entries[(sa, HalfInt(2 * ia - tsa), sb, HalfInt(2 * ib - tsb))] = v
        return entries

    # ----------------------------------------------------------- correlations

    def _corr_blocks(self, side: str, ts: int, tso: int) -> dict[str, np.ndarray]:
        """Per-sector reduction vectors over w for the correlation sums.

        N: plain weight sum (sector marginal); Z: weighted by mu;
        Lp/Lm: ladder blocks weighted by sqrt(sigma(sigma+1) - mu(mu +- 1)).
        """
        key = (side, ts, tso)
        got = self._corr_cache.get(key)
        if got is not None:
            return got
        logw = self._logw(side, ts, tso, 1)
        w = np.exp(logw + self._log_tau2(ts))
        so = tso / 2.0
        mu = np.arange(0, tso + 1) - so
        lp = np.sqrt(np.maximum(so * (so + 1) - mu * (mu + 1), 0.0))
        lm = np.sqrt(np.maximum(so * (so + 1) - mu * (mu - 1), 0.0))
        blocks = {
            "N": w[:, 1, :].sum(axis=1),
            "Z": w[:, 1, :] @ mu,
            "Lp": w[:, 2, :] @ lp,
            "Lm": w[:, 0, :] @ lm,
        }
        self._corr_cache[key] = blocks
        return blocks

    def correlation(
        self,
        alpha: float,
        beta: float,
        s_star,
        policy: TruncationPolicy,
        conditioned: bool = True,
    ) -> tuple[float, float, HalfInt, bool]:
        """<S_A,alpha S_B,beta>, post-selected on sigma_a = sigma_b = s_star.

        With ``s_star`` None the full (unconditioned) trace over all
        surviving sectors is returned and the sector probability is 1.
        Returns (value, sector_probability, cutoff_used, converged).
        """
        restricted = s_star is not None
        tso = HalfInt.of(s_star).twice if restricted else None
        ca, cb = math.cos(alpha), math.cos(beta)
        sa, sb = math.sin(alpha), math.sin(beta)

        state = {"num": 0.0, "den": 0.0, "applied": -1}

        def add_sector(ts: int) -> None:
            pairs: Iterable[tuple[int, int]]
            if restricted:
                if ts < tso:
                    return
                pairs = [(tso, tso)]
            else:
                pairs = [(ta, tb) for ta in range(ts + 1) for tb in range(ts + 1)]
            for ta, tb in pairs:
                ba = self._corr_blocks("a", ts, ta)
                bb = self._corr_blocks("b", ts, tb)
                zz = float(ba["Z"] @ bb["Z"][::-1])
                lad1 = float(ba["Lp"] @ bb["Lm"][::-1])
                lad2 = float(ba["Lm"] @ bb["Lp"][::-1])
                state["num"] += ca * cb * zz - (sa * sb / 4.0) * (lad1 + lad2)
                state["den"] += float(ba["N"] @ bb["N"][::-1])

        def extend(tcut: int) -> None:
            for ts in range(state["applied"] + 1, tcut + 1):
                add_sector(ts)
            state["applied"] = max(state["applied"], tcut)

        def snapshot() -> np.ndarray:
            return np.array([state["num"], state["den"]])

        floor = tso if restricted else 0
        vals, tcut, ok = self._converge(policy, floor, extend, snapshot)
        num, den = float(vals[0]), float(vals[1])
        if not restricted:
            return num, 1.0, HalfInt(tcut), ok
        if conditioned:
            if den < 1e-300:
                raise DegenerateSectorError(f"sector s={HalfInt(tso)} has probability {den:.3e}")
            return num / den, den, HalfInt(tcut), ok
        return num, den, HalfInt(tcut), ok

    # ------------------------------------------------------- inequality sides

    def mermin_sides(
        self,
        s_star,
        angles: AngleTriple,
        policy: TruncationPolicy | None = None,
        convention: str = "conditioned",
    ) -> ViolationRecord:
        """Both sides of the inequality, post-selected on sector s_star.

        ``convention`` is "conditioned" (both sides divided by the sector
        probability; the experimentally meaningful per-trial estimate) or
        "unconditioned" (raw sector-restricted sums).
        """
        if convention not in ("conditioned", "unconditioned"):
            raise ValueError("convention must be 'conditioned' or 'unconditioned'")
        s_star = HalfInt.of(s_star)
        if s_star.twice < 1:
            raise ValueError("s_star must be at least 1/2")
        if policy is None:
            policy = TruncationPolicy.for_sector(s_star)
        conditioned = convention == "conditioned"
        jd = self.joint(angles.alpha, angles.beta, policy, sectors=(s_star, s_star))
        mass = jd.total_mass()
        if mass < 1e-300:
            raise DegenerateSectorError(f"sector s={s_star} has probability {mass:.3e}")
        lhs_raw = 0.0
        for (_, ma, _, mb), p in jd.entries.items():
            lhs_raw += abs(ma.value - mb.value) * p
        c1, p1, cut1, ok1 = self.correlation(
            angles.alpha, angles.gamma, s_star, policy, conditioned=conditioned
        )
        c2, p2, cut2, ok2 = self.correlation(
            angles.beta, angles.gamma, s_star, policy, conditioned=conditioned
        )
        lhs = s_star.value * (lhs_raw / mass if conditioned else lhs_raw)
        rhs = c1 + c2
        return ViolationRecord(
            s_star=s_star,
            r=self.r,
            loss=self.loss,
            angles=angles,
            lhs=lhs,
            rhs=rhs,
            violation=rhs - lhs,
            sector_probability=p1 if conditioned else mass,
            s_cutoff_used=HalfInt(max(jd.s_cutoff_used.twice, cut1.twice, cut2.twice)),
            converged=jd.converged and ok1 and ok2,
            convention=convention,
        )


# ------------------------------------------------------------- functional API


def lossy_joint_distribution(
    r: float,
    loss: LossConfig,
    alpha: float,
    beta: float,
    policy: TruncationPolicy,
    sectors: tuple | None = None,
) -> JointOutcomeDistribution:
    return LossyEngine(r, loss).joint(alpha, beta, policy, sectors=sectors)


def lossy_correlation(
    r: float,
    loss: LossConfig,
    alpha: float,
    beta: float,
    s_star=None,
    policy: TruncationPolicy | None = None,
    conditioned: bool = True,
) -> float:
    if policy is None:
        policy = TruncationPolicy.for_sector(s_star if s_star is not None else HalfInt(0))
    value, _, _, _ = LossyEngine(r, loss).correlation(alpha, beta, s_star, policy, conditioned)
    return value


def lossy_mermin_sides(
    s_star,
    r: float,
    loss: LossConfig,
    angles: AngleTriple,
    policy: TruncationPolicy | None = None,
    convention: str = "conditioned",
) -> ViolationRecord:
    return LossyEngine(r, loss).mermin_sides(s_star, angles, policy, convention)


def _failure_record(s_star, r, loss, angles, convention, exc) -> ViolationRecord:
    nan = float("nan")
    return ViolationRecord(
        s_star=HalfInt.of(s_star),
        r=r,
        loss=loss,
        angles=angles,
        lhs=nan,
        rhs=nan,
        violation=nan,
        sector_probability=0.0,
        s_cutoff_used=HalfInt(0),
        converged=False,
        convention=convention,
        error=f"{type(exc).__name__}: {exc}",
    )


def sweep(
    s_stars: Iterable,
    rs: Iterable[float],
    etas: Iterable[float],
    thetas: Iterable[float],
    policy: TruncationPolicy | None = None,
    convention: str = "conditioned",
    base_angle: float = 0.0,
) -> list[ViolationRecord]:
    """Evaluate the inequality on a full (s*, r, eta, theta) grid.

    Records come back in lexicographic grid order (s*, then r, then eta,
    then theta); per-point failures become flagged records rather than
    aborting the sweep.  Every grid point is an independent pure evaluation.
    """
    s_list = [HalfInt.of(s) for s in s_stars]
    r_list = [float(r) for r in rs]
    e_list = [float(e) for e in etas]
    t_list = [float(t) for t in thetas]
    if not (s_list and r_list and e_list and t_list):
        raise ValueError("sweep grid must be nonempty on every axis")
    out: list[ViolationRecord] = []
    engines: dict[tuple[float, float], LossyEngine] = {}
    for s_star in s_list:
        pol = policy if policy is not None else TruncationPolicy.for_sector(s_star)
        for r in r_list:
            for eta in e_list:
                eng = engines.get((r, eta))
                if eng is None:
                    eng = LossyEngine(r, LossConfig.equal_eta(eta))
                    engines[(r, eta)] = eng
                for theta in t_list:
                    angles = theta_triple(theta, base_angle)
                    try:
                        rec = eng.mermin_sides(s_star, angles, pol, convention)
                    except (DegenerateSectorError, InternalConsistencyError) as exc:
                        rec = _failure_record(s_star, r, eng.loss, angles, convention, exc)
                    out.append(rec)
    return out


def _golden_min(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Deterministic golden-section minimization on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def optimize_angles(
    s_star,
    r: float,
    loss: LossConfig,
    policy: TruncationPolicy | None = None,
    convention: str = "conditioned",
    starts: Iterable[AngleTriple] | None = None,
) -> tuple[AngleTriple, ViolationRecord]:
    """Maximize the violation over the analyzer triple.

    Multi-start coordinate descent with golden-section line searches; the
    start list is deterministic, so repeated runs return identical triples.
    """
    s_star = HalfInt.of(s_star)
    eng = LossyEngine(r, loss)
    if policy is None:
        policy = TruncationPolicy.for_sector(s_star)

    def objective(a: float, b: float, g: float) -> float:
        angles = AngleTriple(a, b, g)
        return -eng.mermin_sides(s_star, angles, policy, convention).violation

    if starts is None:
        sv = max(s_star.value, 0.5)
        seeds = [0.15 / sv, 0.35 / sv, 0.7 / sv, 1.2 / sv]
        starts = [theta_triple(t) for t in seeds]
        starts.append(AngleTriple(2.0, -1.2, 0.3))
    best: tuple[float, tuple[float, float, float]] | None = None
    for st in starts:
        x = [st.alpha, st.beta, st.gamma]
        fx = objective(*x)
        width = 0.7
        for _ in range(7):
            for i in range(3):
                lo, hi = x[i] - width, x[i] + width

                def line(v, i=i):
                    y = list(x)
                    y[i] = v
                    return objective(*y)

                xv, fv = _golden_min(line, lo, hi, tol=max(1e-7, width * 1e-5))
                if fv < fx:
                    x[i], fx = xv, fv
            width *= 0.45
        if best is None or fx < best[0]:
            best = (fx, tuple(x))
    assert best is not None
    angles = AngleTriple(*best[1])
    record = eng.mermin_sides(s_star, angles, policy, convention)
    return angles, record


# ----------------------------------------------- alternative exponent variant


def correlation_alt_bookkeeping(
    r: float,
    eta: float,
    alpha: float,
    beta: float,
    max_s,
) -> float:
    """Equal-loss crosscorrelation with the alternative exponent bookkeeping.

    This literal transcription keeps a projection-dependent loss exponent
    (1-eta)^(2(2s + 2m - sigma_a - sigma_b)) and shifts the transmission
    exponent by +-1 in the two ladder blocks.  It is retained only so the
    validation report can adjudicate it against the brute-force oracle; the
    production path derives its exponents from the decohered spin operator
    and carries eta^(2 sigma) (1-eta)^(2s-2sigma) per side in every block.
    Unconditioned (full-trace) value, source sum capped at ``max_s``.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError("the alternative bookkeeping is only finite for 0 < eta < 1")
    t_max = HalfInt.of(max_s).twice
    ca, cb = math.cos(alpha), math.cos(beta)
    sa, sb = math.sin(alpha), math.sin(beta)
    ln_eta = math.log(eta)
    ln_1m = math.log1p(-eta)
    total = 0.0
    for ts in range(0, t_max + 1):
        if ts == 0:
            lt4 = -4.0 * math.log(math.cosh(r))
        elif r == 0.0:
            continue
        else:
            lt4 = 2.0 * ts * math.log(math.tanh(r)) - 4.0 * math.log(math.cosh(r))
        s = ts / 2.0
        for tm in range(-ts, ts + 1, 2):
            m = tm / 2.0
            zz = 0.0
            l_up = 0.0
            l_dn = 0.0
            for tsig_a in range(0, ts + 1):
                for tsig_b in range(0, ts + 1):
                    sig_a, sig_b = tsig_a / 2.0, tsig_b / 2.0
                    e_lost = 2.0 * (2 * s + 2 * m - sig_a - sig_b)
                    base = e_lost * ln_1m + lt4
                    for tmu_a in range(-tsig_a, tsig_a + 1, 2):
                        mu_a = tmu_a / 2.0
                        ka = (tsig_a + tmu_a) // 2
                        for tmu_b in range(-tsig_b, tsig_b + 1, 2):
                            mu_b = tmu_b / 2.0
                            kb = (tsig_b + tmu_b) // 2
                            n_up = (ts + tm) // 2
                            n_dn = (ts - tm) // 2
                            # z block
                            lw = (
                                _scalar_lc(n_up, ka)
                                + _scalar_lc(n_dn, (tsig_a - tmu_a) // 2)
                                + _scalar_lc(n_up, kb)
                                + _scalar_lc(n_dn, (tsig_b - tmu_b) // 2)
                            )
                            if lw > _NEG_INF:
                                zz += mu_a * mu_b * math.exp(
                                    lw + base + 2.0 * (sig_a + sig_b) * ln_eta
                                )
                            # raising block
                            lw = 0.5 * (
                                _scalar_lc(n_up, ka)
                                + _scalar_lc(n_up + 1, ka + 1)
                                + _scalar_lc(n_dn, (tsig_a - tmu_a) // 2)
                                + _scalar_lc(n_dn - 1, (tsig_a - tmu_a) // 2 - 1)
                                + _scalar_lc(n_up, kb)
                                + _scalar_lc(n_up + 1, kb + 1)
                                + _scalar_lc(n_dn, (tsig_b - tmu_b) // 2)
                                + _scalar_lc(n_dn - 1, (tsig_b - tmu_b) // 2 - 1)
                            )
                            if lw > _NEG_INF:
                                lad = math.sqrt(
                                    max(sig_a * (sig_a + 1) - mu_a * (mu_a + 1), 0.0)
                                ) * math.sqrt(
                                    max(sig_b * (sig_b + 1) - mu_b * (mu_b + 1), 0.0)
                                )
                                l_up += lad * math.exp(
                                    lw + base + 2.0 * (sig_a + sig_b + 1) * ln_eta
                                )
                            # lowering block
                            lw = 0.5 * (
                                _scalar_lc(n_up, ka)
                                + _scalar_lc(n_up - 1, ka - 1)
                                + _scalar_lc(n_dn, (tsig_a - tmu_a) // 2)
                                + _scalar_lc(n_dn + 1, (tsig_a - tmu_a) // 2 + 1)
                                + _scalar_lc(n_up, kb)
                                + _scalar_lc(n_up - 1, kb - 1)
                                + _scalar_lc(n_dn, (tsig_b - tmu_b) // 2)
                                + _scalar_lc(n_dn + 1, (tsig_b - tmu_b) // 2 + 1)
                            )
                            if lw > _NEG_INF:
                                lad = math.sqrt(
                                    max(sig_a * (sig_a + 1) - mu_a * (mu_a - 1), 0.0)
                                ) * math.sqrt(
                                    max(sig_b * (sig_b + 1) - mu_b * (mu_b - 1), 0.0)
                                )
                                l_dn += lad * math.exp(
                                    lw + base + 2.0 * (sig_a + sig_b - 1) * ln_eta
                                )
            total += ca * cb * zz - (sa * sb / 4.0) * (l_up + l_dn)
    return total


def _scalar_lc(n: int, k: int) -> float:
    if n < 0 or k < 0 or k > n:
        return _NEG_INF
    return _LGF[n] - _LGF[k] - _LGF[n - k]
