"""Admissibility logic and the empirical constant-stability sweep.

The sweep exercises the inhomogeneous space-time inequality: for admissible
exponents, the ratio  |G(F)|_{L^q_t L^r_x} / |F|_{L^{qt'}_t L^{rt'}_x}  must
admit one constant across a parabolic scaling family F(beta x, beta^2 t).
The family is realized exactly on the grid by reinterpreting one sample
array on the rescaled box (L/beta per axis, dt/beta^2), so a spread in the
measured ratios indicates broken measure or exponent bookkeeping, not a
failure of the inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .duhamel import duhamel_G, tt_star
from .fields import GridSpec
from .forcing import band_limited_spacetime_samples, trajectory_from_samples
from .lorentz import mixed_norm

_EQ_TOL = 1e-12


def _dual(v: float) -> float:
    """Holder dual exponent: 1/v + 1/v' = 1."""
    if v == math.inf:
        return 1.0
    return v / (v - 1.0)


def _inv(v: float) -> float:
    return 0.0 if v == math.inf else 1.0 / v


def check_admissible(q: float, r: float, qt: float, rt: float, n: int
                     ) -> tuple[bool, tuple[str, ...]]:
    """Evaluate the admissibility conditions; returns (ok, violated labels)."""
    violations: list[str] = []
    for name, v in (("q", q), ("r", r), ("qt", qt), ("rt", rt)):
        if not (v > 1):
            violations.append(f"exponent-domain: {name} must exceed 1")
    if violations:
        return False, tuple(violations)
    inv_r, inv_rt = _inv(r), _inv(rt)
    inv_q = _inv(q)
    inv_qtp = 1.0 - _inv(qt)   # 1/qt' for the dual of qt
    inv_rtp = 1.0 - inv_rt     # 1/rt'

    if not (r > 2 and rt > 2):
        violations.append("exponent-range: need 2 < r, rt <= inf")
    if not (inv_rtp - inv_r < 2.0 / n):
        violations.append("dispersive-window: need 1/rt' - 1/r < 2/n")
    if abs(inv_qtp - inv_q + (n / 2.0) * (inv_rtp - inv_r) - 1.0) > _EQ_TOL:
        violations.append("scaling-identity: 1/qt' - 1/q + (n/2)(1/rt' - 1/r) must equal 1")
    if n == 2:
        if r == math.inf or rt == math.inf:
            violations.append("finite-r-in-2d: r, rt must be finite when n = 2")
    else:
        lo = (n - 2.0) / n * (1.0 - inv_rtp)
        hi = n / (n - 2.0) * (1.0 - inv_rtp)
        if not (lo <= inv_r <= hi):
            violations.append("r-window-3d: (n-2)/n (1 - 1/rt') <= 1/r <= n/(n-2) (1 - 1/rt')")
    sigma = inv_rtp + inv_r
    if sigma >= 1.0:
        ok_q = (0.0 < inv_q <= inv_qtp < 1.0 - (n / 2.0) * (sigma - 1.0))
    else:
        ok_q = (-(n / 2.0) * (sigma - 1.0) < inv_q <= inv_qtp < 1.0)
    if not ok_q:
        violations.append("q-window: time exponents outside the allowed branch")
    return not violations, tuple(violations)


@dataclass(frozen=True)
class ExponentQuad:
    """Space-time exponent tuple (q, r, qt, rt) with its admissibility verdict."""

    q: float
    r: float
    qt: float
    rt: float
    n: int
    admissible: bool = field(init=False)
    violations: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        for name in ("q", "r", "qt", "rt"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "n", int(self.n))
        ok, bad = check_admissible(self.q, self.r, self.qt, self.rt, self.n)
        object.__setattr__(self, "admissible", ok)
        object.__setattr__(self, "violations", bad)

    @property
    def qt_dual(self) -> float:
        return _dual(self.qt)

    @property
    def rt_dual(self) -> float:
        return _dual(self.rt)


def is_admissible(e: ExponentQuad) -> tuple[bool, tuple[str, ...]]:
    """Admissibility verdict plus the list of violated conditions."""
    return e.admissible, e.violations


@dataclass(frozen=True)
class Prop3Window:
    """Membership in the weak-norm exponent window and the induced source exponent."""

    inside: bool
    r: float
    p: float
    lo: float
    hi: float


def prop3_window(r: float, n: int) -> Prop3Window:
    """Window 2(n+1)/n < r < 2(n+1)(n+2)/n^2 and p with 1/p - 1/r = 2/(n+2)."""
    lo = 2.0 * (n + 1) / n
    hi = 2.0 * (n + 1) * (n + 2) / n ** 2
    p = 1.0 / (1.0 / r + 2.0 / (n + 2))
    return Prop3Window(lo < r < hi, float(r), p, lo, hi)


@dataclass(frozen=True)
class SweepRow:
    beta: float
    sample: int
    ratio_G: float
    ratio_TT: float
    skipped: bool = False


@dataclass(frozen=True)
class SweepReport:
    quad: ExponentQuad
    seed: int
    rows: tuple[SweepRow, ...]
    spread_G: float
    spread_TT: float


def strichartz_ratios(F, e: ExponentQuad, delta: float = 1.0):
    """(ratio_G, ratio_TT) for one forcing trajectory, or None when F = 0."""
    qtp, rtp = e.qt_dual, e.rt_dual
    denom = mixed_norm(F, qtp, rtp)
    if denom == 0.0:
        return None
    g = mixed_norm(duhamel_G(F, delta), e.q, e.r)
    tt = mixed_norm(tt_star(F, delta), e.q, e.r)
    return g / denom, tt / denom


def strichartz_ratio_sweep(e: ExponentQuad, seed: int, scales, samples: int,
                           spec: GridSpec | None = None, num_slices: int = 32,
                           T: float = 1.0, delta: float = 1.0) -> SweepReport:
    """Ratio sweep over seeded forcings and the parabolic scaling family."""
    if not e.admissible:
        raise ValueError(f"exponent quad is not admissible: {', '.join(e.violations)}")
    if spec is None:
        spec = GridSpec(e.n, 64 if e.n == 2 else 32, 10.0)
    rng = np.random.default_rng(seed)
    dt = T / num_slices
    rows: list[SweepRow] = []
    ratios_G: list[float] = []
    ratios_TT: list[float] = []
    for s in range(samples):
        raw = band_limited_spacetime_samples(spec, num_slices, rng, band=0.5)
        for beta in scales:
            beta = float(beta)
            spec_b = GridSpec(spec.n, spec.N, tuple(L / beta for L in spec.L))
            F = trajectory_from_samples(raw, spec_b, 0.0, dt / beta ** 2)
            pair = strichartz_ratios(F, e, delta)
            if pair is None:
                rows.append(SweepRow(beta, s, float("nan"), float("nan"), skipped=True))
                continue
            rows.append(SweepRow(beta, s, pair[0], pair[1]))
            ratios_G.append(pair[0])
            ratios_TT.append(pair[1])

    def spread(vals):
        if not vals:
            return float("nan")
        return max(vals) / min(vals)

    return SweepReport(e, seed, tuple(rows), spread(ratios_G), spread(ratios_TT))
