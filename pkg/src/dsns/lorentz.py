"""Weak-Lp norms, distribution functions, mixed space-time norms, K-functional.

Everything here works on flat nonnegative sample values carrying one uniform
cell measure (dx for a Field, dt*dx for a Trajectory).  The weak-Lp supremum
sup_l l * mu(|f| > l)^(1/p) is evaluated at the sample values themselves,
which is exact for grid step functions since the discrete distribution
function only jumps there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Field, Trajectory, lp_norm


@dataclass(frozen=True, eq=False)
class SampledMeasureSpace:
    """Nonnegative sample magnitudes with one uniform cell measure."""

    values: np.ndarray
    cell_measure: float

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.float64).ravel()
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample values must be finite")
        if np.any(arr < 0):
            raise ValueError("sample values must be nonnegative magnitudes")
        if not (self.cell_measure > 0):
            raise ValueError(f"cell measure must be positive, got {self.cell_measure}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "cell_measure", float(self.cell_measure))

    @classmethod
    def from_field(cls, f: Field) -> "SampledMeasureSpace":
        return cls(np.abs(f.samples), f.spec.cell_volume)

    @classmethod
    def from_trajectory(cls, u: Trajectory) -> "SampledMeasureSpace":
        return cls(np.abs(u.sample_stack()), u.dt * u.spec.cell_volume)


def distribution_function(s: SampledMeasureSpace, lam: float) -> float:
    """mu({ |f| > lam }) on the sampled space."""
    if not (lam > 0):
        raise ValueError(f"lambda must be positive, got {lam}")
    return float(np.count_nonzero(s.values > lam)) * s.cell_measure


def weak_lp_norm(s: SampledMeasureSpace, p: float) -> float:
    """sup over lam of lam * mu(|f| > lam)^(1/p), evaluated at sample values."""
    if p == np.inf:
        return float(np.max(s.values)) if s.values.size else 0.0
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    vals = np.sort(s.values)[::-1]
    if vals.size == 0 or vals[0] == 0.0:
        return 0.0
    counts = np.arange(1, vals.size + 1, dtype=np.float64)
    return float(np.max(vals * (counts * s.cell_measure) ** (1.0 / p)))


def weak_spacetime_norm(u: Trajectory, p: float) -> float:
    """Weak-Lp norm over the space-time sample pool with measure dt * dx."""
    return weak_lp_norm(SampledMeasureSpace.from_trajectory(u), p)


def mixed_norm(u: Trajectory, q: float, r: float) -> float:
    """L^q in time of the L^r spatial norms: (sum_j dt * |slice_j|_r^q)^(1/q)."""
    for name, v in (("q", q), ("r", r)):
        if v != np.inf and v < 1:
            raise ValueError(f"{name} must be >= 1 or inf, got {v}")
    slice_norms = np.array([lp_norm(s, r) for s in u.slices])
    if q == np.inf:
        return float(np.max(slice_norms))
    return float((np.sum(slice_norms ** q) * u.dt) ** (1.0 / q))


def _threshold_pieces(s: SampledMeasureSpace, p0: float, p1: float,
                      thresholds: np.ndarray | None):
    """Norm pairs (|a 1_{|a|>c}|_p0, |a 1_{|a|<=c}|_p1) for each threshold c.

    Sorted prefix/suffix power sums make every threshold O(1) after one sort.
    Thresholds default to the distinct sample values plus 0.
    """
    vals = np.sort(s.values)[::-1]
    cell = s.cell_measure
    pref0 = np.concatenate([[0.0], np.cumsum(vals ** p0)])
    suf1 = np.concatenate([[0.0], np.cumsum(vals[::-1] ** p1)])[::-1]
    if thresholds is None:
        cs = np.unique(vals)
    else:
        cs = np.asarray(thresholds, dtype=np.float64)
        if np.any(cs < 0):
            raise ValueError("thresholds must be nonnegative")
    # number of samples strictly above each threshold: vals is descending, so
    # -vals is ascending and #{v > c} = #{-v < -c}
    k = np.searchsorted(-vals, -cs, side="left")
    n0 = (pref0[k] * cell) ** (1.0 / p0)
    n1 = (suf1[k] * cell) ** (1.0 / p1)
    return cs, n0, n1


def k_functional(s: SampledMeasureSpace, t: float, p0: float, p1: float,
                 thresholds: np.ndarray | None = None) -> float:
    """Threshold-decomposition upper bound on k(t, a) = inf (|a0|_p0 + t |a1|_p1).

    The infimum is restricted to splits a = a 1_{|a|>c} + a 1_{|a|<=c}; the
    minimizing c ranges over the sample values unless an explicit threshold
    grid is passed.
    """
    if not (t > 0):
        raise ValueError(f"t must be positive, got {t}")
    if not (0 < p0 < p1):
        raise ValueError(f"need 0 < p0 < p1, got p0={p0}, p1={p1}")
    _, n0, n1 = _threshold_pieces(s, p0, p1, thresholds)
    return float(np.min(n0 + t * n1))


def k_functional_curve(s: SampledMeasureSpace, ts: np.ndarray, p0: float, p1: float,
                       thresholds: np.ndarray | None = None) -> np.ndarray:
    """k(t, a) on a grid of t values (shared threshold scan)."""
    ts = np.asarray(ts, dtype=np.float64)
    if np.any(ts <= 0):
        raise ValueError("all t values must be positive")
    if not (0 < p0 < p1):
        raise ValueError(f"need 0 < p0 < p1, got p0={p0}, p1={p1}")
    _, n0, n1 = _threshold_pieces(s, p0, p1, thresholds)
    return np.min(n0[None, :] + ts[:, None] * n1[None, :], axis=1)
