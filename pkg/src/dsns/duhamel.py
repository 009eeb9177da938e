"""Duhamel-type integral operators and the small-data Picard solver.

The inhomogeneous term G(F)(t) = int_0^t U(t-s) F(s) ds is computed per
spectral mode by the recursive trapezoid update

    Ghat(t_{j+1}) = e^{-i dt psi} Ghat(t_j)
                    + (dt/2) (e^{-i dt psi} Fhat(t_j) + Fhat(t_{j+1})),

which is O(J) per mode.  The two-sided operator applies U(t_j) to a single
precomputed weighted sum.  The fixed-point map iterated by the solver is

    Phi(u)(t) = U(t) u0 - i G(chi |u|^a u + b u E(|u|^a))(t);

the -i sign is the one consistent with i u_t + Delta u = N and U(t) = e^{i t Delta}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import NumericsError
from .fields import (Field, SpectralField, Trajectory, fft_workers,
                     forward_transform, inverse_transform)
from .lorentz import weak_spacetime_norm
from .multiplier import apply_E
from .propagator import ModelParams, _psi_grid, free_trajectory


def duhamel_G(F: Trajectory, delta: float = 1.0) -> Trajectory:
    """Trapezoid discretization of int_0^t U(t-s) F(s) ds on F's time grid."""
    if abs(F.t0) > 1e-12:
        raise ValueError(f"forcing must start at t = 0, got t0 = {F.t0}")
    spec = F.spec
    psi = _psi_grid(spec, float(delta))
    step = np.exp(-1j * F.dt * psi)
    fhat_prev = forward_transform(F.slices[0]).coefficients
    ghat = np.zeros(spec.shape, dtype=np.complex128)
    out = [Field.zeros(spec, F.slices[0].time)]
    for j in range(1, len(F.slices)):
        fhat_next = forward_transform(F.slices[j]).coefficients
        ghat = step * ghat + (F.dt / 2.0) * (step * fhat_prev + fhat_next)
        g = inverse_transform(SpectralField(spec, ghat, F.slices[j].time))
        out.append(Field(spec, g.samples, F.slices[j].time))
        fhat_prev = fhat_next
    return Trajectory(tuple(out), F.t0, F.dt)


def tt_star(F: Trajectory, delta: float = 1.0) -> Trajectory:
    """Trapezoid discretization of int U(t - tau) F(tau) dtau over F's window.

    Computed as U(t_j) applied to the precomputed sum S = sum_k w_k U(-t_k) F(t_k);
    the forcing is treated as zero outside the stored window.
    """
    spec = F.spec
    psi = _psi_grid(spec, float(delta))
    times = F.times
    weights = np.full(len(F.slices), F.dt)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    if len(F.slices) == 1:
        weights[:] = F.dt
    S = np.zeros(spec.shape, dtype=np.complex128)
    for w, t, s in zip(weights, times, F.slices):
        S += w * np.exp(1j * t * psi) * forward_transform(s).coefficients
    out = []
    for t, s in zip(times, F.slices):
        g = inverse_transform(SpectralField(spec, np.exp(-1j * t * psi) * S, t))
        out.append(Field(spec, g.samples, s.time))
    return Trajectory(tuple(out), F.t0, F.dt)


def nonlinearity(u: Trajectory, mp: ModelParams) -> Trajectory:
    """Slice-wise chi |u|^a u + b u E(|u|^a)."""
    out = []
    for s in u.slices:
        amp = np.abs(s.samples) ** mp.alpha
        vals = mp.chi * amp * s.samples
        if mp.b != 0.0:
            e_amp = apply_E(Field(s.spec, amp.astype(np.complex128), s.time), mp.multiplier)
            vals = vals + mp.b * s.samples * e_amp.samples.real
        out.append(Field(s.spec, vals, s.time))
    return Trajectory(tuple(out), u.t0, u.dt)


def apply_phi(u: Trajectory, free: Trajectory, mp: ModelParams) -> Trajectory:
    """One application of the fixed-point map given the precomputed free part."""
    G = duhamel_G(nonlinearity(u, mp), mp.delta)
    out = [Field(f.spec, f.samples - 1j * g.samples, f.time)
           for f, g in zip(free.slices, G.slices)]
    return Trajectory(tuple(out), u.t0, u.dt)


@dataclass(frozen=True)
class PicardReport:
    """Convergence record of a Picard run."""

    iterates: int
    weak_dists: tuple[float, ...]
    l2_dists: tuple[float, ...]
    converged: bool
    contraction_ratio: float
    iterate_weak_norms: tuple[float, ...]


def _sup_l2_distance(u: Trajectory, v: Trajectory) -> float:
    cell = u.spec.cell_volume
    out = 0.0
    for a, b in zip(u.slices, v.slices):
        out = max(out, float(np.linalg.norm(a.samples - b.samples)) * cell ** 0.5)
    return out


def _diff_trajectory(u: Trajectory, v: Trajectory) -> Trajectory:
    out = [Field(a.spec, a.samples - b.samples, a.time) for a, b in zip(u.slices, v.slices)]
    return Trajectory(tuple(out), u.t0, u.dt)


def _geometric_fit(dists) -> float:
    pos = [d for d in dists if d > 0]
    if len(pos) < 2:
        return 0.0
    k = np.arange(len(pos))
    slope = np.polyfit(k, np.log(pos), 1)[0]
    return float(np.exp(slope))


def picard_solve(u0: Field, mp: ModelParams, T: float, dt: float,
                 max_iter: int = 25, tol: float = 1e-10) -> tuple[Trajectory, PicardReport]:
    """Iterate u <- Phi(u) from the free evolution until both distances drop below tol.

    Convergence is declared jointly on the weak space-time norm (exponent
    a(n+2)/2) and the sup-in-t L2 norm of successive differences.  Exceeding
    max_iter returns a diverged report rather than raising; NaN aborts with
    the iterate index.
    """
    p_weak = mp.alpha * (mp.n + 2) / 2.0
    free = free_trajectory(u0, T, dt, mp.delta)
    u = free
    weak_dists: list[float] = []
    l2_dists: list[float] = []
    norms = [weak_spacetime_norm(u, p_weak)]
    converged = False
    iterates = 0
    for k in range(max_iter):
        try:
            nxt = apply_phi(u, free, mp)
        except NumericsError as err:
            raise NumericsError(f"Picard iterate {k + 1}: {err}") from err
        iterates = k + 1
        wd = weak_spacetime_norm(_diff_trajectory(nxt, u), p_weak)
        ld = _sup_l2_distance(nxt, u)
        weak_dists.append(wd)
        l2_dists.append(ld)
        norms.append(weak_spacetime_norm(nxt, p_weak))
        u = nxt
        if wd < tol and ld < tol:
            converged = True
            break
    report = PicardReport(
        iterates=iterates,
        weak_dists=tuple(weak_dists),
        l2_dists=tuple(l2_dists),
        converged=converged,
        contraction_ratio=_geometric_fit(weak_dists),
        iterate_weak_norms=tuple(norms),
    )
    return u, report


@dataclass(frozen=True, eq=False)
class ScatteringResult:
    """Forward scattering state and the Cauchy-tail diagnostic."""

    u_plus: Field
    cauchy_tail: float


def scattering_limits(u: Trajectory, mp: ModelParams) -> ScatteringResult:
    """Approximate u+ = u0 - i int_0^inf U(-tau) N(u)(tau) dtau on the window.

    Also reports |v(T) - v(T/2)|_2 for v(t) = U(-t) u(t), the Cauchy-tail
    measure that shrinks as the window grows for scattering solutions.
    """
    spec = u.spec
    psi = _psi_grid(spec, mp.delta)
    N = nonlinearity(u, mp)
    times = u.times
    weights = np.full(len(u.slices), u.dt)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    acc = np.zeros(spec.shape, dtype=np.complex128)
    for w, t, s in zip(weights, times, N.slices):
        acc += w * np.exp(1j * t * psi) * forward_transform(s).coefficients
    u0hat = forward_transform(u.slices[0]).coefficients
    uplus = inverse_transform(SpectralField(spec, u0hat - 1j * acc, 0.0))

    def v_at(j: int) -> np.ndarray:
        hat = forward_transform(u.slices[j]).coefficients
        return inverse_transform(SpectralField(spec, np.exp(1j * times[j] * psi) * hat, 0.0)).samples

    j_end = len(u.slices) - 1
    j_mid = j_end // 2
    tail = float(np.linalg.norm(v_at(j_end) - v_at(j_mid))) * spec.cell_volume ** 0.5
    return ScatteringResult(Field(spec, uplus.samples, 0.0), tail)
