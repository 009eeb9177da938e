"""Seeded band-limited random fields and space-time forcings.

Spectral coefficients are complex Gaussians shaped by a smooth cosine-taper
envelope that vanishes beyond a fixed fraction of Nyquist; time profiles are
synthesized from a few Fourier harmonics of the window so forcings are smooth
in both variables.  Everything is driven by numpy's Generator so runs are
reproducible from a single integer seed.
"""

from __future__ import annotations

import numpy as np

from .fields import Field, GridSpec, SpectralField, Trajectory, inverse_transform


def _envelope(spec: GridSpec, band: float) -> np.ndarray:
    """Smooth radial taper: 1 at xi = 0, 0 beyond band * Nyquist (per axis)."""
    rel = None
    for i, xi in enumerate(spec.frequency_arrays()):
        nyq = spec.N[i] / (2.0 * spec.L[i])
        r = (xi / (band * nyq)) ** 2
        rel = r if rel is None else rel + r
    rel = np.sqrt(np.broadcast_to(rel, spec.shape))
    env = np.where(rel < 1.0, np.cos(0.5 * np.pi * np.clip(rel, 0.0, 1.0)) ** 2, 0.0)
    return env


def band_limited_field(spec: GridSpec, rng: np.random.Generator, band: float = 0.5,
                       real: bool = False, time: float = 0.0) -> Field:
    """Random band-limited field with unit-scale L2 norm."""
    coeffs = (rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape))
    coeffs *= _envelope(spec, band)
    f = inverse_transform(SpectralField(spec, coeffs, time))
    vals = f.samples.real.astype(np.complex128) if real else f.samples
    scale = float(np.max(np.abs(vals)))
    if scale > 0:
        vals = vals / scale
    return Field(spec, vals, time)


def band_limited_spacetime_samples(spec: GridSpec, num_slices: int,
                                   rng: np.random.Generator, band: float = 0.5,
                                   time_harmonics: int = 4) -> np.ndarray:
    """Raw samples (num_slices + 1, *grid) of a smooth random space-time forcing.

    The array is grid-metadata free: reinterpreting it on a rescaled grid
    (L -> L/beta, dt -> dt/beta^2) gives exactly the parabolic rescaling
    F(beta x, beta^2 t) of the same underlying forcing.
    """
    coeffs = (rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape))
    coeffs *= _envelope(spec, band)
    base = inverse_transform(SpectralField(spec, coeffs, 0.0)).samples
    tgrid = np.linspace(0.0, 1.0, num_slices + 1)
    profile = np.zeros(num_slices + 1, dtype=np.complex128)
    for w in range(time_harmonics):
        aw = rng.standard_normal() + 1j * rng.standard_normal()
        profile += aw * np.exp(2j * np.pi * w * tgrid)
    # second independent spatial shape keeps the forcing non-separable
    coeffs2 = (rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape))
    coeffs2 *= _envelope(spec, band)
    base2 = inverse_transform(SpectralField(spec, coeffs2, 0.0)).samples
    profile2 = np.zeros(num_slices + 1, dtype=np.complex128)
    for w in range(time_harmonics):
        aw = rng.standard_normal() + 1j * rng.standard_normal()
        profile2 += aw * np.exp(2j * np.pi * w * tgrid)
    out = np.multiply.outer(profile, base) + np.multiply.outer(profile2, base2)
    scale = float(np.max(np.abs(out)))
    if scale > 0:
        out = out / scale
    return out


def trajectory_from_samples(samples: np.ndarray, spec: GridSpec, t0: float,
                            dt: float) -> Trajectory:
    """Wrap a (J+1, *grid) sample array as a Trajectory on the given grid."""
    slices = [Field(spec, samples[j], t0 + j * dt) for j in range(samples.shape[0])]
    return Trajectory(tuple(slices), t0, dt)
