"""Periodic-box discretization, spectral transforms, and strong-Lp norms.

The box is [-L/2, L/2)^n with N samples per axis.  Frequencies are measured
in cycles, xi = k / L with k in {-N/2, ..., N/2 - 1}, and the transform pair is

    fhat(xi) = sum_j f(x_j) exp(-2 pi i x_j . xi) * cellvol
    f(x_j)   = (1 / V) sum_k fhat(xi_k) exp(+2 pi i x_j . xi_k),   V = prod(L)

so that the Laplacian acts as multiplication by -4 pi^2 |xi|^2 and Parseval
reads  sum |f|^2 cellvol = sum |fhat|^2 / V.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .errors import ConfigurationError, NumericsError, PrecisionWarning


def fft_workers() -> int:
    """Worker count for FFT calls, capped by the DS_THREADS environment variable."""
    try:
        return max(1, int(os.environ.get("DS_THREADS", "1")))
    except ValueError:
        return 1


def _is_pow2(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Origin-centered periodic box [-L/2, L/2)^n sampled on N points per axis."""

    n: int
    N: tuple[int, ...]
    L: tuple[float, ...]

    def __init__(self, n, N, L):
        object.__setattr__(self, "n", int(n))
        if isinstance(N, (int, np.integer)):
            N = (int(N),) * self.n
        if isinstance(L, (int, float, np.floating, np.integer)):
            L = (float(L),) * self.n
        object.__setattr__(self, "N", tuple(int(v) for v in N))
        object.__setattr__(self, "L", tuple(float(v) for v in L))
        if self.n not in (2, 3):
            raise ConfigurationError(f"dimension must be 2 or 3, got {self.n}")
        if len(self.N) != self.n or len(self.L) != self.n:
            raise ConfigurationError("N and L must have one entry per axis")
        for v in self.N:
            if v < 8 or not _is_pow2(v):
                raise ConfigurationError(f"grid size per axis must be a power of two >= 8, got {v}")
        for v in self.L:
            if not (v > 0):
                raise ConfigurationError(f"box edge length must be positive, got {v}")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.N

    @property
    def cell_volume(self) -> float:
        out = 1.0
        for N, L in zip(self.N, self.L):
            out *= L / N
        return out

    @property
    def box_volume(self) -> float:
        out = 1.0
        for L in self.L:
            out *= L
        return out

    def axis_coordinates(self, i: int) -> np.ndarray:
        """Sample positions along axis i: -L/2 + j L/N."""
        N, L = self.N[i], self.L[i]
        return -L / 2 + (L / N) * np.arange(N)

    def axis_frequencies(self, i: int) -> np.ndarray:
        """Frequencies (cycles per unit length) along axis i, FFT ordering."""
        N, L = self.N[i], self.L[i]
        return scipy.fft.fftfreq(N, d=L / N)

    def coordinate_arrays(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays (sparse meshgrid)."""
        return tuple(np.meshgrid(*[self.axis_coordinates(i) for i in range(self.n)],
                                 indexing="ij", sparse=True))

    def frequency_arrays(self) -> tuple[np.ndarray, ...]:
        """Broadcastable frequency arrays in FFT ordering (sparse meshgrid)."""
        return tuple(np.meshgrid(*[self.axis_frequencies(i) for i in range(self.n)],
                                 indexing="ij", sparse=True))

    def radial_coordinates(self) -> np.ndarray:
        """|x| on the full grid."""
        xs = self.coordinate_arrays()
        r2 = sum(x ** 2 for x in xs)
        return np.sqrt(r2)


@lru_cache(maxsize=128)
def _parity(spec: GridSpec) -> np.ndarray:
    """(-1)^(k1+...+kn) in FFT ordering; the phase shift for the box origin at -L/2."""
    out = np.ones((), dtype=np.float64)
    for i in range(spec.n):
        k = np.rint(spec.axis_frequencies(i) * spec.L[i]).astype(np.int64)
        sign = np.where(k % 2 == 0, 1.0, -1.0)
        shape = [1] * spec.n
        shape[i] = spec.N[i]
        out = out * sign.reshape(shape)
    out.setflags(write=False)
    return out


def _check_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise NumericsError(f"{what} contains NaN or Inf")


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples of a function on a GridSpec box at one model time."""

    spec: GridSpec
    samples: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        arr = np.ascontiguousarray(self.samples, dtype=np.complex128)
        if arr.shape != self.spec.shape:
            raise ValueError(f"sample shape {arr.shape} does not match grid {self.spec.shape}")
        _check_finite(arr, "field samples")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def zeros(cls, spec: GridSpec, time: float = 0.0) -> "Field":
        return cls(spec, np.zeros(spec.shape, dtype=np.complex128), time)

    @classmethod
    def from_function(cls, spec: GridSpec, fn, time: float = 0.0) -> "Field":
        """Sample fn(x1, ..., xn) given broadcastable coordinate arrays."""
        vals = np.broadcast_to(fn(*spec.coordinate_arrays()), spec.shape)
        return cls(spec, np.ascontiguousarray(vals, dtype=np.complex128), time)

    def with_samples(self, samples: np.ndarray, time: float | None = None) -> "Field":
        return Field(self.spec, samples, self.time if time is None else time)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients fhat(xi_k) of a Field, stored in FFT ordering."""

    spec: GridSpec
    coefficients: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        arr = np.ascontiguousarray(self.coefficients, dtype=np.complex128)
        if arr.shape != self.spec.shape:
            raise ValueError(f"coefficient shape {arr.shape} does not match grid {self.spec.shape}")
        _check_finite(arr, "spectral coefficients")
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)
        object.__setattr__(self, "time", float(self.time))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly time-sampled sequence of Fields on one grid."""

    slices: tuple[Field, ...]
    t0: float
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        if not self.slices:
            raise ValueError("trajectory needs at least one slice")
        if not (self.dt > 0):
            raise ValueError(f"slice spacing must be positive, got {self.dt}")
        spec = self.slices[0].spec
        for s in self.slices:
            if s.spec != spec:
                raise ValueError("all trajectory slices must share one grid")

    @property
    def spec(self) -> GridSpec:
        return self.slices[0].spec

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.slices))

    def __len__(self) -> int:
        return len(self.slices)

    def __getitem__(self, j: int) -> Field:
        return self.slices[j]

    def sample_stack(self) -> np.ndarray:
        """All slice samples as one (num_slices, *grid) array."""
        return np.stack([s.samples for s in self.slices])


def forward_transform(f: Field) -> SpectralField:
    """Discrete realization of fhat(xi) = integral f(x) exp(-2 pi i x.xi) dx."""
    coeffs = scipy.fft.fftn(f.samples, workers=fft_workers())
    coeffs *= _parity(f.spec) * f.spec.cell_volume
    return SpectralField(f.spec, coeffs, f.time)


def inverse_transform(g: SpectralField) -> Field:
    """Inverse of forward_transform."""
    arr = scipy.fft.ifftn(g.coefficients * _parity(g.spec), workers=fft_workers())
    arr /= g.spec.cell_volume
    return Field(g.spec, arr, g.time)


def lp_norm(f: Field, p: float) -> float:
    """Riemann-sum L^p norm over the box; p = inf gives the max modulus."""
    if p == np.inf:
        return float(np.max(np.abs(f.samples)))
    if p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return float((np.sum(np.abs(f.samples) ** p) * f.spec.cell_volume) ** (1.0 / p))


def spectral_energy_fraction(f: Field, band: float) -> float:
    """Fraction of spectral energy at frequencies with max_i |xi_i|/nyquist_i > band."""
    g = forward_transform(f)
    mask = np.zeros(f.spec.shape, dtype=bool)
    rel = None
    for i, xi in enumerate(f.spec.frequency_arrays()):
        nyq = f.spec.N[i] / (2.0 * f.spec.L[i])
        r = np.abs(xi) / nyq
        rel = r if rel is None else np.maximum(rel, r)
    mask = rel > band
    total = float(np.sum(np.abs(g.coefficients) ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sum(np.abs(g.coefficients[mask]) ** 2) / total)


def spectral_resample(f: Field, beta: float) -> Field:
    """Samples of x -> f(beta x) by evaluating the trigonometric interpolant.

    The interpolant is the periodic extension of f, so for beta > 1 the result
    wraps around the box; callers comparing against a non-periodic function
    should restrict to the central region.  Band-limitation guard: if the top
    quarter of the spectrum carries >= 1e-8 of the energy (or, for beta > 1,
    if content above nyquist/beta would alias), a PrecisionWarning is issued.
    """
    if not (beta > 0):
        raise ValueError(f"beta must be positive, got {beta}")
    spec = f.spec
    if spectral_energy_fraction(f, 0.75) >= 1e-8:
        warnings.warn("input is not band-limited well inside Nyquist; resampled "
                      "values may lose precision", PrecisionWarning, stacklevel=2)
    elif beta > 1 and spectral_energy_fraction(f, 1.0 / beta) >= 1e-8:
        warnings.warn(f"dilation by beta={beta:g} pushes spectral content past "
                      "Nyquist; resampled values may alias", PrecisionWarning, stacklevel=2)
    coeffs = forward_transform(f).coefficients
    arr = coeffs
    for i in range(spec.n):
        x = spec.axis_coordinates(i)
        xi = spec.axis_frequencies(i)
        A = np.exp(2j * np.pi * beta * np.outer(x, xi))
        arr = np.moveaxis(np.tensordot(A, arr, axes=(1, i)), 0, i)
    return Field(spec, arr / spec.box_volume, f.time)
