"""The nonlocal mean-flow operator: a bounded, real, even Fourier multiplier.

The symbol is p(xi) = xi_1^2 / (xi_1^2 + m xi_2^2 + sum_{j>=3} xi_j^2) with
p(0) := 0, so the operator annihilates constants and the mean-flow potential
is recovered in the mean-free gauge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, NumericsError
from .fields import Field, GridSpec, SpectralField, forward_transform, inverse_transform

#: imaginary mass above this fraction of the field scale fails realness checks
_REAL_TOL = 1e-12


@dataclass(frozen=True)
class MultiplierParams:
    """Ellipticity parameter m > 0 of the mean-flow equation, and the dimension."""

    m: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "n", int(self.n))
        if not (self.m > 0):
            raise ConfigurationError(f"ellipticity parameter m must be positive, got {self.m}")
        if self.n not in (2, 3):
            raise ConfigurationError(f"dimension must be 2 or 3, got {self.n}")


def symbol_value(xi, mp: MultiplierParams) -> float:
    """p(xi) at a single frequency vector."""
    xi = tuple(float(v) for v in xi)
    if len(xi) != mp.n:
        raise ValueError(f"frequency vector has {len(xi)} components, expected {mp.n}")
    denom = xi[0] ** 2 + mp.m * xi[1] ** 2 + sum(v ** 2 for v in xi[2:])
    if denom == 0.0:
        return 0.0
    return xi[0] ** 2 / denom


@lru_cache(maxsize=128)
def _symbol_grid(spec: GridSpec, mp: MultiplierParams) -> np.ndarray:
    xis = spec.frequency_arrays()
    denom = xis[0] ** 2 + mp.m * xis[1] ** 2
    for xi in xis[2:]:
        denom = denom + xi ** 2
    denom = np.broadcast_to(denom, spec.shape).copy()
    num = np.broadcast_to(xis[0] ** 2, spec.shape)
    zero = denom == 0.0
    denom[zero] = 1.0
    out = num / denom
    out[zero] = 0.0
    out.setflags(write=False)
    return out


def _field_scale(f: Field) -> float:
    return float(np.max(np.abs(f.samples)))


def _looks_real(f: Field, tol: float) -> bool:
    scale = _field_scale(f)
    if scale == 0.0:
        return True
    return float(np.max(np.abs(f.samples.imag))) <= tol * scale


def apply_E(f: Field, mp: MultiplierParams) -> Field:
    """Apply the multiplier: inverse(p(xi) * forward(f)).

    For real input the output is real as well (the symbol is real and even);
    the imaginary residue is measured and discarded when below 1e-12 of the
    field scale, and a NumericsError is raised otherwise.
    """
    if f.spec.n != mp.n:
        raise ValueError(f"field dimension {f.spec.n} does not match multiplier dimension {mp.n}")
    was_real = _looks_real(f, _REAL_TOL)
    g = forward_transform(f)
    out = inverse_transform(SpectralField(g.spec, _symbol_grid(f.spec, mp) * g.coefficients, g.time))
    if was_real:
        scale = max(_field_scale(out), _field_scale(f))
        if scale > 0.0 and float(np.max(np.abs(out.samples.imag))) > _REAL_TOL * scale:
            raise NumericsError("multiplier output on a real field has a non-negligible "
                                "imaginary part; symbol symmetry is broken")
        return Field(f.spec, out.samples.real.astype(np.complex128), f.time)
    return out


def recover_phi_x1(g: Field, mp: MultiplierParams) -> Field:
    """d(phi)/dx1 for the mean-flow potential phi: equals the multiplier applied to g."""
    if not _looks_real(g, 1e-10):
        raise ValueError("mean-flow source must be real-valued")
    return apply_E(g, mp)


def recover_phi(g: Field, mp: MultiplierParams) -> Field:
    """Mean-free solution phi of  d^2_{x1} phi + m d^2_{x2} phi (+ d^2_{x3} phi) = d_{x1} g.

    In frequency space phi_hat = 2 pi i xi_1 g_hat / (-4 pi^2 (xi_1^2 + m xi_2^2 + ...))
    away from xi = 0, with phi_hat(0) = 0.
    """
    if g.spec.n != mp.n:
        raise ValueError(f"field dimension {g.spec.n} does not match multiplier dimension {mp.n}")
    if not _looks_real(g, 1e-10):
        raise ValueError("mean-flow source must be real-valued")
    ghat = forward_transform(g)
    xis = g.spec.frequency_arrays()
    denom = xis[0] ** 2 + mp.m * xis[1] ** 2
    for xi in xis[2:]:
        denom = denom + xi ** 2
    denom = np.broadcast_to(-4.0 * np.pi ** 2 * denom, g.spec.shape).copy()
    zero = denom == 0.0
    denom[zero] = 1.0
    phihat = (2j * np.pi * np.broadcast_to(xis[0], g.spec.shape)) * ghat.coefficients / denom
    phihat[zero] = 0.0
    phi = inverse_transform(SpectralField(g.spec, phihat, g.time))
    return Field(g.spec, phi.samples.real.astype(np.complex128), g.time)
