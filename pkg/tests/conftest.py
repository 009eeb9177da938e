import numpy as np
import pytest

from dsns import Field, GridSpec


@pytest.fixture
def spec2() -> GridSpec:
    return GridSpec(2, 64, 10.0)


@pytest.fixture
def spec3() -> GridSpec:
    return GridSpec(3, 16, 6.0)


def gaussian_field(spec: GridSpec, amp: float = 1.0, width: float = 1.0) -> Field:
    r2 = sum(x ** 2 for x in spec.coordinate_arrays())
    vals = amp * np.exp(-np.pi * r2 / width ** 2)
    return Field(spec, np.broadcast_to(vals, spec.shape).astype(np.complex128), 0.0)


def random_field(spec: GridSpec, seed: int, real: bool = False) -> Field:
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(spec.shape) + (0 if real else 1j * rng.standard_normal(spec.shape))
    return Field(spec, vals.astype(np.complex128), 0.0)


def plane_wave(spec: GridSpec, k: tuple) -> Field:
    """exp(2 pi i x . xi) with xi = k / L (an exact lattice mode)."""
    xs = spec.coordinate_arrays()
    phase = sum(x * (ki / Li) for x, ki, Li in zip(xs, k, spec.L))
    return Field(spec, np.broadcast_to(np.exp(2j * np.pi * phase), spec.shape), 0.0)
