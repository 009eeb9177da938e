import numpy as np
import pytest

from dsns import (ConfigurationError, Field, GridSpec, PrecisionWarning,
                  forward_transform, inverse_transform, lp_norm,
                  spectral_energy_fraction, spectral_resample)
from dsns.lorentz import SampledMeasureSpace, weak_lp_norm

from conftest import gaussian_field, plane_wave, random_field


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        GridSpec(1, 64, 10.0)
    with pytest.raises(ConfigurationError):
        GridSpec(2, 48, 10.0)  # not a power of two
    with pytest.raises(ConfigurationError):
        GridSpec(2, 4, 10.0)   # below the minimum size
    with pytest.raises(ConfigurationError):
        GridSpec(2, 64, -1.0)
    spec = GridSpec(2, (64, 128), (10.0, 20.0))
    assert spec.shape == (64, 128)
    assert spec.cell_volume == pytest.approx((10.0 / 64) * (20.0 / 128))


def test_constant_field_spectrum(spec2):
    f = Field(spec2, np.ones(spec2.shape, dtype=complex), 0.0)
    g = forward_transform(f)
    # all mass at xi = 0, value = box volume
    assert abs(g.coefficients[0, 0] - spec2.box_volume) < 1e-9
    off = g.coefficients.copy()
    off[0, 0] = 0.0
    assert np.max(np.abs(off)) < 1e-12 * spec2.box_volume


def test_plane_wave_single_coefficient(spec2):
    f = plane_wave(spec2, (3, -2))
    g = forward_transform(f).coefficients.copy()
    k = np.rint(spec2.axis_frequencies(0) * spec2.L[0]).astype(int)
    i = int(np.where(k == 3)[0][0])
    j = int(np.where(np.rint(spec2.axis_frequencies(1) * spec2.L[1]).astype(int) == -2)[0][0])
    assert abs(g[i, j] - spec2.box_volume) < 1e-9
    g[i, j] = 0.0
    assert np.max(np.abs(g)) < 1e-10 * spec2.box_volume


@pytest.mark.parametrize("n,N", [(2, 64), (2, 128), (3, 16), (3, 32)])
def test_roundtrip_and_parseval(n, N):
    spec = GridSpec(n, N, 7.5)
    f = random_field(spec, seed=n * 100 + N)
    g = forward_transform(f)
    back = inverse_transform(g)
    assert np.max(np.abs(back.samples - f.samples)) <= 1e-12 * np.max(np.abs(f.samples))
    lhs = np.sum(np.abs(f.samples) ** 2) * spec.cell_volume
    rhs = np.sum(np.abs(g.coefficients) ** 2) / spec.box_volume
    assert abs(lhs - rhs) <= 1e-12 * lhs


def test_single_coefficient_inverse(spec2):
    coeffs = np.zeros(spec2.shape, dtype=complex)
    # place the box-volume weight on mode k = (1, 2)
    k0 = np.rint(spec2.axis_frequencies(0) * spec2.L[0]).astype(int)
    k1 = np.rint(spec2.axis_frequencies(1) * spec2.L[1]).astype(int)
    i, j = int(np.where(k0 == 1)[0][0]), int(np.where(k1 == 2)[0][0])
    coeffs[i, j] = spec2.box_volume
    from dsns.fields import SpectralField

    f = inverse_transform(SpectralField(spec2, coeffs, 0.0))
    expect = plane_wave(spec2, (1, 2))
    assert np.max(np.abs(f.samples - expect.samples)) < 1e-12


def test_zero_spectrum_zero_field(spec2):
    from dsns.fields import SpectralField

    f = inverse_transform(SpectralField(spec2, np.zeros(spec2.shape, complex), 0.0))
    assert np.max(np.abs(f.samples)) == 0.0


def test_lp_norm_box_indicator():
    spec = GridSpec(2, 32, 3.0)
    f = Field(spec, np.ones(spec.shape, complex), 0.0)
    assert lp_norm(f, 1.0) == pytest.approx(3.0 ** 2, rel=1e-14)
    assert lp_norm(f, np.inf) == 1.0
    with pytest.raises(ValueError):
        lp_norm(f, 0.5)


@pytest.mark.parametrize("n,N,L", [(2, 128, 20.0), (3, 64, 12.0)])
def test_gaussian_l2_norm(n, N, L):
    # int exp(-2 pi |x|^2) dx = 2^(-n/2), so the L2 norm is 2^(-n/4)
    spec = GridSpec(n, N, L)
    f = gaussian_field(spec)
    assert lp_norm(f, 2.0) == pytest.approx(2.0 ** (-n / 4.0), abs=1e-6)


def test_lp_scaling_change_of_variables(spec2):
    # |f(beta .)|_p = beta^(-n/p) |f|_p; discretely the dilation pushes the
    # cell measure to cell / beta^n while the sample values are unchanged
    two = Field(spec2, plane_wave(spec2, (1, 1)).samples
                + 0.5 * plane_wave(spec2, (2, 0)).samples, 0.0)
    dil = spectral_resample(two, 2.0)
    beta = 2.0
    for p in (2.0, 4.0):
        # on-lattice periodic dilation covers full periods: same box Lp norm
        assert lp_norm(dil, p) == pytest.approx(lp_norm(two, p), rel=1e-10)
        base = SampledMeasureSpace.from_field(two)
        pushed = SampledMeasureSpace(base.values, base.cell_measure / beta ** spec2.n)
        assert weak_lp_norm(pushed, p) == pytest.approx(
            beta ** (-spec2.n / p) * weak_lp_norm(base, p), rel=1e-12)


def test_resample_identity(spec2):
    f = gaussian_field(spec2)
    g = spectral_resample(f, 1.0)
    assert np.max(np.abs(g.samples - f.samples)) < 1e-12


def test_resample_plane_wave(spec2):
    f = plane_wave(spec2, (1, 0))
    g = spectral_resample(f, 2.0)
    expect = plane_wave(spec2, (2, 0))
    assert np.max(np.abs(g.samples - expect.samples)) < 1e-11


def test_resample_gaussian_halfbox():
    spec = GridSpec(2, 256, 20.0)
    f = gaussian_field(spec)
    g = spectral_resample(f, 2.0)
    xs = spec.coordinate_arrays()
    r2 = np.broadcast_to(sum(x ** 2 for x in xs), spec.shape)
    # beyond the half box 2x wraps around the torus, so compare centrally
    mask = np.ones(spec.shape, bool)
    for x in xs:
        mask &= np.broadcast_to(np.abs(x) <= spec.L[0] / 4, spec.shape)
    exact = np.exp(-4.0 * np.pi * r2)
    assert np.max(np.abs(g.samples - exact)[mask]) < 1e-8


def test_resample_roundtrip_band_limited():
    spec = GridSpec(2, 64, 10.0)
    from dsns import band_limited_field

    f = band_limited_field(spec, np.random.default_rng(5), band=0.3)
    back = spectral_resample(spectral_resample(f, 2.0), 0.5)
    assert np.max(np.abs(back.samples - f.samples)) <= 1e-8


def test_resample_guard_warns(spec2):
    f = random_field(spec2, seed=1)  # white field: top quarter carries energy
    with pytest.warns(PrecisionWarning):
        spectral_resample(f, 2.0)
    with pytest.raises(ValueError):
        spectral_resample(f, -1.0)


def test_energy_fraction(spec2):
    f = plane_wave(spec2, (1, 0))
    assert spectral_energy_fraction(f, 0.75) < 1e-15
    nyq = plane_wave(spec2, (spec2.N[0] // 2 - 1, 0))
    assert spectral_energy_fraction(nyq, 0.75) > 0.99


def test_field_rejects_nan(spec2):
    bad = np.ones(spec2.shape, complex)
    bad[0, 0] = np.nan
    from dsns import NumericsError

    with pytest.raises(NumericsError):
        Field(spec2, bad, 0.0)
