import numpy as np
import pytest

from dsns import (ConfigurationError, Field, GridSpec, MultiplierParams,
                  apply_E, band_limited_field, forward_transform, lp_norm,
                  recover_phi, recover_phi_x1, symbol_value)

from conftest import plane_wave, random_field


def test_symbol_values():
    mp = MultiplierParams(1.0, 2)
    assert symbol_value((1.0, 0.0), mp) == 1.0
    assert symbol_value((1.0, 1.0), mp) == pytest.approx(0.5)
    assert symbol_value((0.0, 5.0), mp) == 0.0
    assert symbol_value((0.0, 0.0), mp) == 0.0
    mp3 = MultiplierParams(2.0, 3)
    assert symbol_value((1.0, 1.0, 1.0), mp3) == pytest.approx(1.0 / 4.0)
    with pytest.raises(ConfigurationError):
        MultiplierParams(0.0, 2)
    with pytest.raises(ConfigurationError):
        MultiplierParams(-1.0, 2)


def test_apply_E_on_cosines(spec2):
    mp = MultiplierParams(1.0, 2)
    x1, x2 = spec2.coordinate_arrays()
    f1 = Field(spec2, np.broadcast_to(np.cos(2 * np.pi * x1), spec2.shape), 0.0)
    out = apply_E(f1, mp)
    assert np.max(np.abs(out.samples - f1.samples)) < 1e-12

    f2 = Field(spec2, np.broadcast_to(np.cos(2 * np.pi * x2), spec2.shape), 0.0)
    assert np.max(np.abs(apply_E(f2, mp).samples)) < 1e-12

    const = Field(spec2, np.ones(spec2.shape, complex), 0.0)
    assert np.max(np.abs(apply_E(const, mp).samples)) < 1e-12


def test_apply_E_matches_symbol_on_plane_waves(spec2):
    mp = MultiplierParams(1.5, 2)
    for k in [(1, 0), (0, 3), (2, 2), (-3, 1), (5, -4)]:
        f = plane_wave(spec2, k)
        xi = tuple(ki / Li for ki, Li in zip(k, spec2.L))
        out = apply_E(f, mp)
        assert np.max(np.abs(out.samples - symbol_value(xi, mp) * f.samples)) < 1e-12


def test_l2_contraction_for_m_at_least_one(spec2):
    mp = MultiplierParams(1.0, 2)
    for seed in range(5):
        f = random_field(spec2, seed, real=True)
        assert lp_norm(apply_E(f, mp), 2.0) <= lp_norm(f, 2.0) * (1 + 1e-12)


def test_lp_ratio_bounded_and_refinement_stable():
    mp = MultiplierParams(1.0, 2)
    worst = {}
    for N in (64, 128):
        spec = GridSpec(2, N, 10.0)
        rng = np.random.default_rng(7)
        worst[N] = {p: 0.0 for p in (4.0 / 3.0, 2.0, 4.0)}
        for _ in range(50):
            f = band_limited_field(spec, rng, band=0.6, real=True)
            Ef = apply_E(f, mp)
            for p in worst[N]:
                d = lp_norm(f, p)
                if d > 0:
                    worst[N][p] = max(worst[N][p], lp_norm(Ef, p) / d)
    for p in (4.0 / 3.0, 2.0, 4.0):
        assert worst[128][p] <= 5.0
        assert 0.8 <= worst[128][p] / worst[64][p] <= 1.2


def test_linearity(spec2):
    mp = MultiplierParams(2.0, 2)
    f = random_field(spec2, 11)
    g = random_field(spec2, 12)
    lhs = apply_E(Field(spec2, 2.0 * f.samples + (1.0 - 0.5j) * g.samples, 0.0), mp)
    rhs = 2.0 * apply_E(f, mp).samples + (1.0 - 0.5j) * apply_E(g, mp).samples
    scale = np.max(np.abs(rhs))
    assert np.max(np.abs(lhs.samples - rhs)) < 1e-12 * scale


def test_translation_commutes(spec2):
    mp = MultiplierParams(1.0, 2)
    f = random_field(spec2, 3, real=True)
    shifted = Field(spec2, np.roll(f.samples, (5, -3), axis=(0, 1)), 0.0)
    lhs = apply_E(shifted, mp).samples
    rhs = np.roll(apply_E(f, mp).samples, (5, -3), axis=(0, 1))
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))


def test_recover_phi_sine(spec2):
    mp = MultiplierParams(1.0, 2)
    x1, _ = spec2.coordinate_arrays()
    g = Field(spec2, np.broadcast_to(np.sin(2 * np.pi * x1), spec2.shape), 0.0)
    phi = recover_phi(g, mp)
    expect = -np.cos(2 * np.pi * np.broadcast_to(x1, spec2.shape)) / (2 * np.pi)
    assert np.max(np.abs(phi.samples - expect)) < 1e-12
    # differentiate back: d(phi)/dx1 must equal the multiplier applied to g
    phihat = forward_transform(phi).coefficients
    xi1 = np.broadcast_to(spec2.frequency_arrays()[0], spec2.shape)
    from dsns.fields import SpectralField, inverse_transform

    dphi = inverse_transform(SpectralField(spec2, 2j * np.pi * xi1 * phihat, 0.0))
    assert np.max(np.abs(dphi.samples - recover_phi_x1(g, mp).samples)) < 1e-10


def test_recover_phi_trivial_cases(spec2):
    mp = MultiplierParams(1.0, 2)
    const = Field(spec2, np.full(spec2.shape, 2.5, dtype=complex), 0.0)
    assert np.max(np.abs(recover_phi(const, mp).samples)) < 1e-12
    _, x2 = spec2.coordinate_arrays()
    g2 = Field(spec2, np.broadcast_to(np.cos(2 * np.pi * x2), spec2.shape), 0.0)
    assert np.max(np.abs(recover_phi(g2, mp).samples)) < 1e-12


@pytest.mark.parametrize("n,m", [(2, 1.0), (2, 2.5), (3, 0.7)])
def test_elliptic_residual(n, m):
    # d^2_x1 phi + m d^2_x2 phi (+ d^2_x3 phi) - d_x1 g == 0 in spectrum
    spec = GridSpec(n, 32 if n == 2 else 16, 8.0)
    mp = MultiplierParams(m, n)
    g = band_limited_field(spec, np.random.default_rng(4), band=0.5, real=True)
    phi = recover_phi(g, mp)
    phihat = forward_transform(phi).coefficients
    ghat = forward_transform(g).coefficients
    xis = [np.broadcast_to(v, spec.shape) for v in spec.frequency_arrays()]
    weights = [1.0, m] + [1.0] * (n - 2)
    lap = sum(-4 * np.pi ** 2 * w * xi ** 2 for w, xi in zip(weights, xis)) * phihat
    resid = lap - 2j * np.pi * xis[0] * ghat
    assert np.max(np.abs(resid)) < 1e-10 * max(np.max(np.abs(ghat)), 1.0)


def test_complex_input_rejected_for_phi(spec2):
    mp = MultiplierParams(1.0, 2)
    f = random_field(spec2, 9)  # genuinely complex
    with pytest.raises(ValueError):
        recover_phi_x1(f, mp)
    with pytest.raises(ValueError):
        recover_phi(f, mp)


def test_grid_dimension_mismatch(spec3):
    mp = MultiplierParams(1.0, 2)
    f = Field(spec3, np.ones(spec3.shape, complex), 0.0)
    with pytest.raises(ValueError):
        apply_E(f, mp)
