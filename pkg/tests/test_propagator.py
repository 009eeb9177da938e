import numpy as np
import pytest

from dsns import (ConfigurationError, Field, GridSpec, ModelParams,
                  NumericsError, alpha_window, free_evolve, free_trajectory,
                  group_property_check, lp_norm, nonlinear_phase_step,
                  spectral_resample, split_step_evolve)

from conftest import gaussian_field, plane_wave, random_field


def test_alpha_window_endpoints():
    assert alpha_window(2) == (1.5, 3.0)
    lo, hi = alpha_window(3)
    assert lo == pytest.approx(16.0 / 15.0)
    assert hi == pytest.approx(16.0 / 9.0)
    with pytest.raises(ConfigurationError):
        ModelParams(1.0, 1.0, 0.0, 1.0, 3.5, 2)
    with pytest.raises(ConfigurationError):
        ModelParams(0.5, 1.0, 0.0, 1.0, 2.0, 2)
    # chi = 0 is allowed for linear diagnostics
    ModelParams(1.0, 0.0, 0.0, 1.0, 2.0, 2)


def test_free_evolve_identity_and_eigenfunction(spec2):
    f = random_field(spec2, 0)
    out = free_evolve(f, 0.0)
    assert np.max(np.abs(out.samples - f.samples)) == 0.0

    k = (2, -1)
    w = plane_wave(spec2, k)
    xi = tuple(ki / Li for ki, Li in zip(k, spec2.L))
    for delta in (1.0, -1.0):
        psi = 4 * np.pi ** 2 * (delta * xi[0] ** 2 + xi[1] ** 2)
        out = free_evolve(w, 0.37, delta)
        assert np.max(np.abs(out.samples - np.exp(-1j * 0.37 * psi) * w.samples)) < 1e-13


def test_gaussian_closed_form():
    spec = GridSpec(2, 256, 20.0)
    f = gaussian_field(spec)
    r2 = np.broadcast_to(sum(x ** 2 for x in spec.coordinate_arrays()), spec.shape)
    for t in (0.05, 0.1, 0.25):
        out = free_evolve(f, t, 1.0)
        a = 1 + 4j * np.pi * t
        exact = a ** (-spec.n / 2) * np.exp(-np.pi * r2 / a)
        assert np.max(np.abs(out.samples - exact)) <= 1e-8


def test_unitarity_and_group(spec2):
    f = random_field(spec2, 5)
    n0 = lp_norm(f, 2.0)
    for t in (0.1, 0.45, 3.0, -1.2):
        assert abs(lp_norm(free_evolve(f, t), 2.0) - n0) <= 1e-13 * n0
    assert group_property_check(f, 0.0, 0.0) == 0.0
    assert group_property_check(f, 0.3, -0.3) <= 1e-12
    assert group_property_check(f, 0.1, 0.25) <= 1e-12
    assert group_property_check(f, 0.2, 0.7, delta=-1.0) <= 1e-12


def test_free_trajectory_matches_pointwise(spec2):
    f = random_field(spec2, 8)
    u = free_trajectory(f, 0.5, 0.1, 1.0)
    assert len(u) == 6
    for j, t in enumerate(u.times):
        direct = free_evolve(f, float(t))
        assert np.max(np.abs(u.slices[j].samples - direct.samples)) < 1e-12


def test_nonlinear_phase_step_basics(spec2):
    mp = ModelParams(1.0, 1.0, 1.0, 1.0, 2.0, 2)
    zero = Field.zeros(spec2)
    assert np.max(np.abs(nonlinear_phase_step(zero, 0.1, mp).samples)) == 0.0

    c = 0.7 - 0.2j
    const = Field(spec2, np.full(spec2.shape, c), 0.0)
    mp_b0 = ModelParams(1.0, 1.0, 0.0, 1.0, 2.0, 2)
    out = nonlinear_phase_step(const, 0.3, mp_b0)
    expect = c * np.exp(-1j * 0.3 * abs(c) ** 2)
    assert np.max(np.abs(out.samples - expect)) < 1e-14

    f = random_field(spec2, 2)
    out = nonlinear_phase_step(f, 0.25, mp)
    assert np.max(np.abs(np.abs(out.samples) - np.abs(f.samples))) <= 1e-13
    assert abs(lp_norm(out, 2.0) - lp_norm(f, 2.0)) <= 1e-13 * lp_norm(f, 2.0)


def test_split_step_linear_reduction(spec2):
    mp = ModelParams(1.0, 0.0, 0.0, 1.0, 2.0, 2)
    f = gaussian_field(spec2, amp=0.5)
    u = split_step_evolve(f, 0.2, 0.02, mp)
    for j, t in enumerate(u.times):
        direct = free_evolve(f, float(t))
        assert np.max(np.abs(u.slices[j].samples - direct.samples)) < 1e-12


def test_split_step_mass_conservation():
    spec = GridSpec(2, 64, 10.0)
    mp = ModelParams(1.0, 1.0, 1.0, 1.0, 2.0, 2)
    f = gaussian_field(spec, amp=1.0)
    u = split_step_evolve(f, 1.0, 0.001, mp, store_every=1000)
    m0, m1 = lp_norm(u.slices[0], 2.0), lp_norm(u.slices[-1], 2.0)
    assert abs(m1 - m0) / m0 <= 1e-10


def test_strang_self_convergence_order():
    spec = GridSpec(2, 128, 10.0)
    mp = ModelParams(1.0, 1.0, 1.0, 1.0, 2.0, 2)
    f = gaussian_field(spec, amp=1.0)
    finals = []
    for dt in (0.02, 0.01, 0.005):
        u = split_step_evolve(f, 0.5, dt, mp, store_every=round(0.5 / dt))
        finals.append(u.slices[-1].samples)
    e1 = np.linalg.norm(finals[0] - finals[1])
    e2 = np.linalg.norm(finals[1] - finals[2])
    order = np.log2(e1 / e2)
    assert 1.7 <= order <= 2.3


def test_lie_splitting_first_order():
    spec = GridSpec(2, 64, 10.0)
    mp = ModelParams(1.0, 1.0, 0.0, 1.0, 2.0, 2)
    f = gaussian_field(spec, amp=1.0)
    finals = []
    for dt in (0.02, 0.01, 0.005):
        u = split_step_evolve(f, 0.4, dt, mp, order=1, store_every=round(0.4 / dt))
        finals.append(u.slices[-1].samples)
    order = np.log2(np.linalg.norm(finals[0] - finals[1])
                    / np.linalg.norm(finals[1] - finals[2]))
    assert 0.7 <= order <= 1.3


def test_time_reversal():
    spec = GridSpec(2, 64, 10.0)
    mp = ModelParams(1.0, 1.0, 1.0, 1.0, 2.0, 2)
    f = gaussian_field(spec, amp=1.0)
    fwd = split_step_evolve(f, 0.3, 0.01, mp, store_every=30)
    # backward trajectories come out time-ordered: the endpoint is slice 0
    back = split_step_evolve(fwd.slices[-1], -0.3, -0.01, mp, store_every=30)
    assert np.max(np.abs(back.slices[0].samples - f.samples)) <= 1e-8


def test_scaling_covariance_of_flow():
    # u_beta(x, t) = beta^(2/alpha) u(beta x, beta^2 t) solves the same equation
    spec = GridSpec(2, 256, 20.0)
    mp = ModelParams(1.0, 1.0, 1.0, 1.0, 2.0, 2)
    u0 = gaussian_field(spec, amp=0.5)
    beta, T, dt = 2.0, 0.25, 0.0025
    u = split_step_evolve(u0, T, dt, mp, store_every=round(T / dt))
    v0 = Field(spec, beta * spectral_resample(u0, beta).samples, 0.0)
    v = split_step_evolve(v0, T / beta ** 2, dt / beta ** 2, mp,
                          store_every=round(T / dt))
    pred = beta * spectral_resample(u.slices[-1], beta).samples
    num = np.linalg.norm(v.slices[-1].samples - pred)
    den = np.linalg.norm(v.slices[-1].samples)
    assert num / den <= 0.01


def test_split_step_argument_errors(spec2):
    mp = ModelParams(1.0, 1.0, 0.0, 1.0, 2.0, 2)
    f = gaussian_field(spec2)
    with pytest.raises(ValueError):
        split_step_evolve(f, 0.5, 0.0, mp)
    with pytest.raises(ValueError):
        split_step_evolve(f, 0.5, 0.03, mp)  # non-integer step count
    with pytest.raises(ValueError):
        split_step_evolve(f, 0.5, 0.01, mp, order=3)


def test_split_step_nan_abort(spec2):
    mp = ModelParams(1.0, 1.0, 0.0, 1.0, 2.0, 2)
    huge = Field(spec2, np.full(spec2.shape, 1e200 + 0j), 0.0)
    with pytest.raises(NumericsError, match="step"):
        split_step_evolve(huge, 0.1, 0.05, mp)


def test_dealias_option_runs(spec2):
    mp = ModelParams(1.0, 1.0, 1.0, 1.0, 2.0, 2)
    f = gaussian_field(spec2, amp=1.0)
    u = split_step_evolve(f, 0.1, 0.01, mp, dealias=True)
    assert len(u) == 11
