import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optocool import (ChirpedDrive, ChirpWithoutDissipation, ConstantDrive, MeanFieldState,
                      SystemParams, build_drift_matrix, build_noise_matrix, chirp_envelope,
                      drive_amplitude, eval_coefficients, mean_field_rhs)
from optocool.model import adjoint_swap, conjugate_swap

finite = st.floats(-10, 10, allow_nan=False)
rate = st.floats(0, 1, allow_nan=False)
coupling = st.floats(-1e-3, 1e-3, allow_nan=False)
amp = st.complex_numbers(max_magnitude=2e3, allow_nan=False, allow_infinity=False)


@st.composite
def model_inputs(draw):
    params = SystemParams(draw(finite), draw(rate), draw(rate), draw(coupling),
                          draw(coupling), draw(st.floats(0, 200)))
    mf = MeanFieldState(draw(amp), draw(amp))
    return params, mf, draw(amp)


def test_coefficients_dissipative_example():
    params = SystemParams(delta=-1, kappa=0.01, gamma=0, coupling_a=0, coupling_b=2e-4)
    c = eval_coefficients(params, MeanFieldState(200, 0), 0)
    assert c.f1 == pytest.approx(-0.005 - 1j, abs=1e-15)
    assert c.f2 == pytest.approx(-2e-4, abs=1e-15)
    assert c.f3 == pytest.approx(0.1, abs=1e-15)
    assert c.f4 == 0


def test_coefficients_decoupled():
    params = SystemParams(delta=0, kappa=0.01, gamma=0)
    c = eval_coefficients(params, MeanFieldState(3 + 4j, -2j), 0)
    assert (c.f1, c.f2, c.f4) == (-0.005, 0, 0)
    assert c.f3 == pytest.approx(0.1)


def test_coefficients_dispersive_example():
    params = SystemParams(delta=-1, kappa=0.3, gamma=0, coupling_a=2e-4)
    c = eval_coefficients(params, MeanFieldState(1000, 0), 0)
    assert c.f1 == pytest.approx(-0.15 - 1j, abs=1e-14)
    assert c.f2 == pytest.approx(0.06j, abs=1e-14)
    assert c.f3 == pytest.approx(math.sqrt(0.3), abs=1e-15)
    assert c.f4 == pytest.approx(0.06j, abs=1e-14)


def test_drift_decoupled_is_diagonal():
    params = SystemParams(delta=-1, kappa=0.01, gamma=1e-6)
    m = build_drift_matrix(params, eval_coefficients(params, MeanFieldState(200), 0))
    expected = np.diag([-0.005 - 1j, -1j - 5e-7, -0.005 + 1j, 1j - 5e-7])
    np.testing.assert_allclose(m, expected, atol=1e-15)


def test_drift_dissipative_example():
    params = SystemParams(delta=-1, kappa=0.01, gamma=0, coupling_b=2e-4)
    m = build_drift_matrix(params, eval_coefficients(params, MeanFieldState(200), 0))
    assert m[0, 1] == pytest.approx(-2e-4) and m[0, 3] == pytest.approx(-2e-4)
    assert m[1, 0] == m[1, 3] == m[3, 0] == 0
    assert m[0, 0] == pytest.approx(-0.005 - 1j)


def test_noise_decoupled():
    params = SystemParams(delta=0, kappa=0.01, gamma=1e-5, n_th=100)
    mf = MeanFieldState(200)
    c = build_noise_matrix(params, mf, eval_coefficients(params, mf, 0))
    expected = np.zeros((4, 4), complex)
    expected[0, 2] = 0.01
    expected[1, 3] = 1e-5 * 101
    expected[3, 1] = 1e-5 * 100
    np.testing.assert_allclose(c, expected, rtol=1e-14, atol=1e-18)


def test_noise_dissipative_example():
    # Hand evaluation: B**2/4 * kappa * |a|**2 = 1e-8 * 0.01 * 4e4 = 4e-6,
    # F3 * (B/2) * sqrt(kappa) * a = 0.1 * 1e-4 * 0.1 * 200 = 2e-4.
    params = SystemParams(delta=-1, kappa=0.01, gamma=0, coupling_b=2e-4)
    mf = MeanFieldState(200)
    c = build_noise_matrix(params, mf, eval_coefficients(params, mf, 0))
    assert c[1, 1] == pytest.approx(-4e-6, rel=1e-12)
    assert c[1, 3] == pytest.approx(4e-6, rel=1e-12)
    assert c[3, 1] == pytest.approx(4e-6, rel=1e-12)
    assert c[3, 3] == pytest.approx(-4e-6, rel=1e-12)
    assert c[0, 2] == pytest.approx(0.01, rel=1e-12)
    assert c[0, 1] == pytest.approx(-2e-4, rel=1e-12)
    assert c[0, 3] == pytest.approx(2e-4, rel=1e-12)


def test_noise_channels_add_up_and_literal_variant():
    params = SystemParams(delta=0.5, kappa=0.3, gamma=1e-3, coupling_a=1e-4,
                          coupling_b=2e-4, n_th=50)
    mf = MeanFieldState(700 - 300j, 40 + 2j)
    coeffs = eval_coefficients(params, mf, 10 + 5j)
    full = build_noise_matrix(params, mf, coeffs)
    split = (build_noise_matrix(params, mf, coeffs, channels="thermal")
             + build_noise_matrix(params, mf, coeffs, channels="optical"))
    np.testing.assert_allclose(full, split, rtol=1e-15)
    # corrected element keeps d/dt (R24 - R42) sourced only by gamma
    assert (full[1, 3] - full[3, 1]).real == pytest.approx(params.gamma, rel=1e-9)
    literal = build_noise_matrix(params, mf, coeffs, sqrt_kappa_42=True)
    assert literal[3, 1] == pytest.approx(
        0.25 * 4e-8 * math.sqrt(0.3) * abs(mf.a) ** 2 + params.gamma * params.n_th)
    mask = np.ones((4, 4), bool)
    mask[3, 1] = False
    np.testing.assert_array_equal(literal[mask], full[mask])


def test_mean_field_examples():
    params = SystemParams(delta=-1, kappa=0.01, gamma=0.3)
    da, db = mean_field_rhs(params, MeanFieldState(200, 0), 0)
    assert da == pytest.approx(-1 - 200j)
    assert db == 0
    assert mean_field_rhs(SystemParams(0, 0, 0), MeanFieldState(), 0) == (0, 0)
    # i*A*kappa*|a|**2 = i * 2e-4 * 0.3 * 1e6
    params = SystemParams(delta=-1, kappa=0.3, gamma=1e-6, coupling_a=2e-4)
    _, db = mean_field_rhs(params, MeanFieldState(1000, 0), 0)
    assert db == pytest.approx(60j, rel=1e-12)


def test_chirp_envelope_values():
    drive = ChirpedDrive.scaled(0.5, 0.14, 0.04, 40.0)
    assert drive.chi0 == pytest.approx(0.07280, abs=5e-6)
    assert chirp_envelope(drive, 40.0) == (pytest.approx(drive.chi0), 0.0, 0.0)
    chi, phi, phidot = chirp_envelope(drive, 40.0 + 1e4)
    assert chi == 0.0
    assert phidot == pytest.approx(0.04)
    assert math.isfinite(phi) and phi == pytest.approx(0.04 / 0.14 * (0.14 * 1e4 - math.log(2)))


@given(st.floats(0.01, 1), st.floats(-0.5, 0.5), st.floats(-200, 200), st.floats(0, 300))
def test_chirp_parity(alpha, beta, t0, dt):
    drive = ChirpedDrive(0.3, alpha, beta, t0)
    chi_p, phi_p, dot_p = chirp_envelope(drive, t0 + dt)
    chi_m, phi_m, dot_m = chirp_envelope(drive, t0 - dt)
    assert chi_p == pytest.approx(chi_m, rel=1e-12, abs=1e-300)
    assert phi_p == pytest.approx(phi_m, rel=1e-12, abs=1e-12)
    assert dot_p == pytest.approx(-dot_m, rel=1e-12, abs=1e-15)


@given(st.floats(0.01, 1), st.floats(-0.5, 0.5), st.floats(-50, 50))
def test_chirp_phase_is_antiderivative(alpha, beta, t):
    drive = ChirpedDrive(0.3, alpha, beta, 0.0)
    h = 1e-5
    numeric = (chirp_envelope(drive, t + h)[1] - chirp_envelope(drive, t - h)[1]) / (2 * h)
    assert numeric == pytest.approx(chirp_envelope(drive, t)[2], abs=1e-7)


def test_drive_amplitude():
    params = SystemParams(delta=-1, kappa=0.01, gamma=1e-5, coupling_b=2e-4)
    drive = ChirpedDrive(0.0728, 0.14, 0.04, 40)
    assert drive_amplitude(params, drive, MeanFieldState(200), 40) == pytest.approx(-728)
    assert drive_amplitude(params, drive, MeanFieldState(200), 1e5) == 0
    assert drive_amplitude(params, ConstantDrive(-150j), MeanFieldState(5), 3.0) == -150j


def test_chirp_without_dissipation():
    params = SystemParams(delta=-1, kappa=0.01, gamma=1e-5, coupling_a=2e-4)
    with pytest.raises(ChirpWithoutDissipation):
        drive_amplitude(params, ChirpedDrive(0.1, 0.1, 0.0, 0.0), MeanFieldState(1), 0.0)


def test_param_validation():
    with pytest.raises(ValueError):
        SystemParams(delta=0, kappa=-1, gamma=0)
    with pytest.raises(ValueError):
        SystemParams(delta=0, kappa=1, gamma=0, n_th=-0.5)
    with pytest.raises(ValueError):
        ChirpedDrive(0.1, 0.0, 0.1, 0.0)


@settings(max_examples=200)
@given(model_inputs())
def test_drift_and_noise_symmetry(inputs):
    params, mf, omega = inputs
    coeffs = eval_coefficients(params, mf, omega)
    assert coeffs.f3.imag == 0
    m = build_drift_matrix(params, coeffs)
    np.testing.assert_array_equal(m, conjugate_swap(m))
    c = build_noise_matrix(params, mf, coeffs)
    np.testing.assert_allclose(c, adjoint_swap(c), rtol=1e-13, atol=1e-300)
    assert not c[:, 0].any()
    mask = np.ones(4, bool)
    mask[3] = False
    assert not c[2, mask].any()


@settings(max_examples=200)
@given(model_inputs(), st.floats(1e-6, 1e-3), st.sampled_from([-1, 1]), st.floats(0.05, 1),
       st.floats(-0.5, 0.5), st.floats(-20, 20), st.floats(0, 100))
def test_chirp_constraint_holds(inputs, b_mag, b_sign, alpha, beta, t0, t):
    params, mf, _ = inputs
    params = SystemParams(params.delta, params.kappa, params.gamma, params.coupling_a,
                          b_sign * b_mag)
    drive = ChirpedDrive(0.2, alpha, beta, t0)
    omega = drive_amplitude(params, drive, mf, t)
    chi, phi, _ = chirp_envelope(drive, t)
    residual = (params.coupling_a * params.kappa * mf.a - omega * params.coupling_b / 2
                - chi * np.exp(1j * phi))
    assert abs(residual) < 1e-12
