import numpy as np
import pytest

from optocool import (ChirpedDrive, ChirpWithoutDissipation, ConstantDrive, Diverged,
                      IllConditioned, MeanFieldState, NegativeOccupation, SystemParams,
                      build_drift_matrix, build_noise_matrix, covariance_rhs, eval_coefficients,
                      extract_observables, initial_covariance, propagate, propagate_oracle,
                      solve_steady_mean_field)
from optocool.checks import commutators
from optocool.model import adjoint_swap


def test_initial_covariance():
    r = initial_covariance(100)
    assert (r[0, 2], r[1, 3], r[3, 1]) == (1, 101, 100)
    assert np.count_nonzero(r) == 3
    r = initial_covariance(0)
    assert (r[0, 2], r[1, 3], r[3, 1]) == (1, 1, 0)
    np.testing.assert_array_equal(r, adjoint_swap(r))
    with pytest.raises(NegativeOccupation):
        initial_covariance(-1)


def test_extract_observables():
    assert extract_observables(initial_covariance(50)) == (50, 0)
    assert extract_observables(initial_covariance(0)) == (0, 0)
    r = np.zeros((4, 4), complex)
    r[3, 1] = 1.6
    assert extract_observables(r)[0] == 1.6


def _matrices(params, mf, omega=0):
    coeffs = eval_coefficients(params, mf, omega)
    return build_drift_matrix(params, coeffs), build_noise_matrix(params, mf, coeffs)


def test_covariance_rhs_fixed_points():
    params = SystemParams(delta=-1, kappa=0.01, gamma=1e-5, n_th=100)
    m, c = _matrices(params, MeanFieldState(200))
    assert covariance_rhs(m, initial_covariance(100), c)[3, 1] == 0
    params = SystemParams(delta=-1, kappa=0.01, gamma=1e-5, n_th=0)
    m, c = _matrices(params, MeanFieldState(200))
    assert covariance_rhs(m, initial_covariance(0), c)[0, 2] == pytest.approx(0, abs=1e-15)
    r = np.arange(16).reshape(4, 4) * (1 + 0.5j)
    assert not covariance_rhs(np.zeros((4, 4)), r, np.zeros((4, 4))).any()


def test_covariance_rhs_uses_plain_transpose():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    r = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    expected = np.einsum("ik,kj->ij", m, r) + np.einsum("ik,jk->ij", r, m)
    np.testing.assert_allclose(covariance_rhs(m, r, 0), expected)


def test_decoupled_thermal_equilibrium():
    params = SystemParams(delta=-1, kappa=0.01, gamma=1e-2, n_th=100)
    traj = propagate(params, ConstantDrive(-150j), MeanFieldState(200), 20.0)
    np.testing.assert_allclose(traj.n_phonon, 100, atol=1e-6)
    c1, c2 = commutators(traj.r)
    np.testing.assert_allclose(c1, 1, atol=1e-6)
    np.testing.assert_allclose(c2, 1, atol=1e-6)


def test_mean_field_matches_closed_form():
    # A = B = 0: <a> obeys a linear ODE with constant drive.
    params = SystemParams(delta=-0.7, kappa=0.2, gamma=0.01)
    omega, a0 = 3 - 2j, 5 + 1j
    traj = propagate(params, ConstantDrive(omega), MeanFieldState(a0), 5.0, sample_every=500)
    lam = 1j * params.delta - params.kappa / 2
    a_ss = 1j * omega / lam
    expected = a_ss + (a0 - a_ss) * np.exp(lam * traj.t)
    np.testing.assert_allclose(traj.a, expected, rtol=1e-11)
    np.testing.assert_array_equal(traj.b, 0)


def test_sampling_layout():
    params = SystemParams(delta=0, kappa=0.1, gamma=0.1, n_th=1)
    traj = propagate(params, ConstantDrive(0), MeanFieldState(), 1.05, dt=0.01, sample_every=10)
    np.testing.assert_allclose(traj.t, list(np.arange(11) * 0.1) + [1.05])
    assert traj.t[0] == 0 and np.all(np.diff(traj.t) > 0)
    assert len(traj) == 12
    assert traj.omega.shape == traj.n_photon.shape == (12,)
    np.testing.assert_array_equal(traj.final_covariance, traj.r[-1])


def test_final_state_independent_of_sampling():
    params = SystemParams(delta=0.5, kappa=0.5, gamma=1e-6, coupling_b=2e-4, n_th=50)
    drive = ChirpedDrive.scaled(1.5, 0.15, 0.05, 30.0)
    coarse = propagate(params, drive, MeanFieldState(1000), 5.0, sample_every=5000)
    fine = propagate(params, drive, MeanFieldState(1000), 5.0, sample_every=7)
    np.testing.assert_array_equal(coarse.r[-1], fine.r[-1])


def test_errors():
    params = SystemParams(delta=0, kappa=0.1, gamma=0.1)
    with pytest.raises(ValueError):
        propagate(params, ConstantDrive(0), t_end=0.0)
    with pytest.raises(ValueError):
        propagate(params, ConstantDrive(0), t_end=1.0, dt=0.3)
    with pytest.raises(ChirpWithoutDissipation):
        propagate(params, ChirpedDrive(0.1, 0.1, 0.0, 1.0), t_end=1.0)
    stiff = SystemParams(delta=0, kappa=100, gamma=0.1)
    with pytest.raises(Diverged):
        propagate(stiff, ConstantDrive(1), MeanFieldState(1), t_end=100.0, dt=0.1)


def test_oracle_decoupled_closed_form():
    # G is diagonal; R42(t) = N e^{-gamma t} + N (1 - e^{-gamma t}) = N.
    params = SystemParams(delta=-1, kappa=0.01, gamma=0.05, n_th=100)
    r = propagate_oracle(params, ConstantDrive(0), MeanFieldState(200), 10.0)
    assert r[3, 1] == pytest.approx(100, rel=1e-10)
    assert r[1, 3] == pytest.approx(101, rel=1e-10)
    assert r[0, 2] == pytest.approx(1, rel=1e-10)


def test_oracle_without_noise_is_pure_transport():
    # kappa = gamma = 0 and no drive: C = 0, so R = G R0 G^T with
    # G = diag(e^{i delta t}, e^{-i t}, e^{-i delta t}, e^{i t}).
    params = SystemParams(delta=-0.3, kappa=0, gamma=0, n_th=2)
    t = 4.0
    r = propagate_oracle(params, ConstantDrive(0), MeanFieldState(1 + 1j), t)
    g = np.diag(np.exp(np.array([-0.3j, -1j, 0.3j, 1j]) * t))
    r0 = initial_covariance(2)
    np.testing.assert_allclose(r, g @ r0 @ g.T, atol=1e-12)


def test_oracle_matches_direct_route_coupled():
    params = SystemParams(delta=0.4, kappa=0.3, gamma=1e-3, coupling_a=1e-4,
                          coupling_b=2e-4, n_th=20)
    drive = ChirpedDrive.scaled(1.5, 0.15, 0.08, 3.0)
    direct = propagate(params, drive, MeanFieldState(300), 6.0).final_covariance
    oracle = propagate_oracle(params, drive, MeanFieldState(300), 6.0)
    np.testing.assert_allclose(direct, oracle, rtol=1e-8, atol=1e-10)


def test_oracle_ill_conditioned():
    # Blue-detuned constant drive holding <a> = 1000: parametric gain makes
    # G grow exponentially and its inverse useless.
    params = SystemParams(delta=1.0, kappa=0.1, gamma=0.0, coupling_b=2e-4)
    omega, b = solve_steady_mean_field(params, 1000)
    with pytest.raises((IllConditioned, Diverged)):
        propagate_oracle(params, ConstantDrive(omega), MeanFieldState(1000, b), 120.0, dt=1e-2)
