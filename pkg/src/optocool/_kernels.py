"""Compiled scalar kernels shared by the public model and the integrators.

Every formula of the linearized model lives here exactly once. The public
functions in :mod:`optocool.model` and the RK4 loops in
:mod:`optocool.propagation` both call into these.

Packed argument layouts (numba wants flat arrays):

    params = [delta, kappa, gamma, coupling_a, coupling_b, n_th]
    drive  = [kind, omega0_re, omega0_im, chi0, alpha, beta, t0]

with ``kind`` 0 for a constant drive and 1 for a chirped one.
"""
import numpy as np
from numba import njit

CONSTANT = 0
CHIRPED = 1

# Noise channels, see fill_noise.
THERMAL = 1
OPTICAL = 2
ALL_CHANNELS = THERMAL | OPTICAL

DIVERGENCE_LIMIT = 1e12


@njit(cache=True)
def coefficients(delta, kappa, A, B, a, b, omega):
    rb = b.real
    f1 = 1j * delta + 2j * A * kappa * rb - 0.5 * kappa - kappa * B * rb
    f2 = 1j * A * kappa * a - 0.5 * kappa * B * a - 0.5j * B * omega
    f3 = np.sqrt(kappa) * (1.0 + B * rb) + 0j
    f4 = 1j * A * kappa * np.conj(a) - 0.5j * B * np.conj(omega)
    return f1, f2, f3, f4


@njit(cache=True)
def fill_drift(gamma, f1, f2, f4, out):
    out[:, :] = 0.0
    out[0, 0] = f1
    out[0, 1] = f2
    out[0, 3] = f2
    out[1, 0] = f4
    out[1, 1] = -1j - 0.5 * gamma
    out[1, 2] = -np.conj(f4)
    out[2, 1] = np.conj(f2)
    out[2, 2] = np.conj(f1)
    out[2, 3] = np.conj(f2)
    out[3, 0] = -f4
    out[3, 2] = np.conj(f4)
    out[3, 3] = 1j - 0.5 * gamma


@njit(cache=True)
def fill_noise(kappa, gamma, B, n_th, a, f3, literal, channels, out):
    """Markovian noise correlation matrix.

    ``literal`` puts sqrt(kappa) in element (4,2) instead of
    kappa; only the kappa form keeps the mechanical commutator fixed in the
    decoupled limit. ``channels`` is a bitmask of THERMAL (gamma-sourced
    entries) and OPTICAL (everything sourced by the optical input noise).
    """
    out[:, :] = 0.0
    if channels & OPTICAL:
        s = 0.5 * B * np.sqrt(kappa)
        aa = a.real * a.real + a.imag * a.imag
        bb = 0.25 * B * B * kappa * aa
        bb_42 = 0.25 * B * B * np.sqrt(kappa) * aa if literal else bb
        out[0, 1] = -f3 * s * a
        out[0, 2] = abs(f3) ** 2
        out[0, 3] = f3 * s * a
        out[1, 1] = -bb
        out[1, 2] = s * np.conj(f3) * np.conj(a)
        out[1, 3] = bb
        out[3, 1] = bb_42
        out[3, 2] = -s * np.conj(f3) * np.conj(a)
        out[3, 3] = -bb
    if channels & THERMAL:
        out[1, 3] += gamma * (n_th + 1.0)
        out[3, 1] += gamma * n_th


@njit(cache=True)
def chirp(chi0, alpha, beta, t0, t):
    x = alpha * (t - t0)
    ax = abs(x)
    e = np.exp(-ax)
    chi = chi0 * 2.0 * e / (1.0 + e * e)
    # log cosh without overflow
    phi = (beta / alpha) * (ax + np.log1p(e * e) - np.log(2.0))
    phidot = beta * np.tanh(x)
    return chi, phi, phidot


@njit(cache=True)
def drive_omega(drive, A, kappa, B, a, t):
    if drive[0] == CONSTANT:
        return drive[1] + 1j * drive[2]
    chi, phi, _ = chirp(drive[3], drive[4], drive[5], drive[6], t)
    return (2.0 / B) * (A * kappa * a - chi * np.exp(1j * phi))


@njit(cache=True)
def mean_field_rhs(delta, kappa, gamma, A, B, a, b, omega):
    rb = b.real
    da = (1j * delta * a + 2j * A * kappa * rb * a - kappa * B * rb * a
          - 1j * omega - 1j * B * rb * omega - 0.5 * kappa * a)
    aa = a.real * a.real + a.imag * a.imag
    db = (-1j * b + 1j * A * kappa * aa - 0.5 * gamma * b
          - 0.5j * B * (omega * np.conj(a) + np.conj(omega) * a))
    return da, db


@njit(cache=True)
def _stage(params, drive, literal, t, a, b, M, C):
    delta, kappa, gamma, A, B, n_th = params
    omega = drive_omega(drive, A, kappa, B, a, t)
    f1, f2, f3, f4 = coefficients(delta, kappa, A, B, a, b, omega)
    fill_drift(gamma, f1, f2, f4, M)
    fill_noise(kappa, gamma, B, n_th, a, f3, literal, ALL_CHANNELS, C)
    return mean_field_rhs(delta, kappa, gamma, A, B, a, b, omega)


@njit(cache=True)
def _too_big(a, b, X):
    if not (abs(a) <= DIVERGENCE_LIMIT and abs(b) <= DIVERGENCE_LIMIT):
        return True
    for i in range(4):
        for j in range(4):
            if not abs(X[i, j]) <= DIVERGENCE_LIMIT:
                return True
    return False


@njit(cache=True)
def rk4_covariance(params, drive, literal, a, b, R, dt, n_steps, sample_every):
    """Fixed-step RK4 over (a, b, R) with dR/dt = M R + R M^T + C.

    Returns sample arrays and the index of the step that diverged (-1 if
    none). Samples are taken at step 0, every ``sample_every`` steps and at
    the final step.
    """
    n_samples = n_steps // sample_every + 1
    if n_steps % sample_every:
        n_samples += 1
    ts = np.empty(n_samples)
    as_ = np.empty(n_samples, np.complex128)
    bs = np.empty(n_samples, np.complex128)
    oms = np.empty(n_samples, np.complex128)
    rs = np.empty((n_samples, 4, 4), np.complex128)

    M = np.empty((4, 4), np.complex128)
    C = np.empty((4, 4), np.complex128)
    R = R.copy()
    h = 0.5 * dt
    A, kappa, B = params[3], params[1], params[4]

    ts[0] = 0.0
    as_[0] = a
    bs[0] = b
    oms[0] = drive_omega(drive, A, kappa, B, a, 0.0)
    rs[0] = R
    k = 1
    for i in range(n_steps):
        t = i * dt
        da1, db1 = _stage(params, drive, literal, t, a, b, M, C)
        dR1 = M @ R + R @ M.T + C
        a2 = a + h * da1
        b2 = b + h * db1
        R2 = R + h * dR1
        da2, db2 = _stage(params, drive, literal, t + h, a2, b2, M, C)
        dR2 = M @ R2 + R2 @ M.T + C
        a3 = a + h * da2
        b3 = b + h * db2
        R3 = R + h * dR2
        da3, db3 = _stage(params, drive, literal, t + h, a3, b3, M, C)
        dR3 = M @ R3 + R3 @ M.T + C
        a4 = a + dt * da3
        b4 = b + dt * db3
        R4 = R + dt * dR3
        da4, db4 = _stage(params, drive, literal, t + dt, a4, b4, M, C)
        dR4 = M @ R4 + R4 @ M.T + C
        a = a + dt / 6.0 * (da1 + 2.0 * da2 + 2.0 * da3 + da4)
        b = b + dt / 6.0 * (db1 + 2.0 * db2 + 2.0 * db3 + db4)
        R = R + dt / 6.0 * (dR1 + 2.0 * dR2 + 2.0 * dR3 + dR4)
        if _too_big(a, b, R):
            return ts[:k], as_[:k], bs[:k], oms[:k], rs[:k], i + 1
        step = i + 1
        if step % sample_every == 0 or step == n_steps:
            t_now = step * dt
            ts[k] = t_now
            as_[k] = a
            bs[k] = b
            oms[k] = drive_omega(drive, A, kappa, B, a, t_now)
            rs[k] = R
            k += 1
    return ts, as_, bs, oms, rs, -1


@njit(cache=True)
def _gz_rhs(G, M, C):
    Ginv = np.linalg.inv(G)
    return M @ G, Ginv @ C @ Ginv.T


@njit(cache=True)
def _cond_estimate(G):
    return np.linalg.norm(G) * np.linalg.norm(np.linalg.inv(G))


@njit(cache=True)
def rk4_fundamental(params, drive, literal, a, b, dt, n_steps):
    """RK4 over (a, b, G, Z): dG/dt = M G, dZ/dt = G^-1 C G^-T.

    Returns (G, Z, worst condition estimate, diverged step or -1).
    """
    M = np.empty((4, 4), np.complex128)
    C = np.empty((4, 4), np.complex128)
    G = np.eye(4, dtype=np.complex128)
    Z = np.zeros((4, 4), np.complex128)
    h = 0.5 * dt
    worst = 1.0
    for i in range(n_steps):
        t = i * dt
        da1, db1 = _stage(params, drive, literal, t, a, b, M, C)
        dG1, dZ1 = _gz_rhs(G, M, C)
        a2 = a + h * da1
        b2 = b + h * db1
        G2 = G + h * dG1
        da2, db2 = _stage(params, drive, literal, t + h, a2, b2, M, C)
        dG2, dZ2 = _gz_rhs(G2, M, C)
        a3 = a + h * da2
        b3 = b + h * db2
        G3 = G + h * dG2
        da3, db3 = _stage(params, drive, literal, t + h, a3, b3, M, C)
        dG3, dZ3 = _gz_rhs(G3, M, C)
        a4 = a + dt * da3
        b4 = b + dt * db3
        G4 = G + dt * dG3
        da4, db4 = _stage(params, drive, literal, t + dt, a4, b4, M, C)
        dG4, dZ4 = _gz_rhs(G4, M, C)
        a = a + dt / 6.0 * (da1 + 2.0 * da2 + 2.0 * da3 + da4)
        b = b + dt / 6.0 * (db1 + 2.0 * db2 + 2.0 * db3 + db4)
        G = G + dt / 6.0 * (dG1 + 2.0 * dG2 + 2.0 * dG3 + dG4)
        Z = Z + dt / 6.0 * (dZ1 + 2.0 * dZ2 + 2.0 * dZ3 + dZ4)
        if _too_big(a, b, G):
            return G, Z, worst, i + 1
        c = _cond_estimate(G)
        if c > worst:
            worst = c
    return G, Z, worst, -1
