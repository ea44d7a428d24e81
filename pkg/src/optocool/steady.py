"""Stationary state under a constant drive.

The stationary phonon number is split into the part fed by the mechanical
thermal bath and the backaction part fed by the optical input noise. The
covariance solution is linear in the noise matrix, so solving once per
noise channel gives an exact split.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_sylvester

from .errors import NoConvergence, NoStationaryState
from .model import (MeanFieldState, SystemParams, build_drift_matrix, build_noise_matrix,
                    eval_coefficients, mean_field_rhs)

FIXED_POINT_TOL = 1e-10
MAX_ITERATIONS = 10_000
DAMPING = 0.5

STATIONARY_TOL = 1e-10
# Transients must have decayed by this factor before the horizon.
HORIZON = 1e7
DECAY = 1e-10


@dataclass(frozen=True)
class SteadyResult:
    omega0: complex
    a_ss: complex
    b_ss: complex
    n_total: float
    sigma_eq: float
    s_bac: float


def _residual(params, a, b, omega):
    da, db = mean_field_rhs(params, MeanFieldState(a, b), omega)
    return math.hypot(abs(da), abs(db))


def solve_steady_mean_field(params: SystemParams, target_a: complex) -> tuple[complex, complex]:
    """Find the constant drive and mechanical amplitude holding ``<a> = target_a``.

    Alternates two linear solves: the cavity equation for Omega at fixed
    ``<b>``, then the mechanical equation for ``<b>`` (damped by one half).

    Raises
    ------
    NoConvergence
        If the residual of both mean-field equations stays above 1e-10
        after 10**4 iterations.
    """
    a = complex(target_a)
    if a == 0:
        return 0j, 0j
    p = params
    b = 0j
    residual = math.inf
    for _ in range(MAX_ITERATIONS):
        rb = b.real
        omega = ((1j * p.delta + 2j * p.coupling_a * p.kappa * rb
                  - p.kappa * p.coupling_b * rb - 0.5 * p.kappa) * a
                 / (1j * (1.0 + p.coupling_b * rb)))
        residual = _residual(p, a, b, omega)
        if residual < FIXED_POINT_TOL:
            return omega, b
        source = (1j * p.coupling_a * p.kappa * abs(a) ** 2
                  - 1j * p.coupling_b * (omega * a.conjugate()).real)
        b_new = source / (1j + 0.5 * p.gamma)
        b = (1.0 - DAMPING) * b + DAMPING * b_new
    raise NoConvergence(f"mean-field residual {residual:.3g} after {MAX_ITERATIONS} iterations")


def _mean_field_jacobian(params, a, b, omega):
    """Real Jacobian of the mean-field flow in (Re a, Im a, Re b, Im b)."""
    x0 = np.array([a.real, a.imag, b.real, b.imag])

    def f(x):
        da, db = mean_field_rhs(params, MeanFieldState(complex(x[0], x[1]), complex(x[2], x[3])), omega)
        return np.array([da.real, da.imag, db.real, db.imag])

    jac = np.empty((4, 4))
    for k in range(4):
        h = 1e-6 * max(1.0, abs(x0[k]))
        e = np.zeros(4)
        e[k] = h
        jac[:, k] = (f(x0 + e) - f(x0 - e)) / (2 * h)
    return jac


def _require_decay(rate, what):
    # Slowest decay must shrink transients by DECAY before HORIZON.
    if not rate * HORIZON < math.log(DECAY):
        raise NoStationaryState(
            f"{what} has slowest rate {rate:.3g}; no stationary state by t={HORIZON:g}")


def steady_phonon_decomposition(params: SystemParams, omega0: complex, a_ss: complex,
                                b_ss: complex) -> SteadyResult:
    """Stationary phonon number and its thermal / backaction split.

    Solves ``M R + R M^T + C = 0`` for the full noise matrix and for its
    thermal-only and optical-only parts. The stationary state is accepted
    only if both the mean field and the covariance relax within t = 1e7
    and the residual ``|dR42/dt|`` is below 1e-10 * max(1, R42).

    Raises
    ------
    NoStationaryState
        On instability, too slow relaxation or a failed stationarity check.
    """
    mf = MeanFieldState(complex(a_ss), complex(b_ss))
    coeffs = eval_coefficients(params, mf, omega0)
    m = build_drift_matrix(params, coeffs)

    _require_decay(np.linalg.eigvals(_mean_field_jacobian(params, mf.a, mf.b, omega0)).real.max(),
                   "mean field")
    # Eigenvalues of R -> M R + R M^T are pairwise sums of those of M.
    _require_decay(2 * np.linalg.eigvals(m).real.max(), "covariance")

    values = {}
    for channels in ("all", "thermal", "optical"):
        c = build_noise_matrix(params, mf, coeffs, channels=channels)
        r = solve_sylvester(m, m.T, -c)
        drift = (m @ r + r @ m.T + c)[3, 1]
        if not abs(drift) < STATIONARY_TOL * max(1.0, abs(r[3, 1])):
            raise NoStationaryState(f"stationarity residual {abs(drift):.3g} ({channels} noise)")
        values[channels] = float(r[3, 1].real)

    return SteadyResult(complex(omega0), mf.a, mf.b,
                        n_total=values["all"], sigma_eq=values["thermal"], s_bac=values["optical"])


def steady_state(params: SystemParams, target_a: complex) -> SteadyResult:
    """Fixed point for ``target_a`` followed by the phonon decomposition."""
    omega0, b_ss = solve_steady_mean_field(params, target_a)
    return steady_phonon_decomposition(params, omega0, complex(target_a), b_ss)
