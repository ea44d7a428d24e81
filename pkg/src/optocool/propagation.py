"""Joint integration of the mean field and the covariance matrix.

The covariance is ``R[l, l'] = <v_l v_l'>`` for the fluctuation vector
``v = [da, db, da+, db+]`` (ordered products, not symmetrized). Two routes
are provided:

* :func:`propagate` integrates ``dR/dt = M R + R M^T + C`` directly.
* :func:`propagate_oracle` builds the fundamental matrix ``G`` with
  ``dG/dt = M G`` and evaluates ``R = G R0 G^T + G Z G^T`` where
  ``Z = int G^-1 C G^-T``. Slower and limited by the conditioning of ``G``,
  it serves as an independent check of the first route.

Both use the same fixed-step RK4 mean-field trajectory, so their results
can be compared point by point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import Diverged, IllConditioned, NegativeOccupation
from .model import DriveSignal, MeanFieldState, SystemParams, check_drive

DEFAULT_DT = 1e-3
DEFAULT_SAMPLE_EVERY = 100
MAX_CONDITION = 1e8


@dataclass
class Trajectory:
    """Sampled time series of one propagation run.

    ``r`` holds the full covariance matrix at each sample, shape (n, 4, 4).
    """

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    omega: np.ndarray
    r: np.ndarray

    @property
    def n_phonon(self) -> np.ndarray:
        return self.r[:, 3, 1].real

    @property
    def n_photon(self) -> np.ndarray:
        return self.r[:, 2, 0].real

    @property
    def final_covariance(self) -> np.ndarray:
        return self.r[-1]

    def __len__(self):
        return len(self.t)


def initial_covariance(n_th: float) -> np.ndarray:
    """Covariance of an optical vacuum and a thermal mechanical state."""
    if not n_th >= 0:
        raise NegativeOccupation(f"n_th must be >= 0, got {n_th!r}")
    r = np.zeros((4, 4), dtype=complex)
    r[0, 2] = 1.0
    r[1, 3] = n_th + 1.0
    r[3, 1] = n_th
    return r


def covariance_rhs(m: np.ndarray, r: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Time derivative M R + R M^T + C (plain transpose, no conjugation)."""
    return m @ r + r @ m.T + c


def extract_observables(r: np.ndarray) -> tuple[float, float]:
    """Return (phonon number, photon number) as Re R42 and Re R31."""
    return float(r[3, 1].real), float(r[2, 0].real)


def _steps(t_end, dt):
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end!r}")
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    n = int(round(t_end / dt))
    if n < 1 or abs(n * dt - t_end) > 1e-9 * t_end:
        raise ValueError(f"t_end={t_end!r} is not an integer multiple of dt={dt!r}")
    return n


def propagate(params: SystemParams, drive: DriveSignal, mf0: MeanFieldState = MeanFieldState(),
              t_end: float = 70.0, dt: float = DEFAULT_DT,
              sample_every: int = DEFAULT_SAMPLE_EVERY, *,
              r0: np.ndarray | None = None, sqrt_kappa_noise: bool = False) -> Trajectory:
    """Integrate mean field and covariance from t = 0 to ``t_end``.

    The drive amplitude, coefficients, drift and noise matrices are
    re-evaluated at every RK4 stage. Samples are stored every
    ``sample_every`` steps, plus t = 0 and t = t_end.

    ``r0`` defaults to :func:`initial_covariance` of ``params.n_th``.

    Raises
    ------
    Diverged
        If any component of the state exceeds 1e12 in magnitude.
    """
    check_drive(params, drive)
    n_steps = _steps(t_end, dt)
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    if r0 is None:
        r0 = initial_covariance(params.n_th)
    ts, a, b, omega, r, bad = K.rk4_covariance(
        params.packed(), drive.packed(), bool(sqrt_kappa_noise),
        complex(mf0.a), complex(mf0.b), np.asarray(r0, dtype=complex),
        float(dt), n_steps, int(sample_every))
    if bad >= 0:
        raise Diverged(f"state exceeded {K.DIVERGENCE_LIMIT:g} at t={bad * dt:g}")
    return Trajectory(ts, a, b, omega, r)


def propagate_oracle(params: SystemParams, drive: DriveSignal, mf0: MeanFieldState = MeanFieldState(),
                     t_end: float = 10.0, dt: float = DEFAULT_DT, *,
                     r0: np.ndarray | None = None, sqrt_kappa_noise: bool = False) -> np.ndarray:
    """Covariance at ``t_end`` from the fundamental-matrix solution.

    Raises
    ------
    IllConditioned
        If the condition estimate of G exceeds 1e8 anywhere on the grid.
    """
    check_drive(params, drive)
    n_steps = _steps(t_end, dt)
    if r0 is None:
        r0 = initial_covariance(params.n_th)
    G, Z, worst, bad = K.rk4_fundamental(
        params.packed(), drive.packed(), bool(sqrt_kappa_noise),
        complex(mf0.a), complex(mf0.b), float(dt), n_steps)
    if bad >= 0:
        raise Diverged(f"state exceeded {K.DIVERGENCE_LIMIT:g} at t={bad * dt:g}")
    if not worst < MAX_CONDITION:
        raise IllConditioned(f"condition estimate of G reached {worst:.3g}")
    r0 = np.asarray(r0, dtype=complex)
    return G @ r0 @ G.T + G @ Z @ G.T
