"""Parameters, drives and coefficient functions of the linearized model.

All frequencies and rates are in units of the mechanical frequency, which
is fixed to 1; times are dimensionless (mechanical frequency times t).
Only the detuning ``delta = omega_d - omega_c`` enters, never the cavity
or drive frequency on its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels as K
from .errors import ChirpWithoutDissipation

# Index permutation swapping each operator with its adjoint:
# [da, db, da+, db+] -> [da+, db+, da, db].
SWAP = np.array([2, 3, 0, 1])


@dataclass(frozen=True)
class SystemParams:
    """Static rates and couplings.

    Parameters
    ----------
    delta : float
        Drive detuning from the cavity.
    kappa : float
        Cavity damping rate.
    gamma : float
        Mechanical damping rate.
    coupling_a : float
        Dispersive coupling strength (dimensionless).
    coupling_b : float
        Dissipative coupling strength (dimensionless).
    n_th : float
        Thermal occupation of the mechanical bath.
    """

    delta: float
    kappa: float
    gamma: float
    coupling_a: float = 0.0
    coupling_b: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        for name in ("kappa", "gamma", "n_th"):
            value = getattr(self, name)
            if not value >= 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")

    def packed(self) -> np.ndarray:
        return np.array([self.delta, self.kappa, self.gamma,
                         self.coupling_a, self.coupling_b, self.n_th], dtype=float)


@dataclass(frozen=True)
class ConstantDrive:
    omega0: complex = 0j

    def packed(self) -> np.ndarray:
        w = complex(self.omega0)
        return np.array([K.CONSTANT, w.real, w.imag, 0.0, 0.0, 0.0, 0.0])


@dataclass(frozen=True)
class ChirpedDrive:
    """Chirped pulse with a sech envelope and a tanh frequency sweep.

    ``chi0`` is the peak of the effective coupling envelope, ``alpha`` its
    inverse width, ``beta`` the sweep strength and ``t0`` the pulse centre.
    """

    chi0: float
    alpha: float
    beta: float
    t0: float

    def __post_init__(self):
        if not self.chi0 > 0:
            raise ValueError(f"chi0 must be > 0, got {self.chi0!r}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")

    @classmethod
    def scaled(cls, factor, alpha, beta, t0):
        """Pulse whose peak is ``factor * sqrt(alpha**2 + beta**2)``."""
        return cls(factor * math.hypot(alpha, beta), alpha, beta, t0)

    def packed(self) -> np.ndarray:
        return np.array([K.CHIRPED, 0.0, 0.0, self.chi0, self.alpha, self.beta, self.t0])


DriveSignal = Union[ConstantDrive, ChirpedDrive]


@dataclass(frozen=True)
class MeanFieldState:
    a: complex = 0j
    b: complex = 0j


@dataclass(frozen=True)
class CoefficientSet:
    f1: complex
    f2: complex
    f3: complex
    f4: complex


def check_drive(params: SystemParams, drive: DriveSignal) -> None:
    if isinstance(drive, ChirpedDrive) and params.coupling_b == 0:
        raise ChirpWithoutDissipation(
            "a chirped drive needs coupling_b != 0 to solve for the drive amplitude")


def eval_coefficients(params: SystemParams, mf: MeanFieldState, omega: complex) -> CoefficientSet:
    f1, f2, f3, f4 = K.coefficients(params.delta, params.kappa, params.coupling_a,
                                    params.coupling_b, complex(mf.a), complex(mf.b),
                                    complex(omega))
    return CoefficientSet(complex(f1), complex(f2), complex(f3), complex(f4))


def build_drift_matrix(params: SystemParams, coeffs: CoefficientSet) -> np.ndarray:
    """Drift matrix of the fluctuation vector [da, db, da+, db+]."""
    out = np.empty((4, 4), dtype=complex)
    K.fill_drift(params.gamma, coeffs.f1, coeffs.f2, coeffs.f4, out)
    return out


_CHANNELS = {"all": K.ALL_CHANNELS, "thermal": K.THERMAL, "optical": K.OPTICAL}


def build_noise_matrix(params: SystemParams, mf: MeanFieldState, coeffs: CoefficientSet,
                       *, channels: str = "all", sqrt_kappa_42: bool = False) -> np.ndarray:
    """Noise correlation matrix C with <N_l(t) N_l'(t')> = C_ll' delta(t - t').

    ``channels`` restricts C to the mechanical thermal bath (``"thermal"``,
    the gamma terms) or to the optical input noise (``"optical"``, every
    kappa- or amplitude-dependent term). The two add up to ``"all"``.

    ``sqrt_kappa_42=True`` uses B**2/4 * sqrt(kappa) * |a|**2 in element
    (4, 2) instead of B**2/4 * kappa * |a|**2. Only for comparison; the
    default keeps the commutator [db, db+] = 1.
    """
    out = np.empty((4, 4), dtype=complex)
    K.fill_noise(params.kappa, params.gamma, params.coupling_b, params.n_th,
                 complex(mf.a), coeffs.f3, sqrt_kappa_42, _CHANNELS[channels], out)
    return out


def mean_field_rhs(params: SystemParams, mf: MeanFieldState, omega: complex) -> tuple[complex, complex]:
    da, db = K.mean_field_rhs(params.delta, params.kappa, params.gamma, params.coupling_a,
                              params.coupling_b, complex(mf.a), complex(mf.b), complex(omega))
    return complex(da), complex(db)


def chirp_envelope(drive: ChirpedDrive, t: float) -> tuple[float, float, float]:
    """Return (chi, phi, phidot) at time ``t``.

    The phase is the antiderivative of the sweep fixed by phi(t0) = 0.
    """
    chi, phi, phidot = K.chirp(drive.chi0, drive.alpha, drive.beta, drive.t0, float(t))
    return float(chi), float(phi), float(phidot)


def drive_amplitude(params: SystemParams, drive: DriveSignal, mf: MeanFieldState, t: float) -> complex:
    """Drive amplitude Omega(t).

    For a chirped drive, Omega solves
    ``A*kappa*<a> - Omega*B/2 = chi(t) * exp(i*phi(t))`` at the given mean field.
    """
    check_drive(params, drive)
    return complex(K.drive_omega(drive.packed(), params.coupling_a, params.kappa,
                                 params.coupling_b, complex(mf.a), float(t)))


def peak_matched_drive(params: SystemParams, drive: ChirpedDrive, a0: complex) -> ConstantDrive:
    """Constant drive equal to the chirped amplitude at the pulse centre.

    This is the no-chirp comparison run: same parameters, with Omega frozen
    at its value for ``<a> = a0`` and ``t = t0``.
    """
    omega = drive_amplitude(params, drive, MeanFieldState(a0), drive.t0)
    return ConstantDrive(omega)


def conjugate_swap(m: np.ndarray) -> np.ndarray:
    """Return Sigma m* Sigma, Sigma being the (1<->3, 2<->4) permutation.

    The drift matrix is invariant under this map.
    """
    return np.conj(m)[..., SWAP[:, None], SWAP]


def adjoint_swap(m: np.ndarray) -> np.ndarray:
    """Return Sigma m^H Sigma.

    Ordered second moments satisfy R*[l, l'] = R[swap(l'), swap(l)], so a
    covariance matrix (and the noise matrix) is invariant under this map.
    """
    return np.swapaxes(conjugate_swap(m), -1, -2)
