"""Self-checks run by ``optocool verify``.

Each check returns a :class:`CheckResult`; the command succeeds only if
all of them pass.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ChirpedDrive, ConstantDrive, MeanFieldState, SystemParams, adjoint_swap
from .propagation import propagate, propagate_oracle
from .steady import steady_state
from .sweeps import figure_preset

ORACLE_RTOL = 1e-6
ORACLE_TIMES = (2.0, 4.0, 6.0, 8.0, 10.0)
COMMUTATOR_TOL_DECOUPLED = 1e-6
COMMUTATOR_TOL_COUPLED = 0.05
SYMMETRY_TOL = 1e-8
REALITY_TOL = 1e-8
ADDITIVITY_RTOL = 1e-6
THERMAL_TOL = 1e-6
HALVING_RTOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def preset_runs():
    """Named (params, drive, mf0, t_end) tuples covering the time-domain presets."""
    runs = []
    fig1 = figure_preset("fig1")
    params, drive = fig1.point((0,))
    runs.append(("fig1", params, drive, fig1.mf0, fig1.t_end))
    fig2 = figure_preset("fig2")
    for i, kappa in enumerate(fig2.axes[0].values):
        params, drive = fig2.point((i,))
        runs.append((f"fig2 kappa={kappa:g}", params, drive, fig2.mf0, fig2.t_end))
    fig4 = figure_preset("fig4a", resolution=41)
    for beta in (-0.14, 0.14):
        j = int(np.argmin(np.abs(np.array(fig4.axes[1].values) - beta)))
        params, drive = fig4.point((0, j))
        runs.append((f"fig4a A/B=0 beta={beta:g}", params, drive, fig4.mf0, fig4.t_end))
    fig4c = figure_preset("fig4c", resolution=41)
    j = int(np.argmin(np.abs(np.array(fig4c.axes[1].values) + 1.0)))
    params, drive = fig4c.point((0, j))
    runs.append(("fig4c A/B=0 delta=-1", params, drive, fig4c.mf0, fig4c.t_end))
    return runs


def commutators(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (R13 - R31, R24 - R42) for a stack of covariance matrices."""
    return r[..., 0, 2] - r[..., 2, 0], r[..., 1, 3] - r[..., 3, 1]


def check_oracle(label, params, drive, mf0) -> CheckResult:
    traj = propagate(params, drive, mf0, max(ORACLE_TIMES), sample_every=1000)
    worst = 0.0
    for t in ORACLE_TIMES:
        k = int(np.argmin(np.abs(traj.t - t)))
        oracle = propagate_oracle(params, drive, mf0, t)
        direct = traj.r[k]
        scale = np.abs(oracle)
        diff = np.abs(direct - oracle)
        nz = scale > 0
        rel = np.max(diff[nz] / scale[nz]) if nz.any() else 0.0
        if np.any(diff[~nz] > 0):
            rel = np.inf
        worst = max(worst, rel)
    return CheckResult(f"oracle equivalence {label}", worst < ORACLE_RTOL,
                       f"max elementwise relative difference {worst:.2e} (tol {ORACLE_RTOL:g})")


def check_trajectory_invariants(label, traj, commutator_tol) -> list[CheckResult]:
    c1, c2 = commutators(traj.r)
    comm = max(np.abs(c1 - 1).max(), np.abs(c2 - 1).max())
    sym = np.abs(traj.r - adjoint_swap(traj.r)).max()
    imag = max(np.abs(traj.r[:, 3, 1].imag).max(), np.abs(traj.r[:, 2, 0].imag).max())
    return [
        CheckResult(f"commutators {label}", comm < commutator_tol,
                    f"max |[v,v+] - 1| = {comm:.3e} (tol {commutator_tol:g})"),
        CheckResult(f"conjugation symmetry {label}", sym < SYMMETRY_TOL,
                    f"max |R - S R^H S| = {sym:.2e} (tol {SYMMETRY_TOL:g})"),
        CheckResult(f"real occupations {label}", imag < REALITY_TOL,
                    f"max |Im R42|, |Im R31| = {imag:.2e} (tol {REALITY_TOL:g})"),
    ]


def check_thermal_fixed_point() -> list[CheckResult]:
    params = SystemParams(delta=-1.0, kappa=0.01, gamma=1e-5, n_th=100.0)
    traj = propagate(params, ConstantDrive(-150j), MeanFieldState(200), 50.0)
    dev = np.abs(traj.n_phonon - params.n_th).max()
    out = [CheckResult("thermal fixed point A=B=0", dev < THERMAL_TOL,
                       f"max |n_phonon - n_th| = {dev:.2e} (tol {THERMAL_TOL:g})")]
    out += check_trajectory_invariants("decoupled", traj, COMMUTATOR_TOL_DECOUPLED)
    return out


def check_additivity() -> CheckResult:
    worst = 0.0
    for name in ("fig3a", "fig3b", "fig3c"):
        spec = figure_preset(name)
        for i in range(len(spec.axes[0])):
            params, _ = spec.point((i,))
            res = steady_state(params, spec.target_a)
            err = abs(res.n_total - (res.sigma_eq + res.s_bac)) / max(1.0, res.n_total)
            worst = max(worst, err)
    return CheckResult("decomposition additivity fig3a-c", worst < ADDITIVITY_RTOL,
                       f"max relative mismatch {worst:.2e} (tol {ADDITIVITY_RTOL:g})")


def check_step_halving(label, params, drive, mf0, t_end) -> CheckResult:
    n1 = propagate(params, drive, mf0, t_end, 1e-3, sample_every=10**9).n_phonon[-1]
    n2 = propagate(params, drive, mf0, t_end, 5e-4, sample_every=10**9).n_phonon[-1]
    rel = abs(n1 - n2) / abs(n2)
    return CheckResult(f"step halving {label}", rel < HALVING_RTOL,
                       f"relative change {rel:.2e} (tol {HALVING_RTOL:g})")


def run_checks() -> list[CheckResult]:
    results = []
    runs = preset_runs()
    for label, params, drive, mf0, _ in runs:
        if label in ("fig1", "fig2 kappa=0.5"):
            results.append(check_oracle(label, params, drive, mf0))
    results += check_thermal_fixed_point()
    for label, params, drive, mf0, t_end in runs:
        traj = propagate(params, drive, mf0, t_end)
        results += check_trajectory_invariants(label, traj, COMMUTATOR_TOL_COUPLED)
        results.append(check_step_halving(label, params, drive, mf0, t_end))
    results.append(check_additivity())
    return results
