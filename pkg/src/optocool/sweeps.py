"""Figure presets and 1-D/2-D parameter grids.

Grid points are independent runs. :func:`run_sweep` evaluates them in grid
order, optionally in worker processes, and the result does not depend on
the number of workers.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import OptocoolError
from .model import (ChirpedDrive, ConstantDrive, DriveSignal, MeanFieldState, SystemParams,
                    peak_matched_drive)
from .propagation import DEFAULT_DT, propagate
from .steady import steady_state

PARAM_AXES = ("kappa", "coupling_a", "coupling_b", "delta", "n_th", "gamma")
DRIVE_AXES = ("chi0", "alpha", "beta", "t0")
AXIS_NAMES = PARAM_AXES + ("ratio_a_over_b",) + DRIVE_AXES

OBSERVABLES = ("phonon_at_t_end", "steady_total", "steady_sigma_eq", "steady_s_bac")
PRESETS = ("fig1", "fig2", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig4d")


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}; expected one of {', '.join(AXIS_NAMES)}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError(f"axis {self.name!r} has no values")
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"axis {self.name!r} has non-finite values")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SweepSpec:
    """Base point plus one or two axes and the observable to record.

    chi0_factor
        When set, the pulse peak follows ``chi0_factor * hypot(alpha, beta)``
        at every grid point (unless ``chi0`` is itself an axis).
    no_chirp
        Replace the chirped drive at each point by the constant drive equal
        to its value at the pulse centre for ``<a> = mf0.a``.
    target_a
        Stationary intracavity amplitude for the ``steady_*`` observables.
    """

    params: SystemParams
    drive: DriveSignal
    axes: tuple[Axis, ...]
    observable: str = "phonon_at_t_end"
    mf0: MeanFieldState = MeanFieldState()
    t_end: float = 70.0
    dt: float = DEFAULT_DT
    chi0_factor: float | None = None
    no_chirp: bool = False
    target_a: complex | None = None
    name: str = "custom"
    notes: str = ""

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep needs one or two axes")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate axis names {names}")
        if self.observable not in OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}")
        if self.observable.startswith("steady") and self.target_a is None:
            raise ValueError("steady observables need target_a")
        if not isinstance(self.drive, ChirpedDrive):
            bad = [n for n in names if n in DRIVE_AXES]
            if bad:
                raise ValueError(f"axes {bad} need a chirped base drive")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.axes)

    def point(self, index: tuple[int, ...]) -> tuple[SystemParams, DriveSignal]:
        """Parameters and drive at one grid index."""
        settings = {ax.name: ax.values[i] for ax, i in zip(self.axes, index)}
        params_kw = {k: v for k, v in settings.items() if k in PARAM_AXES}
        params = replace(self.params, **params_kw)
        if "ratio_a_over_b" in settings:
            params = replace(params, coupling_a=settings["ratio_a_over_b"] * params.coupling_b)
        drive = self.drive
        if isinstance(drive, ChirpedDrive):
            drive_kw = {k: v for k, v in settings.items() if k in DRIVE_AXES}
            if self.chi0_factor is not None and "chi0" not in drive_kw:
                alpha = drive_kw.get("alpha", drive.alpha)
                beta = drive_kw.get("beta", drive.beta)
                drive_kw["chi0"] = self.chi0_factor * math.hypot(alpha, beta)
            drive = replace(drive, **drive_kw)
            if self.no_chirp:
                drive = peak_matched_drive(params, drive, self.mf0.a)
        return params, drive


@dataclass
class SweepGrid:
    """Observable values on a grid, row-major over ``axes``.

    Failed points hold NaN and their error class name in ``errors``.
    """

    axes: tuple[Axis, ...]
    observable: str
    values: np.ndarray
    errors: dict[tuple[int, ...], str] = field(default_factory=dict)

    def __len__(self):
        return self.values.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([ax.name for ax in self.axes] + [self.observable, "error"])
        for index in np.ndindex(*self.values.shape):
            coords = [_fmt(ax.values[i]) for ax, i in zip(self.axes, index)]
            writer.writerow(coords + [_fmt(self.values[index]), self.errors.get(index, "")])
        return buf.getvalue()


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def evaluate_point(spec: SweepSpec, index: tuple[int, ...]) -> float:
    params, drive = spec.point(index)
    if spec.observable == "phonon_at_t_end":
        n_steps = int(round(spec.t_end / spec.dt))
        traj = propagate(params, drive, spec.mf0, spec.t_end, spec.dt, sample_every=n_steps)
        return float(traj.n_phonon[-1])
    result = steady_state(params, spec.target_a)
    return {"steady_total": result.n_total,
            "steady_sigma_eq": result.sigma_eq,
            "steady_s_bac": result.s_bac}[spec.observable]


def _safe_point(args):
    spec, index = args
    try:
        return evaluate_point(spec, index), ""
    except OptocoolError as exc:
        return math.nan, type(exc).__name__


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepGrid:
    if workers < 1:
        raise ValueError("workers must be >= 1")
    indices = list(itertools.product(*(range(n) for n in spec.shape)))
    jobs = [(spec, idx) for idx in indices]
    if workers == 1 or len(jobs) == 1:
        results = list(map(_safe_point, jobs))
    else:
        chunk = max(1, len(jobs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_safe_point, jobs, chunksize=chunk))
    values = np.empty(spec.shape)
    errors = {}
    for idx, (value, err) in zip(indices, results):
        values[idx] = value
        if err:
            errors[idx] = err
    return SweepGrid(spec.axes, spec.observable, values, errors)


# Presets. The fig4 axis ranges are a choice that covers the cooling band
# 0.08 <= |beta| <= 0.18, 5e-3 <= A/B <= 10 and delta near -1 and 0.4.

def _ratio_axis(n):
    return Axis("ratio_a_over_b", (0.0,) + tuple(np.logspace(math.log10(5e-3), 1.0, n - 1)))


def _beta_axis(n):
    return Axis("beta", tuple(np.round(np.linspace(-0.2, 0.2, n), 12)))


def _delta_axis(n):
    return Axis("delta", tuple(np.round(np.linspace(-2.0, 2.0, n), 12)))


def figure_preset(name: str, resolution: int = 41) -> SweepSpec:
    """Parameter set of one figure.

    ``resolution`` sets the number of points per axis of the fig4 surfaces
    (41 reproduces the full figures; the fig3 and fig2 grids are fixed).
    """
    if name == "fig1":
        params = SystemParams(delta=-1.0, kappa=0.01, gamma=1e-5, coupling_a=0.0,
                              coupling_b=2e-4, n_th=100.0)
        drive = ChirpedDrive.scaled(0.5, 0.14, 0.04, 40.0)
        return SweepSpec(params, drive, (Axis("beta", (0.04,)),), mf0=MeanFieldState(200),
                         t_end=120.0, chi0_factor=0.5, name=name,
                         notes="single chirped run; compare against no_chirp=True")
    if name == "fig2":
        params = SystemParams(delta=0.5, kappa=0.5, gamma=1e-6, coupling_a=0.0,
                              coupling_b=2e-4, n_th=50.0)
        drive = ChirpedDrive.scaled(1.5, 0.15, 0.05, 30.0)
        return SweepSpec(params, drive, (Axis("kappa", (0.1, 0.2, 0.3, 0.4, 0.5)),),
                         mf0=MeanFieldState(1000), t_end=70.0, chi0_factor=1.5, name=name,
                         notes="kappa=0.5 is the reference point; the other values are a choice")
    if name in ("fig3a", "fig3b", "fig3c"):
        coupling_a, coupling_b, delta = {"fig3a": (2e-4, 0.0, -1.0),
                                         "fig3b": (0.0, 2e-4, -1.0),
                                         "fig3c": (0.0, 2e-4, 0.5)}[name]
        params = SystemParams(delta=delta, kappa=0.3, gamma=1e-6, coupling_a=coupling_a,
                              coupling_b=coupling_b, n_th=50.0)
        kappas = tuple(np.round(np.linspace(0.05, 0.5, 10), 12))
        return SweepSpec(params, ConstantDrive(0j), (Axis("kappa", kappas),),
                         observable="steady_total", target_a=1000.0, name=name)
    if name in ("fig4a", "fig4b", "fig4c", "fig4d"):
        n = resolution
        params = SystemParams(delta=-1.0, kappa=0.3, gamma=1e-6, coupling_a=0.0,
                              coupling_b=2e-4, n_th=50.0)
        drive = ChirpedDrive.scaled(1.5, 0.15, 0.05, 30.0)
        axes = {"fig4a": (_ratio_axis(n), _beta_axis(n)),
                "fig4b": (_ratio_axis(n), _delta_axis(n)),
                "fig4c": (_ratio_axis(n), _delta_axis(n)),
                "fig4d": (_beta_axis(n), _delta_axis(n))}[name]
        return SweepSpec(params, drive, axes, mf0=MeanFieldState(200), t_end=70.0,
                         chi0_factor=1.5, no_chirp=(name == "fig4c"), name=name,
                         notes="axis ranges chosen to cover the cooling band")
    raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
