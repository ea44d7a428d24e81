"""Command-line front end.

    optocool simulate -c run.cfg -o traj.csv
    optocool steady -c run.cfg --target-a 1000,0 -o steady.json
    optocool sweep --preset fig2 -j 4 -o fig2.csv
    optocool sweep -c run.cfg --axis kappa=0.1,0.2,0.3 -o sweep.csv
    optocool verify

Exit status: 0 on success, 1 on usage or configuration errors, 2 on
numerical failure (including failed ``verify`` checks).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .checks import run_checks
from .config import RunConfig, parse_config
from .errors import ChirpWithoutDissipation, ConfigError, MissingKey, NumericalError
from .propagation import propagate
from .steady import steady_state
from .sweeps import AXIS_NAMES, OBSERVABLES, PRESETS, Axis, SweepSpec, figure_preset, run_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

TRAJECTORY_HEADER = ("t", "re_a", "im_a", "re_b", "im_b", "n_phonon", "n_photon",
                     "re_omega", "im_omega")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _complex_pair(text):
    try:
        re_, im_ = text.split(",")
        return complex(float(re_), float(im_))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None


def _axis(text):
    name, sep, values = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=v1,v2,..., got {text!r}")
    try:
        return Axis(name.strip(), tuple(float(v) for v in values.split(",")))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_workers():
    value = os.environ.get("OPTOCOOL_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def build_parser():
    parser = _Parser(prog="optocool", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="propagate one run and write the trajectory CSV")
    sim.add_argument("-c", "--config", required=True)
    sim.add_argument("-o", "--output", default="-")
    sim.add_argument("--sqrt-kappa-noise", action="store_true",
                     help="use sqrt(kappa) instead of kappa in noise element (4,2)")

    st = sub.add_parser("steady", help="stationary state under a constant drive (JSON)")
    st.add_argument("-c", "--config", required=True)
    st.add_argument("--target-a", type=_complex_pair, required=True, metavar="RE,IM")
    st.add_argument("-o", "--output", default="-")

    sw = sub.add_parser("sweep", help="evaluate an observable on a 1-D or 2-D grid (CSV)")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESETS)
    src.add_argument("-c", "--config")
    sw.add_argument("--axis", type=_axis, action="append", default=[],
                    help=f"name=v1,v2,... with name in {{{', '.join(AXIS_NAMES)}}}")
    sw.add_argument("--observable", choices=OBSERVABLES)
    sw.add_argument("--target-a", type=_complex_pair, metavar="RE,IM")
    sw.add_argument("--resolution", type=int, default=41,
                    help="points per axis for the fig4 presets")
    sw.add_argument("-j", "--jobs", type=int, default=_default_workers())
    sw.add_argument("-o", "--output", default="-")

    sub.add_parser("verify", help="run the oracle and invariant checks")
    return parser


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt(x):
    return format(float(x), ".17g")


def trajectory_csv(traj) -> str:
    lines = [",".join(TRAJECTORY_HEADER)]
    for t, a, b, n_ph, n_pt, w in zip(traj.t, traj.a, traj.b, traj.n_phonon,
                                       traj.n_photon, traj.omega):
        lines.append(",".join(_fmt(x) for x in (t, a.real, a.imag, b.real, b.imag,
                                                 n_ph, n_pt, w.real, w.imag)))
    return "\n".join(lines) + "\n"


def _simulate(args):
    cfg = _load(args.config)
    if cfg.t_end is None:
        raise MissingKey("simulate needs t_end in the configuration")
    traj = propagate(cfg.params, cfg.drive, cfg.mf0, cfg.t_end, cfg.dt, cfg.sample_every,
                     sqrt_kappa_noise=args.sqrt_kappa_noise)
    _write(args.output, trajectory_csv(traj))


def _steady(args):
    cfg = _load(args.config)
    res = steady_state(cfg.params, args.target_a)
    doc = {"omega0_re": res.omega0.real, "omega0_im": res.omega0.imag,
           "a_ss_re": res.a_ss.real, "a_ss_im": res.a_ss.imag,
           "b_ss_re": res.b_ss.real, "b_ss_im": res.b_ss.imag,
           "n_total": res.n_total, "sigma_eq": res.sigma_eq, "s_bac": res.s_bac}
    _write(args.output, json.dumps(doc, indent=2) + "\n")


def _sweep(args):
    if args.jobs < 1:
        raise UsageError("-j must be >= 1")
    if args.preset:
        if args.axis:
            raise UsageError("--axis cannot be combined with --preset")
        spec = figure_preset(args.preset, resolution=args.resolution)
        if args.observable and args.observable != spec.observable:
            spec = replace(spec, observable=args.observable)
    else:
        if not 1 <= len(args.axis) <= 2:
            raise UsageError("sweep -c needs one or two --axis options")
        cfg = _load(args.config)
        observable = args.observable or "phonon_at_t_end"
        if observable == "phonon_at_t_end" and cfg.t_end is None:
            raise MissingKey("phonon_at_t_end sweeps need t_end in the configuration")
        try:
            spec = SweepSpec(cfg.params, cfg.drive, tuple(args.axis), observable=observable,
                             mf0=cfg.mf0, t_end=cfg.t_end or 1.0, dt=cfg.dt,
                             target_a=args.target_a)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    grid = run_sweep(spec, workers=args.jobs)
    _write(args.output, grid.to_csv())


def _verify(args):
    results = run_checks()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_NUMERICAL


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        handler = {"simulate": _simulate, "steady": _steady,
                   "sweep": _sweep, "verify": _verify}[args.command]
        return handler(args) or EXIT_OK
    except UsageError as exc:
        print(f"UsageError: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ChirpWithoutDissipation, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
