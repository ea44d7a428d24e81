"""Flat ``key = value`` run configuration.

One pair per line, ``#`` starts a comment, complex numbers are split into
``_re``/``_im`` keys. Example::

    delta = -1
    kappa = 0.01
    gamma = 1e-05
    coupling_a = 0
    coupling_b = 0.0002
    n_th = 100
    drive.kind = chirped
    drive.chi0 = 0.0728
    drive.alpha = 0.14
    drive.beta = 0.04
    drive.t0 = 40
    a0_re = 200
    t_end = 120

:func:`render_config` writes the canonical form, which
:func:`parse_config` reads back to an equal :class:`RunConfig`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, ConflictingDriveKeys, MissingKey, ParseError
from .model import ChirpedDrive, ConstantDrive, DriveSignal, MeanFieldState, SystemParams
from .propagation import DEFAULT_DT, DEFAULT_SAMPLE_EVERY

PARAM_KEYS = ("delta", "kappa", "gamma", "coupling_a", "coupling_b", "n_th")
CONSTANT_KEYS = ("drive.omega0_re", "drive.omega0_im")
CHIRPED_KEYS = ("drive.chi0", "drive.alpha", "drive.beta", "drive.t0")
STATE_KEYS = ("a0_re", "a0_im", "b0_re", "b0_im")
CONTROL_KEYS = ("dt", "t_end", "sample_every")
KNOWN_KEYS = frozenset(PARAM_KEYS + ("drive.kind",) + CONSTANT_KEYS + CHIRPED_KEYS
                       + STATE_KEYS + CONTROL_KEYS)


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    drive: DriveSignal
    mf0: MeanFieldState = MeanFieldState()
    dt: float = DEFAULT_DT
    t_end: float | None = None
    sample_every: int = DEFAULT_SAMPLE_EVERY
    output: str | None = None
    output_format: str = "csv"


def _tokenize(text):
    pairs = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(f"expected key = value, got {raw.strip()!r}", lineno)
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in pairs:
            raise ParseError(f"duplicate key {key!r} (first on line {lines[key]})", lineno)
        pairs[key] = value
        lines[key] = lineno
    return pairs, lines


def parse_config(text: str) -> RunConfig:
    """Parse configuration text.

    Raises
    ------
    ParseError
        Malformed line, unknown or duplicate key, or unreadable number.
    MissingKey
        A required key is absent (or ``drive.kind`` is empty).
    ConflictingDriveKeys
        Keys of the other drive kind are present.
    """
    pairs, lines = _tokenize(text)

    def number(key, default=None):
        if key not in pairs:
            if default is None:
                raise MissingKey(f"missing required key {key!r}")
            return default
        try:
            value = float(pairs[key])
        except ValueError:
            raise ParseError(f"{key}: not a number: {pairs[key]!r}", lines[key]) from None
        if not math.isfinite(value):
            raise ParseError(f"{key}: value must be finite", lines[key])
        return value

    kind = pairs.get("drive.kind", "")
    if not kind:
        raise MissingKey("missing required key 'drive.kind'")
    if kind not in ("constant", "chirped"):
        raise ParseError(f"drive.kind must be 'constant' or 'chirped', got {kind!r}",
                         lines["drive.kind"])
    other = CHIRPED_KEYS if kind == "constant" else CONSTANT_KEYS
    clash = [k for k in other if k in pairs]
    if clash:
        raise ConflictingDriveKeys(f"drive.kind = {kind} conflicts with {', '.join(clash)}")

    try:
        params = SystemParams(**{k: number(k) for k in PARAM_KEYS})
        if kind == "constant":
            if not any(k in pairs for k in CONSTANT_KEYS):
                raise MissingKey("constant drive needs drive.omega0_re and/or drive.omega0_im")
            drive = ConstantDrive(complex(number("drive.omega0_re", 0.0),
                                          number("drive.omega0_im", 0.0)))
        else:
            drive = ChirpedDrive(*(number(k) for k in CHIRPED_KEYS))
        mf0 = MeanFieldState(complex(number("a0_re", 0.0), number("a0_im", 0.0)),
                             complex(number("b0_re", 0.0), number("b0_im", 0.0)))
        dt = number("dt", DEFAULT_DT)
        t_end = number("t_end") if "t_end" in pairs else None
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    sample_every = DEFAULT_SAMPLE_EVERY
    if "sample_every" in pairs:
        try:
            sample_every = int(pairs["sample_every"])
        except ValueError:
            raise ParseError(f"sample_every must be an integer, got {pairs['sample_every']!r}",
                             lines["sample_every"]) from None
        if sample_every < 1:
            raise ParseError("sample_every must be >= 1", lines["sample_every"])
    if not dt > 0:
        raise ConfigError("dt must be > 0")
    if t_end is not None and not t_end > 0:
        raise ConfigError("t_end must be > 0")
    return RunConfig(params, drive, mf0, dt, t_end, sample_every)


def render_config(cfg: RunConfig) -> str:
    """Canonical text form of ``cfg`` (output settings are not included)."""
    p = cfg.params
    items = [(k, getattr(p, k)) for k in PARAM_KEYS]
    if isinstance(cfg.drive, ConstantDrive):
        w = complex(cfg.drive.omega0)
        items += [("drive.kind", "constant"), ("drive.omega0_re", w.real), ("drive.omega0_im", w.imag)]
    else:
        d = cfg.drive
        items += [("drive.kind", "chirped"), ("drive.chi0", d.chi0), ("drive.alpha", d.alpha),
                  ("drive.beta", d.beta), ("drive.t0", d.t0)]
    a, b = complex(cfg.mf0.a), complex(cfg.mf0.b)
    items += [("a0_re", a.real), ("a0_im", a.imag), ("b0_re", b.real), ("b0_im", b.imag),
              ("dt", cfg.dt)]
    if cfg.t_end is not None:
        items.append(("t_end", cfg.t_end))
    items.append(("sample_every", cfg.sample_every))
    return "".join(f"{k} = {v if isinstance(v, str) else repr(v)}\n" for k, v in items)
