"""Command-line interface: evolutions, sweeps and validation reports.

Subcommands: trace, esd, diagram, additivity, validate.  Run configuration
comes from an optional JSON file (``--config``) with flags overriding file
values.  Exit codes: 0 success, 1 I/O failure, 2 invalid configuration,
3 separable initial state, 4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channels import KINDS, TARGETS, NoiseSpec
from .checks import additivity_series, run_validation
from .concurrence import (
    DecayKind,
    SeparableStateError,
    XState,
    concurrence_x,
    diagram_grid,
    esd_time,
    lambda_state,
    trace_concurrence,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_SEPARABLE = 3
EXIT_VALIDATION = 4

_CONFIG_KEYS = {"state", "lambda", "noises", "t_max", "samples", "dt"}


class ConfigError(Exception):
    """The run configuration is malformed or inconsistent."""


def _fmt(x: float) -> str:
    """Fixed 17-significant-digit scientific notation, for stable golden files."""
    return f"{x:.16e}"


@dataclass(frozen=True)
class RunConfig:
    """Source of run parameters; round-trips losslessly through JSON."""

    state: Optional[XState] = None
    lam: Optional[float] = None
    noises: tuple = ()
    t_max: float = 5.0
    samples: int = 100
    dt: float = 1e-4

    def __post_init__(self):
        if self.t_max <= 0:
            raise ConfigError(f"t_max must be > 0, got {self.t_max}")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}")
        if self.dt <= 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.state is not None and self.lam is not None:
            raise ConfigError("give either a state or a lambda value, not both")
        object.__setattr__(self, "noises", tuple(self.noises))

    def initial_state(self) -> XState:
        if self.state is not None:
            return self.state
        if self.lam is not None:
            return _guard(lambda: lambda_state(self.lam))
        raise ConfigError("no initial state configured (need state or lambda)")

    def to_json_dict(self) -> dict:
        out: dict = {}
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.state is not None:
            out["state"] = {
                "a": self.state.a,
                "b": self.state.b,
                "c": self.state.c,
                "d": self.state.d,
                "z_re": self.state.z.real,
                "z_im": self.state.z.imag,
            }
        out["noises"] = [
            {"target": n.target, "kind": n.kind, "rate": n.rate} for n in self.noises
        ]
        out["t_max"] = self.t_max
        out["samples"] = self.samples
        out["dt"] = self.dt
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        state = None
        if "state" in data:
            s = data["state"]
            try:
                state = XState(
                    s["a"], s["b"], s["c"], s["d"], complex(s["z_re"], s["z_im"])
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad state block: {exc}") from exc
        noises = []
        for row in data.get("noises", []):
            try:
                noises.append(NoiseSpec(row["target"], row["kind"], row["rate"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad noise entry {row!r}: {exc}") from exc
        return cls(
            state=state,
            lam=data.get("lambda"),
            noises=tuple(noises),
            t_max=data.get("t_max", 5.0),
            samples=data.get("samples", 100),
            dt=data.get("dt", 1e-4),
        )


def _guard(build):
    try:
        return build()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_noise(text: str) -> NoiseSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"noise must look like TARGET:KIND:RATE, got {text!r}")
    target, kind, rate = parts
    if target not in TARGETS or kind not in KINDS:
        raise ConfigError(f"bad noise {text!r}: target in {TARGETS}, kind in {KINDS}")
    try:
        return NoiseSpec(target, kind, float(rate))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_state(text: str) -> XState:
    parts = text.split(",")
    if len(parts) != 6:
        raise ConfigError(f"state must be 'a,b,c,d,z_re,z_im', got {text!r}")
    try:
        a, b, c, d, zre, zim = (float(p) for p in parts)
        return XState(a, b, c, d, complex(zre, zim))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(args) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    cfg = RunConfig.from_json_dict(data)
    # flags override file values
    state, lam = cfg.state, cfg.lam
    if getattr(args, "state", None) is not None:
        state, lam = _parse_state(args.state), None
    if getattr(args, "lam", None) is not None:
        state, lam = None, args.lam
    noises = cfg.noises
    if getattr(args, "noise", None):
        noises = tuple(_parse_noise(n) for n in args.noise)
    return RunConfig(
        state=state,
        lam=lam,
        noises=noises,
        t_max=args.t_max if getattr(args, "t_max", None) is not None else cfg.t_max,
        samples=(
            args.samples if getattr(args, "samples", None) is not None else cfg.samples
        ),
        dt=args.dt if getattr(args, "dt", None) is not None else cfg.dt,
    )


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _table(args, header: list[str], rows: list[list[str]]):
    if args.format == "json":
        _emit_json(args, {"header": header, "rows": rows})
    else:
        lines = [",".join(header)] + [",".join(r) for r in rows]
        _emit(args, "\n".join(lines) + "\n")


def cmd_trace(args) -> int:
    cfg = load_config(args)
    times = np.linspace(0.0, cfg.t_max, cfg.samples)
    if args.sweep_lambda:
        if args.sweep_lambda < 1:
            raise ConfigError("--sweep-lambda needs at least one value")
        rows = []
        for k in range(1, args.sweep_lambda + 1):
            lam = 4.0 * k / args.sweep_lambda
            trace = trace_concurrence(lambda_state(lam), cfg.noises, times)
            rows.extend(
                [_fmt(lam), _fmt(t), _fmt(v)]
                for t, v in zip(trace.times, trace.values)
            )
        _table(args, ["lambda", "t", "concurrence"], rows)
        return EXIT_OK
    trace = trace_concurrence(cfg.initial_state(), cfg.noises, times)
    rows = [[_fmt(t), _fmt(v)] for t, v in zip(trace.times, trace.values)]
    _table(args, ["t", "concurrence"], rows)
    return EXIT_OK


def cmd_esd(args) -> int:
    cfg = load_config(args)
    state = cfg.initial_state()
    if concurrence_x(state) == 0.0:
        raise SeparableStateError("initial state is separable; nothing can die")
    t_star = esd_time(state, cfg.noises, cfg.t_max)
    report: dict = {"t_max": cfg.t_max}
    if t_star is None:
        report["class"] = DecayKind.EXPONENTIAL.value
    else:
        report["class"] = DecayKind.SUDDEN_DEATH.value
        report["t_star"] = t_star
    _emit_json(args, report)
    return EXIT_OK


_PANELS = {
    "i": ("amplitude",),
    "ii": ("phase",),
    "iii": ("amplitude", "phase"),
}


def cmd_diagram(args) -> int:
    if args.resolution < 8:
        raise ConfigError(f"resolution must be >= 8, got {args.resolution}")
    if args.rate <= 0:
        raise ConfigError(f"rate must be > 0, got {args.rate}")
    specs = tuple(
        NoiseSpec(target, kind, args.rate)
        for kind in _PANELS[args.panel]
        for target in ("A", "B")
    )
    a_values = np.linspace(0.0, 1.0, args.resolution)
    z_values = np.linspace(0.0, 0.5, args.resolution)
    cells = diagram_grid(a_values, z_values, specs, args.t_max)
    rows = [
        [
            _fmt(cell.a),
            _fmt(cell.z),
            cell.kind.value,
            _fmt(cell.t_star) if cell.t_star is not None else "",
        ]
        for cell in cells
    ]
    _table(args, ["a", "z", "class", "t_star"], rows)
    return EXIT_OK


def cmd_additivity(args) -> int:
    if args.gamma1 < 0 or args.gamma2 < 0:
        raise ConfigError("rates must be >= 0")
    if args.samples < 2:
        raise ConfigError("need at least two samples")
    times = np.linspace(0.0, args.t_max, args.samples)
    series = additivity_series(args.gamma1, args.gamma2, times, dt=args.dt or 1e-4)
    dev_kraus = max(abs(k - a) for k, a in zip(series["kraus"], series["analytic"]))
    dev_lind = max(abs(l - a) for l, a in zip(series["lindblad"], series["analytic"]))
    report = {
        "gamma1": args.gamma1,
        "gamma2": args.gamma2,
        "times": series["times"],
        "kraus": series["kraus"],
        "lindblad": series["lindblad"],
        "analytic": series["analytic"],
        "max_dev_kraus": dev_kraus,
        "max_dev_lindblad": dev_lind,
        "pass": bool(dev_kraus <= 1e-10 and dev_lind <= 1e-6),
    }
    _emit_json(args, report)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_validation()
    report = {
        "checks": [r.as_dict() for r in results],
        "pass": all(r.passed for r in results),
    }
    _emit_json(args, report)
    return EXIT_OK if report["pass"] else EXIT_VALIDATION


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON run configuration file")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--seed", type=int, default=None,
                   help="reserved; all computations are deterministic")


def _add_state_flags(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float,
                   help="benchmark-family parameter in (0, 4]")
    p.add_argument("--state", help="X state as 'a,b,c,d,z_re,z_im'")
    p.add_argument("--noise", action="append",
                   help="noise source TARGET:KIND:RATE, repeatable")
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--dt", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdlab",
        description="Two-qubit noise evolutions, concurrence decay and "
        "sudden-death diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="concurrence along a time grid (CSV)")
    _add_common(p)
    _add_state_flags(p)
    p.add_argument("--sweep-lambda", type=int, default=0, metavar="N",
                   help="sweep N family parameters in (0, 4] instead of one state")
    p.set_defaults(func=cmd_trace, default_format="csv")

    p = sub.add_parser("esd", help="decay class and death time (JSON)")
    _add_common(p)
    _add_state_flags(p)
    p.set_defaults(func=cmd_esd, default_format="json")

    p = sub.add_parser("diagram", help="classification over the (a, |z|) plane (CSV)")
    _add_common(p)
    p.add_argument("--panel", choices=tuple(_PANELS), required=True,
                   help="i: amplitude only, ii: phase only, iii: both")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--t-max", dest="t_max", type=float, default=None)
    p.set_defaults(func=cmd_diagram, default_format="csv")

    p = sub.add_parser("additivity", help="single-qubit summed-rate check (JSON)")
    _add_common(p)
    p.add_argument("--gamma1", type=float, default=1.0, help="amplitude rate")
    p.add_argument("--gamma2", type=float, default=1.0, help="phase rate")
    p.add_argument("--t-max", dest="t_max", type=float, default=5.0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_additivity, default_format="json")

    p = sub.add_parser("validate", help="run the full cross-check suite (JSON)")
    _add_common(p)
    p.set_defaults(func=cmd_validate, default_format="json")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    elif args.format == "csv" and args.default_format == "json":
        print(f"error: {args.command} only emits JSON", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SeparableStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEPARABLE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
