"""Command-line front end: spectra, packet trajectories and the verification suite.

Each subcommand reads a JSON config and writes CSV (spectrum, evolve) or
JSON (verify).  Exit codes: 0 success, 2 config error, 3 check failure,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .core import ConfiningBC, NumericalError, PhysicsParams, make_grid
from .impenetrable_box import BoxPacket, box_spectrum
from .linear_potential import LinearPacket, linear_spectrum
from .periodic_box import build_periodic_packet, periodic_spectrum
from .rest_box import RestPacket
from .verify import (
    DEFAULT_PARAMS,
    DEFAULT_SEED,
    SCENARIOS,
    Budget,
    random_packet,
    report_json,
    run_suite,
    scenario_grid,
)

EXIT_OK, EXIT_CONFIG, EXIT_CHECK, EXIT_NUMERIC = 0, 2, 3, 4

SPECTRUM_COLUMNS = ("kind", "label_value", "energy_plus", "energy_minus", "residual")
EVOLVE_COLUMNS = ("t", "x", "re_phi1", "im_phi1", "re_phi2", "im_phi2", "density")

_CONFIG_KEYS = {
    "scenario", "params", "bc", "coefficients", "c_q", "c0", "seed", "grid_size", "times",
    "theta", "n_max", "count", "rescale", "scenarios", "budget", "tolerance_override",
    "fault_injection", "out",
}


def _fmt(value: Any) -> str:
    if isinstance(value, str):
        return value
    return format(float(value) + 0.0, ".17g")  # + 0.0 folds -0.0 into 0


def _complex(value: Any, what: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    raise ValueError(f"{what} must be a number, [re, im] or {{re, im}}, got {value!r}")


@dataclass
class RunConfig:
    """Validated config; keys mirror the JSON config in lower_snake_case."""

    scenario: Optional[str] = None
    params: PhysicsParams = DEFAULT_PARAMS
    bc: Optional[ConfiningBC] = None
    coefficients: Optional[dict] = None
    c_q: Optional[complex] = None
    c0: Optional[complex] = None
    seed: int = DEFAULT_SEED
    grid_size: int = 401
    times: tuple = (0.0,)
    theta: float = 0.0
    n_max: int = 4
    count: int = 5
    rescale: bool = False
    scenarios: tuple = SCENARIOS
    budget: Budget = field(default_factory=Budget)
    tolerance_override: Optional[float] = None
    fault_injection: tuple = ()
    out: Optional[str] = None

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ValueError("config must be a JSON object")
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config key(s): {unknown}")
        cfg = cls()
        if "params" in raw:
            p = raw["params"]
            if not isinstance(p, dict) or set(p) - {"hbar", "c", "m", "L", "k"}:
                raise ValueError("params must be an object with keys among hbar, c, m, L, k")
            # Keys left out keep their defaults (natural units, L = 2 pi, k = 1).
            values = {k: getattr(DEFAULT_PARAMS, k) for k in ("hbar", "c", "m", "L", "k")}
            values.update({k: (None if v is None else float(v)) for k, v in p.items()})
            cfg.params = PhysicsParams(**values)
        if "scenario" in raw:
            if raw["scenario"] not in SCENARIOS:
                raise ValueError(f"scenario must be one of {SCENARIOS}, got {raw['scenario']!r}")
            cfg.scenario = raw["scenario"]
        if raw.get("bc") is not None:
            try:
                cfg.bc = ConfiningBC(raw["bc"])
            except ValueError:
                raise ValueError(f"bc must be one of {[b.value for b in ConfiningBC]}, "
                                 f"got {raw['bc']!r}") from None
        if raw.get("coefficients") is not None:
            coeffs = {}
            for item in raw["coefficients"]:
                if not isinstance(item, dict) or "label" not in item:
                    raise ValueError("each coefficient needs a label and re/im parts")
                label = int(item["label"])
                if label in coeffs:
                    raise ValueError(f"duplicate coefficient label {label}")
                coeffs[label] = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
            cfg.coefficients = coeffs
        if raw.get("c_q") is not None:
            cfg.c_q = _complex(raw["c_q"], "c_q")
        if raw.get("c0") is not None:
            cfg.c0 = _complex(raw["c0"], "c0")
        for key, conv in (("seed", int), ("grid_size", int), ("theta", float), ("n_max", int),
                          ("count", int), ("rescale", bool)):
            if key in raw:
                setattr(cfg, key, conv(raw[key]))
        if "times" in raw:
            cfg.times = tuple(float(t) for t in raw["times"])
            if not cfg.times:
                raise ValueError("times must list at least one sample")
        if "scenarios" in raw:
            cfg.scenarios = tuple(raw["scenarios"])
        if "budget" in raw:
            cfg.budget = Budget(**{k: int(v) for k, v in raw["budget"].items()})
        if raw.get("tolerance_override") is not None:
            cfg.tolerance_override = float(raw["tolerance_override"])
        if raw.get("fault_injection") is not None:
            faults = raw["fault_injection"]
            cfg.fault_injection = (faults,) if isinstance(faults, str) else tuple(faults)
        if raw.get("out") is not None:
            cfg.out = str(raw["out"])
        cfg.validate_common()
        return cfg

    def validate_common(self) -> None:
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.grid_size < 3 or self.grid_size % 2 == 0:
            raise ValueError("grid_size must be odd and >= 3 (Simpson quadrature)")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")

    def require_scenario(self) -> str:
        if self.scenario is None:
            raise ValueError(f"config must name a scenario among {SCENARIOS}")
        if self.scenario == "box" and self.bc is None:
            raise ValueError("box scenario needs bc")
        if self.scenario == "linear":
            self.params.require_k()
        return self.scenario


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def spectrum_rows(cfg: RunConfig) -> list[tuple]:
    scenario = cfg.require_scenario()
    P = cfg.params
    rows = []
    if scenario == "rest":
        rows.append(("rest", 0.0, P.rest_energy, -P.rest_energy, 0.0))
    elif scenario == "periodic":
        for lab in sorted(periodic_spectrum(P, cfg.n_max), key=lambda lab: lab.n):
            residual = abs(cmath.exp(1j * lab.p * P.L / P.hbar) - 1.0)
            rows.append(("oscillatory", lab.p, lab.E, -lab.E, residual))
    elif scenario == "box":
        for e in box_spectrum(cfg.bc, P, cfg.count):
            rows.append((e.kind, e.value, e.energy, -e.energy, e.residual))
    else:
        for e in linear_spectrum(P, cfg.n_max):
            kind = "zero_mode" if e.N == 0 else "level"
            rows.append((kind, e.N, e.energy, -e.energy, 0.0))
    return rows


def cmd_spectrum(cfg: RunConfig, out: str) -> int:
    rows = spectrum_rows(cfg)
    _write_csv(out, SPECTRUM_COLUMNS, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def build_packet(cfg: RunConfig):
    """Packet from explicit coefficients, or seeded random amplitudes if none are given."""
    scenario = cfg.require_scenario()
    P = cfg.params
    levels = max([cfg.n_max] + [abs(n) for n in (cfg.coefficients or {})])
    grid = (make_grid(0.0, P.L, cfg.grid_size) if scenario != "linear"
            else scenario_grid("linear", P, cfg.grid_size, levels))
    if cfg.coefficients is None and cfg.c_q is None and cfg.c0 is None:
        rng = np.random.default_rng(cfg.seed)
        return random_packet(scenario, rng, P, grid, cfg.theta, bc=cfg.bc, modes=cfg.n_max)
    coeffs = cfg.coefficients or {}
    if scenario == "rest":
        if set(coeffs) - {0}:
            raise ValueError("rest packets take a single coefficient with label 0")
        c = coeffs.get(0, 1.0 / math.sqrt(2.0))
        return RestPacket(P, grid, c, cfg.theta)
    if scenario == "periodic":
        packet, _ = build_periodic_packet(coeffs, cfg.theta, P, grid, rescale=cfg.rescale)
        return packet
    if scenario == "box":
        return BoxPacket(cfg.bc, coeffs, P, grid, cfg.c_q, cfg.theta)
    return LinearPacket(cfg.c0 if cfg.c0 is not None else 0.0, coeffs, P, grid, cfg.theta)


def evolve_rows(cfg: RunConfig) -> list[tuple]:
    packet = build_packet(cfg)
    rows = []
    for t in cfg.times:
        psi = packet.expansion.field(t)
        dens = psi.density()
        for x, (a, b), d in zip(psi.grid, psi.values, dens):
            rows.append((t, x, a.real, a.imag, b.real, b.imag, d))
    return rows


def cmd_evolve(cfg: RunConfig, out: str) -> int:
    _write_csv(out, EVOLVE_COLUMNS, evolve_rows(cfg))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig, out: str) -> int:
    results = run_suite(cfg.scenarios, cfg.params, cfg.seed, cfg.budget,
                        tolerance_override=cfg.tolerance_override,
                        faults=cfg.fault_injection)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report_json(results, cfg.seed))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _write_csv(path: str, header: Sequence[str], rows: Sequence[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


_COMMANDS = {"spectrum": cmd_spectrum, "evolve": cmd_evolve, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majorana1d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file (defaults apply when omitted)")
        p.add_argument("--out", help="output path (overrides the config's out key)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--theta", type=float, help="override the Majorana phase (radians)")
    return parser


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config is not valid JSON: {exc}") from None
    return RunConfig.from_dict(raw)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.theta is not None:
            cfg.theta = args.theta
        cfg.validate_common()
        out = args.out or cfg.out
        if out is None:
            raise ValueError("no output path: pass --out or set out in the config")
        return _COMMANDS[args.command](cfg, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
