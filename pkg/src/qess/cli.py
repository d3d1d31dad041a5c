"""Command-line interface.

Settings resolve in three layers: command-line flags, then the JSON file
given by ``--config`` (keys are the flag names in snake_case), then
built-in defaults. ``QESS_OUT_DIR`` is consulted only when no output
directory was given either way.

Exit codes: 0 success, 1 reproduction mismatch, 2 invalid input, 3 I/O
failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic, dynamics, report
from .equilibrium import GridSpec, classify_quantum, sweep_gamma
from .errors import QessError
from .game import (DEFAULT_GAME, GameMatrix, MixedStrategy, Tolerances,
                   classical_payoff, classify_classical, validate_game)
from .quantum import S_STAR, QuantumStrategy, check_gamma, quantum_payoff_numeric

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
FORMATS = ("csv", "json", "svg")
SVG_MAX_POINTS = 2000


class ConfigError(QessError, ValueError):
    def __init__(self, name, message):
        self.field = name
        super().__init__(f"{name}: {message}")


_ANGLE = re.compile(r"^\s*(?:(\d+(?:\.\d*)?)\s*\*?\s*)?pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text) -> float:
    """Radians as a number, or ``pi``, ``pi/2``, ``3pi/8``, ``3*pi/4`` ..."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    m = _ANGLE.match(str(text))
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    return float(text)


def _split(value, n=None, name="value"):
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = [p for p in str(value).split(",")]
    if n is not None and len(parts) != n:
        raise ConfigError(name, f"expected {n} comma-separated values, got {len(parts)}")
    return parts


def _reals(value, n, name):
    try:
        return [float(x) for x in _split(value, n, name)]
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(name, f"not a list of numbers: {value!r}") from None


def _strategy(value, name):
    try:
        theta, phi = (parse_angle(x) for x in _split(value, 2, name))
        return QuantumStrategy(theta, phi)
    except ConfigError:
        raise
    except (QessError, ValueError) as exc:
        raise ConfigError(name, str(exc)) from None


def _angle(value, name):
    try:
        return parse_angle(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"not an angle: {value!r}") from None


def _number(value, name, kind=float):
    try:
        if kind is int:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"not a valid {kind.__name__}: {value!r}") from None


@dataclass
class RunConfig:
    game: tuple = DEFAULT_GAME.as_tuple()
    strategy: QuantumStrategy = S_STAR
    opponent: Optional[QuantumStrategy] = None
    classical: Optional[float] = None
    gamma: float = 0.0
    gamma_sweep: Optional[tuple] = None
    closed_form: bool = False
    gap_tol: float = 1e-9
    exclusion_radius: float = 1e-3
    grid_points: int = 1001
    theta_points: int = 181
    phi_points: int = 91
    refinement_levels: int = 3
    zoom_factor: float = 10.0
    incumbent: QuantumStrategy = S_STAR
    mutant: QuantumStrategy = field(default_factory=lambda: QuantumStrategy(0.0, 0.0))
    epsilon0: float = 0.01
    dt: float = dynamics.DEFAULT_DT
    steps: int = dynamics.DEFAULT_STEPS
    out: Optional[str] = None
    formats: tuple = ("csv",)
    mu: Optional[tuple] = None
    base2: bool = False

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.gap_tol, self.exclusion_radius)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.theta_points, self.phi_points,
                        self.refinement_levels, self.zoom_factor)

    def game_matrix(self, require_constrained=False) -> GameMatrix:
        try:
            return validate_game(*self.game, require_constrained=require_constrained)
        except QessError as exc:
            raise ConfigError("game", str(exc)) from None

    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get("QESS_OUT_DIR") or ".")


# key -> converter from raw (string, number or list) to the RunConfig value
_CONVERTERS = {
    "game": lambda v: tuple(_reals(v, 4, "game")),
    "strategy": lambda v: _strategy(v, "strategy"),
    "opponent": lambda v: _strategy(v, "opponent"),
    "incumbent": lambda v: _strategy(v, "incumbent"),
    "mutant": lambda v: _strategy(v, "mutant"),
    "classical": lambda v: _number(v, "classical"),
    "gamma": lambda v: _angle(v, "gamma"),
    "gamma_sweep": lambda v: _sweep_spec(v),
    "closed_form": bool,
    "gap_tol": lambda v: _number(v, "gap_tol"),
    "exclusion_radius": lambda v: _number(v, "exclusion_radius"),
    "grid_points": lambda v: _number(v, "grid_points", int),
    "theta_points": lambda v: _number(v, "theta_points", int),
    "phi_points": lambda v: _number(v, "phi_points", int),
    "refinement_levels": lambda v: _number(v, "refinement_levels", int),
    "zoom_factor": lambda v: _number(v, "zoom_factor"),
    "epsilon0": lambda v: _number(v, "epsilon0"),
    "dt": lambda v: _number(v, "dt"),
    "steps": lambda v: _number(v, "steps", int),
    "out": str,
    "format": lambda v: _formats(v),
    "mu": lambda v: tuple(_reals(v, None, "mu")),
    "base2": bool,
}
_RENAMED = {"format": "formats"}


def _sweep_spec(value):
    parts = _split(value, 3, "gamma_sweep")
    start, end = _angle(parts[0], "gamma_sweep"), _angle(parts[1], "gamma_sweep")
    count = _number(parts[2], "gamma_sweep", int)
    if count < 1:
        raise ConfigError("gamma_sweep", f"count must be >= 1, got {count}")
    if count > 1 and not end > start:
        raise ConfigError("gamma_sweep", "end must exceed start when count > 1")
    return (start, end, count)


def _formats(value):
    fmts = tuple(f.strip().lower() for f in _split(value, None, "format") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad:
        raise ConfigError("format", f"unknown format(s) {bad}; choose from {FORMATS}")
    return fmts


def build_config(cli_values: dict, config_path=None) -> RunConfig:
    """Merge flags over the config file over defaults."""
    layered = {}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                file_values = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {config_path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(file_values, dict):
            raise ConfigError("config", "top level must be an object")
        for key, value in file_values.items():
            key = key.replace("-", "_")
            if key not in _CONVERTERS:
                raise ConfigError(key, "unknown config key")
            layered[key] = value
    layered.update({k: v for k, v in cli_values.items() if v is not None})

    kwargs = {}
    for key, raw in layered.items():
        kwargs[_RENAMED.get(key, key)] = _CONVERTERS[key](raw)
    return RunConfig(**kwargs)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _thin(xs, ys, limit=SVG_MAX_POINTS):
    n = len(xs)
    if n <= limit:
        return xs, ys
    idx = np.unique(np.linspace(0, n - 1, limit).round().astype(int))
    return np.asarray(xs)[idx], np.asarray(ys)[idx]


def _fmt_strategy(s):
    return f"({s.theta!r}, {s.phi!r})"


# -- commands --------------------------------------------------------------

def cmd_payoff(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    game = cfg.game_matrix()
    constrained = game.satisfies_constraints()
    if cfg.closed_form and not constrained:
        game = cfg.game_matrix(require_constrained=True)  # raises, naming the clause
    gamma = check_gamma(cfg.gamma)
    s_a, s_b = cfg.strategy, cfg.opponent or cfg.strategy
    p_a, p_b = quantum_payoff_numeric(game, gamma, s_a, s_b)
    print(f"gamma = {gamma!r}", file=stream)
    print(f"alice = {_fmt_strategy(s_a)}  bob = {_fmt_strategy(s_b)}", file=stream)
    print(f"numeric: P_A = {p_a!r}  P_B = {p_b!r}", file=stream)
    if constrained:
        cgame = cfg.game_matrix(require_constrained=True)
        closed = analytic.quantum_payoff_closed(cgame, gamma, s_a, s_b)
        print(f"closed:  P_A = {closed!r}", file=stream)
        print(f"|numeric - closed| = {abs(p_a - closed)!r}", file=stream)
    return EXIT_OK


def classify_payload(cfg: RunConfig) -> dict:
    game = cfg.game_matrix()
    if cfg.classical is not None:
        try:
            p = MixedStrategy(cfg.classical)
        except QessError as exc:
            raise ConfigError("classical", str(exc)) from None
        rep = classify_classical(game, p, cfg.tolerances, cfg.grid_points)
        return report.report_to_dict(rep, mode="classical", game=list(game.as_tuple()),
                                     candidate={"p": p.p})
    gamma = check_gamma(cfg.gamma)
    rep = classify_quantum(game, gamma, cfg.strategy, cfg.tolerances, cfg.grid)
    return report.report_to_dict(
        rep, mode="quantum", game=list(game.as_tuple()), gamma=gamma,
        candidate={"theta": cfg.strategy.theta, "phi": cfg.strategy.phi})


def cmd_classify(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    text = report.dumps_json(classify_payload(cfg))
    stream.write(text)
    if cfg.out is not None or "json" in cfg.formats:
        _write(cfg.out_dir() / "classify.json", text)
    return EXIT_OK


def sweep_values(cfg: RunConfig):
    if cfg.gamma_sweep is None:
        raise ConfigError("gamma_sweep", "a sweep spec start,end,count is required")
    start, end, count = cfg.gamma_sweep
    return [float(g) for g in np.linspace(start, end, count)]


def cmd_sweep(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    gammas = sweep_values(cfg)
    results = sweep_gamma(cfg.game_matrix(), cfg.strategy, gammas, cfg.tolerances, cfg.grid)
    out = cfg.out_dir()
    text = report.sweep_csv(results)
    _write(out / "sweep.csv", text)
    written = [out / "sweep.csv"]
    if "json" in cfg.formats:
        payload = [report.report_to_dict(r, gamma=g) for g, r in results]
        _write(out / "sweep.json", report.dumps_json(payload))
        written.append(out / "sweep.json")
    if "svg" in cfg.formats:
        svg = report.line_chart_svg(gammas, [r.strict_margin for _, r in results],
                                    title="Strictness margin vs entanglement",
                                    xlabel="gamma (rad)", ylabel="strict margin")
        _write(out / "sweep.svg", svg)
        written.append(out / "sweep.svg")
    stream.write(text)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_invade(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    game = cfg.game_matrix()
    gamma = check_gamma(cfg.gamma)
    m = dynamics.induced_matrix(game, gamma, cfg.incumbent, cfg.mutant)
    try:
        trace = dynamics.simulate_invasion(m, cfg.epsilon0, cfg.dt, cfg.steps)
    except QessError as exc:
        raise ConfigError("dynamics", str(exc)) from None
    out = cfg.out_dir()
    _write(out / "invade.csv", report.trace_csv(trace))
    if "svg" in cfg.formats:
        xs, ys = _thin(trace.times, trace.epsilon_series)
        _write(out / "invade.svg", report.line_chart_svg(
            xs, ys, title="Mutant share under replicator dynamics",
            xlabel="time", ylabel="epsilon"))
    threshold = dynamics.invasion_threshold(m)
    print("induced a,b,c,d = " + ",".join(report.fmt_real(x) for x in m.as_tuple()),
          file=stream)
    print(f"invasion_threshold = {threshold!r}", file=stream)
    print(f"final_epsilon = {trace.final!r}", file=stream)
    if trace.boundary:
        print("boundary_start = true", file=stream)
    print(f"VERDICT={trace.verdict}", file=stream)
    return EXIT_OK


def cmd_entropy(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    if cfg.mu is None:
        raise ConfigError("mu", "a comma-separated list of contributions is required")
    try:
        value = dynamics.evolutionary_entropy(cfg.mu, base=2.0 if cfg.base2 else math.e)
    except QessError as exc:
        raise ConfigError("mu", str(exc)) from None
    print(f"entropy = {value!r} {'bits' if cfg.base2 else 'nats'}", file=stream)
    return EXIT_OK


@dataclass
class Fact:
    label: str
    expected: str
    observed: str
    evidence: str

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


def _yn(b):
    return "yes" if b else "no"


def reproduce_facts(cfg: RunConfig) -> list:
    game = cfg.game_matrix(require_constrained=True)
    tol, grid = cfg.tolerances, cfg.grid
    facts = []

    c = classify_classical(game, 0.5, tol, cfg.grid_points)
    half = classical_payoff(game, 0.5, 0.5)
    facts.append(Fact(
        "classical p*=1/2", "NE yes / ESS no",
        f"NE {_yn(c.is_ne)} / ESS {_yn(c.is_ess)}",
        f"min NE gap {c.min_ne_gap:.3e}; ESS margin {c.ess_second_condition_margin!r} "
        f"at p={c.witness.p:g}; payoff {half!r}"))

    q0 = classify_quantum(game, 0.0, S_STAR, tol, grid)
    facts.append(Fact(
        "quantum s*, gamma=0", "NE yes / strict no / ESS no",
        f"NE {_yn(q0.is_ne)} / strict {_yn(q0.is_strict_ne)} / ESS {_yn(q0.is_ess)}",
        f"min NE gap {q0.min_ne_gap:.3e}; ESS margin {q0.ess_second_condition_margin!r} "
        f"at theta={q0.witness.theta:g}"))

    for name, gamma in (("pi/4", math.pi / 4), ("pi/2", math.pi / 2)):
        q = classify_quantum(game, gamma, S_STAR, tol, grid)
        facts.append(Fact(
            f"quantum s*, gamma={name}", "strict NE yes / ESS yes",
            f"strict NE {_yn(q.is_strict_ne)} / ESS {_yn(q.is_ess)}",
            f"strict margin {q.strict_margin:.6e} over {q.probes_evaluated} probes"))

    mutant = QuantumStrategy(0.0, 0.0)
    for name, gamma, eps0, expected in (("pi/2", math.pi / 2, 0.1, dynamics.REPELLED),
                                        ("0", 0.0, 0.01, dynamics.INVADED)):
        m = dynamics.induced_matrix(game, gamma, S_STAR, mutant)
        tr = dynamics.simulate_invasion(m, eps0, cfg.dt, cfg.steps)
        facts.append(Fact(
            f"invasion gamma={name}, eps0={eps0:g}", expected, tr.verdict,
            f"final eps {tr.final:.3e}; threshold {dynamics.invasion_threshold(m)!r}"))
    return facts


def cmd_reproduce(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    facts = reproduce_facts(cfg)
    w0 = max(len(f.label) for f in facts)
    w1 = max(len(f.expected) for f in facts)
    w2 = max(len(f.observed) for f in facts)
    print(f"{'fact':<{w0}}  {'expected':<{w1}}  {'observed':<{w2}}  match  evidence",
          file=stream)
    for f in facts:
        print(f"{f.label:<{w0}}  {f.expected:<{w1}}  {f.observed:<{w2}}  "
              f"{'PASS ' if f.ok else 'FAIL '}  {f.evidence}", file=stream)
    ok = all(f.ok for f in facts)
    print("REPRODUCED" if ok else "MISMATCH", file=stream)
    return EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {
    "payoff": cmd_payoff,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "invade": cmd_invade,
    "reproduce": cmd_reproduce,
    "entropy": cmd_entropy,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--game", help="payoffs r,s,t,u")
    g.add_argument("--gap-tol", dest="gap_tol")
    g.add_argument("--exclusion-radius", dest="exclusion_radius")
    g.add_argument("--grid-points", dest="grid_points", help="classical probe count")
    g.add_argument("--theta-points", dest="theta_points")
    g.add_argument("--phi-points", dest="phi_points")
    g.add_argument("--refinement-levels", dest="refinement_levels")
    g.add_argument("--zoom-factor", dest="zoom_factor")
    g.add_argument("--out", help="output directory (fallback: $QESS_OUT_DIR, then .)")
    g.add_argument("--format", help="comma-separated subset of csv,json,svg")

    parser = argparse.ArgumentParser(
        prog="qess", description="Evolutionary stability in Eisert-quantized 2x2 games")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("payoff", parents=[common], help="numeric and closed-form payoffs")
    p.add_argument("--gamma")
    p.add_argument("--strategy", help="Alice's theta,phi")
    p.add_argument("--opponent", help="Bob's theta,phi (default: same as Alice)")
    p.add_argument("--closed-form", dest="closed_form", action="store_true", default=None,
                   help="require the closed form (fails on unconstrained games)")

    p = sub.add_parser("classify", parents=[common], help="NE / strict NE / ESS verdicts")
    p.add_argument("--gamma")
    p.add_argument("--strategy", help="candidate theta,phi")
    p.add_argument("--classical", help="classical candidate probability p")

    p = sub.add_parser("sweep", parents=[common], help="classify over a gamma grid")
    p.add_argument("--gamma-sweep", dest="gamma_sweep", help="start,end,count")
    p.add_argument("--strategy", help="candidate theta,phi")

    p = sub.add_parser("invade", parents=[common], help="replicator invasion trace")
    p.add_argument("--gamma")
    p.add_argument("--incumbent")
    p.add_argument("--mutant")
    p.add_argument("--epsilon0")
    p.add_argument("--dt")
    p.add_argument("--steps")

    p = sub.add_parser("reproduce", parents=[common], help="check the headline results")
    p.add_argument("--dt")
    p.add_argument("--steps")

    p = sub.add_parser("entropy", parents=[common], help="evolutionary entropy")
    p.add_argument("--mu", help="comma-separated contributions")
    p.add_argument("--base2", action="store_true", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config")
    try:
        cfg = build_config(args, config_path)
        return COMMANDS[command](cfg)
    except QessError as exc:
        print(f"qess: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"qess: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
