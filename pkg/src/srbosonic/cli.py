"""Command-line front end: parameter sweeps and boundary solves to CSV/JSON.

One subcommand per physical setting; each evaluates library functions on
a grid and emits either CSV (header row plus one row per grid point) or
JSON ({"meta": ..., "series": [{"name", "points"}, ...]}).  Floats are
written in shortest round-trip decimal form, so identical invocations
produce byte-identical files and emitted files re-emit to themselves
after parsing.

Exit codes: 0 success, 2 invalid configuration (bad flag, bad value,
unknown config key), 3 numeric failure (solver or cutoff error; the
message carries the failing operation and its residual or limit).

A config file holds flat ``key = value`` lines (``#`` comments allowed)
using the long flag names; command-line flags override file values.  The
SRBOSONIC_PARALLEL environment variable sets the default worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from . import __version__
from .errors import CutoffError, DomainError, NoCriticalPointError, SolverError
from .private_rate import PrivateScenario, conjecture_probe, private_rate
from .qubit import QuantumCommParams, average_fidelity, choi_state, log_negativity
from .schemes import (
    ClassicalScenario,
    DiscriminationScenario,
    EAScenario,
    classical_total_variance,
    forbidden_interval_classical,
    forbidden_interval_discrimination,
    forbidden_rectangle,
    success_classical,
    success_discrimination,
)
from .threshold import (
    BinaryThresholdSpec,
    build_channel,
    mc_success_probability,
    success_probability,
)

ENV_PARALLEL = "SRBOSONIC_PARALLEL"


class ConfigError(Exception):
    """Invalid configuration; maps to exit code 2."""


def _parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {text!r}")
    return value


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_float_list(text: str) -> tuple:
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}")
    return tuple(_parse_float(part) for part in items)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_str(text: str) -> str:
    return text.strip()


# flag name -> converter; single source of truth for the parser, the
# config-file key set, and the resolver
_COMMON = (
    ("out", _parse_str),
    ("format", _parse_str),
    ("seed", _parse_int),
    ("parallel", _parse_int),
)
_CLASSICAL = (
    ("eta", _parse_float),
    ("alpha-q", _parse_float),
    ("r", _parse_float),
    ("prior0", _parse_float),
    ("site", _parse_str),
)
_GRID = (
    ("grid-start", _parse_float),
    ("grid-stop", _parse_float),
    ("grid-step", _parse_float),
)
_FLAGS = {
    "sweep": _CLASSICAL + (("theta", _parse_float_list),) + _GRID,
    "interval": _CLASSICAL + (("vary", _parse_str),) + _GRID,
    "rectangle": (
        ("eta", _parse_float),
        ("r", _parse_float),
        ("prior-q", _parse_float),
        ("prior-p", _parse_float),
        ("alpha-q", _parse_float),
        ("alpha-p", _parse_float),
        ("theta-q", _parse_float),
        ("theta-p", _parse_float),
        ("site", _parse_str),
    ),
    "discriminate": (
        ("eta0", _parse_float),
        ("eta1", _parse_float),
        ("alpha-q", _parse_float),
        ("r", _parse_float),
        ("prior0", _parse_float),
        ("site", _parse_str),
        ("theta", _parse_float_list),
        ("interval", _parse_bool),
    )
    + _GRID,
    "fidelity": (("x0", _parse_float), ("theta", _parse_float_list)) + _GRID,
    "negativity": (("x0", _parse_float), ("theta", _parse_float_list)) + _GRID,
    "private": _CLASSICAL + (("theta", _parse_float_list),) + _GRID,
    "probe-conjecture": _CLASSICAL + (("theta", _parse_float_list),) + _GRID,
    "mc-check": _CLASSICAL + (("theta", _parse_float), ("n", _parse_int)) + _GRID,
}

_DEFAULTS = {
    "format": "csv",
    "seed": 0,
    "r": 0.0,
    "prior0": 0.5,
    "prior-q": 0.5,
    "prior-p": 0.5,
    "site": "receiver",
    "interval": False,
    "n": 1000000,
    # decoding thresholds do not enter the rectangle bounds themselves
    "theta-q": 0.0,
    "theta-p": 0.0,
}
# the conjecture is about sender-site noise, so that is its default
_COMMAND_DEFAULTS = {"probe-conjecture": {"site": "sender"}}

_GRID_COMMANDS = ("sweep", "fidelity", "negativity", "private", "probe-conjecture", "mc-check")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srbosonic",
        description="Threshold-detection noise benefits: sweeps, boundaries, rates.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, flags in _FLAGS.items():
        sub = subparsers.add_parser(command)
        sub.add_argument("--config", default=None)
        for name, converter in flags + _COMMON:
            if converter is _parse_bool:
                sub.add_argument(f"--{name}", action="store_const", const="true", default=None)
            else:
                # raw strings here; the resolver converts flag and config
                # file values through the same code path
                sub.add_argument(f"--{name}", default=None)
    return parser


def _read_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    mapping = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


def _resolve(args: argparse.Namespace) -> dict:
    command = args.command
    table = dict(_FLAGS[command] + _COMMON)
    raw = {}
    if args.config is not None:
        for key, value in _read_config_file(args.config).items():
            if key == "command":
                if value != command:
                    raise ConfigError(
                        f"config file says command={value!r} but {command!r} was invoked"
                    )
                continue
            if key not in table:
                raise ConfigError(f"unknown config key {key!r} for command {command!r}")
            raw[key] = value
    for name in table:
        flag_value = getattr(args, name.replace("-", "_"))
        if flag_value is not None:
            raw[name] = flag_value

    cfg = {"command": command}
    for name, converter in table.items():
        if name in raw:
            cfg[name] = converter(raw[name])
        elif name in _COMMAND_DEFAULTS.get(command, {}):
            cfg[name] = _COMMAND_DEFAULTS[command][name]
        elif name in _DEFAULTS:
            cfg[name] = _DEFAULTS[name]
        else:
            cfg[name] = None

    if cfg["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg['format']!r}")
    if cfg["parallel"] is None:
        env = os.environ.get(ENV_PARALLEL)
        cfg["parallel"] = _parse_int(env) if env else 1
    if cfg["parallel"] < 1:
        raise ConfigError(f"parallel must be >= 1, got {cfg['parallel']}")

    needs_grid = command in _GRID_COMMANDS
    if command == "interval":
        if cfg["vary"] is not None and cfg["vary"] not in ("r", "alpha-q"):
            raise ConfigError(f"vary must be r or alpha-q, got {cfg['vary']!r}")
        needs_grid = cfg["vary"] is not None
    if command == "discriminate":
        needs_grid = not cfg["interval"]
    grid_given = [cfg.get(k) is not None for k in ("grid-start", "grid-stop", "grid-step")]
    if needs_grid:
        if not all(grid_given):
            raise ConfigError(f"{command}: grid-start, grid-stop, grid-step are required")
        cfg["grid"] = _build_grid(cfg["grid-start"], cfg["grid-stop"], cfg["grid-step"])
    elif any(grid_given):
        raise ConfigError(f"{command}: grid flags are not accepted in this mode")

    optional = {"out", "vary", "grid-start", "grid-stop", "grid-step"}
    if command == "discriminate" and cfg["interval"]:
        optional.add("theta")
    for name in table:
        if cfg[name] is None and name not in optional:
            raise ConfigError(f"{command}: --{name} is required")
    return cfg


def _build_grid(start: float, stop: float, step: float) -> tuple:
    if not (start < stop):
        raise ConfigError(f"grid-start must be below grid-stop, got {start} >= {stop}")
    if not (step > 0.0):
        raise ConfigError(f"grid-step must be positive, got {step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(start + index * step for index in range(count))


def _fmt(value: float) -> str:
    return repr(float(value))


def _map_values(fn, xs, parallel: int) -> list:
    if parallel <= 1 or len(xs) <= 1:
        return [fn(x) for x in xs]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(fn, xs))


# module-level evaluators so ProcessPoolExecutor can pickle them
def _point_sweep(scenario: ClassicalScenario, theta: float, sigma: float) -> float:
    return success_classical(scenario, theta, sigma * sigma)


def _point_discriminate(scenario: DiscriminationScenario, theta: float, sigma: float) -> float:
    return success_discrimination(scenario, theta, sigma * sigma)


def _point_fidelity(x0: float, theta: float, sigma: float) -> float:
    return average_fidelity(QuantumCommParams(x0=x0, theta=theta, sigma2=sigma * sigma))


def _point_negativity(x0: float, theta: float, sigma: float) -> float:
    return log_negativity(choi_state(QuantumCommParams(x0=x0, theta=theta, sigma2=sigma * sigma)))


def _point_private(scenario: PrivateScenario, sigma: float) -> float:
    return private_rate(scenario, sigma * sigma)


def _point_interval_vary(kwargs: tuple, field: str, value: float) -> tuple:
    params = dict(kwargs)
    params[field] = value
    result = forbidden_interval_classical(ClassicalScenario(**params))
    return result.lo, result.hi, result.residual_lo, result.residual_hi


def _point_mc(scenario: ClassicalScenario, theta: float, n: int, job: tuple) -> tuple:
    sigma, seed = job
    sigma2 = sigma * sigma
    m = math.sqrt(scenario.eta) * scenario.alpha_q
    variance = classical_total_variance(scenario, sigma2)
    spec = BinaryThresholdSpec(
        mean0=-m,
        mean1=+m,
        var0=variance,
        var1=variance,
        theta=theta,
        prior0=scenario.prior0,
    )
    analytic = success_probability(build_channel(spec), scenario.prior0)
    estimate = mc_success_probability(spec, n, seed)
    return analytic, estimate.estimate, estimate.std_error


def _classical_scenario(cfg: dict) -> ClassicalScenario:
    return ClassicalScenario(
        eta=cfg["eta"],
        alpha_q=cfg["alpha-q"],
        r=cfg["r"],
        prior0=cfg["prior0"],
        noise_site=cfg["site"],
    )


def _run_sweep(cfg: dict):
    scenario = _classical_scenario(cfg)
    series = []
    for theta in cfg["theta"]:
        values = _map_values(partial(_point_sweep, scenario, theta), cfg["grid"], cfg["parallel"])
        series.append((f"theta={_fmt(theta)}", values))
    return "sigma", cfg["grid"], series


def _run_interval(cfg: dict):
    base = {
        "eta": cfg["eta"],
        "alpha_q": cfg["alpha-q"],
        "r": cfg["r"],
        "prior0": cfg["prior0"],
        "noise_site": cfg["site"],
    }
    names = ("theta_minus", "theta_plus", "residual_minus", "residual_plus")
    if cfg["vary"] is None:
        result = forbidden_interval_classical(ClassicalScenario(**base))
        row = (result.lo, result.hi, result.residual_lo, result.residual_hi)
        return None, None, [(name, [value]) for name, value in zip(names, row)]
    field = {"r": "r", "alpha-q": "alpha_q"}[cfg["vary"]]
    rows = _map_values(
        partial(_point_interval_vary, tuple(base.items()), field),
        cfg["grid"],
        cfg["parallel"],
    )
    series = [(name, [row[i] for row in rows]) for i, name in enumerate(names)]
    return field, cfg["grid"], series


def _run_rectangle(cfg: dict):
    scenario = EAScenario(
        eta=cfg["eta"],
        r=cfg["r"],
        prior_q=cfg["prior-q"],
        prior_p=cfg["prior-p"],
        alpha_q=cfg["alpha-q"],
        alpha_p=cfg["alpha-p"],
        theta_q=cfg["theta-q"],
        theta_p=cfg["theta-p"],
        noise_site=cfg["site"],
    )
    rect = forbidden_rectangle(scenario)
    names_values = (
        ("q_lo", rect.q_interval.lo),
        ("q_hi", rect.q_interval.hi),
        ("p_lo", rect.p_interval.lo),
        ("p_hi", rect.p_interval.hi),
        ("q_residual_lo", rect.q_interval.residual_lo),
        ("q_residual_hi", rect.q_interval.residual_hi),
        ("p_residual_lo", rect.p_interval.residual_lo),
        ("p_residual_hi", rect.p_interval.residual_hi),
    )
    return None, None, [(name, [value]) for name, value in names_values]


def _discrimination_scenario(cfg: dict) -> DiscriminationScenario:
    return DiscriminationScenario(
        eta0=cfg["eta0"],
        eta1=cfg["eta1"],
        alpha_q=cfg["alpha-q"],
        r=cfg["r"],
        prior0=cfg["prior0"],
        noise_site=cfg["site"],
    )


def _run_discriminate(cfg: dict):
    scenario = _discrimination_scenario(cfg)
    if cfg["interval"]:
        result = forbidden_interval_discrimination(scenario)
        names = ("theta_minus", "theta_plus", "residual_minus", "residual_plus")
        row = (result.lo, result.hi, result.residual_lo, result.residual_hi)
        return None, None, [(name, [value]) for name, value in zip(names, row)]
    series = []
    for theta in cfg["theta"]:
        values = _map_values(
            partial(_point_discriminate, scenario, theta), cfg["grid"], cfg["parallel"]
        )
        series.append((f"theta={_fmt(theta)}", values))
    return "sigma", cfg["grid"], series


def _run_fidelity(cfg: dict):
    series = []
    for theta in cfg["theta"]:
        values = _map_values(
            partial(_point_fidelity, cfg["x0"], theta), cfg["grid"], cfg["parallel"]
        )
        series.append((f"theta={_fmt(theta)}", values))
    return "sigma", cfg["grid"], series


def _run_negativity(cfg: dict):
    series = []
    for theta in cfg["theta"]:
        values = _map_values(
            partial(_point_negativity, cfg["x0"], theta), cfg["grid"], cfg["parallel"]
        )
        series.append((f"theta={_fmt(theta)}", values))
    return "sigma", cfg["grid"], series


def _run_private(cfg: dict):
    base = _classical_scenario(cfg)
    series = []
    for theta in cfg["theta"]:
        scenario = PrivateScenario(base=base, theta=theta)
        values = _map_values(partial(_point_private, scenario), cfg["grid"], cfg["parallel"])
        series.append((f"theta={_fmt(theta)}", values))
    return "sigma", cfg["grid"], series


def _run_probe(cfg: dict):
    base = _classical_scenario(cfg)
    scenario = PrivateScenario(base=base, theta=cfg["theta"][0])
    results = conjecture_probe(scenario, cfg["theta"], cfg["grid"])
    series = [
        ("nonmonotonic", [1.0 if r.nonmonotonic else 0.0 for r in results]),
        ("argmax_sigma", [r.argmax_sigma for r in results]),
        ("gain", [r.gain for r in results]),
    ]
    return "theta", cfg["theta"], series


def _run_mc_check(cfg: dict):
    scenario = _classical_scenario(cfg)
    jobs = [(sigma, cfg["seed"] + index) for index, sigma in enumerate(cfg["grid"])]
    rows = _map_values(
        partial(_point_mc, scenario, cfg["theta"], cfg["n"]), jobs, cfg["parallel"]
    )
    names = ("analytic", "estimate", "std_error")
    series = [(name, [row[i] for row in rows]) for i, name in enumerate(names)]
    return "sigma", cfg["grid"], series


_RUNNERS = {
    "sweep": _run_sweep,
    "interval": _run_interval,
    "rectangle": _run_rectangle,
    "discriminate": _run_discriminate,
    "fidelity": _run_fidelity,
    "negativity": _run_negativity,
    "private": _run_private,
    "probe-conjecture": _run_probe,
    "mc-check": _run_mc_check,
}

# excluded from emitted metadata: output plumbing must not affect bytes
_NON_SCIENCE_KEYS = ("out", "format", "parallel", "seed")


def format_csv(x_name, x_values, series) -> str:
    names = [name for name, _ in series]
    if x_name is None:
        header = ",".join(names)
        row = ",".join(_fmt(values[0]) for _, values in series)
        return header + "\n" + row + "\n"
    lines = [",".join([x_name] + names)]
    for index, x in enumerate(x_values):
        cells = [_fmt(x)] + [_fmt(values[index]) for _, values in series]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def format_json(meta: dict, x_values, series) -> str:
    payload = {
        "meta": meta,
        "series": [
            {
                "name": name,
                "points": [
                    [float(x), float(y)]
                    for x, y in zip(x_values if x_values is not None else [0.0], values)
                ],
            }
            for name, values in series
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _render(cfg: dict, x_name, x_values, series) -> str:
    if cfg["format"] == "csv":
        return format_csv(x_name, x_values, series)
    parameters = {}
    for name, _ in _FLAGS[cfg["command"]]:
        if name in _NON_SCIENCE_KEYS:
            continue
        value = cfg.get(name)
        if value is None:
            continue
        parameters[name] = list(value) if isinstance(value, tuple) else value
    meta = {
        "parameters": parameters,
        "command": cfg["command"],
        "version": __version__,
        "seed": cfg["seed"],
    }
    return format_json(meta, x_values, series)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        x_name, x_values, series = _RUNNERS[cfg["command"]](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        # bad parameter combinations surface from constructors here
        print(f"error: {cfg['command']}: {exc}", file=sys.stderr)
        return 2
    except (SolverError, CutoffError, NoCriticalPointError) as exc:
        print(f"error: {cfg['command']} failed: {exc}", file=sys.stderr)
        return 3
    text = _render(cfg, x_name, x_values, series)
    if cfg["out"] is None:
        sys.stdout.write(text)
    else:
        with open(cfg["out"], "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
