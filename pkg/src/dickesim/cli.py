"""Configuration-driven command line front end.

Subcommands
-----------
run            execute one configured schedule and write the time-series CSV
sweep          repeat a run over an axis (n_trotter | N | coupling), one
               summary row per value
verify         run the built-in invariant suite (exit 4 on any failure)
schedule-dump  print the compiled segment list of a configuration

Units: all frequencies are ratios to the simulated mode frequency, so
``mode_freq = 1.0`` defines the unit system and ``coupling`` is g/omega =
lambda/(sqrt(N) omega), exactly as the benchmark parameter sets state them.
The time axis is emitted both as simulated time and as g*t.

Config files are flat ``key = value`` text (UTF-8, ``#`` comments, lists
comma-separated, booleans true/false or 0/1); a file whose first non-blank
character is ``{`` is parsed as JSON instead.  Unknown keys are rejected.
Every run's fully resolved configuration is echoed into the CSV header, so a
run is reconstructible from its output alone.

Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 verification failure.
The ``DICKESIM_WORKERS`` environment variable sets the sweep worker count.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import json
import math
import os
import sys

import numpy as np

from .error_bounds import (
    biased_bound,
    dicke_error_report,
    max_populated_level,
    measured_error,
)
from .hamiltonians import ModelParams, PulseParams, frame_map
from .hilbert import DensityMatrix, build_space, ground_state
from .lindblad import IntegrationError, IntegratorConfig, NoiseParams, run_schedule
from .trotter import (
    TrotterSchedule,
    biased_schedule,
    dicke_schedule,
    execute_unitary,
    fermi_bose_analog_schedule,
    pulsed_schedule,
)

LEAKAGE_WARNING_LEVEL = 1e-4
MODELS = ("dicke", "biased", "pulsed", "fermi_bose_analog", "broadband")
SWEEP_AXES = ("n_trotter", "N", "coupling")


class ConfigError(ValueError):
    """Invalid configuration (bad key, type, or value): exit code 2."""


def _to_bool(text):
    if isinstance(text, bool):
        return text
    if str(text).lower() in ("1", "true", "yes"):
        return True
    if str(text).lower() in ("0", "false", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _to_float_list(value):
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(v) for v in str(value).split(",") if v.strip()]


# key -> (converter, default); None default means "required".
CONFIG_SCHEMA = {
    "model": (str, "dicke"),
    "n_qubits": (int, 2),
    "fock_cutoff": (int, 15),
    "n_trotter": (int, 11),
    "gt_max": (float, 1.0),
    "qubit_freq": (float, 0.05),
    "qubit_freqs": (_to_float_list, None),
    "mode_freq": (float, 1.0),
    "coupling": (float, 1.5),
    "bias": (float, 0.0),
    "pulse_g1_factor": (float, 2.0),
    "kappa": (float, 1e-2),
    "gamma_s": (float, 0.5e-2),
    "gamma_d": (float, 0.5e-2),
    "dt": (float, 2e-3),
    "ideal_noise": (_to_bool, False),
    "output": (str, "run.csv"),
}

PRESETS = {
    # Deep-strong-coupling fidelity benchmark: g/omega = 1.5, qubit/mode
    # frequency ratio 1/20, resonator decay 1e-2, qubit decay/dephasing
    # 0.5e-2, 11 digital steps.
    "dicke-dsc-fidelity": {
        "model": "dicke",
        "n_qubits": 2,
        "fock_cutoff": 15,
        "n_trotter": 11,
        "gt_max": 1.0,
        "qubit_freq": 0.05,
        "coupling": 1.5,
    },
    # Ultrastrong-coupling photon emission benchmark: g/omega = 0.5, 7 steps.
    "dicke-usc-photons": {
        "model": "dicke",
        "n_qubits": 2,
        "fock_cutoff": 15,
        "n_trotter": 7,
        "gt_max": 2.0,
        "qubit_freq": 0.05,
        "coupling": 0.5,
    },
    # Pulsed-coupling benchmark: base g0/omega = 1.5, kicked coupling twice
    # the base, 13 steps, step period equal to the kick period.
    "pulsed-dsc-fidelity": {
        "model": "pulsed",
        "n_qubits": 2,
        "fock_cutoff": 15,
        "n_trotter": 13,
        "gt_max": 1.0,
        "qubit_freq": 0.05,
        "coupling": 1.5,
        "pulse_g1_factor": 2.0,
    },
}


def parse_config_text(text: str) -> dict:
    """Parse flat key-value or JSON configuration text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"invalid JSON config: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        return data
    data = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        data[key.strip()] = value.strip()
    return data


def resolve_config(file_values: dict | None = None, preset: str | None = None) -> dict:
    """Overlay preset defaults and file values onto the schema defaults."""
    merged = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        merged.update(PRESETS[preset])
    if file_values:
        unknown = set(file_values) - set(CONFIG_SCHEMA)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(file_values)

    config = {}
    for key, (convert, default) in CONFIG_SCHEMA.items():
        if key in merged:
            try:
                config[key] = convert(merged[key])
            except ConfigError:
                raise
            except (TypeError, ValueError) as err:
                raise ConfigError(f"bad value for {key!r}: {err}") from err
        else:
            config[key] = default
    _validate_config(config)
    return config


def _validate_config(config: dict) -> None:
    if config["model"] not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {config['model']!r}")
    if config["n_qubits"] < 1:
        raise ConfigError("n_qubits must be >= 1")
    if config["fock_cutoff"] < 0:
        raise ConfigError("fock_cutoff must be >= 0")
    if config["n_trotter"] < 1:
        raise ConfigError("n_trotter must be >= 1")
    if config["coupling"] <= 0:
        raise ConfigError("coupling must be > 0 (it sets the g*t clock)")
    if config["gt_max"] <= 0:
        raise ConfigError("gt_max must be > 0")
    if config["dt"] <= 0:
        raise ConfigError("dt must be > 0")
    for rate in ("kappa", "gamma_s", "gamma_d"):
        if config[rate] < 0:
            raise ConfigError(f"{rate} must be >= 0")
    if config["qubit_freqs"] is not None and len(config["qubit_freqs"]) != config["n_qubits"]:
        raise ConfigError("qubit_freqs length must equal n_qubits")
    if config["model"] == "pulsed" and config["pulse_g1_factor"] <= 0:
        raise ConfigError("pulse_g1_factor must be > 0")


def _qubit_freq_field(config):
    if config["qubit_freqs"] is not None:
        return tuple(config["qubit_freqs"])
    return config["qubit_freq"]


def build_schedule(config: dict) -> TrotterSchedule:
    """Compile the configured model into a schedule."""
    try:
        space = build_space(config["n_qubits"], config["fock_cutoff"])
    except ValueError as err:
        raise ConfigError(str(err)) from err
    n_qubits = config["n_qubits"]
    g = config["coupling"]
    lam = g * math.sqrt(n_qubits)
    t = config["gt_max"] / g
    n = config["n_trotter"]
    freq = _qubit_freq_field(config)
    model = config["model"]
    try:
        if model in ("dicke", "broadband"):
            params = frame_map(freq, config["mode_freq"], lam, n_qubits)
            return dicke_schedule(space, params, t, n)
        if model == "biased":
            params = frame_map(freq, config["mode_freq"], lam, n_qubits, bias=config["bias"])
            return biased_schedule(space, params, t, n)
        if model == "pulsed":
            width = t / n / 2.0
            pulse = PulseParams(
                lambda0=lam,
                lambda1=lam * (config["pulse_g1_factor"] - 1.0) * width,
                period_scale=t / n / (2.0 * math.pi),
                height=1.0 / width,
                width=width,
            )
            params = frame_map(freq, config["mode_freq"], lam, n_qubits, pulse=pulse)
            return pulsed_schedule(space, params, t, n)
        if model == "fermi_bose_analog":
            params = ModelParams(
                n_qubits=n_qubits,
                qubit_freq=freq,
                mode_freq=config["mode_freq"],
                coupling=lam,
            )
            return fermi_bose_analog_schedule(space, params, t, n)
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(str(err)) from err
    raise ConfigError(f"unhandled model {model!r}")


def _config_header_lines(config: dict) -> list[str]:
    lines = []
    for key in sorted(config):
        value = config[key]
        if isinstance(value, float):
            text = repr(value)
        elif isinstance(value, list):
            text = ",".join(repr(v) for v in value)
        elif value is None:
            text = ""
        else:
            text = str(value)
        lines.append(f"# config: {key} = {text}")
    return lines


def execute_run(config: dict):
    """Run one configuration; returns (SimulationResult, schedule)."""
    schedule = build_schedule(config)
    rho0 = DensityMatrix.from_pure(schedule.space, ground_state(schedule.space))
    noise = NoiseParams(
        kappa=config["kappa"], gamma_s=config["gamma_s"], gamma_d=config["gamma_d"]
    )
    result = run_schedule(
        schedule,
        rho0,
        noise,
        IntegratorConfig(dt=config["dt"]),
        ideal_noise=config["ideal_noise"],
    )
    return result, schedule


def write_run_csv(path: str, config: dict, result, reproducible: bool) -> None:
    lines = ["# dickesim run"]
    if not reproducible:
        lines.append(f"# generated: {datetime.datetime.now().isoformat()}")
    lines.extend(_config_header_lines(config))
    lines.append(",".join(result.COLUMNS))
    for row in result.rows():
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def sweep_point(args: tuple) -> tuple:
    """One (axis, value) evaluation: noisy fidelity, digital error, bound."""
    config, axis, value = args
    config = dict(config)
    if axis == "n_trotter":
        config["n_trotter"] = int(value)
    elif axis == "N":
        config["n_qubits"] = int(value)
        if config["qubit_freqs"] is not None:
            raise ConfigError("cannot sweep N with explicit qubit_freqs")
    elif axis == "coupling":
        config["coupling"] = float(value)
    else:
        raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    _validate_config(config)

    result, schedule = execute_run(config)
    digital = measured_error(schedule, metric="operator_norm")

    # Bound column: restricted leading-term bound for the alternating pair,
    # rescaled to the run time; the biased variant adds its N/n term.
    noiseless = execute_unitary(schedule, ground_state(schedule.space))
    level = max_populated_level(noiseless.states, space=schedule.space)
    level = min(level, schedule.space.fock_cutoff)
    g = config["coupling"]
    lam = g * math.sqrt(config["n_qubits"])
    params = frame_map(
        _qubit_freq_field(config), config["mode_freq"], lam, config["n_qubits"]
    )
    report = dicke_error_report(
        schedule.space,
        params,
        schedule.simulated_time,
        schedule.n_steps,
        level,
        measured=digital,
        variant=config["model"],
    )
    bound = report.cauchy_schwarz_bound
    if config["model"] == "biased":
        bound = biased_bound(bound, config["n_qubits"], schedule.n_steps)
    return (value, result.final_fidelity, digital, bound, result.max_leakage)


def write_sweep_csv(path, config, axis, rows, reproducible):
    lines = [f"# dickesim sweep axis={axis}"]
    if not reproducible:
        lines.append(f"# generated: {datetime.datetime.now().isoformat()}")
    lines.extend(_config_header_lines(config))
    lines.append("# measured_error metric: operator_norm (noiseless digital error)")
    lines.append("axis_value,final_fidelity,measured_error,error_bound,max_leakage")
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _load_config_arg(args) -> dict:
    file_values = None
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_values = parse_config_text(fh.read())
        except OSError as err:
            raise ConfigError(f"cannot read config file: {err}") from err
    preset = getattr(args, "preset", None)
    if file_values is None and preset is None:
        raise ConfigError("provide --config and/or --preset")
    return resolve_config(file_values, preset)


def _cmd_run(args) -> int:
    config = _load_config_arg(args)
    result, schedule = execute_run(config)
    out = args.output or config["output"]
    write_run_csv(out, config, result, args.reproducible)
    if result.max_leakage > LEAKAGE_WARNING_LEVEL:
        print(
            f"warning: peak leakage {result.max_leakage:.2e} exceeds "
            f"{LEAKAGE_WARNING_LEVEL}; raise fock_cutoff",
            file=sys.stderr,
        )
    print(
        f"wrote {out}: {len(result.fidelity)} points, "
        f"final fidelity {result.final_fidelity:.6f}"
    )
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config_arg(args)
    if args.axis not in SWEEP_AXES:
        raise ConfigError(f"axis must be one of {SWEEP_AXES}")
    raw = [v for v in args.values.split(",") if v.strip()]
    if not raw:
        raise ConfigError("sweep needs at least one value")
    values = [int(v) if args.axis in ("n_trotter", "N") else float(v) for v in raw]
    workers = int(os.environ.get("DICKESIM_WORKERS", "1"))
    tasks = [(config, args.axis, v) for v in values]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_point, tasks))
    else:
        rows = [sweep_point(task) for task in tasks]
    out = args.output or config["output"]
    write_sweep_csv(out, config, args.axis, rows, args.reproducible)
    print(f"wrote {out}: {len(rows)} rows over {args.axis}")
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_checks

    results = run_checks(module_filter=args.filter)
    if not results:
        print(f"no checks matched filter {args.filter!r}", file=sys.stderr)
        return 4
    failed = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"[{status}] {check.module}.{check.name}: "
            f"measured={check.measured:.3e} threshold={check.threshold:.3e}"
        )
        failed += 0 if check.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 4


def _cmd_schedule_dump(args) -> int:
    config = _load_config_arg(args)
    schedule = build_schedule(config)
    sys.stdout.write(schedule.dump())
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dickesim",
        description="Digital-analog simulation of generalized Dicke models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration, write CSV")
    p_run.add_argument("--config", help="flat key=value or JSON config file")
    p_run.add_argument("--preset", help=f"preset name ({', '.join(sorted(PRESETS))})")
    p_run.add_argument("--output", help="override the output path")
    p_run.add_argument(
        "--reproducible",
        action="store_true",
        help="suppress the timestamp comment for byte-identical output",
    )
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run over an axis, one row per value")
    p_sweep.add_argument("--config", help="flat key=value or JSON config file")
    p_sweep.add_argument("--preset", help="preset name")
    p_sweep.add_argument("--axis", required=True, help=f"one of {SWEEP_AXES}")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--output", help="override the output path")
    p_sweep.add_argument("--reproducible", action="store_true")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--filter", help="restrict to one module", default=None)
    p_verify.set_defaults(func=_cmd_verify)

    p_dump = sub.add_parser("schedule-dump", help="print the compiled segment list")
    p_dump.add_argument("--config", help="flat key=value or JSON config file")
    p_dump.add_argument("--preset", help="preset name")
    p_dump.set_defaults(func=_cmd_schedule_dump)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except IntegrationError as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
