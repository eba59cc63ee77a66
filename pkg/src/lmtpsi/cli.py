"""Configuration-driven command line front end.

Subcommands: simulate (full quantum signal), sensitivity (improvement
factor scan), optimum (closed-form optimal parameters), convert (laser
intensity <-> Rabi frequency). Configs are TOML or JSON; angular
frequencies may be written as "2pi x 100 MHz" style strings. Outputs are
deterministic: identical configs produce byte-identical data files.

Exit codes: 0 ok, 2 config, 3 regime, 4 resolution, 5 detection.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .constants import (HBAR, AtomSpecies, LaserParams, intensity_rabi_convert,
                        raman_path_ratio, rb87)
from .errors import ConfigError, LmtPsiError
from .interferometer import build_lmt_sequence, fringe_wavenumber, run_interferometer
from .presets import PRESETS
from .quantum import MomentumGrid, ThermalEnsemble, default_grid
from .raman import effective_decay, effective_two_level
from .sensitivity import optimal_detuning, optimal_params, scan_improvement
from .signals import apply_decay, fourier_signal, peak_metrics, spatial_signal

SIMULATE_ORDER_LIMIT = 9  # full quantum model beyond this needs --allow-large

_ANGULAR_RE = re.compile(
    r"^\s*2\s*pi\s*[x*]\s*([0-9.eE+-]+)\s*(Hz|kHz|MHz|GHz)\s*$", re.IGNORECASE
)
_UNIT_SCALE = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}


def parse_angular_frequency(value) -> float:
    """Accept rad/s numbers or '2pi x <value> <unit>' strings."""
    if isinstance(value, (int, float)):
        return float(value)
    m = _ANGULAR_RE.match(str(value))
    if not m:
        raise ValueError(
            f"cannot parse angular frequency {value!r}; use rad/s or '2pi x 100 MHz'"
        )
    return 2.0 * math.pi * float(m.group(1)) * _UNIT_SCALE[m.group(2).lower()]


@dataclass
class ScenarioConfig:
    species: str = "rb87"
    rotation_rate: float = 0.0
    rabi_0: float | None = None
    delta0: float | None = None
    optimal_detuning_requested: bool = False
    two_photon: str = "recoil-compensated"
    trap_size: float | None = None
    trap_frequency: float | None = None
    temperature: float = 6e-6
    n_max: int = 32
    weight_mode: str = "linear-boltzmann"
    order: int = 1
    half_time: float = 1e-3
    compensation: bool = True
    pulse_gap: float = 0.0
    ideal_pulses: bool = False
    include_thermal_doppler: bool = True
    grid_dimension: int = 1
    grid_points: int = 4096
    grid_extent: float | None = None
    scan_start: int = 1
    scan_stop: int = 199
    scan_policy: str = "per-N-optimal"
    out_dir: str = "out"
    formats: tuple = ("csv", "json", "svg")
    strict: bool = False
    raw: dict = field(default_factory=dict)


_SCHEMA = {
    "": {"species", "rotation_rate", "laser", "trap", "sequence", "grid",
         "scan", "output"},
    "laser": {"rabi_0", "delta0", "optimal_detuning", "two_photon"},
    "trap": {"size", "frequency", "temperature", "n_max", "weight_mode"},
    "sequence": {"order", "half_time", "compensation", "pulse_gap",
                 "ideal_pulses", "include_thermal_doppler"},
    "grid": {"dimension", "points", "extent"},
    "scan": {"n_start", "n_stop", "policy", "detuning"},
    "output": {"directory", "formats"},
}


def _check_keys(block: dict, path: str, errors: list) -> None:
    allowed = _SCHEMA[path]
    prefix = path + "." if path else ""
    for key in block:
        if key not in allowed:
            errors.append(f"{prefix}{key}: unknown key")


def validate_config(data: dict) -> ScenarioConfig:
    """Validate a raw config mapping, collecting every violation."""
    errors: list = []
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table/object")
    _check_keys(data, "", errors)
    for section in ("laser", "trap", "sequence", "grid", "scan", "output"):
        block = data.get(section, {})
        if not isinstance(block, dict):
            errors.append(f"{section}: must be a table/object")
            data = {**data, section: {}}
        else:
            _check_keys(block, section, errors)

    cfg = ScenarioConfig(raw=data)

    def grab(section, key, default=None):
        return data.get(section, {}).get(key, default)

    species = data.get("species", "rb87")
    if species != "rb87":
        errors.append(f"species: unknown species {species!r} (only 'rb87')")
    cfg.species = species

    try:
        cfg.rotation_rate = float(data.get("rotation_rate", 0.0))
    except (TypeError, ValueError):
        errors.append("rotation_rate: must be a number [rad/s]")

    rabi = grab("laser", "rabi_0")
    if rabi is not None:
        try:
            cfg.rabi_0 = parse_angular_frequency(rabi)
            if cfg.rabi_0 <= 0:
                errors.append("laser.rabi_0: must be positive")
        except ValueError as exc:
            errors.append(f"laser.rabi_0: {exc}")
    delta0 = grab("laser", "delta0")
    if delta0 is not None:
        try:
            cfg.delta0 = parse_angular_frequency(delta0)
            if cfg.delta0 <= 0:
                errors.append("laser.delta0: must be positive")
        except ValueError as exc:
            errors.append(f"laser.delta0: {exc}")
    cfg.optimal_detuning_requested = bool(grab("laser", "optimal_detuning", False))
    cfg.two_photon = grab("laser", "two_photon", "recoil-compensated")
    if cfg.two_photon != "recoil-compensated" and not isinstance(
            cfg.two_photon, (int, float)):
        errors.append("laser.two_photon: 'recoil-compensated' or a rad/s number")

    def as_float(section, key, default=None):
        value = grab(section, key, default)
        if value is None or value is default:
            return value
        try:
            return float(value)
        except (TypeError, ValueError):
            errors.append(f"{section}.{key}: must be a number, got {value!r}")
            return default

    size = as_float("trap", "size")
    freq = as_float("trap", "frequency")
    if size is not None and freq is not None:
        errors.append("trap: give either size or frequency, not both")
    cfg.trap_size = size
    cfg.trap_frequency = freq
    if cfg.trap_size is not None and cfg.trap_size <= 0:
        errors.append("trap.size: must be positive [m]")
    cfg.temperature = as_float("trap", "temperature", 6e-6)
    if cfg.temperature is not None and cfg.temperature <= 0:
        errors.append("trap.temperature: must be positive [K]")
    cfg.n_max = grab("trap", "n_max", 32)
    if not isinstance(cfg.n_max, int) or cfg.n_max < 0:
        errors.append("trap.n_max: must be an integer >= 0")
    cfg.weight_mode = grab("trap", "weight_mode", "linear-boltzmann")
    if cfg.weight_mode not in ("linear-boltzmann", "paper-squared"):
        errors.append("trap.weight_mode: 'linear-boltzmann' or 'paper-squared'")

    order = grab("sequence", "order", 1)
    if not isinstance(order, int) or order < 1 or order % 2 == 0:
        errors.append(f"sequence.order: N must be odd and >= 1, got {order!r}")
    else:
        cfg.order = order
    cfg.half_time = as_float("sequence", "half_time", 1e-3)
    if cfg.half_time is not None and cfg.half_time <= 0:
        errors.append("sequence.half_time: must be positive [s]")
    cfg.compensation = bool(grab("sequence", "compensation", True))
    cfg.pulse_gap = as_float("sequence", "pulse_gap", 0.0)
    cfg.ideal_pulses = bool(grab("sequence", "ideal_pulses", False))
    cfg.include_thermal_doppler = bool(
        grab("sequence", "include_thermal_doppler", True))

    cfg.grid_dimension = grab("grid", "dimension", 1)
    if cfg.grid_dimension != 1:
        errors.append("grid.dimension: only 1 is supported")
    cfg.grid_points = grab("grid", "points", 4096)
    if (not isinstance(cfg.grid_points, int) or cfg.grid_points < 2
            or cfg.grid_points % 2):
        errors.append("grid.points: must be an even integer >= 2")
    cfg.grid_extent = as_float("grid", "extent")

    cfg.scan_start = grab("scan", "n_start", 1)
    cfg.scan_stop = grab("scan", "n_stop", 199)
    for name, v in (("n_start", cfg.scan_start), ("n_stop", cfg.scan_stop)):
        if not isinstance(v, int) or v < 1 or v % 2 == 0:
            errors.append(f"scan.{name}: must be an odd integer >= 1")
    cfg.scan_policy = grab("scan", "policy", "per-N-optimal")
    if cfg.scan_policy not in ("per-N-optimal", "fixed"):
        errors.append("scan.policy: 'per-N-optimal' or 'fixed'")

    cfg.out_dir = grab("output", "directory", "out")
    formats = grab("output", "formats", ["csv", "json", "svg"])
    if not isinstance(formats, (list, tuple)) or not all(
            f in ("csv", "json", "svg") for f in formats):
        errors.append("output.formats: list drawn from csv, json, svg")
    else:
        cfg.formats = tuple(formats)

    if errors:
        raise ConfigError(f"invalid configuration ({len(errors)} problem(s))",
                          violations=errors)
    return cfg


def parse_config(text: str) -> ScenarioConfig:
    """Parse TOML or JSON configuration text and validate it."""
    data = None
    json_err = None
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            json_err = f"JSON syntax error at line {exc.lineno}: {exc.msg}"
    if data is None:
        try:
            import tomllib  # py >= 3.11
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(json_err or f"TOML syntax error: {exc}") from None
    return validate_config(data)


def _resolve_laser(cfg: ScenarioConfig, species: AtomSpecies) -> LaserParams:
    if cfg.rabi_0 is None:
        raise ConfigError("laser.rabi_0 is required")
    delta0 = cfg.delta0
    if delta0 is None:
        if not cfg.optimal_detuning_requested:
            raise ConfigError(
                "laser.delta0 is required unless laser.optimal_detuning = true"
            )
        delta0 = optimal_detuning(cfg.order, cfg.rabi_0, species)
    if cfg.two_photon == "recoil-compensated":
        return LaserParams.recoil_compensated(cfg.rabi_0, delta0, species)
    return LaserParams.symmetric(cfg.rabi_0, delta0, float(cfg.two_photon))


def _resolve_grid(cfg: ScenarioConfig, species: AtomSpecies,
                  ensemble: ThermalEnsemble) -> MomentumGrid:
    if cfg.grid_extent is not None:
        return MomentumGrid.from_extent(cfg.grid_extent, cfg.grid_points)
    return default_grid(species, ensemble.trap_size, max(cfg.temperature, 1e-9),
                        cfg.grid_points)


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _save_plot(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def _setup_matplotlib():
    import matplotlib
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "lmtpsi"
    import matplotlib.pyplot as plt
    return plt


def _versions() -> dict:
    return {
        "lmtpsi": __version__,
        "numpy": np.__version__,
        "python": sys.version.split()[0],
    }


def run_simulate(cfg: ScenarioConfig, out, allow_large: bool = False) -> dict:
    species = rb87()
    if cfg.order > SIMULATE_ORDER_LIMIT and not allow_large:
        raise ConfigError(
            f"sequence.order = {cfg.order} exceeds the desk-scale limit "
            f"{SIMULATE_ORDER_LIMIT} for the full quantum model; rerun with "
            "--allow-large to override"
        )
    laser = _resolve_laser(cfg, species)
    trap_args = {}
    if cfg.trap_size is not None:
        trap_args["trap_size"] = cfg.trap_size
    elif cfg.trap_frequency is not None:
        trap_args["trap_frequency"] = cfg.trap_frequency
    else:
        trap_args["trap_size"] = 0.1e-6
    ensemble = ThermalEnsemble.for_species(
        species, cfg.temperature, n_max=cfg.n_max, weight_mode=cfg.weight_mode,
        strict=cfg.strict, **trap_args)
    grid = _resolve_grid(cfg, species, ensemble)
    sequence = build_lmt_sequence(cfg.order, cfg.half_time, laser, species,
                                  compensation=cfg.compensation,
                                  pulse_gap=cfg.pulse_gap)
    states = run_interferometer(
        ensemble, sequence, cfg.rotation_rate, laser, species, grid,
        ideal_pulses=cfg.ideal_pulses,
        include_thermal_doppler=cfg.include_thermal_doppler)
    signal = fourier_signal(spatial_signal(
        states, ensemble.weights, 2.0 * cfg.half_time, species))

    decay = effective_decay(laser, species, sequence.total_pulse_duration)
    metrics = None
    if cfg.rotation_rate != 0.0:
        hint = fringe_wavenumber(cfg.order, cfg.rotation_rate, cfg.half_time,
                                 species)
        metrics = peak_metrics(signal, hint)

    two_level = effective_two_level(0.0, laser, species)
    manifest = {
        "command": "simulate",
        "config": cfg.raw,
        "versions": _versions(),
        "species": species.to_json_dict(),
        "laser": laser.to_json_dict(),
        "derived": {
            "omega_eff_rad_s": sequence.omega_eff,
            "gamma_eff_rad_s": decay.gamma_eff,
            "survival_factor": decay.survival,
            "tau_s": sequence.total_pulse_duration,
            "tau_ladder_s": sequence.ladder_pulse_duration,
            "ladder_betas": sequence.ladder_betas,
            "light_shift_ground_rad_s": two_level.light_shift_ground,
            "light_shift_excited_rad_s": two_level.light_shift_excited,
            "k_transfer_1_m": sequence.k_transfer,
            "expected_k_omega_1_m": fringe_wavenumber(
                cfg.order, cfg.rotation_rate, cfg.half_time, species),
            "r_omega_m": 2.0 * HBAR * sequence.k_transfer * cfg.rotation_rate
                * cfg.half_time**2 / species.mass,
            "grid_points": grid.n_points,
            "grid_extent_1_m": grid.extent,
            "ensemble_weights": [float(w) for w in ensemble.weights],
            "trap_size_m": ensemble.trap_size,
            "trap_frequency_rad_s": ensemble.trap_frequency,
        },
    }

    written = []
    if "csv" in cfg.formats:
        signal.write_spatial_csv(out / "spatial.csv")
        signal.write_fourier_csv(out / "fourier.csv")
        written += ["spatial.csv", "fourier.csv"]
    if "json" in cfg.formats:
        payload = {"metrics": metrics.to_json_dict() if metrics else None}
        if metrics is not None:
            payload["metrics_with_decay"] = apply_decay(
                metrics, decay.gamma_eff, sequence.ladder_pulse_duration
            ).to_json_dict()
        _write_json(out / "metrics.json", payload)
        sequence.write_json(out / "sequence.json")
        written += ["metrics.json", "sequence.json"]
    if "svg" in cfg.formats:
        plt = _setup_matplotlib()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(signal.position * 1e6, signal.normalized())
        ax.set_xlabel("position [um]")
        ax.set_ylabel("ground-state signal [norm.]")
        _save_plot(fig, out / "spatial.svg")
        plt.close(fig)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(signal.fourier_axis, np.abs(signal.fourier_amplitude))
        ax.set_xlabel("spatial frequency [1/m]")
        ax.set_ylabel("|signal transform|")
        _save_plot(fig, out / "fourier.svg")
        plt.close(fig)
        written += ["spatial.svg", "fourier.svg"]
    _write_json(out / "manifest.json", manifest)
    written.append("manifest.json")
    manifest["written"] = written
    return manifest


def run_sensitivity(cfg: ScenarioConfig, out) -> dict:
    species = rb87()
    if cfg.rabi_0 is None:
        raise ConfigError("laser.rabi_0 is required")
    orders = range(cfg.scan_start, cfg.scan_stop + 1, 2)
    detuning = cfg.delta0 if cfg.scan_policy == "fixed" else None
    curve = scan_improvement(orders, cfg.rabi_0, species, detuning=detuning,
                             policy=cfg.scan_policy)
    best = optimal_params(cfg.rabi_0, species)
    summary = {
        "rabi_0_rad_s": cfg.rabi_0,
        "policy": curve.policy,
        "epsilon_max_scan": curve.epsilon_max,
        "n_opt_scan": curve.n_opt,
        "closed_form": best.to_json_dict(),
    }
    manifest = {
        "command": "sensitivity",
        "config": cfg.raw,
        "versions": _versions(),
        "species": species.to_json_dict(),
        "summary": summary,
    }
    written = []
    if "csv" in cfg.formats:
        curve.write_csv(out / "sensitivity.csv")
        written.append("sensitivity.csv")
    if "json" in cfg.formats:
        _write_json(out / "summary.json", summary)
        written.append("summary.json")
    if "svg" in cfg.formats:
        plt = _setup_matplotlib()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(curve.orders, curve.epsilons)
        ax.set_xlabel("ladder order N")
        ax.set_ylabel("improvement factor")
        _save_plot(fig, out / "sensitivity.svg")
        plt.close(fig)
        written.append("sensitivity.svg")
    _write_json(out / "manifest.json", manifest)
    written.append("manifest.json")
    manifest["written"] = written
    return manifest


def run_optimum(cfg: ScenarioConfig, out) -> dict:
    species = rb87()
    if cfg.rabi_0 is None:
        raise ConfigError("laser.rabi_0 is required")
    n = cfg.order if "sequence" in cfg.raw else None
    best = optimal_params(cfg.rabi_0, species, n_order=n)
    payload = best.to_json_dict()
    manifest = {
        "command": "optimum",
        "config": cfg.raw,
        "versions": _versions(),
        "species": species.to_json_dict(),
        "optimum": payload,
    }
    if "json" in cfg.formats:
        _write_json(out / "optimum.json", payload)
    _write_json(out / "manifest.json", manifest)
    return manifest


_GAMMA_RE = re.compile(r"^\s*([0-9.eE+-]+)\s*(G|Gamma)\s*$", re.IGNORECASE)


def _parse_rabi_value(text: str, species: AtomSpecies) -> float:
    m = _GAMMA_RE.match(text)
    if m:
        return float(m.group(1)) * species.linewidth
    try:
        return parse_angular_frequency(text)
    except ValueError:
        return float(text)


def run_convert(args) -> dict:
    species = rb87()
    if args.species_json:
        return {"species": species.to_json_dict(),
                "raman_path_ratio": raman_path_ratio(species)}
    if (args.rabi is None) == (args.intensity is None):
        raise ConfigError("convert needs exactly one of --rabi / --intensity")
    if args.rabi is not None:
        rabi = _parse_rabi_value(args.rabi, species)
        intensity = intensity_rabi_convert(rabi, "to-intensity", args.transition)
        return {
            "transition": args.transition,
            "rabi_rad_s": rabi,
            "rabi_over_2pi_mhz": rabi / (2e6 * math.pi),
            "intensity_w_cm2": intensity,
        }
    intensity = float(args.intensity)
    rabi = intensity_rabi_convert(intensity, "to-rabi", args.transition)
    return {
        "transition": args.transition,
        "intensity_w_cm2": intensity,
        "rabi_rad_s": rabi,
        "rabi_over_2pi_mhz": rabi / (2e6 * math.pi),
    }


def _load_config(args) -> ScenarioConfig:
    if args.preset and args.config:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}"
            )
        cfg = validate_config(PRESETS[args.preset])
    elif args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            cfg = parse_config(f.read())
    else:
        raise ConfigError("a --config file or --preset is required")
    if args.out:
        cfg.out_dir = args.out
    if args.format:
        formats = tuple(s.strip() for s in args.format.split(","))
        bad = [f for f in formats if f not in ("csv", "json", "svg")]
        if bad:
            raise ConfigError(f"unknown output format(s): {bad}")
        cfg.formats = formats
    cfg.strict = bool(args.strict)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmtpsi",
        description="Momentum-ladder point-source interferometer toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="TOML or JSON scenario file")
        p.add_argument("--preset", help=f"built-in scenario: {', '.join(sorted(PRESETS))}")
        p.add_argument("--out", help="output directory (default from config)")
        p.add_argument("--format", help="comma list of csv,json,svg")
        p.add_argument("--strict", action="store_true",
                       help="fail on ensemble truncation warnings")

    p_sim = sub.add_parser("simulate", help="run the full quantum signal model")
    add_common(p_sim)
    p_sim.add_argument("--allow-large", action="store_true",
                       help=f"permit ladder orders beyond {SIMULATE_ORDER_LIMIT}")

    p_sens = sub.add_parser("sensitivity", help="improvement-factor scan over N")
    add_common(p_sens)

    p_opt = sub.add_parser("optimum", help="closed-form optimal parameters")
    add_common(p_opt)

    p_conv = sub.add_parser("convert", help="intensity <-> Rabi frequency")
    p_conv.add_argument("--rabi", help="Rabi frequency: rad/s, '2pi x 100 MHz', or '16.7G'")
    p_conv.add_argument("--intensity", help="intensity in W/cm^2")
    p_conv.add_argument("--transition", default="both-raman",
                        choices=["cycling", "upper-raman", "both-raman"])
    p_conv.add_argument("--species-json", action="store_true",
                        help="dump the species data table as JSON")
    p_conv.add_argument("--out", help="also write the result to this directory")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "convert":
            result = run_convert(args)
            text = json.dumps(result, indent=2, sort_keys=True)
            print(text)
            if args.out:
                from pathlib import Path
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                (out / "convert.json").write_text(text + "\n", encoding="utf-8")
            return 0
        cfg = _load_config(args)
        from pathlib import Path
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "simulate":
            manifest = run_simulate(cfg, out, allow_large=args.allow_large)
        elif args.command == "sensitivity":
            manifest = run_sensitivity(cfg, out)
        elif args.command == "optimum":
            manifest = run_optimum(cfg, out)
        else:  # pragma: no cover
            raise ConfigError(f"unknown command {args.command!r}")
        for name in manifest.get("written", []):
            print(f"wrote {out / name}")
        return 0
    except LmtPsiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
