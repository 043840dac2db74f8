"""Command-line front end.

Subcommands emit plot-ready CSV/JSON tables: free fringe patterns
(``pattern``), decohered patterns (``decohere``), the visibility surface
and its slices (``visibility``), memory-kernel versus Markov decay
(``ww``), and blackbody decoherence bounds (``thermal``).

Exit codes: 0 success, 2 usage or configuration error, 3 numerical
convergence failure.  Identical configurations produce byte-identical
output files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import kernels
from .doubleslit import BeamParams, Experiment, Pattern, SlitGeometry
from .emission import (
    ConvergenceError,
    FormFactor,
    markov_amplitude,
    solve_nonmarkov,
)
from .foundation import IntegrationError
from .presets import (
    PRESET_NAMES,
    VIENNA_EMITTING_AREA,
    VIENNA_FLIGHT_TIME_QUOTED,
    experiment_preset,
)
from .serialize import atomic_write_text, format_float, render_json, write_table
from .thermal import (
    DEFAULT_EMISSIVITY,
    FRAGMENTATION_TEMPERATURE,
    coherence_ok,
    decoherence_temperature,
    emitted_budget,
    tdec_vs_separation_sweep,
    ThermalSource,
)
from .visibility import (
    DecoherenceScenario,
    decohered_pattern,
    extract_visibility,
    visibility_closed,
    visibility_surface,
)

_LENGTH_UNITS = {
    "m": 1.0,
    "mm": 1e-3,
    "um": 1e-6,
    "µm": 1e-6,
    "nm": 1e-9,
    "pm": 1e-12,
}


class ConfigError(ValueError):
    pass


def parse_length(text: str) -> float:
    """Parse a length with an optional unit suffix, e.g. '50nm' or '0.5um'."""
    text = text.strip()
    for suffix in sorted(_LENGTH_UNITS, key=len, reverse=True):
        if text.endswith(suffix):
            body = text[: -len(suffix)]
            if body:
                try:
                    return float(body) * _LENGTH_UNITS[suffix]
                except ValueError:
                    break
            break
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse length {text!r}")


def parse_length_range(text: str) -> np.ndarray:
    """Parse 'start:stop:count' (lengths, log spaced), e.g. '50nm:5um:100'."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be start:stop:count, got {text!r}")
    start, stop = parse_length(parts[0]), parse_length(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"range count must be an integer, got {parts[2]!r}")
    if count < 1:
        raise ConfigError("range count must be at least 1")
    if count == 1:
        return np.array([start])
    if not 0.0 < start < stop:
        raise ConfigError("range needs 0 < start < stop")
    return np.geomspace(start, stop, count)


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:count' as a linear grid of dimensionless values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"cannot parse grid {text!r}")
    if count < 1:
        raise ConfigError("grid count must be at least 1")
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)


def load_experiment(args: argparse.Namespace) -> Experiment:
    """Resolve the experiment: preset, then config file, then explicit flags."""
    experiment = experiment_preset(args.preset)
    overrides: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as handle:
            overrides.update(json.load(handle))
    geom = experiment.geometry
    beam = experiment.beam
    t0 = experiment.flight_time

    geom_kw = {
        "slit_width": overrides.get("slit_width_m", geom.slit_width),
        "separation": overrides.get("separation_m", geom.separation),
        "screen_distance": overrides.get("screen_distance_m", geom.screen_distance),
    }
    mass = overrides.get("mass_kg", beam.mass)
    speed = overrides.get("speed_m_per_s", beam.speed)
    t0 = overrides.get("flight_time_s", t0)
    try:
        geom = SlitGeometry(**geom_kw)
        if "spread_at_screen_m" in overrides:
            beam = BeamParams.for_target_spread(
                mass, speed, overrides["spread_at_screen_m"], t0
            )
        elif "mom_spread_kg_m_per_s" in overrides:
            beam = BeamParams(mass, speed, overrides["mom_spread_kg_m_per_s"])
        else:
            beam = BeamParams(mass, speed, beam.mom_spread)
    except ValueError as exc:
        raise ConfigError(str(exc))
    if getattr(args, "x_over_dx", None):
        period = Experiment(geom, beam, flight_time_override=t0).fringe_period
        beam = BeamParams.for_target_spread(mass, speed, period / args.x_over_dx, t0)
    return Experiment(geom, beam, flight_time_override=t0)


def _grid_for(experiment: Experiment, points: int, span: float) -> np.ndarray:
    if points < 2:
        raise ConfigError("need at least 2 grid points")
    if span <= 0.0:
        raise ConfigError("span must be positive")
    spread = experiment.spread_at_screen()
    return np.linspace(-span * spread, span * spread, points)


def cmd_pattern(args: argparse.Namespace) -> int:
    from .doubleslit import exact_intensity, far_field_intensity

    experiment = load_experiment(args)
    x = _grid_for(experiment, args.points, args.span)
    spread = experiment.spread_at_screen(args.eta0)
    period = experiment.fringe_period

    farfield = np.array([far_field_intensity(xi, period, spread) for xi in x])
    exact = None
    if args.mode == "exact" or args.compare:
        exact = np.array(
            [
                exact_intensity(
                    experiment.geometry,
                    experiment.beam,
                    args.eta0,
                    xi,
                    t0=experiment.flight_time,
                )
                for xi in x
            ]
        )
    intensity = exact if args.mode == "exact" else farfield

    meta = {
        "command": "pattern",
        "preset": args.preset,
        "mode": args.mode,
        "points": args.points,
        "span_spreads": args.span,
        "eta0": args.eta0,
        "separation_m": experiment.geometry.separation,
        "screen_distance_m": experiment.geometry.screen_distance,
        "mass_kg": experiment.beam.mass,
        "flight_time_s": experiment.flight_time,
        "fringe_period_m": period,
        "spread_at_screen_m": spread,
        "kernel_backend": kernels.backend(),
    }
    if args.compare:
        deviation = float(np.abs(exact - farfield).max() / farfield.max())
        meta["max_deviation_of_peak"] = deviation
        print(f"max |exact - farfield| / peak = {deviation:.3e}")

    pattern = Pattern(x, intensity, meta)
    write_table(
        args.out, args.format, ["x_m", "intensity_per_m"],
        [pattern.x_grid, pattern.intensity], meta,
    )
    print(f"wrote {args.out} ({args.format}, {args.points} points)")
    return 0


def cmd_decohere(args: argparse.Namespace) -> int:
    experiment = load_experiment(args)
    scenario = DecoherenceScenario.from_presentation(
        experiment, args.gamma_t0, args.d_over_lambda
    )
    x = _grid_for(experiment, args.points, args.span)
    pattern = decohered_pattern(scenario, x, path=args.path)
    meta = dict(pattern.meta)
    meta.update(
        {
            "command": "decohere",
            "preset": args.preset,
            "points": args.points,
            "span_spreads": args.span,
            "visibility_closed": visibility_closed(args.gamma_t0, args.d_over_lambda),
            "kernel_backend": kernels.backend(),
        }
    )
    if x[0] <= -experiment.fringe_period and x[-1] >= experiment.fringe_period:
        meta["visibility_extracted"] = float(
            extract_visibility(pattern, experiment.fringe_period)
        )
    write_table(
        args.out, args.format, ["x_m", "intensity_per_m"],
        [pattern.x_grid, pattern.intensity], meta,
    )
    print(f"wrote {args.out} ({args.path} path, {args.points} points)")
    return 0


def cmd_visibility(args: argparse.Namespace) -> int:
    gamma_grid = parse_grid(args.gamma_t0_grid)
    dl_grid = parse_grid(args.d_over_lambda_grid)
    if args.slice:
        key, _, raw = args.slice.partition("=")
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"slice value must be a number, got {raw!r}")
        if key == "gamma_t0":
            gamma_grid = np.array([value])
        elif key == "d_over_lambda":
            dl_grid = np.array([value])
        else:
            raise ConfigError(f"unknown slice axis {key!r}")
    surface = visibility_surface(gamma_grid, dl_grid)
    meta = {
        "command": "visibility",
        "gamma_t0_grid": args.gamma_t0_grid,
        "d_over_lambda_grid": args.d_over_lambda_grid,
        "slice": args.slice or "",
    }
    if args.anomalous_report:
        report = []
        for i, gt in enumerate(surface.gamma_t0):
            row = np.abs(surface.values[i])
            interior = (row[1:-1] > row[:-2]) & (row[1:-1] > row[2:])
            at = surface.d_over_lambda[1:-1][interior]
            report.append({"gamma_t0": float(gt), "local_max_d_over_lambda": at.tolist()})
            if at.size:
                pretty = ", ".join(f"{v:.4g}" for v in at)
                print(f"gamma_t0={gt:g}: local |V| maxima at d/lambda = {pretty}")
        meta["anomalous_report"] = report
    g, d, v = surface.rows()
    write_table(args.out, args.format, ["gamma_t0", "d_over_lambda", "visibility"],
                [g, d, v], meta)
    print(f"wrote {args.out} ({g.size} rows)")
    return 0


def cmd_ww(args: argparse.Namespace) -> int:
    gamma = args.gamma
    t_max = args.t_max / gamma
    bandwidth = args.bandwidth_ratio * gamma
    ff = FormFactor(args.kind, center=args.omega0, bandwidth=bandwidth, peak=gamma)
    n_steps = args.steps
    if n_steps is None:
        n_steps = max(1024, 2 * int(math.ceil(80.0 * bandwidth * t_max)))
    series = solve_nonmarkov(
        ff,
        t_max,
        n_steps,
        omega0=args.omega0,
        check_convergence=not args.no_check,
        convergence_tol=args.max_halving_gap,
    )
    header = ["t_s", "re_alpha", "im_alpha", "abs_alpha"]
    columns = [series.times, series.alpha.real, series.alpha.imag, np.abs(series.alpha)]
    meta = {
        "command": "ww",
        "kind": args.kind,
        "gamma_per_s": gamma,
        "bandwidth_ratio": args.bandwidth_ratio,
        "t_max_s": t_max,
        "n_steps": n_steps,
        "solver": series.solver_tag,
        "kernel_backend": kernels.backend(),
    }
    for key in ("halving_gap", "sup_gap"):
        if key in series.meta:
            meta[key] = series.meta[key]
            print(f"convergence report: {key} = {series.meta[key]:.3e}")
    if args.overlay_markov:
        markov = np.array(
            [markov_amplitude(gamma, 0.0, float(t)) for t in series.times]
        )
        header += ["re_alpha_markov", "im_alpha_markov", "abs_alpha_markov"]
        columns += [markov.real, markov.imag, np.abs(markov)]
        gap = float(np.abs(series.alpha - markov).max())
        meta["max_markov_gap"] = gap
        print(f"max |volterra - markov| = {gap:.3e}")
    write_table(args.out, args.format, header, columns, meta)
    print(f"wrote {args.out} ({n_steps + 1} samples)")
    return 0


def cmd_thermal(args: argparse.Namespace) -> int:
    if args.sweep_d:
        separations = parse_length_range(args.sweep_d)
        sweep = tdec_vs_separation_sweep(
            separations, args.area, args.t0, args.emissivity
        )
        meta = {
            "command": "thermal-sweep",
            "area_m2": args.area,
            "flight_time_s": args.t0,
            "emissivity": args.emissivity,
            "fragmentation_temperature_K": FRAGMENTATION_TEMPERATURE,
        }
        write_table(
            args.out, args.format, ["d_m", "T_dec_K", "above_fragmentation"],
            [sweep.separations, sweep.temperatures, sweep.above_fragmentation], meta,
        )
        flagged = int(sweep.above_fragmentation.sum())
        print(f"wrote {args.out} ({sweep.separations.size} rows, {flagged} above fragmentation)")
        return 0

    rows: list[tuple[str, float]] = []
    t_prime = decoherence_temperature(args.area, args.t0, args.separation, 1.0)
    t_dec = decoherence_temperature(args.area, args.t0, args.separation, args.emissivity)
    rows.append(("T_dec_blackbody_K", t_prime))
    rows.append(("T_dec_K", t_dec))
    rows.append(("above_fragmentation", float(t_dec > FRAGMENTATION_TEMPERATURE)))
    if args.temperature is not None:
        source = ThermalSource(args.temperature, args.area, args.emissivity, args.t0)
        budget = emitted_budget(source)
        check = coherence_ok(budget.momentum_spread, args.separation)
        rows.append(("radiated_energy_J", budget.radiated_energy))
        rows.append(("photon_count", budget.photon_count))
        rows.append(("momentum_spread_kg_m_per_s", budget.momentum_spread))
        rows.append(("coherent", float(check.coherent)))
        rows.append(("coherence_margin", check.margin))
    meta = {
        "command": "thermal-report",
        "area_m2": args.area,
        "flight_time_s": args.t0,
        "separation_m": args.separation,
        "emissivity": args.emissivity,
    }
    if args.format == "csv":
        lines = ["quantity,value"]
        for name, value in rows:
            lines.append(f"{name},{format_float(value)}")
        atomic_write_text(args.out, "\n".join(lines) + "\n")
    else:
        atomic_write_text(
            args.out,
            render_json(meta, [name for name, _ in rows], [[v] for _, v in rows]),
        )
    for name, value in rows:
        print(f"{name} = {value:g}")
    print(f"wrote {args.out}")
    return 0


def _add_common_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", required=True, help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_experiment_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", choices=PRESET_NAMES, default="vienna")
    parser.add_argument("--config", help="JSON file with SI-suffixed overrides")
    parser.add_argument(
        "--x-over-dx", type=float, default=None,
        help="retune the beam so the fringe period over spread equals this",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mesofringe",
        description="Mesoscopic double-slit interference tables",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("pattern", help="free fringe pattern at the screen")
    _add_experiment_options(p)
    p.add_argument("--mode", choices=("exact", "farfield"), default="farfield")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--span", type=float, default=3.0, help="grid halfwidth in spreads")
    p.add_argument("--eta0", type=float, default=0.0, help="initial chirp")
    p.add_argument("--compare", action="store_true",
                   help="report max deviation between exact and farfield")
    _add_common_output(p)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("decohere", help="pattern with photon-emission decoherence")
    _add_experiment_options(p)
    p.add_argument("--gamma-t0", type=float, required=True)
    p.add_argument("--d-over-lambda", type=float, required=True)
    p.add_argument("--path", choices=("exact", "approx"), default="approx")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--span", type=float, default=3.0)
    _add_common_output(p)
    p.set_defaults(func=cmd_decohere)

    p = sub.add_parser("visibility", help="closed-form visibility surface")
    p.add_argument("--gamma-t0-grid", default="0:4:81", help="start:stop:count")
    p.add_argument("--d-over-lambda-grid", default="0:3:121", help="start:stop:count")
    p.add_argument("--slice", default=None,
                   help="restrict one axis, e.g. gamma_t0=3")
    p.add_argument("--anomalous-report", action="store_true",
                   help="list local maxima of |V| along d/lambda")
    _add_common_output(p)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("ww", help="memory-kernel decay vs the Markov limit")
    p.add_argument("--kind", choices=("flat", "lorentzian"), default="lorentzian")
    p.add_argument("--bandwidth-ratio", type=float, default=100.0,
                   help="reservoir bandwidth over the decay rate")
    p.add_argument("--gamma", type=float, default=1.0, help="decay rate, 1/s")
    p.add_argument("--omega0", type=float, default=0.0,
                   help="transition frequency offset of the line center")
    p.add_argument("--t-max", type=float, default=5.0, help="horizon in units of 1/gamma")
    p.add_argument("--steps", type=int, default=None,
                   help="time steps (default: resolution chosen from the bandwidth)")
    p.add_argument("--overlay-markov", action="store_true")
    p.add_argument("--no-check", action="store_true",
                   help="skip the step-halving convergence check")
    p.add_argument("--max-halving-gap", type=float, default=None,
                   help="fail (exit 3) if the step-halving gap exceeds this")
    _add_common_output(p)
    p.set_defaults(func=cmd_ww)

    p = sub.add_parser("thermal", help="blackbody recoil bounds and sweeps")
    p.add_argument("--area", type=float, default=VIENNA_EMITTING_AREA, help="emitting area, m^2")
    p.add_argument("--t0", type=float, default=VIENNA_FLIGHT_TIME_QUOTED, help="flight time, s")
    p.add_argument("--separation", type=parse_length, default=100e-9,
                   help="slit separation (unit suffixes allowed)")
    p.add_argument("--emissivity", type=float, default=DEFAULT_EMISSIVITY)
    p.add_argument("--temperature", type=float, default=None,
                   help="also report the emission budget at this temperature, K")
    p.add_argument("--sweep-d", default=None,
                   help="sweep separation, start:stop:count with unit suffixes")
    _add_common_output(p)
    p.set_defaults(func=cmd_thermal)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, ConvergenceError) as exc:
        print(f"numerical convergence error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
