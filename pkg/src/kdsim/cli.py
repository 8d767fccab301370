"""Command-line front end.

    kd-sim kinematics  --scenario FILE
    kd-sim pattern     --scenario FILE [--out DIR] [--seed N] [--noise SIGMA]
    kd-sim scan        --scenario FILE --powers START:STOP:N [--out DIR]
    kd-sim populations --scenario FILE --betas START:STOP:N [--out DIR]
    kd-sim fit         --scenario FILE --data CSV [--bounds LO:HI] [--out DIR]

Each data-producing command writes a CSV and a PNG figure into the output
directory.  Outputs are byte-identical across repeated runs with the same
scenario, flags and seed.  Exit codes: 0 success, 2 invalid configuration
(message names the offending field), 3 numerical failure.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .coupling import coupling_field
from .detector import ScatteringPattern, power_scan, synthesize_pattern
from .ensemble import ensemble_populations, population_sweep
from .errors import ConfigError, DomainError, ExtractionError, KDSimError, NumericalError
from .fit import add_noise, fit_beta_max
from .optics import standing_wave
from .scenario import build_model, load_scenario, scenario_lines, scenario_warnings
from . import reports

_EXIT_CONFIG = 2
_EXIT_NUMERICAL = 3


def _parse_range(spec: str, name: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise ConfigError(f"{name}: expected START:STOP:N, got {spec!r}") from None
    if count < 1:
        raise ConfigError(f"{name}: N must be >= 1, got {count}")
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)


def _metadata(command: str, scenario, extra=()):
    lines = [f"command: {command}"]
    lines.extend(scenario_lines(scenario))
    lines.extend(extra)
    return lines


def _load(args):
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    for warning in scenario_warnings(scenario):
        print(f"warning: {warning}", file=sys.stderr)
    return scenario


def _reference_field(model):
    """Field with the scenario's envelope but a unit peak field.

    Lets beta sweeps run on scenarios whose own coupling is zero.
    """
    if model.field.beta_max > 0.0:
        return model.field
    wave = standing_wave(
        photon=model.photon,
        waist=model.wave.waist,
        pulse_fwhm_1=model.wave.pulse_fwhm_1,
        pulse_fwhm_2=model.wave.pulse_fwhm_2,
        rep_rate=model.wave.rep_rate,
        field=1.0,
    )
    return coupling_field(model.electron, wave, model.scenario.quadrature_tolerance)


def _cmd_kinematics(args) -> int:
    scenario = _load(args)
    model = build_model(scenario)
    ek, geom = model.electron, model.geometry
    print(f"gamma = {ek.gamma!r}")
    print(f"speed_m_per_s = {ek.speed!r}")
    print(f"momentum_kg_m_per_s = {ek.momentum!r}")
    print(f"de_broglie_m = {ek.de_broglie!r}")
    print(f"order_angle_rad = {geom.order_angle!r}")
    print(f"order_separation_m = {geom.order_separation!r}")
    return 0


def _cmd_pattern(args) -> int:
    scenario = _load(args)
    model = build_model(scenario)
    spectrum = ensemble_populations(
        model.field, model.distribution, model.max_order,
        tol=min(scenario.quadrature_tolerance, 1e-9),
    )
    pattern = synthesize_pattern(spectrum, model.geometry, model.grid)
    extra = []
    if args.noise is not None:
        pattern = add_noise(pattern, args.noise, scenario.seed)
        extra.append(f"noise_sigma_rel: {args.noise!r}")
        extra.append(f"noise_seed: {scenario.seed}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _metadata("pattern", scenario, extra)
    reports.write_pattern_csv(out / "pattern.csv", pattern, meta)
    reports.render_pattern_png(
        out / "pattern.png", pattern,
        title=f"Pattern at beta_max = {model.field.beta_max:.4g}",
    )
    return 0


def _cmd_scan(args) -> int:
    scenario = _load(args)
    model = build_model(scenario)
    powers = _parse_range(args.powers, "--powers")
    scan = power_scan(powers, model)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _metadata("scan", scenario, [f"powers: {args.powers}"])
    reports.write_scan_csv(out / "scan.csv", scan, meta)
    reports.render_scan_png(out / "scan.png", scan)
    return 0


def _cmd_populations(args) -> int:
    scenario = _load(args)
    model = build_model(scenario)
    betas = _parse_range(args.betas, "--betas")
    if np.any(betas < 0):
        raise ConfigError("--betas: values must be >= 0")
    field = _reference_field(model)
    spectra = population_sweep(
        field, model.distribution, betas, max_order=model.max_order,
        tol=min(scenario.quadrature_tolerance, 1e-9),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _metadata("populations", scenario, [f"betas: {args.betas}"])
    reports.write_populations_csv(out / "populations.csv", betas, spectra, meta)
    reports.render_populations_png(out / "populations.png", betas, spectra)
    return 0


def _cmd_fit(args) -> int:
    scenario = _load(args)
    model = build_model(scenario)
    positions, intensity, _ = reports.read_pattern_csv(args.data)
    observed = ScatteringPattern(
        positions=positions, intensity=intensity, geometry=model.geometry
    )
    try:
        lo, hi = (float(v) for v in args.bounds.split(":"))
    except ValueError:
        raise ConfigError(f"--bounds: expected LO:HI, got {args.bounds!r}") from None
    result = fit_beta_max(observed, model, bounds=(lo, hi))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _metadata(
        "fit", scenario, [f"data: {Path(args.data).name}", f"bounds: {args.bounds}"]
    )
    reports.write_fit_report_csv(out / "fit_report.csv", result, meta)
    reports.write_fit_summary(out / "fit_summary.txt", result)
    best = result.estimates["beta_max"]
    fitted_scenario = dataclasses.replace(scenario, avg_power=None, beta_max=best)
    fitted = build_model(fitted_scenario)
    spectrum = ensemble_populations(
        fitted.field, fitted.distribution, fitted.max_order
    )
    model_pattern = synthesize_pattern(spectrum, fitted.geometry, fitted.grid)
    reports.render_fit_png(out / "fit.png", observed, model_pattern, result)
    print(f"beta_max = {best!r}")
    print(f"residual_norm = {result.residual_norm!r}")
    print(f"converged = {str(result.converged).lower()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kd-sim",
        description="Simulate and fit electron diffraction at a pulsed optical standing wave.",
    )
    parser.add_argument("--version", action="version", version=f"kd-sim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, help="scenario INI file")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    p = sub.add_parser("kinematics", help="print electron kinematics and geometry")
    common(p)
    p.set_defaults(func=_cmd_kinematics)

    p = sub.add_parser("pattern", help="one scattering pattern CSV + figure")
    common(p)
    p.add_argument("--noise", type=float, default=None,
                   help="additive Gaussian noise, fraction of peak intensity")
    p.set_defaults(func=_cmd_pattern)

    p = sub.add_parser("scan", help="pattern stack over a power range")
    common(p)
    p.add_argument("--powers", required=True, help="power axis as START:STOP:N (W)")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("populations", help="ensemble populations over a coupling sweep")
    common(p)
    p.add_argument("--betas", required=True, help="beta_max axis as START:STOP:N")
    p.set_defaults(func=_cmd_populations)

    p = sub.add_parser("fit", help="recover beta_max from a measured pattern CSV")
    common(p)
    p.add_argument("--data", required=True, help="observed pattern CSV")
    p.add_argument("--bounds", default="0:10", help="beta_max bounds as LO:HI")
    p.set_defaults(func=_cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except (NumericalError, ExtractionError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    except KDSimError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
