"""Scenario files and their assembly into model objects.

A scenario is an INI-style text file with the exact key names listed below;
units are encoded in the names and never inferred.  Unknown sections or keys
are errors, not warnings: a silently ignored typo would change the physics.

    [electron]
    kinetic_energy_eV = 20e3
    pulse_fwhm_s      = 466e-15
    beam_sigma_x_m    = 30e-6
    beam_sigma_y_m    = 30e-6

    [laser]
    wavelength_m   = 1030e-9
    pulse_fwhm_1_s = 220e-15
    pulse_fwhm_2_s = 220e-15
    waist_m        = 10e-6
    rep_rate_hz    = 1e6
    avg_power_w    = 1.0        ; or: beta_max = 4.52 (exactly one of the two)

    [geometry]
    grating_to_focus_m = 12e-3
    slit_width_m       = 70e-9
    spot_fwhm_m        = 20e-9

    [numerics]                  ; optional section
    max_order_or_auto    = auto
    quadrature_tolerance = 1e-9
    grid_step_m          = 10e-9

    [run]                       ; optional section
    seed = 0
"""

import configparser
import math
from dataclasses import dataclass

from .coupling import CouplingField, coupling_field
from .detector import symmetric_grid
from .ensemble import ElectronDistribution
from .errors import ConfigError
from .kinematics import (
    DiffractionGeometry,
    ElectronKinematics,
    PhotonParams,
    diffraction_geometry,
    electron_kinematics,
    photon_params,
)
from .optics import StandingWave, standing_wave
from .sidebands import truncation_rule

_SCHEMA = {
    "electron": {
        "kinetic_energy_eV": True,
        "pulse_fwhm_s": True,
        "beam_sigma_x_m": True,
        "beam_sigma_y_m": True,
    },
    "laser": {
        "wavelength_m": True,
        "pulse_fwhm_1_s": True,
        "pulse_fwhm_2_s": True,
        "waist_m": True,
        "rep_rate_hz": True,
        "avg_power_w": False,
        "beta_max": False,
    },
    "geometry": {
        "grating_to_focus_m": True,
        "slit_width_m": True,
        "spot_fwhm_m": True,
    },
    "numerics": {
        "max_order_or_auto": False,
        "quadrature_tolerance": False,
        "grid_step_m": False,
    },
    "run": {"seed": False},
}
_OPTIONAL_SECTIONS = ("numerics", "run")


@dataclass(frozen=True)
class Scenario:
    kinetic_energy_ev: float
    electron_pulse_fwhm: float
    beam_sigma_x: float
    beam_sigma_y: float
    wavelength: float
    laser_pulse_fwhm_1: float
    laser_pulse_fwhm_2: float
    waist: float
    rep_rate: float
    avg_power: float | None
    beta_max: float | None
    grating_to_focus: float
    slit_width: float
    spot_fwhm: float
    max_order: int | None        # None means automatic truncation
    quadrature_tolerance: float
    grid_step: float | None      # None means order_separation / 20
    seed: int


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not a number: {raw!r}") from None


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file."""
    parser = configparser.ConfigParser(
        delimiters=("=",), inline_comment_prefixes=("#", ";"), strict=True
    )
    parser.optionxform = str
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"scenario file does not parse: {exc}") from None

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"{section}: unknown section")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{section}.{key}: unknown key")
    for section, keys in _SCHEMA.items():
        if section not in parser:
            if section in _OPTIONAL_SECTIONS:
                continue
            raise ConfigError(f"{section}: missing section")
        for key, required in keys.items():
            if required and key not in parser[section]:
                raise ConfigError(f"{section}.{key}: missing required key")

    def get(section, key, default=None):
        if section in parser and key in parser[section]:
            return parser[section][key]
        return default

    def positive(section, key, raw):
        val = _parse_float(section, key, raw)
        if not val > 0:
            raise ConfigError(f"{section}.{key}: must be positive, got {val!r}")
        return val

    def nonnegative(section, key, raw):
        val = _parse_float(section, key, raw)
        if val < 0:
            raise ConfigError(f"{section}.{key}: must be >= 0, got {val!r}")
        return val

    power_raw = get("laser", "avg_power_w")
    beta_raw = get("laser", "beta_max")
    if (power_raw is None) == (beta_raw is None):
        raise ConfigError(
            "laser: exactly one of avg_power_w / beta_max must be given"
        )
    # zero is allowed: a switched-off grating is a valid (single-peak) run
    avg_power = None if power_raw is None else nonnegative("laser", "avg_power_w", power_raw)
    beta_max = None if beta_raw is None else nonnegative("laser", "beta_max", beta_raw)

    max_order_raw = get("numerics", "max_order_or_auto", "auto")
    if max_order_raw == "auto":
        max_order = None
    else:
        try:
            max_order = int(max_order_raw)
        except ValueError:
            raise ConfigError(
                f"numerics.max_order_or_auto: expected 'auto' or an integer, "
                f"got {max_order_raw!r}"
            ) from None
        if max_order < 0:
            raise ConfigError("numerics.max_order_or_auto: must be >= 0")

    grid_step_raw = get("numerics", "grid_step_m")
    grid_step = (
        None if grid_step_raw is None else positive("numerics", "grid_step_m", grid_step_raw)
    )

    quad_tol = _parse_float(
        "numerics", "quadrature_tolerance", get("numerics", "quadrature_tolerance", "1e-9")
    )
    # QUADPACK cannot honor relative tolerances near round-off
    if not 1e-14 <= quad_tol < 1.0:
        raise ConfigError(
            f"numerics.quadrature_tolerance: must be in [1e-14, 1), got {quad_tol!r}"
        )

    seed_raw = get("run", "seed", "0")
    try:
        seed = int(seed_raw)
    except ValueError:
        raise ConfigError(f"run.seed: not an integer: {seed_raw!r}") from None
    if seed < 0:
        raise ConfigError("run.seed: must be >= 0")

    return Scenario(
        kinetic_energy_ev=positive("electron", "kinetic_energy_eV", get("electron", "kinetic_energy_eV")),
        electron_pulse_fwhm=positive("electron", "pulse_fwhm_s", get("electron", "pulse_fwhm_s")),
        beam_sigma_x=positive("electron", "beam_sigma_x_m", get("electron", "beam_sigma_x_m")),
        beam_sigma_y=positive("electron", "beam_sigma_y_m", get("electron", "beam_sigma_y_m")),
        wavelength=positive("laser", "wavelength_m", get("laser", "wavelength_m")),
        laser_pulse_fwhm_1=positive("laser", "pulse_fwhm_1_s", get("laser", "pulse_fwhm_1_s")),
        laser_pulse_fwhm_2=positive("laser", "pulse_fwhm_2_s", get("laser", "pulse_fwhm_2_s")),
        waist=positive("laser", "waist_m", get("laser", "waist_m")),
        rep_rate=positive("laser", "rep_rate_hz", get("laser", "rep_rate_hz")),
        avg_power=avg_power,
        beta_max=beta_max,
        grating_to_focus=positive("geometry", "grating_to_focus_m", get("geometry", "grating_to_focus_m")),
        slit_width=positive("geometry", "slit_width_m", get("geometry", "slit_width_m")),
        spot_fwhm=positive("geometry", "spot_fwhm_m", get("geometry", "spot_fwhm_m")),
        max_order=max_order,
        quadrature_tolerance=quad_tol,
        grid_step=grid_step,
        seed=seed,
    )


def scenario_warnings(scenario: Scenario) -> list[str]:
    """Physics sanity warnings that do not block a run."""
    warnings = []
    span = 2.0 * math.sqrt(2.0 * math.log(2.0)) * scenario.beam_sigma_x
    period = scenario.wavelength / 2.0
    if span < period:
        warnings.append(
            f"electron beam span {span:.3e} m is below the standing-wave period "
            f"{period:.3e} m; the beam cannot sample a full grating period"
        )
    return warnings


def scenario_lines(scenario: Scenario) -> list[str]:
    """Resolved scenario as deterministic dotted key = value lines."""
    power = "none" if scenario.avg_power is None else repr(scenario.avg_power)
    beta = "none" if scenario.beta_max is None else repr(scenario.beta_max)
    order = "auto" if scenario.max_order is None else str(scenario.max_order)
    step = "auto" if scenario.grid_step is None else repr(scenario.grid_step)
    return [
        f"electron.kinetic_energy_eV = {scenario.kinetic_energy_ev!r}",
        f"electron.pulse_fwhm_s = {scenario.electron_pulse_fwhm!r}",
        f"electron.beam_sigma_x_m = {scenario.beam_sigma_x!r}",
        f"electron.beam_sigma_y_m = {scenario.beam_sigma_y!r}",
        f"laser.wavelength_m = {scenario.wavelength!r}",
        f"laser.pulse_fwhm_1_s = {scenario.laser_pulse_fwhm_1!r}",
        f"laser.pulse_fwhm_2_s = {scenario.laser_pulse_fwhm_2!r}",
        f"laser.waist_m = {scenario.waist!r}",
        f"laser.rep_rate_hz = {scenario.rep_rate!r}",
        f"laser.avg_power_w = {power}",
        f"laser.beta_max = {beta}",
        f"geometry.grating_to_focus_m = {scenario.grating_to_focus!r}",
        f"geometry.slit_width_m = {scenario.slit_width!r}",
        f"geometry.spot_fwhm_m = {scenario.spot_fwhm!r}",
        f"numerics.max_order_or_auto = {order}",
        f"numerics.quadrature_tolerance = {scenario.quadrature_tolerance!r}",
        f"numerics.grid_step_m = {step}",
        f"run.seed = {scenario.seed}",
    ]


@dataclass
class ScenarioModel:
    """Physics objects assembled from a scenario."""

    scenario: Scenario
    electron: ElectronKinematics
    photon: PhotonParams
    wave: StandingWave
    field: CouplingField
    distribution: ElectronDistribution
    geometry: DiffractionGeometry
    max_order: int | None

    def order_cutoff(self, beta: float) -> int:
        return self.max_order if self.max_order is not None else truncation_rule(beta)

    def grid_for_beta(self, beta: float):
        return symmetric_grid(
            self.geometry, self.order_cutoff(beta), self.scenario.grid_step
        )

    @property
    def grid(self):
        return self.grid_for_beta(self.field.beta_max)

    def beta_for_power(self, power: float) -> float:
        """beta_max at a given average power; exact by beta proportional to power."""
        if self.wave.avg_power == 0.0:
            raise ConfigError(
                "laser.avg_power_w: a zero-power scenario cannot anchor a power sweep"
            )
        return self.field.beta_max * power / self.wave.avg_power


def build_model(scenario: Scenario) -> ScenarioModel:
    """Assemble kinematics, wave, coupling field, distribution and geometry."""
    ek = electron_kinematics(scenario.kinetic_energy_ev)
    photon = photon_params(scenario.wavelength)
    common = dict(
        photon=photon,
        waist=scenario.waist,
        pulse_fwhm_1=scenario.laser_pulse_fwhm_1,
        pulse_fwhm_2=scenario.laser_pulse_fwhm_2,
        rep_rate=scenario.rep_rate,
    )
    if scenario.avg_power is not None:
        wave = standing_wave(avg_power=scenario.avg_power, **common)
        field = coupling_field(ek, wave, scenario.quadrature_tolerance)
    else:
        # unit-field reference, then rescale E0 so beta_max hits the target
        reference = standing_wave(field=1.0, **common)
        ref_field = coupling_field(ek, reference, scenario.quadrature_tolerance)
        e0 = math.sqrt(scenario.beta_max / ref_field.beta_max)
        wave = standing_wave(field=e0, **common)
        field = coupling_field(ek, wave, scenario.quadrature_tolerance)
    dist = ElectronDistribution(
        sigma_x=scenario.beam_sigma_x,
        sigma_y=scenario.beam_sigma_y,
        temporal_fwhm=scenario.electron_pulse_fwhm,
    )
    geometry = diffraction_geometry(
        ek,
        photon,
        scenario.grating_to_focus,
        scenario.slit_width,
        scenario.spot_fwhm,
    )
    return ScenarioModel(
        scenario=scenario,
        electron=ek,
        photon=photon,
        wave=wave,
        field=field,
        distribution=dist,
        geometry=geometry,
        max_order=scenario.max_order,
    )
