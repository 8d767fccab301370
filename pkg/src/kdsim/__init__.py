"""Simulator and fitting toolkit for electron diffraction at a pulsed
optical standing wave, observed in a convergent-beam focal-plane scan.

The forward chain is kinematics -> standing wave -> coupling constant ->
sideband populations -> ensemble average -> scan pattern; the fit module
runs it backwards from measured patterns.
"""

from ._version import __version__
from .constants import CONSTANTS, PhysicalConstants
from .coupling import (
    CouplingField,
    CouplingParams,
    beta_at,
    beta_max,
    coupling_field,
    coupling_params,
    phase_profile,
)
from .detector import (
    PowerScan,
    ScatteringPattern,
    detection_kernel,
    extract_populations,
    power_scan,
    rms_width,
    symmetric_grid,
    synthesize_pattern,
)
from .ensemble import (
    ElectronDistribution,
    EnsembleSpectrum,
    coherence_metric,
    ensemble_populations,
    population_sweep,
)
from .errors import (
    ConfigError,
    DomainError,
    ExtractionError,
    KDSimError,
    NumericalError,
)
from .fit import FitProblem, FitResult, add_noise, calibrate_power, fit_beta_max
from .kinematics import (
    DiffractionGeometry,
    ElectronKinematics,
    PhotonParams,
    diffraction_geometry,
    electron_kinematics,
    photon_params,
)
from .optics import (
    EnvelopeSample,
    StandingWave,
    cross_envelope,
    envelope_value,
    peak_field,
    standing_wave,
)
from .scenario import Scenario, ScenarioModel, build_model, load_scenario
from .sidebands import (
    SidebandSpectrum,
    bessel_rows,
    phase_grating_oracle,
    sideband_populations,
    truncation_rule,
)

__all__ = [
    "__version__",
    "CONSTANTS",
    "PhysicalConstants",
    "ConfigError",
    "DomainError",
    "ExtractionError",
    "KDSimError",
    "NumericalError",
    "ElectronKinematics",
    "PhotonParams",
    "DiffractionGeometry",
    "electron_kinematics",
    "photon_params",
    "diffraction_geometry",
    "StandingWave",
    "EnvelopeSample",
    "standing_wave",
    "peak_field",
    "cross_envelope",
    "envelope_value",
    "CouplingParams",
    "CouplingField",
    "coupling_params",
    "coupling_field",
    "beta_at",
    "beta_max",
    "phase_profile",
    "SidebandSpectrum",
    "bessel_rows",
    "sideband_populations",
    "phase_grating_oracle",
    "truncation_rule",
    "ElectronDistribution",
    "EnsembleSpectrum",
    "ensemble_populations",
    "population_sweep",
    "coherence_metric",
    "ScatteringPattern",
    "PowerScan",
    "detection_kernel",
    "symmetric_grid",
    "synthesize_pattern",
    "extract_populations",
    "power_scan",
    "rms_width",
    "FitProblem",
    "FitResult",
    "fit_beta_max",
    "calibrate_power",
    "add_noise",
    "Scenario",
    "ScenarioModel",
    "load_scenario",
    "build_model",
]
