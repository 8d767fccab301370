import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # expose oracles.py to tests

from kdsim import (
    ElectronDistribution,
    coupling_field,
    diffraction_geometry,
    electron_kinematics,
    photon_params,
    standing_wave,
)

SCENARIO_DIR = Path(__file__).parent.parent / "scenarios"


@pytest.fixture(scope="session")
def electron20():
    return electron_kinematics(20e3)


@pytest.fixture(scope="session")
def electron30():
    return electron_kinematics(30e3)


@pytest.fixture(scope="session")
def photon():
    return photon_params(1030e-9)


@pytest.fixture(scope="session")
def wave220(photon):
    """Two 220 fs pulses, 10 um waist, 1 W total at 1 MHz."""
    return standing_wave(photon, 10e-6, 220e-15, 220e-15, 1e6, avg_power=1.0)


@pytest.fixture(scope="session")
def wave700(photon):
    return standing_wave(photon, 10e-6, 700e-15, 700e-15, 1e6, avg_power=1.0)


@pytest.fixture(scope="session")
def geometry(electron20, photon):
    return diffraction_geometry(electron20, photon, 12e-3, 70e-9, 20e-9)


@pytest.fixture(scope="session")
def field20(electron20, wave220):
    return coupling_field(electron20, wave220)


def field_with_beta(electron, wave_template, beta_target):
    """Coupling field rescaled so beta_max hits the target exactly."""
    import math

    from kdsim import coupling_field, standing_wave

    ref = coupling_field(electron, wave_template)
    if beta_target == 0.0:
        e0 = 0.0
    else:
        e0 = wave_template.peak_field * math.sqrt(beta_target / ref.beta_max)
    wave = standing_wave(
        wave_template.photon,
        wave_template.waist,
        wave_template.pulse_fwhm_1,
        wave_template.pulse_fwhm_2,
        wave_template.rep_rate,
        field=e0,
    )
    return coupling_field(electron, wave)


def make_scenario(**overrides):
    """Coherent-regime scenario with overridable fields."""
    from kdsim import Scenario

    base = dict(
        kinetic_energy_ev=30e3,
        electron_pulse_fwhm=150e-15,
        beam_sigma_x=1e-6,
        beam_sigma_y=1e-6,
        wavelength=1030e-9,
        laser_pulse_fwhm_1=700e-15,
        laser_pulse_fwhm_2=700e-15,
        waist=10e-6,
        rep_rate=1e6,
        avg_power=None,
        beta_max=4.52,
        grating_to_focus=12e-3,
        slit_width=70e-9,
        spot_fwhm=20e-9,
        max_order=None,
        quadrature_tolerance=1e-9,
        grid_step=None,
        seed=0,
    )
    base.update(overrides)
    return Scenario(**base)


@pytest.fixture(scope="session")
def coherent_setup(electron30, wave700):
    """Narrow ensemble: short pulse, tight beam; beta_max = 4.52."""
    field = field_with_beta(electron30, wave700, 4.52)
    dist = ElectronDistribution(sigma_x=1e-6, sigma_y=1e-6, temporal_fwhm=150e-15)
    return field, dist


@pytest.fixture(scope="session")
def incoherent_setup(electron20, wave220):
    """Broad ensemble: pulse 3x the cross envelope, beam 3x the waist."""
    field = field_with_beta(electron20, wave220, 9.0)
    cross_fwhm = field.params.wave.cross_temporal_fwhm
    dist = ElectronDistribution(
        sigma_x=30e-6, sigma_y=30e-6, temporal_fwhm=3.0 * cross_fwhm
    )
    return field, dist
