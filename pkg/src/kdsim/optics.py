"""Pulsed optical standing wave: envelope model and power-to-field mapping.

Two counter-propagating beams travel along +/-x with the electric field
polarized along the electron axis z.  Each pulse has a Gaussian field
envelope; ``pulse_fwhm_1`` and ``pulse_fwhm_2`` are the FWHMs of those field
Gaussians.  Only the interference cross term of the two beams modulates the
electron phase along x, so the envelope that matters downstream is the
product of the two field envelopes (equivalently the geometric mean of the
two field-squared envelopes) times the shared transverse intensity profile
exp(-2(y^2+z^2)/w0^2).

Retardation x/c inside the envelope is neglected: the modulated region spans
|x| of order w0 ~ 10 um, i.e. tens of fs, small against the pulse durations.
The envelope is therefore independent of x.
"""

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .constants import CONSTANTS
from .errors import DomainError
from .kinematics import PhotonParams

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class StandingWave:
    photon: PhotonParams
    waist: float          # m, 1/e^2 intensity radius of each beam
    pulse_fwhm_1: float   # s, field-envelope FWHM of beam 1
    pulse_fwhm_2: float   # s, field-envelope FWHM of beam 2
    rep_rate: float       # Hz
    avg_power: float      # W, total over both beams
    peak_field: float     # V/m, effective amplitude of the diffracting cross term

    # polarization is fixed along the electron propagation axis; only that
    # component enters the ponderomotive coupling used downstream
    polarization: ClassVar[str] = "z"

    @property
    def cross_temporal_fwhm(self) -> float:
        """FWHM of the temporal cross-envelope factor (s)."""
        s = 1.0 / self.pulse_fwhm_1**2 + 1.0 / self.pulse_fwhm_2**2
        return 1.0 / math.sqrt(s)


@dataclass(frozen=True)
class EnvelopeSample:
    value: float                         # dimensionless, in (0, 1]
    position: tuple[float, float, float]  # m
    time: float                          # s


def peak_field(
    avg_power: float, rep_rate: float, pulse_fwhm_eff: float, waist: float
) -> float:
    """Peak electric field of a pulsed Gaussian beam from its average power.

    The pulse train is modeled with a Gaussian intensity profile of FWHM
    ``pulse_fwhm_eff`` in time and a transverse profile exp(-2 r^2 / w0^2).
    The peak intensity then satisfies
    U_pulse = I_peak * (pi w0^2 / 2) * tau_eff with
    tau_eff = pulse_fwhm_eff * sqrt(pi / (4 ln 2)), and
    E0 = sqrt(2 I_peak / (eps0 c)).

    Parameters
    ----------
    avg_power : float
        Average power in W.
    rep_rate : float
        Pulse repetition rate in Hz.
    pulse_fwhm_eff : float
        FWHM of the temporal intensity profile in s.
    waist : float
        1/e^2 intensity radius in m.

    Returns
    -------
    float
        Peak field E0 in V/m.
    """
    for name, val in (
        ("avg_power", avg_power),
        ("rep_rate", rep_rate),
        ("pulse_fwhm_eff", pulse_fwhm_eff),
        ("waist", waist),
    ):
        if not val > 0:
            raise DomainError(f"{name} must be > 0, got {val!r}")
    pulse_energy = avg_power / rep_rate
    tau_eff = pulse_fwhm_eff * math.sqrt(math.pi / (4.0 * _LN2))
    intensity_peak = 2.0 * pulse_energy / (math.pi * waist**2 * tau_eff)
    eps0 = CONSTANTS.vacuum_permittivity
    c = CONSTANTS.light_speed
    return math.sqrt(2.0 * intensity_peak / (eps0 * c))


def standing_wave(
    photon: PhotonParams,
    waist: float,
    pulse_fwhm_1: float,
    pulse_fwhm_2: float,
    rep_rate: float,
    avg_power: float | None = None,
    field: float | None = None,
) -> StandingWave:
    """Build a StandingWave from either the average power or the peak field.

    With ``avg_power`` given, the power is split 50/50 between the two beams,
    each beam's peak field E_i follows from :func:`peak_field` (the intensity
    FWHM of beam i is pulse_fwhm_i / sqrt(2), the square of its field
    Gaussian), and the cross-term amplitude is E0 = sqrt(E1 E2).  With
    ``field`` given, the mapping is inverted so that avg_power stays
    consistent (E0^2 is linear in avg_power either way).
    """
    if (avg_power is None) == (field is None):
        raise DomainError("exactly one of avg_power / field must be given")
    for name, val in (
        ("waist", waist),
        ("pulse_fwhm_1", pulse_fwhm_1),
        ("pulse_fwhm_2", pulse_fwhm_2),
        ("rep_rate", rep_rate),
    ):
        if not val > 0:
            raise DomainError(f"{name} must be > 0, got {val!r}")

    # E_i = c_i * sqrt(P) per beam at the 50/50 split; E0 = sqrt(E1 E2)
    def beam_field_unit_power(pulse_fwhm: float) -> float:
        return peak_field(0.5, rep_rate, pulse_fwhm / math.sqrt(2.0), waist)

    c1 = beam_field_unit_power(pulse_fwhm_1)
    c2 = beam_field_unit_power(pulse_fwhm_2)
    if avg_power is not None:
        if avg_power < 0:
            raise DomainError(f"avg_power must be >= 0, got {avg_power!r}")
        e0 = math.sqrt(c1 * c2) * math.sqrt(avg_power)
    else:
        if field < 0:
            raise DomainError(f"field must be >= 0, got {field!r}")
        e0 = field
        avg_power = field**2 / (c1 * c2)
    return StandingWave(
        photon=photon,
        waist=waist,
        pulse_fwhm_1=pulse_fwhm_1,
        pulse_fwhm_2=pulse_fwhm_2,
        rep_rate=rep_rate,
        avg_power=avg_power,
        peak_field=e0,
    )


def envelope_value(x, y, z, t, wave: StandingWave):
    """Cross-envelope value; accepts scalars or numpy arrays.

    exp(-2 (y^2 + z^2) / w0^2) times the product of the two temporal field
    Gaussians, independent of x (retardation neglected).
    """
    del x  # no x dependence without retardation
    w0 = wave.waist
    s = 1.0 / wave.pulse_fwhm_1**2 + 1.0 / wave.pulse_fwhm_2**2
    return np.exp(-2.0 * (np.asarray(y) ** 2 + np.asarray(z) ** 2) / w0**2) * np.exp(
        -4.0 * _LN2 * np.asarray(t) ** 2 * s
    )


def transverse_factor(y, wave: StandingWave):
    """Transverse part of the cross envelope, exp(-2 y^2 / w0^2)."""
    return np.exp(-2.0 * np.asarray(y) ** 2 / wave.waist**2)


def scalar_envelope(wave: StandingWave):
    """Scalar-math version of the cross envelope for tight quadrature loops.

    Returns a callable f(y, z, t) identical to :func:`envelope_value` but
    built on plain floats; array overhead dominates the line-integral cost
    otherwise.
    """
    w0_sq = wave.waist**2
    s = 1.0 / wave.pulse_fwhm_1**2 + 1.0 / wave.pulse_fwhm_2**2
    exp = math.exp

    def value(y: float, z: float, t: float) -> float:
        return exp(-2.0 * (y * y + z * z) / w0_sq - 4.0 * _LN2 * t * t * s)

    return value


def temporal_factor(t, wave: StandingWave):
    """Temporal part of the cross envelope (product of the two field Gaussians)."""
    s = 1.0 / wave.pulse_fwhm_1**2 + 1.0 / wave.pulse_fwhm_2**2
    return np.exp(-4.0 * _LN2 * np.asarray(t) ** 2 * s)


def cross_envelope(x: float, y: float, z: float, t: float, wave: StandingWave) -> EnvelopeSample:
    """Sample the spatio-temporal cross envelope at one point.

    Maximum value 1 at the spatio-temporal origin; even in y, z and t.
    """
    for name, val in (("x", x), ("y", y), ("z", z), ("t", t)):
        if not math.isfinite(val):
            raise DomainError(f"coordinate {name} must be finite, got {val!r}")
    return EnvelopeSample(
        value=float(envelope_value(x, y, z, t, wave)),
        position=(x, y, z),
        time=t,
    )
