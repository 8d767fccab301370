"""Relativistic electron kinematics, photon parameters and the convergent-beam
diffraction geometry.

Everything here is closed-form arithmetic on scalars; the results feed the
coupling, detector and CLI layers.
"""

import math
from dataclasses import dataclass

from .constants import CONSTANTS, ELECTRON_REST_ENERGY_EV
from .errors import DomainError


@dataclass(frozen=True)
class ElectronKinematics:
    """Derived kinematic quantities of the incident electron."""

    kinetic_energy_ev: float
    gamma: float          # Lorentz factor
    speed: float          # m/s, along the propagation axis z
    momentum: float       # kg m/s
    de_broglie: float     # m


@dataclass(frozen=True)
class PhotonParams:
    wavelength: float          # m
    wavenumber: float          # 1/m
    angular_frequency: float   # rad/s


@dataclass(frozen=True)
class DiffractionGeometry:
    """Focal-plane geometry of the diffraction orders.

    ``order_angle`` is the angle between neighboring orders (each order is a
    transverse momentum kick of twice the photon momentum) and
    ``order_separation`` the corresponding peak spacing in the focal plane.
    """

    grating_to_focus: float   # m
    order_angle: float        # rad
    order_separation: float   # m
    slit_width: float         # m
    spot_fwhm: float          # m


def electron_kinematics(kinetic_energy_ev: float) -> ElectronKinematics:
    """Relativistic kinematics for a given kinetic energy in eV.

    Parameters
    ----------
    kinetic_energy_ev : float
        Kinetic energy in eV, > 0.

    Returns
    -------
    ElectronKinematics
        With gamma = 1 + E/(m c^2), v = c sqrt(1 - 1/gamma^2),
        p = gamma m v and the de Broglie wavelength 2 pi hbar / p.
    """
    if not kinetic_energy_ev > 0:
        raise DomainError(f"kinetic energy must be > 0 eV, got {kinetic_energy_ev!r}")
    c = CONSTANTS.light_speed
    m_e = CONSTANTS.electron_mass
    gamma = 1.0 + kinetic_energy_ev / ELECTRON_REST_ENERGY_EV
    speed = c * math.sqrt(1.0 - 1.0 / gamma**2)
    momentum = gamma * m_e * speed
    de_broglie = 2.0 * math.pi * CONSTANTS.reduced_planck / momentum
    return ElectronKinematics(
        kinetic_energy_ev=kinetic_energy_ev,
        gamma=gamma,
        speed=speed,
        momentum=momentum,
        de_broglie=de_broglie,
    )


def photon_params(wavelength: float) -> PhotonParams:
    """Wavenumber and angular frequency of the optical field."""
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0 m, got {wavelength!r}")
    k = 2.0 * math.pi / wavelength
    return PhotonParams(
        wavelength=wavelength,
        wavenumber=k,
        angular_frequency=CONSTANTS.light_speed * k,
    )


def diffraction_geometry(
    electron: ElectronKinematics,
    photon: PhotonParams,
    grating_to_focus: float,
    slit_width: float,
    spot_fwhm: float,
) -> DiffractionGeometry:
    """Angle and focal-plane spacing between neighboring diffraction orders.

    The angle is delta = 2 hbar k / p (one order corresponds to a transverse
    momentum transfer of 2 hbar k); the focal-plane separation is L * delta
    for a grating placed a distance L upstream of the focus.
    """
    if not grating_to_focus > 0:
        raise DomainError(
            f"grating_to_focus must be > 0 m, got {grating_to_focus!r}"
        )
    if not slit_width > 0:
        raise DomainError(f"slit_width must be > 0 m, got {slit_width!r}")
    if not spot_fwhm > 0:
        raise DomainError(f"spot_fwhm must be > 0 m, got {spot_fwhm!r}")
    delta = 2.0 * CONSTANTS.reduced_planck * photon.wavenumber / electron.momentum
    return DiffractionGeometry(
        grating_to_focus=grating_to_focus,
        order_angle=delta,
        order_separation=grating_to_focus * delta,
        slit_width=slit_width,
        spot_fwhm=spot_fwhm,
    )
