"""Physical constants (CODATA 2018), frozen at build time.

All internal computation is in SI; electron energies enter in eV and are
converted once at the module boundaries.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    electron_charge: float   # C
    electron_mass: float     # kg
    reduced_planck: float    # J s
    light_speed: float       # m/s
    vacuum_permittivity: float  # F/m


CONSTANTS = PhysicalConstants(
    electron_charge=1.602176634e-19,
    electron_mass=9.1093837015e-31,
    reduced_planck=1.054571817e-34,
    light_speed=299792458.0,
    vacuum_permittivity=8.8541878128e-12,
)

# electron rest energy in eV, used for the Lorentz factor
ELECTRON_REST_ENERGY_EV = (
    CONSTANTS.electron_mass * CONSTANTS.light_speed**2 / CONSTANTS.electron_charge
)
