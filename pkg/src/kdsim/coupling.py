"""Coupling constant of the electron to the standing wave.

The electron crossing the light grating accumulates a phase
Phi(x, y, tau) = -beta(y, tau) * cos(2 k x) plus an x-independent offset
(the spatially uniform part of the ponderomotive potential, which cannot
change sideband populations and is dropped).  The modulation depth is

    beta(x, y, tau) = e^2 E0^2 / (8 m_e hbar gamma^3 omega^2 v_z)
                      * integral of the cross envelope along the trajectory,

evaluated by adaptive quadrature over z with the envelope sampled at the
retarded time z/v_z - tau.  beta is stored as a magnitude (>= 0); the sign
of the phase is applied in :func:`phase_profile`.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .constants import CONSTANTS
from .errors import DomainError, NumericalError
from .kinematics import ElectronKinematics
from .optics import StandingWave, scalar_envelope, transverse_factor

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class CouplingParams:
    electron: ElectronKinematics
    wave: StandingWave
    prefactor: float      # 1/m, magnitude of the phase-integral prefactor
    z_int: float          # m, integration half-span at tau = 0
    quad_rel_tol: float   # relative tolerance of the line-integral quadrature


def coupling_params(
    electron: ElectronKinematics,
    wave: StandingWave,
    quad_rel_tol: float = 1e-9,
) -> CouplingParams:
    """Assemble the prefactor and integration span for beta evaluation.

    The half-span combines 6x the 1/e^2 envelope half-width in z with the
    distance the electron covers in 3x the temporal cross-envelope FWHM;
    the envelope at +/-z_int is then far below 1e-8 of its peak.
    """
    e = CONSTANTS.electron_charge
    m_e = CONSTANTS.electron_mass
    hbar = CONSTANTS.reduced_planck
    omega = wave.photon.angular_frequency
    pref = (e**2 * wave.peak_field**2) / (
        8.0 * m_e * hbar * electron.gamma**3 * omega**2 * electron.speed
    )
    z_int = 6.0 * wave.waist + electron.speed * 3.0 * wave.cross_temporal_fwhm
    return CouplingParams(
        electron=electron,
        wave=wave,
        prefactor=pref,
        z_int=z_int,
        quad_rel_tol=quad_rel_tol,
    )


def _line_integral(y: float, tau: float, params: CouplingParams) -> float:
    """Adaptive quadrature of the cross envelope along the trajectory.

    The quadrature runs over the part of [-z_int - v|tau|, z_int + v|tau|]
    where both envelope factors are above the 1e-14 level (spatial factor
    within ~4 waists, temporal factor within ~3.4 cross FWHMs of the pulse
    crossing); outside, the integrand cannot move the result at the 1e-9
    tolerance, and the narrower interval keeps the subdivision count small.
    """
    v = params.electron.speed
    wave = params.wave
    env = scalar_envelope(wave)

    def integrand(z: float) -> float:
        return env(y, z, z / v - tau)

    cut = math.log(1e14)
    outer = params.z_int + v * abs(tau)
    z_sup = wave.waist * math.sqrt(0.5 * cut)
    t_sup = wave.cross_temporal_fwhm * math.sqrt(cut / (4.0 * _LN2))
    lo = max(-outer, -z_sup, v * (tau - t_sup))
    hi = min(outer, z_sup, v * (tau + t_sup))
    if lo >= hi:
        return 0.0
    val, abserr, info, *trouble = quad(
        integrand,
        lo,
        hi,
        epsabs=0.0,
        epsrel=params.quad_rel_tol,
        limit=200,
        full_output=1,
    )
    if trouble:
        raise NumericalError(
            "line-integral quadrature did not converge: "
            f"{trouble[0]} (abserr={abserr:.3e}, subintervals={info['last']})"
        )
    return val


def beta_at(x: float, y: float, tau: float, params: CouplingParams) -> float:
    """Coupling constant at transverse offset y and arrival delay tau.

    Independent of x under the retardation-free envelope; the argument is
    kept so the call signature matches the phase it parametrizes.
    """
    del x
    if params.prefactor == 0.0:
        return 0.0
    return params.prefactor * _line_integral(y, tau, params)


def beta_max(params: CouplingParams) -> float:
    """Global maximum of beta, attained at y = 0, tau = 0."""
    return beta_at(0.0, 0.0, 0.0, params)


class CouplingField:
    """beta evaluator bundled with its maximum.

    ``beta_grid`` exploits that the transverse factor of the envelope is
    constant along the integration line, so beta(y, tau) factorizes into
    exp(-2 y^2 / w0^2) times a tau-dependent line integral; the quadrature
    runs once per tau value instead of once per (y, tau) pair.
    """

    def __init__(self, params: CouplingParams):
        self.params = params
        self.beta_max = beta_max(params)

    def beta(self, x: float, y: float, tau: float) -> float:
        return beta_at(x, y, tau, self.params)

    def beta_grid(self, y: np.ndarray, tau: np.ndarray) -> np.ndarray:
        """beta on the tensor grid of 1-D arrays y and tau, shape (len(y), len(tau))."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        if self.params.prefactor == 0.0:
            return np.zeros((y.size, tau.size))
        line = np.array([_line_integral(0.0, t, self.params) for t in tau])
        return self.params.prefactor * np.outer(
            transverse_factor(y, self.params.wave), line
        )


def coupling_field(
    electron: ElectronKinematics,
    wave: StandingWave,
    quad_rel_tol: float = 1e-9,
) -> CouplingField:
    return CouplingField(coupling_params(electron, wave, quad_rel_tol))


def phase_profile(
    x_grid: np.ndarray, y: float, tau: float, params: CouplingParams
) -> np.ndarray:
    """Accumulated phase Phi(x) = -beta(y, tau) * cos(2 k x) on a position grid.

    This is where the sign convention lives: beta itself is stored as a
    magnitude, and the phase accumulated under the (positive) ponderomotive
    energy carries the minus sign.  The x-independent offset from the
    uniform part of the potential is omitted.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.ndim != 1 or x_grid.size < 2 or not np.all(np.diff(x_grid) > 0):
        raise DomainError("x_grid must be a strictly increasing 1-D array")
    b = beta_at(0.0, y, tau, params)
    k = params.wave.photon.wavenumber
    return -b * np.cos(2.0 * k * x_grid)


