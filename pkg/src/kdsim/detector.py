"""Focal-plane scan patterns: synthesis from populations and extraction back.

The focused diffraction orders form a comb of peaks separated by the order
spacing; scanning the beam across the nanoslit convolves that comb with a
detection kernel, the convolution of the focused-spot Gaussian with the slit
top-hat.  The kernel has the closed form

    K(u) = [Phi((u + s/2)/sig) - Phi((u - s/2)/sig)] / s

with Phi the normal CDF, s the slit width and sig the spot FWHM / 2.355, and
has unit area by construction.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import DomainError, ExtractionError
from .kinematics import DiffractionGeometry

_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


@dataclass(frozen=True)
class ScatteringPattern:
    """Intensity versus focal-plane position, normalized to unit integral."""

    positions: np.ndarray    # m, strictly increasing
    intensity: np.ndarray    # dimensionless, trapezoidal integral 1
    geometry: DiffractionGeometry


@dataclass(frozen=True)
class PowerScan:
    """Stack of patterns over an average-power axis with its beta_max axis."""

    powers: np.ndarray       # W
    beta_max: np.ndarray     # dimensionless, one per power
    positions: np.ndarray    # m, shared grid
    intensity: np.ndarray    # shape (len(powers), len(positions))
    geometry: DiffractionGeometry


def detection_kernel(u, geometry: DiffractionGeometry):
    """Unit-area kernel: spot Gaussian convolved with the slit top-hat."""
    sig = geometry.spot_fwhm * _FWHM_TO_SIGMA
    s = geometry.slit_width
    u = np.asarray(u, dtype=float)
    sqrt2 = math.sqrt(2.0)
    upper = (u + 0.5 * s) / (sig * sqrt2)
    lower = (u - 0.5 * s) / (sig * sqrt2)
    return (erf(upper) - erf(lower)) / (2.0 * s)


def symmetric_grid(geometry: DiffractionGeometry, max_order: int, step: float | None = None):
    """Default position grid spanning +/-(N+1) order separations.

    The step defaults to one twentieth of the order separation (the type
    invariant); an explicit coarser step is rejected.
    """
    dx = geometry.order_separation
    if step is None:
        step = dx / 20.0
    if step > dx / 20.0 * (1.0 + 1e-12):
        raise DomainError(f"grid step {step:.3e} coarser than order_separation/20")
    half = (max_order + 1) * dx
    n = int(math.ceil(half / step))
    return np.linspace(-n * step, n * step, 2 * n + 1)


def synthesize_pattern(spectrum, geometry: DiffractionGeometry, grid) -> ScatteringPattern:
    """Pattern I(x) = sum_n P_n K(x - n dx), normalized to unit integral.

    Parameters
    ----------
    spectrum : SidebandSpectrum or EnsembleSpectrum
        Populations over n in [-N, N].
    geometry : DiffractionGeometry
        Sets the order spacing, spot size and slit width.
    grid : array
        Strictly increasing positions covering at least +/-(N+1) dx; a
        narrower grid would clip peak tails and is rejected as truncation.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or not np.all(np.diff(grid) > 0):
        raise DomainError("grid must be a strictly increasing 1-D array")
    n_ord = spectrum.max_order
    dx = geometry.order_separation
    need = (n_ord + 1) * dx
    if grid[0] > -need * (1.0 - 1e-12) or grid[-1] < need * (1.0 - 1e-12):
        raise DomainError(
            f"grid [{grid[0]:.3e}, {grid[-1]:.3e}] m truncates orders up to "
            f"+/-{n_ord}; need +/-{need:.3e} m"
        )
    if np.max(np.diff(grid)) > dx / 20.0 * (1.0 + 1e-12):
        raise DomainError("grid step coarser than order_separation/20")
    intensity = np.zeros_like(grid)
    pops = spectrum.populations
    for idx, n in enumerate(range(-n_ord, n_ord + 1)):
        p = pops[idx]
        if p != 0.0:
            intensity += p * detection_kernel(grid - n * dx, geometry)
    total = np.trapezoid(intensity, grid)
    if total > 0.0:
        intensity = intensity / total
    return ScatteringPattern(positions=grid, intensity=intensity, geometry=geometry)


def _resolvable(geometry: DiffractionGeometry) -> bool:
    mid = detection_kernel(0.5 * geometry.order_separation, geometry)
    peak = detection_kernel(0.0, geometry)
    return mid < 0.1 * peak


def extract_populations(pattern: ScatteringPattern, geometry: DiffractionGeometry, max_order: int) -> np.ndarray:
    """Windowed populations from a pattern, symmetrized over +/-n.

    Intensity is integrated over half-open windows
    [n dx - dx/2, n dx + dx/2) which partition the axis exactly; the result
    is P_0 as measured and (P_n + P_-n)/2 for n >= 1, as an array indexed by
    n = 0..max_order.  The sum is at most 1 (tails beyond the outermost
    window are lost, not redistributed).
    """
    if not _resolvable(geometry):
        raise ExtractionError(
            "neighboring orders are not resolvable: kernel midpoint above 10% of peak"
        )
    x = pattern.positions
    steps = np.diff(x)
    weights = np.concatenate([[steps[0]], steps])  # rectangle weight per sample
    dx = geometry.order_separation
    out = np.zeros(max_order + 1)
    raw = {}
    for n in range(-max_order, max_order + 1):
        left = n * dx - 0.5 * dx
        right = n * dx + 0.5 * dx
        sel = (x >= left) & (x < right)
        raw[n] = float(np.sum(pattern.intensity[sel] * weights[sel]))
    out[0] = raw[0]
    for n in range(1, max_order + 1):
        out[n] = 0.5 * (raw[n] + raw[-n])
    return out


def power_scan(powers, model) -> PowerScan:
    """Patterns over an average-power axis.

    ``model`` supplies the scenario pieces: ``beta_for_power(P)`` (linear in
    P), ``field``/``distribution`` for the ensemble average, ``geometry``,
    ``max_order`` (None for automatic) and ``grid_for_beta``.  Rows share one
    quadrature layout via the population sweep.
    """
    from .ensemble import population_sweep

    powers = np.asarray(powers, dtype=float)
    if powers.ndim != 1 or powers.size == 0:
        raise DomainError("powers must be a non-empty 1-D array")
    if np.any(powers < 0):
        raise DomainError("powers must be nonnegative")
    if powers.size > 1 and not np.all(np.diff(powers) > 0):
        raise DomainError("powers must be strictly increasing")
    betas = np.array([model.beta_for_power(p) for p in powers])
    spectra = population_sweep(
        model.field, model.distribution, betas, max_order=model.max_order
    )
    grid = model.grid_for_beta(float(betas.max()))
    rows = [synthesize_pattern(s, model.geometry, grid) for s in spectra]
    return PowerScan(
        powers=powers,
        beta_max=betas,
        positions=grid,
        intensity=np.vstack([r.intensity for r in rows]),
        geometry=model.geometry,
    )


def rms_width(pattern: ScatteringPattern) -> float:
    """Root-mean-square width of a pattern about its centroid."""
    w = pattern.intensity
    x = pattern.positions
    total = np.trapezoid(w, x)
    mean = np.trapezoid(w * x, x) / total
    var = np.trapezoid(w * (x - mean) ** 2, x) / total
    return math.sqrt(max(var, 0.0))
