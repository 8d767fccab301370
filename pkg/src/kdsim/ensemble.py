"""Averaging single-electron populations over the electron pulse.

Each electron in the pulse samples the coupling field at its own transverse
offset and arrival time, so the measured population of order n is the
population-level average

    <P_n> = integral rho(x, y, tau) J_n(beta(x, y, tau))^2 dx dy dtau

with rho a separable Gaussian.  Distinct electrons do not interfere, so the
average is taken over populations, never amplitudes.  beta does not depend
on x under the retardation-free envelope, so the x integral contributes a
factor of one exactly; the axis is kept in the distribution for the day
retardation is switched on.

Quadrature per axis is Gauss-Hermite on the electron density when the pulse
is narrower than the field (coherent regime) and Gauss-Legendre over the
field support with the density folded into the integrand when it is wider
(incoherent regime).  Writing P_n = delta_n0 + <J_n^2 - delta_n0> keeps the
population sum at one identically under either rule.  Node counts double
until every population is stable.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, NumericalError
from .sidebands import bessel_rows, truncation_rule

_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))
_SUPPORT_RATIO = 1e-9   # field level treated as zero when sizing windows
_DENSITY_SPAN = 8.0     # Gaussian density reach in sigmas
_LEVELS = (17, 33, 65, 129, 257, 513, 1025)


@dataclass(frozen=True)
class ElectronDistribution:
    """Separable Gaussian density of the electron pulse over (x, y, tau)."""

    sigma_x: float         # m
    sigma_y: float         # m
    temporal_fwhm: float   # s
    arrival_offset: float = 0.0  # s

    def __post_init__(self):
        for name in ("sigma_x", "sigma_y", "temporal_fwhm"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}")

    @property
    def sigma_tau(self) -> float:
        return self.temporal_fwhm * _FWHM_TO_SIGMA


@dataclass(frozen=True)
class EnsembleSpectrum:
    """Ensemble-averaged populations over n in [-N, N], index n + N."""

    max_order: int
    populations: np.ndarray
    beta_max: float
    node_counts: tuple[int, int, int]   # (x, y, tau); x collapses exactly

    def population(self, n: int) -> float:
        if abs(n) > self.max_order:
            raise DomainError(f"order {n} outside [-{self.max_order}, {self.max_order}]")
        return float(self.populations[n + self.max_order])

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.max_order, self.max_order + 1)


def _bisect_level(profile, level: float, scale_hint: float) -> float:
    """Coordinate where a decreasing profile crosses ``level`` (profile(0) = 1).

    Returns inf when the profile shows no decay over 60 doublings of the
    hint, i.e. the field is effectively uniform on every relevant scale; the
    caller then integrates on the electron density alone.
    """
    hi = scale_hint
    for _ in range(60):
        if profile(hi) < level:
            break
        hi *= 2.0
    else:
        return math.inf
    lo = 0.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if profile(mid) < level:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class _FieldGeometry:
    """Half-maximum and support radii of beta in y and tau, probed numerically."""

    def __init__(self, field):
        bmax = field.beta_max
        wave = field.params.wave

        def y_profile(y):
            return field.beta_grid(np.array([y]), np.array([0.0]))[0, 0] / bmax

        def tau_profile(t):
            return field.beta_grid(np.array([0.0]), np.array([t]))[0, 0] / bmax

        self.y_half = _bisect_level(y_profile, 0.5, wave.waist)
        self.y_support = _bisect_level(y_profile, _SUPPORT_RATIO, self.y_half)
        self.tau_half = _bisect_level(tau_profile, 0.5, wave.cross_temporal_fwhm)
        self.tau_support = _bisect_level(tau_profile, _SUPPORT_RATIO, self.tau_half)


def _axis_rule(
    sigma: float, center: float, half_scale: float, support: float, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for one axis; weights integrate the Gaussian density.

    Gauss-Hermite scaled to the density when it is narrower than the field's
    half-maximum radius; otherwise Gauss-Legendre over the intersection of
    the field support and the density reach, with the density folded in.
    """
    if sigma <= half_scale:
        u, w = hermgauss(n)
        return center + math.sqrt(2.0) * sigma * u, w / w.sum()
    lo = max(-support, center - _DENSITY_SPAN * sigma)
    hi = min(support, center + _DENSITY_SPAN * sigma)
    if lo >= hi:  # pulse misses the field entirely
        return np.array([center]), np.array([0.0])
    u, w = leggauss(n)
    nodes = 0.5 * (hi + lo) + 0.5 * (hi - lo) * u
    density = np.exp(-0.5 * ((nodes - center) / sigma) ** 2) / (
        sigma * math.sqrt(2.0 * math.pi)
    )
    return nodes, 0.5 * (hi - lo) * w * density


def _populations_on_layout(
    beta: np.ndarray, weights: np.ndarray, max_order: int
) -> np.ndarray:
    """<P_n> on a fixed node layout via the delta-subtracted average."""
    j = bessel_rows(beta.ravel(), max_order)
    flat_w = weights.ravel()
    pops = np.empty(2 * max_order + 1)
    one_sided = (j**2) @ flat_w
    pops[max_order] = 1.0 + float((j[0] ** 2 - 1.0) @ flat_w)
    pops[max_order + 1 :] = one_sided[1:]
    pops[:max_order] = one_sided[1:][::-1]
    return pops


class _Averager:
    """Converged (y, tau) node layout for a given field and distribution."""

    def __init__(self, field, dist: ElectronDistribution, tol: float, geom=None):
        self.field = field
        self.dist = dist
        self.tol = tol
        if geom is None and field.beta_max > 0:
            geom = _FieldGeometry(field)
        self.geom = geom

    def layout(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        g = self.geom
        d = self.dist
        ys, wy = _axis_rule(d.sigma_y, 0.0, g.y_half, g.y_support, n)
        ts, wt = _axis_rule(d.sigma_tau, d.arrival_offset, g.tau_half, g.tau_support, n)
        beta = self.field.beta_grid(ys, ts)
        return beta, np.outer(wy, wt)

    def converge(self, evaluate) -> tuple[np.ndarray, int]:
        """Run ``evaluate(beta, weights)`` up the node ladder until stable."""
        previous = None
        for n in _LEVELS:
            beta, weights = self.layout(n)
            value = evaluate(beta, weights)
            if previous is not None and np.max(np.abs(value - previous)) <= self.tol:
                return value, n
            previous = value
        raise NumericalError(
            f"ensemble quadrature not converged at {_LEVELS[-1]} nodes/axis "
            f"(last change {np.max(np.abs(value - previous)):.3e}, tol {self.tol:.1e})"
        )


def ensemble_populations(
    field,
    dist: ElectronDistribution,
    max_order: int | None = None,
    tol: float = 1e-9,
) -> EnsembleSpectrum:
    """Ensemble-averaged sideband populations.

    Parameters
    ----------
    field : CouplingField
        Provides ``beta_max`` and ``beta_grid``.
    dist : ElectronDistribution
        Electron pulse density.
    max_order : int, optional
        Order cutoff; defaults to the truncation rule at ``field.beta_max``
        and must not be below it.
    tol : float
        Node ladder stops once no population moves by more than this.
    """
    rule = truncation_rule(field.beta_max)
    n_ord = rule if max_order is None else int(max_order)
    if n_ord < rule:
        raise DomainError(
            f"max_order {n_ord} below the truncation rule {rule} for "
            f"beta_max {field.beta_max:.4g}"
        )
    if field.beta_max == 0.0:
        pops = np.zeros(2 * n_ord + 1)
        pops[n_ord] = 1.0
        return EnsembleSpectrum(n_ord, pops, 0.0, (1, 1, 1))

    avg = _Averager(field, dist, tol)
    pops, n = avg.converge(lambda b, w: _populations_on_layout(b, w, n_ord))
    return EnsembleSpectrum(n_ord, pops, field.beta_max, (1, n, n))


def population_sweep(
    field,
    dist: ElectronDistribution,
    beta_values: np.ndarray,
    max_order: int | None = None,
    tol: float = 1e-9,
) -> list[EnsembleSpectrum]:
    """Ensemble spectra for a family of peak couplings sharing one envelope.

    beta scales linearly with the optical power at fixed envelope, so the
    sweep reuses one converged node layout: the layout is established at the
    largest requested coupling (the hardest case) and every member of the
    sweep is evaluated on it.
    """
    beta_values = np.asarray(beta_values, dtype=float)
    if np.any(beta_values < 0):
        raise DomainError("beta values must be >= 0")
    top = float(beta_values.max(initial=0.0))
    rule = truncation_rule(top)
    n_ord = rule if max_order is None else int(max_order)
    if n_ord < rule:
        raise DomainError(
            f"max_order {n_ord} below the truncation rule {rule} for beta_max {top:.4g}"
        )
    if top == 0.0:
        shape = None
    elif field.beta_max == 0.0:
        raise DomainError("sweep needs a field with beta_max > 0 to fix the envelope shape")
    else:
        avg = _Averager(field, dist, tol)

        def scaled(b, w):
            return _populations_on_layout(b * (top / field.beta_max), w, n_ord)

        _, n = avg.converge(scaled)
        beta_ref, weights = avg.layout(n)
        shape = beta_ref / field.beta_max

    spectra = []
    for b in beta_values:
        if shape is None or b == 0.0:
            pops = np.zeros(2 * n_ord + 1)
            pops[n_ord] = 1.0
            spectra.append(EnsembleSpectrum(n_ord, pops, float(b), (1, 1, 1)))
        else:
            pops = _populations_on_layout(b * shape, weights, n_ord)
            spectra.append(EnsembleSpectrum(n_ord, pops, float(b), (1, n, n)))
    return spectra


def coherence_metric(field, dist: ElectronDistribution, tol: float = 1e-9) -> float:
    """<beta>^2 / <beta^2> over the electron density, in [0, 1].

    Near one, all electrons see the same coupling and populations oscillate
    coherently with the interaction strength; far below one, the coupling
    spread washes the oscillations out.  Defined as 1 for a switched-off
    field.
    """
    if field.beta_max == 0.0:
        return 1.0
    avg = _Averager(field, dist, tol)

    def moments(beta, weights):
        return np.array(
            [float(np.sum(weights * beta)), float(np.sum(weights * beta**2))]
        )

    (m1, m2), _ = avg.converge(moments)
    if m2 == 0.0:
        return 1.0
    return m1 * m1 / m2
