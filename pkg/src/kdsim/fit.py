"""Inverse problems: recovering the peak coupling and the power calibration.

The forward model (ensemble populations -> scan pattern) is smooth in the
peak coupling but oscillatory, since the populations ride on squared Bessel
functions: distinct couplings can produce similar low-order patterns, so a
single local search can stall in the wrong valley near a Bessel zero.
Every fit therefore runs from three starting points spread over the bounds
and keeps the lowest-residual solution.

Fits are least squares on the pattern samples, with the model interpolated
linearly onto the observed grid (supports cropped to their intersection).
"""

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .detector import ScatteringPattern, synthesize_pattern
from .ensemble import _Averager, _populations_on_layout
from .errors import DomainError, NumericalError
from .sidebands import truncation_rule

_N_STARTS = 3
_START_FRACTIONS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class FitResult:
    estimates: dict
    stderr: dict
    residual_norm: float
    initial_residual_norm: float
    converged: bool
    iterations: int
    n_starts: int
    at_lower: dict
    at_upper: dict
    message: str


@dataclass
class FitProblem:
    """Least-squares problem for a measured scan pattern.

    Parameters
    ----------
    observed : ScatteringPattern
        Measured (or synthetic) pattern, unit-normalized.
    model : scenario model
        Supplies ``field``, ``distribution``, ``geometry``, ``max_order``
        and ``grid_for_beta`` as assembled from a scenario.
    free : tuple of str
        Subset of {"beta_max", "electron_temporal_fwhm", "electron_sigma",
        "spot_fwhm"}; at least one entry.
    bounds : dict
        name -> (lo, hi), finite with lo < hi, for every free parameter.
    """

    observed: ScatteringPattern
    model: object
    free: tuple = ("beta_max",)
    bounds: dict = field(default_factory=dict)

    _KNOWN = ("beta_max", "electron_temporal_fwhm", "electron_sigma", "spot_fwhm")

    def __post_init__(self):
        if not self.free:
            raise DomainError("at least one free parameter is required")
        for name in self.free:
            if name not in self._KNOWN:
                raise DomainError(f"unknown free parameter {name!r}")
            lo, hi = self.bounds.get(name, (None, None))
            if lo is None or not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise DomainError(f"finite ordered bounds required for {name!r}")

    # -- forward model ----------------------------------------------------
    def _prepare(self):
        """Freeze the quadrature layout and the observed-grid interpolation."""
        model = self.model
        if model.field.beta_max <= 0.0:
            raise DomainError("model field must have beta_max > 0 to anchor the fit")
        beta_top = self.bounds.get("beta_max", (0.0, model.field.beta_max))[1]
        n_ord = model.max_order or truncation_rule(beta_top)
        if n_ord < truncation_rule(beta_top):
            n_ord = truncation_rule(beta_top)
        base_dist = model.distribution

        # layout at the upper coupling bound: the hardest case in the sweep
        avg = _Averager(model.field, base_dist, tol=1e-9)
        scale = beta_top / model.field.beta_max

        def scaled(b, w):
            return _populations_on_layout(b * scale, w, n_ord)

        _, n_nodes = avg.converge(scaled)
        base_beta, base_weights = avg.layout(n_nodes)
        base_shape = base_beta / model.field.beta_max
        dist_is_free = bool(
            {"electron_temporal_fwhm", "electron_sigma"} & set(self.free)
        )

        grid = model.grid_for_beta(beta_top)
        lo = max(grid[0], self.observed.positions[0])
        hi = min(grid[-1], self.observed.positions[-1])
        if lo >= hi:
            raise DomainError("observed and model grids do not overlap")
        mask = (self.observed.positions >= lo) & (self.observed.positions <= hi)
        x_obs = self.observed.positions[mask]
        y_obs = self.observed.intensity[mask]

        def forward(params: dict) -> np.ndarray:
            # node counts and field-scale probing are frozen across the fit
            # so the objective stays smooth and deterministic
            if dist_is_free:
                dist = base_dist
                if "electron_temporal_fwhm" in params:
                    dist = dataclasses.replace(
                        dist, temporal_fwhm=params["electron_temporal_fwhm"]
                    )
                if "electron_sigma" in params:
                    s = params["electron_sigma"]
                    dist = dataclasses.replace(dist, sigma_x=s, sigma_y=s)
                avg_local = _Averager(model.field, dist, tol=1e-9, geom=avg.geom)
                beta_nodes, weights = avg_local.layout(n_nodes)
                shape = beta_nodes / model.field.beta_max
            else:
                shape, weights = base_shape, base_weights
            geometry = model.geometry
            if "spot_fwhm" in params:
                geometry = dataclasses.replace(geometry, spot_fwhm=params["spot_fwhm"])
            b = params.get("beta_max", model.field.beta_max)
            pops = _populations_on_layout(b * shape, weights, n_ord)
            spectrum = _SpectrumView(n_ord, pops)
            pattern = synthesize_pattern(spectrum, geometry, grid)
            return np.interp(x_obs, pattern.positions, pattern.intensity)

        return forward, y_obs

    def solve(self) -> FitResult:
        forward, y_obs = self._prepare()
        names = list(self.free)
        lo = np.array([self.bounds[n][0] for n in names])
        hi = np.array([self.bounds[n][1] for n in names])

        def residual(vec):
            return forward(dict(zip(names, vec))) - y_obs

        best = None
        initial_norms = []
        total_nfev = 0
        for frac in _START_FRACTIONS[:_N_STARTS]:
            x0 = lo + frac * (hi - lo)
            initial_norms.append(float(np.linalg.norm(residual(x0))))
            res = least_squares(
                residual, x0, bounds=(lo, hi),
                xtol=1e-6, ftol=1e-12, gtol=None,
                diff_step=1e-6, x_scale=np.maximum(hi - lo, 1e-300),
                max_nfev=200 * len(names),
                method="trf",
            )
            total_nfev += res.nfev
            if best is None or res.cost < best.cost:
                best = res
        if best is None:
            raise NumericalError("no fit start produced a result")

        dof = max(y_obs.size - len(names), 1)
        variance = 2.0 * best.cost / dof
        jtj = best.jac.T @ best.jac
        try:
            cov = variance * np.linalg.inv(jtj)
            stderr = {n: float(math.sqrt(max(cov[i, i], 0.0))) for i, n in enumerate(names)}
        except np.linalg.LinAlgError:
            stderr = {n: float("nan") for n in names}

        span = hi - lo
        estimates = dict(zip(names, map(float, best.x)))
        return FitResult(
            estimates=estimates,
            stderr=stderr,
            residual_norm=float(np.linalg.norm(best.fun)),
            initial_residual_norm=float(min(initial_norms)),
            converged=bool(best.status > 0),
            iterations=int(total_nfev),
            n_starts=_N_STARTS,
            at_lower={n: bool(best.x[i] <= lo[i] + 1e-12 * span[i]) for i, n in enumerate(names)},
            at_upper={n: bool(best.x[i] >= hi[i] - 1e-12 * span[i]) for i, n in enumerate(names)},
            message=str(best.message),
        )


class _SpectrumView:
    """Minimal populations carrier accepted by synthesize_pattern."""

    def __init__(self, max_order: int, populations: np.ndarray):
        self.max_order = max_order
        self.populations = populations


def fit_beta_max(
    observed: ScatteringPattern, model, bounds: tuple[float, float] = (0.0, 10.0)
) -> FitResult:
    """Recover the peak coupling from one pattern, floating only beta_max."""
    problem = FitProblem(
        observed=observed, model=model, free=("beta_max",), bounds={"beta_max": bounds}
    )
    return problem.solve()


def calibrate_power(powers, fitted_beta) -> tuple[float, dict]:
    """Least-squares slope of beta_max versus power through the origin.

    Returns the slope in 1/W and residual diagnostics (per-point residuals,
    their RMS and the largest absolute deviation).
    """
    powers = np.asarray(powers, dtype=float)
    fitted_beta = np.asarray(fitted_beta, dtype=float)
    if powers.ndim != 1 or powers.size < 2:
        raise DomainError("need at least two (power, beta) points")
    if powers.size != fitted_beta.size:
        raise DomainError("powers and fitted betas must have equal length")
    if np.unique(powers).size != powers.size:
        raise DomainError("duplicated powers make the calibration degenerate")
    denom = float(np.sum(powers**2))
    if denom == 0.0:
        raise DomainError("all powers are zero; slope is undetermined")
    slope = float(np.sum(powers * fitted_beta) / denom)
    residuals = fitted_beta - slope * powers
    diagnostics = {
        "residuals": residuals,
        "rms": float(np.sqrt(np.mean(residuals**2))),
        "max_abs": float(np.max(np.abs(residuals))),
    }
    return slope, diagnostics


def add_noise(pattern: ScatteringPattern, sigma_rel: float, seed: int) -> ScatteringPattern:
    """Additive Gaussian noise at sigma_rel times the peak intensity.

    The seed is required: synthetic data must be reproducible.  The noisy
    trace is returned without renormalization or clipping.
    """
    if sigma_rel < 0:
        raise DomainError(f"sigma_rel must be >= 0, got {sigma_rel!r}")
    rng = np.random.default_rng(seed)
    scale = sigma_rel * float(np.max(pattern.intensity))
    noisy = pattern.intensity + rng.standard_normal(pattern.intensity.size) * scale
    return ScatteringPattern(
        positions=pattern.positions, intensity=noisy, geometry=pattern.geometry
    )
