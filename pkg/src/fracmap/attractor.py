"""Orbit statistics of ``x -> 1/(U - x)`` and the analytic invariant density."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AtomicOrbitWarning, FracmapError, InverseMismatchError, NotHyperbolicError
from .mobius import MapParams, ProjectivePoint, as_point, conjugation_data, nearest_resonance
from .spectral import _require_elliptic, eval_lorentzian

RESONANCE_TOL = 1e-9
MAX_DETECTED_PERIOD = 64
PERIOD_TOL = 1e-12


@dataclass(frozen=True)
class OrbitConfig:
    u: float
    x0: float
    n_samples: int
    burn_in: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise FracmapError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.burn_in < 0:
            raise FracmapError(f"burn_in must be >= 0, got {self.burn_in}")

    @property
    def params(self) -> MapParams:
        return MapParams(self.u)


@dataclass(frozen=True, eq=False)
class Histogram:
    lo: float
    hi: float
    bins: int
    counts: np.ndarray
    below: float = 0
    above: float = 0

    @property
    def outside(self) -> float:
        return self.below + self.above

    @property
    def n_samples(self) -> float:
        return float(np.sum(self.counts)) + self.outside

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.bins + 1)

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])

    @property
    def bin_width(self) -> float:
        return (self.hi - self.lo) / self.bins

    def density(self) -> np.ndarray:
        return self.counts / (self.n_samples * self.bin_width)


@dataclass(frozen=True, eq=False)
class DensityReport:
    histogram: Histogram
    analytic: np.ndarray
    ks_distance: float
    sup_bin_error: float


def detect_period(params: MapParams, x0, max_period: int = MAX_DETECTED_PERIOD, tol: float = PERIOD_TOL):
    """Smallest ``k <= max_period`` with ``S^k x0 = x0`` (projective distance ``< tol``), else None."""
    start = as_point(x0).normalized()
    u = params.u
    p, q = start.p, start.q
    for k in range(1, max_period + 1):
        p, q = q, u * q - p
        s = max(abs(p), abs(q))
        p, q = p / s, q / s
        if start.distance(ProjectivePoint(p, q)) < tol:
            return k
    return None


def orbit(cfg: OrbitConfig) -> np.ndarray:
    """Values ``x_burn_in, ..., x_{burn_in + n_samples - 1}``; ``inf`` where the orbit hits the pole."""
    u = cfg.params.u
    start = as_point(cfg.x0)
    p, q = start.p, start.q
    for _ in range(cfg.burn_in):
        p, q = q, u * q - p
        s = abs(p) if abs(p) > abs(q) else abs(q)
        p /= s
        q /= s
    out = np.empty(cfg.n_samples)
    inf = math.inf
    for i in range(cfg.n_samples):
        out[i] = p / q if q != 0.0 else inf
        p, q = q, u * q - p
        s = abs(p) if abs(p) > abs(q) else abs(q)
        p /= s
        q /= s
    return out


def check_atomic(cfg: OrbitConfig) -> int | None:
    """Warn (and return the period) if the configured orbit is periodic or U is resonant."""
    params = cfg.params
    u_res, period, dist = nearest_resonance(params)
    if dist < RESONANCE_TOL:
        warnings.warn(
            f"U={params.u} is within {dist:.1e} of the period-{period} value {u_res}",
            AtomicOrbitWarning,
            stacklevel=3,
        )
        return period
    period = detect_period(params, cfg.x0)
    if period is not None:
        warnings.warn(f"orbit from x0={cfg.x0} has period {period}", AtomicOrbitWarning, stacklevel=3)
    return period


def histogram(values: np.ndarray, window: tuple[float, float] = (-8.0, 8.0), bins: int = 200) -> Histogram:
    lo, hi = window
    if not hi > lo or bins < 1:
        raise FracmapError(f"invalid histogram window {window} / bins {bins}")
    values = np.asarray(values, dtype=float)
    below = int(np.count_nonzero(values < lo))
    above = int(np.count_nonzero(values > hi))
    inside = values[(values >= lo) & (values <= hi)]
    counts, _ = np.histogram(inside, bins=bins, range=(lo, hi))
    return Histogram(lo, hi, bins, counts, below, above)


def sample_orbit(cfg: OrbitConfig, window: tuple[float, float] = (-8.0, 8.0), bins: int = 200) -> Histogram:
    """Bin ``n_samples`` orbit points after discarding ``burn_in`` iterates.

    Emits :class:`AtomicOrbitWarning` for periodic orbits (period <= 64).
    """
    _require_elliptic(cfg.params)
    check_atomic(cfg)
    return histogram(orbit(cfg), window, bins)


def analytic_density(params: MapParams, z):
    return eval_lorentzian(params, z)


def analytic_cdf(params: MapParams, z):
    """``1/2 + arctan((2z - U)/sqrt(4 - U^2))/pi``."""
    _require_elliptic(params)
    u = params.u
    z = np.asarray(z, dtype=float)
    return 0.5 + np.arctan((2.0 * z - u) / math.sqrt(4.0 - u * u)) / math.pi


def compare_density(hist: Histogram, params: MapParams) -> DensityReport:
    """KS distance at bin edges (window-outside mass included) and sup density error."""
    n = hist.n_samples
    edges = hist.edges
    empirical = (hist.below + np.concatenate([[0.0], np.cumsum(hist.counts)])) / n
    ks = float(np.max(np.abs(empirical - analytic_cdf(params, edges))))
    analytic = analytic_density(params, hist.centers)
    sup = float(np.max(np.abs(hist.density() - analytic)))
    return DensityReport(hist, analytic, ks, sup)


def point_attractor(params: MapParams) -> float:
    """Location of the delta-peak of the density for ``|U| > 2``.

    At ``1/mu_plus`` when ``|kappa| < 1`` and at ``1/mu_minus`` when ``|kappa| > 1``:
    in both cases the fixed point of ``x -> 1/(U - x)`` inside the unit interval.
    """
    if params.elliptic:
        raise NotHyperbolicError(f"point attractor needs |U| > 2, got U={params.u}")
    cd = conjugation_data(params)
    if cd.kappa_log_abs < 0.0:
        return (1.0 / cd.mu_plus).real
    return (1.0 / cd.mu_minus).real


def generalized_residual(
    forward: Callable,
    inverse: Callable,
    density: Callable,
    sample: Sequence[float],
    derivative: Callable | None = None,
    step: float = 1e-6,
    inverse_tol: float = 1e-8,
) -> float:
    """max over ``sample`` of ``|rho(z) - F'(z) rho(F(z))|`` for a map with inverse ``F``.

    ``F'`` is a central difference unless ``derivative`` is given.
    """
    z = np.asarray(sample, dtype=float)
    fz = np.asarray(inverse(z), dtype=float)
    mismatch = np.max(np.abs(np.asarray(forward(fz), dtype=float) - z))
    if mismatch > inverse_tol:
        raise InverseMismatchError(f"forward(inverse(z)) differs from z by {mismatch:.3g}")
    if derivative is None:
        dF = (np.asarray(inverse(z + step)) - np.asarray(inverse(z - step))) / (2.0 * step)
    else:
        dF = np.asarray(derivative(z), dtype=float)
    return float(np.max(np.abs(np.asarray(density(z)) - dF * np.asarray(density(fz)))))
