"""Expansion of real-line functions in the eigenfunctions ``sigma_n``.

Coefficients ``C_n = integral f(x) exp(-i n theta(x)) dx`` are computed on the
circle: substituting ``theta`` for ``x`` turns the integrand into the smooth
periodic function ``f/(2 pi L_U)``, for which the trapezoid rule converges
spectrally.  A second, independent route integrates on the real line after
``x = tan t`` with adaptive Gauss-Kronrod quadrature and is used to cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import FracmapError, NonIntegrableError
from .mobius import TWO_PI, MapParams
from .spectral import eval_eigenfunction, eval_lorentzian, eval_phi, r_u, spectral_data

DEFAULT_NODES = 4096
DEFAULT_N_MAX = 64
DEFAULT_WINDOW = (-8.0, 8.0)
TAIL_TOL = 1e-2


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Uniform nodes in ``theta``, offset by half a step from the point at infinity."""

    u: float
    node_count: int
    theta_nodes: np.ndarray
    x_nodes: np.ndarray
    weights: np.ndarray


def make_grid(params: MapParams, node_count: int = DEFAULT_NODES) -> QuadratureGrid:
    if node_count < 2 or node_count & (node_count - 1):
        raise FracmapError(f"node_count must be a power of two, got {node_count}")
    sd = spectral_data(params)
    step = TWO_PI / node_count
    # psi = theta - phi; psi = 0 is x = infinity
    psi = (np.arange(node_count) + 0.5) * step
    theta = sd.phi + psi
    # x = (w R - R*)/(w - 1) with w = exp(i psi), in real form
    half_width = math.copysign(math.sqrt(4.0 - sd.u * sd.u), sd.u) / 2.0
    x = sd.u / 2.0 + half_width / np.tan(psi / 2.0)
    weights = step / (TWO_PI * eval_lorentzian(params, x))
    for arr in (theta, x, weights):
        arr.setflags(write=False)
    return QuadratureGrid(sd.u, node_count, theta, x, weights)


@dataclass(frozen=True)
class CoefficientSet:
    u: float
    n_max: int
    coeffs: dict[int, complex]

    def __getitem__(self, n: int) -> complex:
        return self.coeffs.get(n, 0j)

    @property
    def indices(self) -> np.ndarray:
        return np.array(sorted(self.coeffs), dtype=int)

    def as_array(self) -> np.ndarray:
        return np.array([self.coeffs[n] for n in sorted(self.coeffs)], dtype=complex)

    def truncated(self, n_max: int) -> "CoefficientSet":
        n_max = min(n_max, self.n_max)
        return CoefficientSet(self.u, n_max, {n: c for n, c in self.coeffs.items() if abs(n) <= n_max})


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(x))
    except TypeError:
        values = None
    if values is None or values.shape != x.shape:
        # scalar-only callable
        values = np.array([f(float(xi)) for xi in x])
    return values


def compute_coefficients(
    params: MapParams,
    f: Callable,
    n_max: int = DEFAULT_N_MAX,
    grid: QuadratureGrid | None = None,
    tail_tol: float = TAIL_TOL,
) -> CoefficientSet:
    """Coefficients ``C_n``, ``|n| <= n_max``, by the periodic trapezoid rule in ``theta``.

    ``f`` must be integrable against every ``exp(-i n theta)``; bounded with
    ``O(1/x^2)`` decay is enough.  The weighted integrand at the two nodes
    nearest infinity estimates the truncated tail; if it exceeds ``tail_tol``
    the function is rejected as non-integrable.
    """
    if n_max < 0:
        raise FracmapError(f"n_max must be non-negative, got {n_max}")
    if grid is None:
        grid = make_grid(params)
    elif grid.u != params.u:
        raise FracmapError("quadrature grid was built for a different U")
    g = _evaluate(f, grid.x_nodes) * grid.weights
    if not np.all(np.isfinite(g)):
        raise NonIntegrableError("f is not finite on the quadrature nodes")
    tail = max(abs(g[0]), abs(g[-1]))
    if tail > tail_tol:
        raise NonIntegrableError(f"f does not decay at infinity (tail estimate {tail:.3g})")
    ns = np.arange(-n_max, n_max + 1)
    phases = np.exp(-1j * np.outer(ns, grid.theta_nodes))
    c = phases @ g
    return CoefficientSet(params.u, n_max, {int(n): complex(v) for n, v in zip(ns, c)})


def reconstruct(params: MapParams, coeffs: CoefficientSet, x):
    """Truncated series ``sum_n C_n sigma_n(x)``."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape, dtype=complex)
    for n, c in coeffs.coeffs.items():
        if c != 0:
            total += c * eval_eigenfunction(params, n, x)
    return total


def expansion_error(
    params: MapParams,
    f: Callable,
    n_max: int,
    window: tuple[float, float] = DEFAULT_WINDOW,
    points: int = 2001,
    grid: QuadratureGrid | None = None,
) -> float:
    """L1 distance on ``window`` between ``f`` and its ``n_max``-term reconstruction."""
    coeffs = compute_coefficients(params, f, n_max, grid)
    return reconstruction_error(params, f, coeffs, window, points)


def reconstruction_error(params, f, coeffs, window=DEFAULT_WINDOW, points=2001) -> float:
    xs = np.linspace(window[0], window[1], points)
    diff = np.abs(_evaluate(f, xs) - reconstruct(params, coeffs, xs))
    return float(integrate.trapezoid(diff, xs))


def real_line_coefficients(
    params: MapParams,
    f: Callable,
    n_max: int,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
) -> CoefficientSet:
    """Same coefficients as :func:`compute_coefficients` by an independent route.

    Integrates ``f(x) ((x - R)/(x - R*))**n`` over the real line (via ``x = tan t``)
    with adaptive quadrature, then removes the constant phase ``exp(i n phi)``
    that separates this kernel from ``exp(-i n theta)``.
    """
    r = r_u(params)
    rc = r.conjugate()
    ns = np.arange(-n_max, n_max + 1)

    def integrand(t):
        x = math.tan(t)
        sec2 = 1.0 + x * x
        kernel = ((x - r) / (x - rc)) ** ns
        v = complex(f(x)) * kernel * sec2
        return np.concatenate([v.real, v.imag])

    val, _ = integrate.quad_vec(
        integrand, -math.pi / 2, math.pi / 2, epsabs=epsabs, epsrel=epsrel, norm="max", limit=2000
    )
    raw = val[: ns.size] + 1j * val[ns.size :]
    phi = eval_phi(params)
    c = raw * np.exp(-1j * np.fmod(ns * phi, TWO_PI))
    return CoefficientSet(params.u, n_max, {int(n): complex(v) for n, v in zip(ns, c)})
