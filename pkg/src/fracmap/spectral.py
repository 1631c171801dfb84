"""Eigenvalues and eigenfunctions of the transfer operator ``(H f)(x) = f(U - 1/x)/x**2``.

For ``0 < |U| < 2`` the eigenfunctions are ``sigma_n = L_U(x) exp(i n theta(x))``
with eigenvalue ``exp(i n phi)``, where ``L_U`` is the invariant Lorentzian and
``theta`` is a phase that the inverse map advances by exactly ``phi`` (mod 2 pi).

All evaluators accept scalars or numpy arrays.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AtDiscontinuityError, OutOfEllipticRangeError, PoleAtZeroError
from .mobius import TWO_PI, MapParams


def _require_elliptic(params: MapParams) -> None:
    if not params.elliptic:
        raise OutOfEllipticRangeError(f"requires 0 < |U| < 2, got U={params.u}")


def eval_phi(params: MapParams) -> float:
    """Eigenphase ``phi`` in ``(0, pi)``.

    ``arctan(|U| sqrt(4-U^2)/(U^2-2))``, shifted by ``pi`` when ``|U| < sqrt(2)``
    to keep ``phi`` continuous in ``U``; ``pi/2`` at ``|U| = sqrt(2)``.
    """
    _require_elliptic(params)
    u = params.u
    s = abs(u) * math.sqrt(4.0 - u * u)
    d = u * u - 2.0
    if d == 0.0:
        return math.pi / 2
    base = math.atan(s / d)
    return base if d > 0.0 else base + math.pi


def r_u(params: MapParams) -> complex:
    """Pole ``R_U = (U^2 + i|U| sqrt(4-U^2))/(2U)`` of the eigenfunctions; ``|R_U| = 1``."""
    _require_elliptic(params)
    u = params.u
    return complex(u * u, abs(u) * math.sqrt(4.0 - u * u)) / (2.0 * u)


@dataclass(frozen=True)
class SpectralData:
    """Constants derived from ``U`` and shared by every spectral evaluator.

    ``phase_ref`` is the angle ``c`` with ``exp(i theta(x)) = exp(i c)(x - R*)/(x - R)``,
    fixed by matching the two forms at ``x = U/2``; it equals ``phi`` mod 2 pi.
    """

    u: float
    phi: float
    cos_phi: float
    sin_phi: float
    r: complex
    x0_disc: float
    phase_ref: float

    @property
    def norm(self) -> float:
        """Prefactor ``sqrt(4-U^2)/(2 pi)`` of the Lorentzian."""
        return math.sqrt(4.0 - self.u * self.u) / TWO_PI


@functools.lru_cache(maxsize=256)
def _spectral_data(u: float) -> SpectralData:
    params = MapParams(u)
    phi = eval_phi(params)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    r = r_u(params)
    x0 = u / (1.0 + cos_phi)
    x_ref = u / 2.0
    theta_ref = _theta_raw(u, phi, cos_phi, sin_phi, x0, np.float64(x_ref))
    ratio = (x_ref - r.conjugate()) / (x_ref - r)
    return SpectralData(u, phi, cos_phi, sin_phi, r, x0, float(theta_ref) - cmath.phase(ratio))


def spectral_data(params: MapParams) -> SpectralData:
    _require_elliptic(params)
    return _spectral_data(params.u)


def eval_lorentzian(params: MapParams, x):
    """Invariant density ``sqrt(4-U^2)/(2 pi) / (x^2 - U x + 1)``; integrates to one."""
    _require_elliptic(params)
    u = params.u
    x = np.asarray(x, dtype=float)
    return math.sqrt(4.0 - u * u) / TWO_PI / (x * x - u * x + 1.0)


def _theta_raw(u, phi, cos_phi, sin_phi, x0, x):
    theta = 2.0 * np.arctan(x * sin_phi / (x * (1.0 + cos_phi) - u))
    # -2 pi on the side of x0 away from the origin, so theta(0) = 0
    far = np.sign(u) * (x - x0) > 0
    return np.where(far, theta - TWO_PI, theta)


def eval_theta(params: MapParams, x):
    """Continuous phase ``theta(x)`` with ``theta(0) = 0``.

    Jumps by 2 pi only at ``x0_disc = U/(1 + cos phi)``, where it is undefined.
    ``d theta/dx = -sign(U) 2 pi L_U(x)``.
    """
    sd = spectral_data(params)
    x = np.asarray(x, dtype=float)
    if np.any(x == sd.x0_disc):
        raise AtDiscontinuityError(f"theta is discontinuous at x0 = {sd.x0_disc!r}")
    return _theta_raw(sd.u, sd.phi, sd.cos_phi, sd.sin_phi, sd.x0_disc, x)


def eigenvalue(params: MapParams, n: int) -> complex:
    """``exp(i n phi)``, formed from the reduced angle so its modulus is exactly one."""
    phi = spectral_data(params).phi
    return cmath.exp(1j * math.fmod(n * phi, TWO_PI))


def eval_eigenfunction_closed_form(params: MapParams, n: int, x):
    """Branch-free rational form of the n-th eigenfunction::

        (1/(2 pi i)) (|U|/U) (1/(x - R) - 1/(x - R*)) ((x - R*)/(x - R))**n

    This differs from :func:`eval_eigenfunction` by the unimodular factor
    ``exp(-i n phase_ref)``.
    """
    sd = spectral_data(params)
    x = np.asarray(x, dtype=float)
    r, rc = sd.r, sd.r.conjugate()
    pref = (1.0 / (2j * math.pi)) * math.copysign(1.0, sd.u) * (1.0 / (x - r) - 1.0 / (x - rc))
    return pref * ((x - rc) / (x - r)) ** n


def eval_eigenfunction(params: MapParams, n: int, x):
    """Canonical eigenfunction ``sigma_n(x) = L_U(x) exp(i n theta(x))``.

    Evaluated through the rational form, so it is defined at every real x
    (including the phase jump point) and ``|sigma_n| = L_U`` exactly in
    floating point up to rounding.
    """
    sd = spectral_data(params)
    x = np.asarray(x, dtype=float)
    r = sd.r
    angle = sd.phase_ref + np.angle((x - r.conjugate()) / (x - r))
    angle = np.fmod(n * angle, TWO_PI)
    return eval_lorentzian(params, x) * np.exp(1j * angle)


def apply_operator(params: MapParams, f: Callable, x):
    """``(H_U f)(x) = f(U - 1/x)/x**2``, pointwise."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise PoleAtZeroError("H_U f is undefined at x = 0")
    return f(params.u - 1.0 / x) / (x * x)


def eigen_residual(params: MapParams, n: int, sample) -> float:
    """max over ``sample`` of ``|H_U sigma_n - exp(i n phi) sigma_n|``."""
    x = np.asarray(sample, dtype=float)
    lhs = apply_operator(params, lambda y: eval_eigenfunction(params, n, y), x)
    rhs = eigenvalue(params, n) * eval_eigenfunction(params, n, x)
    return float(np.max(np.abs(lhs - rhs)))
