"""Invariant battery run by ``fracmap residuals``.

Every check is deterministic (fixed seeds).  Elliptic U gets the full spectral,
expansion and density battery; hyperbolic U gets the Mobius checks and the
point-attractor convergence check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import attractor, expansion, mobius, spectral
from .errors import AtomicOrbitWarning
from .functions import gaussian
from .mobius import MapParams, MobiusMatrix

SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    relation: str = "<"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.relation == "<":
            return self.value < self.tolerance
        return self.value > self.tolerance


def _points(rng, n=200, lo=-10.0, hi=10.0, avoid=()):
    x = rng.uniform(lo, hi, n)
    for a in (0.0, *avoid):
        x = x[np.abs(x - a) > 1e-6]
    return x


def mobius_checks(params: MapParams, rng) -> list[CheckResult]:
    S = MobiusMatrix.forward(params)
    T = MobiusMatrix.backward(params)
    xs = _points(rng, 100, -5, 5)
    pairing = max(mobius.apply(T, mobius.apply(S, x)).distance(mobius.as_point(x)) for x in xs)

    starts = _points(rng, 20, -5, 5)
    closed = 0.0
    for x0 in starts:
        for n in (1, 7, 100, 1000):
            d = mobius.iterate_closed_form(params, x0, n).distance(mobius.iterate_direct(params, x0, n))
            closed = max(closed, d)

    cd = mobius.conjugation_data(params)
    conj = 0.0
    for x in xs:
        y = mobius.conjugate_coordinate(params, x)
        y1 = mobius.conjugate_coordinate(params, mobius.apply(S, x))
        conj = max(conj, abs(y1 - cd.kappa * y) / max(1.0, abs(y1)))

    out = [
        CheckResult("inverse_pairing", pairing, 1e-12),
        CheckResult("closed_form_vs_direct", closed, 1e-9),
        CheckResult("conjugation_y_scaling", conj, 1e-9),
    ]
    if params.elliptic:
        out.append(CheckResult("multiplier_unimodular", abs(abs(cd.kappa) - 1.0), 1e-12))
    else:
        out.append(CheckResult("multiplier_off_circle", abs(abs(cd.kappa) - 1.0), 0.0, ">"))
    return out


def spectral_checks(params: MapParams, rng) -> list[CheckResult]:
    sd = spectral.spectral_data(params)
    xs = _points(rng, 200, avoid=(sd.x0_disc,))
    eig = max(spectral.eigen_residual(params, n, xs) for n in range(-20, 21))
    L = spectral.eval_lorentzian(params, xs)
    modulus = max(float(np.max(np.abs(np.abs(spectral.eval_eigenfunction(params, n, xs)) - L))) for n in range(-20, 21))

    cx = _points(rng, 100, avoid=(sd.x0_disc, 1.0 / sd.x0_disc))
    tx = params.u - 1.0 / cx
    keep = np.abs(tx - sd.x0_disc) > 1e-9
    diff = spectral.eval_theta(params, tx[keep]) - spectral.eval_theta(params, cx[keep]) - sd.phi
    cocycle = float(np.max(np.abs((diff + math.pi) % (2 * math.pi) - math.pi)))

    h = 1e-6
    dx = _points(rng, 100, -10, 10)
    dx = dx[np.abs(dx - sd.x0_disc) > 1e-3]
    fd = (spectral.eval_theta(params, dx + h) - spectral.eval_theta(params, dx - h)) / (2 * h)
    exact = -math.copysign(1.0, params.u) * 2 * math.pi * spectral.eval_lorentzian(params, dx)
    phase_density = float(np.max(np.abs(fd / exact - 1.0)))

    phi_alt = 2.0 * math.atan(math.sqrt(4.0 - params.u**2) / abs(params.u))
    return [
        CheckResult("eigen_residual_n_le_20", eig, 1e-10),
        CheckResult("modulus_law", modulus, 1e-12),
        CheckResult("theta_cocycle", cocycle, 1e-10),
        CheckResult("phase_density_fd", phase_density, 1e-5),
        CheckResult("phi_consistency", abs(spectral.eval_phi(params) - phi_alt), 1e-12),
        CheckResult("r_unimodular", abs(abs(sd.r) - 1.0), 1e-14),
    ]


def expansion_checks(params: MapParams, rng) -> list[CheckResult]:
    grid = expansion.make_grid(params)
    zero = 0.0
    for n in range(-8, 9):
        integral = complex(np.sum(spectral.eval_eigenfunction(params, n, grid.x_nodes) * grid.weights))
        zero = max(zero, abs(integral - (1.0 if n == 0 else 0.0)))

    c = expansion.compute_coefficients(params, gaussian, 16, grid)
    reality = max(abs(c[-n] - c[n].conjugate()) for n in range(17))

    true = {3: 0.5 - 0.25j, -2: 0.75, 0: 1.0, 5: 0.1j}
    band = lambda x: sum(v * spectral.eval_eigenfunction(params, n, x) for n, v in true.items())
    rt = expansion.compute_coefficients(params, band, 8, grid)
    roundtrip = max(abs(rt[n] - true.get(n, 0.0)) for n in range(-8, 9))

    oracle = expansion.real_line_coefficients(params, gaussian, 16)
    dual = float(np.max(np.abs(c.as_array() - oracle.as_array())))
    return [
        CheckResult("zero_integral", zero, 1e-10),
        CheckResult("coefficient_reality", reality, 1e-12),
        CheckResult("band_limited_roundtrip", roundtrip, 1e-9),
        CheckResult("dual_quadrature_gaussian", dual, 1e-8),
    ]


def density_checks(params: MapParams, rng) -> list[CheckResult]:
    u = params.u
    z = rng.uniform(-10, 10, 1000)
    z = z[np.abs(z) > 1e-6]
    rho = lambda t: attractor.analytic_density(params, t)
    functional = float(np.max(np.abs(rho(z) - rho(u - 1.0 / z) / z**2)))

    sample = np.concatenate([rng.uniform(-5, -0.2, 100), rng.uniform(0.2, 5, 100)])
    fwd = lambda x: 1.0 / (u - x)
    inv = lambda x: u - 1.0 / x
    general = attractor.generalized_residual(fwd, inv, rho, sample)
    negative = attractor.generalized_residual(fwd, inv, gaussian, sample)
    out = [
        CheckResult("density_functional_equation", functional, 1e-12),
        CheckResult("generalized_residual", general, 1e-6),
        CheckResult("gaussian_negative_control", negative, 0.01, ">"),
    ]
    with warnings.catch_warnings():
        warnings.simplefilter("error", AtomicOrbitWarning)
        try:
            hist = attractor.sample_orbit(attractor.OrbitConfig(u, 0.3, 100_000, 1000))
        except AtomicOrbitWarning:
            return out
    out.append(CheckResult("orbit_ks_distance_N1e5", attractor.compare_density(hist, params).ks_distance, 5e-3))
    return out


def hyperbolic_checks(params: MapParams, rng) -> list[CheckResult]:
    target = attractor.point_attractor(params)
    repelling = 1.0 / target
    starts = _points(rng, 20, -5, 5, avoid=(repelling,))
    worst = max(abs(mobius.iterate_direct(params, x0, 60).value - target) for x0 in starts)
    return [CheckResult("point_attractor_convergence_n60", worst, 1e-9)]


def run_battery(params: MapParams) -> list[CheckResult]:
    rng = np.random.default_rng(SEED)
    results = mobius_checks(params, rng)
    if params.elliptic:
        results += spectral_checks(params, rng)
        results += expansion_checks(params, rng)
        results += density_checks(params, rng)
    else:
        results += hyperbolic_checks(params, rng)
    return results
