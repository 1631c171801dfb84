import math

import numpy as np
import pytest

from fracmap.errors import FracmapError, NonIntegrableError
from fracmap.expansion import (
    CoefficientSet,
    compute_coefficients,
    expansion_error,
    make_grid,
    real_line_coefficients,
    reconstruct,
)
from fracmap.functions import bump, builtin_function, gaussian, lorentz_shifted, quartic
from fracmap.mobius import MapParams
from fracmap.spectral import eval_eigenfunction, eval_lorentzian, spectral_data

U12 = MapParams(1.2)

# L1 errors on [-8, 8] for the Gaussian at U = 1.2, frozen from a first run
GAUSSIAN_L1 = {16: 4.040365470144719e-03, 32: 6.460884931214908e-05, 64: 7.191883181117041e-08}


def battery(params):
    return {
        "gaussian": gaussian,
        "lorentz-shifted": lorentz_shifted(params),
        "bump": bump,
        "quartic": quartic,
    }


class TestGrid:
    def test_power_of_two_required(self):
        with pytest.raises(FracmapError):
            make_grid(U12, 1000)

    @pytest.mark.parametrize("u", [1.2, -0.7, 1.9])
    def test_nodes_invert_phase(self, u):
        params = MapParams(u)
        grid = make_grid(params, 256)
        sd = spectral_data(params)
        r, rc = sd.r, sd.r.conjugate()
        w = np.exp(1j * (grid.theta_nodes - sd.phi))
        x_complex = (w * r - rc) / (w - 1)
        assert np.max(np.abs(x_complex.imag)) < 1e-10
        assert np.max(np.abs(x_complex.real - grid.x_nodes) / np.maximum(1, np.abs(grid.x_nodes))) < 1e-12

    def test_lorentzian_integrates_to_one(self):
        grid = make_grid(U12)
        assert np.sum(eval_lorentzian(U12, grid.x_nodes) * grid.weights) == pytest.approx(1.0, abs=1e-10)

    def test_nodes_are_finite(self):
        grid = make_grid(MapParams(-1.5), 4096)
        assert np.all(np.isfinite(grid.x_nodes))


class TestCoefficients:
    def test_lorentzian(self):
        c = compute_coefficients(U12, lambda x: eval_lorentzian(U12, x), 16)
        assert abs(c[0] - 1) < 1e-10
        assert max(abs(c[n]) for n in range(-16, 17) if n) < 1e-10

    def test_single_eigenfunction(self):
        c = compute_coefficients(U12, lambda x: eval_eigenfunction(U12, 3, x), 16)
        assert abs(c[3] - 1) < 1e-10
        assert max(abs(c[n]) for n in range(-16, 17) if n != 3) < 1e-10

    @pytest.mark.parametrize("u", [1.2, -1.2, 0.5, -1.9])
    def test_zero_integral(self, u):
        params = MapParams(u)
        grid = make_grid(params)
        for n in range(-10, 11):
            total = np.sum(eval_eigenfunction(params, n, grid.x_nodes) * grid.weights)
            assert abs(total - (1.0 if n == 0 else 0.0)) < 1e-10

    def test_gaussian_against_real_line(self):
        a = compute_coefficients(U12, gaussian, 32)
        b = real_line_coefficients(U12, gaussian, 32)
        assert np.max(np.abs(a.as_array() - b.as_array())) < 1e-8

    @pytest.mark.parametrize("u", [1.2, -0.5, 1.9])
    @pytest.mark.parametrize("name", ["gaussian", "lorentz-shifted", "bump", "quartic"])
    def test_dual_quadrature_battery(self, u, name):
        params = MapParams(u)
        f = battery(params)[name]
        a = compute_coefficients(params, f, 16)
        b = real_line_coefficients(params, f, 16)
        assert np.max(np.abs(a.as_array() - b.as_array())) < 1e-8

    @pytest.mark.parametrize("name", ["gaussian", "lorentz-shifted", "bump", "quartic"])
    def test_grid_doubling(self, name):
        f = battery(U12)[name]
        a = compute_coefficients(U12, f, 32, make_grid(U12, 4096))
        b = compute_coefficients(U12, f, 32, make_grid(U12, 8192))
        assert np.max(np.abs(a.as_array() - b.as_array())) < 1e-10

    @pytest.mark.parametrize("name", ["gaussian", "lorentz-shifted", "bump", "quartic"])
    def test_reality(self, name):
        c = compute_coefficients(U12, battery(U12)[name], 32)
        assert max(abs(c[-n] - c[n].conjugate()) for n in range(33)) < 1e-12

    def test_non_decaying_rejected(self):
        with pytest.raises(NonIntegrableError):
            compute_coefficients(U12, lambda x: np.ones_like(x), 8)
        with pytest.raises(NonIntegrableError):
            compute_coefficients(U12, lambda x: 1 / (1 + np.abs(x)), 8)

    def test_scalar_only_function_accepted(self):
        c = compute_coefficients(U12, lambda x: math.exp(-x * x), 4)
        ref = compute_coefficients(U12, gaussian, 4)
        assert np.allclose(c.as_array(), ref.as_array(), atol=1e-15)

    def test_grid_for_other_u_rejected(self):
        with pytest.raises(FracmapError):
            compute_coefficients(U12, gaussian, 4, make_grid(MapParams(1.1)))


class TestReconstruct:
    def test_single_term(self):
        coeffs = CoefficientSet(1.2, 0, {0: 1.0})
        x = np.linspace(-3, 3, 13)
        assert np.allclose(reconstruct(U12, coeffs, x), eval_lorentzian(U12, x), atol=1e-16)

    def test_sigma5_roundtrip(self):
        c = compute_coefficients(U12, lambda x: eval_eigenfunction(U12, 5, x), 8)
        assert abs(reconstruct(U12, c, 0.7) - eval_eigenfunction(U12, 5, 0.7)) < 1e-10

    @pytest.mark.parametrize("u", [1.2, -1.7])
    def test_band_limited_roundtrip(self, u):
        params = MapParams(u)
        true = {-4: 0.2 + 0.1j, 0: 1.0, 1: -0.3j, 6: 0.05}
        f = lambda x: sum(v * eval_eigenfunction(params, n, x) for n, v in true.items())
        c = compute_coefficients(params, f, 8)
        assert max(abs(c[n] - true.get(n, 0)) for n in range(-8, 9)) < 1e-9
        x = np.linspace(-6, 6, 101)
        assert np.max(np.abs(reconstruct(params, c, x) - f(x))) < 1e-9

    def test_gaussian_reconstruction_is_real(self):
        c = compute_coefficients(U12, gaussian, 64)
        x = np.linspace(-8, 8, 501)
        assert np.max(np.abs(reconstruct(U12, c, x).imag)) < 1e-8

    def test_gaussian_pointwise_improves(self):
        x = np.linspace(-4, 4, 401)
        err = {n: np.max(np.abs(reconstruct(U12, compute_coefficients(U12, gaussian, n), x) - gaussian(x))) for n in (32, 64)}
        assert err[64] < err[32]


class TestExpansionError:
    def test_lorentzian(self):
        for n in (0, 3, 10):
            assert expansion_error(U12, lambda x: eval_lorentzian(U12, x), n) < 1e-9

    def test_finite_real_combination(self):
        f = lambda x: (eval_eigenfunction(U12, 2, x) + eval_eigenfunction(U12, -2, x)).real
        assert expansion_error(U12, f, 2) < 1e-9
        assert expansion_error(U12, f, 5) < 1e-9

    def test_gaussian_convergence(self):
        errs = {n: expansion_error(U12, gaussian, n) for n in (16, 32, 64)}
        assert errs[64] < errs[32] < errs[16]

    @pytest.mark.parametrize("n_max", [16, 32, 64])
    def test_gaussian_regression(self, n_max):
        assert expansion_error(U12, gaussian, n_max) == pytest.approx(GAUSSIAN_L1[n_max], rel=1e-6)


class TestBuiltins:
    def test_names(self):
        for name in ("gaussian", "lorentz-shifted", "bump", "quartic", "sigma:-3"):
            assert callable(builtin_function(name, U12))

    @pytest.mark.parametrize("name", ["nope", "sigma:x"])
    def test_unknown(self, name):
        with pytest.raises(FracmapError):
            builtin_function(name, U12)

    def test_bump_support(self):
        assert bump(np.array([-1.0, 1.0, 2.0])).tolist() == [0.0, 0.0, 0.0]
        assert bump(0.0) == pytest.approx(math.exp(-1))
