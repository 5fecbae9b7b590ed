import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabi_zeta.errors import DomainError, NodeSingularity
from rabi_zeta.quadrature import (
    QuadratureSpec,
    gauss_legendre_nodes,
    integrate_monte_carlo,
    integrate_tensor,
    tanh_sinh_nodes,
)


class TestNodes:
    def test_gl_weights_sum_to_one(self):
        for p in (1, 5, 64):
            nodes, weights = gauss_legendre_nodes(p)
            assert abs(weights.sum() - 1.0) < 1e-14
            assert np.all((nodes > 0) & (nodes < 1))

    def test_gl_bounds(self):
        with pytest.raises(DomainError):
            gauss_legendre_nodes(0)
        with pytest.raises(DomainError):
            gauss_legendre_nodes(1025)

    @given(st.integers(1, 12))
    @settings(max_examples=12, deadline=None)
    def test_gl_polynomial_exactness(self, p):
        # p-point rule is exact for degree 2p-1
        nodes, weights = gauss_legendre_nodes(p)
        d = 2 * p - 1
        approx = float(np.sum(weights * nodes**d))
        assert abs(approx - 1 / (d + 1)) < 1e-12

    def test_tanh_sinh_interior(self):
        nodes, weights = tanh_sinh_nodes(7)
        assert np.all((nodes > 0) & (nodes < 1))
        assert abs(weights.sum() - 1.0) < 1e-10

    def test_tanh_sinh_level_grows(self):
        n5 = tanh_sinh_nodes(5)[0].size
        n7 = tanh_sinh_nodes(7)[0].size
        assert n7 > 2 * n5


class TestTensorIntegration:
    def test_smooth_1d(self):
        spec = QuadratureSpec(scheme="tanh_sinh", points_per_axis=6)
        v = integrate_tensor(lambda p: np.exp(p[:, 0]), 1, spec)
        assert abs(v.value - (math.e - 1)) < 1e-12

    def test_algebraic_endpoint_singularity(self):
        # integral of u^(-1/2) = 2, singular at 0
        spec = QuadratureSpec(scheme="tanh_sinh", points_per_axis=7)
        v = integrate_tensor(lambda p: p[:, 0] ** -0.5, 1, spec)
        assert abs(v.value - 2.0) < 1e-6

    def test_2d_product(self):
        spec = QuadratureSpec(scheme="tanh_sinh", points_per_axis=6)
        v = integrate_tensor(lambda p: p[:, 0] * p[:, 1] ** 2, 2, spec)
        assert abs(v.value - 1 / 6) < 1e-12

    def test_corner_inverse_sqrt(self):
        # integral over (0,1)^2 of (1-uv)^(-1/2)
        # = sum_k C(2k,k)/4^k/(k+1)^2 (term-wise integration)
        exact, t = 0.0, 1.0
        for k in range(1000000):
            exact += t / (k + 1) ** 2
            t *= (2 * k + 1) / (2 * k + 2)
        spec = QuadratureSpec(scheme="tanh_sinh", points_per_axis=7)
        v = integrate_tensor(lambda p: (1 - p[:, 0] * p[:, 1]) ** -0.5, 2, spec)
        assert abs(v.value - exact) < 1e-8

    def test_gauss_legendre_4d(self):
        spec = QuadratureSpec(scheme="gauss_legendre", points_per_axis=12)
        v = integrate_tensor(lambda p: np.prod(p, axis=1), 4, spec)
        assert abs(v.value - 1 / 16) < 1e-12

    def test_dimension_cap(self):
        spec = QuadratureSpec()
        with pytest.raises(DomainError):
            integrate_tensor(lambda p: p[:, 0], 5, spec)

    def test_singular_value_raises(self):
        spec = QuadratureSpec(scheme="tanh_sinh", points_per_axis=4)

        def f(p):
            out = np.ones(p.shape[0])
            out[0] = np.inf
            return out

        with pytest.raises(NodeSingularity):
            integrate_tensor(f, 1, spec)

    def test_error_estimate_honest(self):
        spec = QuadratureSpec(scheme="tanh_sinh", points_per_axis=6)
        v = integrate_tensor(lambda p: np.cos(3 * p[:, 0] + p[:, 1]), 2, spec)
        exact = (-math.cos(4) + math.cos(3) + math.cos(1) - 1.0) / 3
        assert abs(v.value - exact) <= max(v.abs_error, 1e-13)


class TestMonteCarlo:
    def test_deterministic(self):
        f = lambda p: np.sum(p, axis=1)  # noqa: E731
        a = integrate_monte_carlo(f, 3, 100000, seed=42)
        b = integrate_monte_carlo(f, 3, 100000, seed=42)
        assert a.value == b.value
        assert a.abs_error == b.abs_error

    def test_mean_accuracy(self):
        f = lambda p: np.prod(p, axis=1)  # noqa: E731
        v = integrate_monte_carlo(f, 4, 200000, seed=7)
        assert abs(v.value - 1 / 16) < 5 * max(v.abs_error, 1e-6)

    def test_bad_args(self):
        with pytest.raises(DomainError):
            integrate_monte_carlo(lambda p: p[:, 0], 0, 10, 1)
        with pytest.raises(DomainError):
            integrate_monte_carlo(lambda p: p[:, 0], 1, 0, 1)


class TestSpecValidation:
    def test_unknown_scheme(self):
        with pytest.raises(DomainError):
            QuadratureSpec(scheme="simpson")
