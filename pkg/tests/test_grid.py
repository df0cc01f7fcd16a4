import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjflow import GridFunction, GridSpec
from hjflow.grid import (
    discrete_gradient_sup,
    discrete_laplacian_sup,
    integral,
    read_csv,
    sup_norm,
    write_csv,
)


class TestGridSpec:
    def test_origin_is_exact_node(self):
        spec = GridSpec(1, 10.0, 256)
        assert 0.0 in spec.axis()
        assert spec.axis()[spec.points_per_axis // 2] == 0.0

    def test_node_count_is_odd(self):
        spec = GridSpec(1, 10.0, 256)
        assert spec.nodes_per_axis == 257

    def test_spacing(self):
        spec = GridSpec(1, 10.0, 2048)
        assert spec.spacing == pytest.approx(20.0 / 2048)

    @pytest.mark.parametrize("bad", [15, 100, 0, -16, 17])
    def test_rejects_non_power_of_two(self, bad):
        with pytest.raises(ValueError):
            GridSpec(1, 10.0, bad)

    def test_rejects_bad_dim(self):
        with pytest.raises(ValueError):
            GridSpec(3, 10.0, 256)

    def test_axis_endpoints(self):
        spec = GridSpec(1, 5.0, 64)
        ax = spec.axis()
        assert ax[0] == pytest.approx(-5.0)
        assert ax[-1] == pytest.approx(5.0)

    def test_2d_shape(self):
        spec = GridSpec(2, 5.0, 64)
        assert spec.shape == (65, 65)
        assert spec.nodes().shape == (65 * 65, 2)


class TestGridFunction:
    def test_values_are_immutable(self, gaussian_bump):
        with pytest.raises(ValueError):
            gaussian_bump.values[0] = 1.0

    def test_shape_mismatch_rejected(self, spec_1d):
        with pytest.raises(ValueError):
            GridFunction(spec_1d, np.zeros(3))

    def test_nonfinite_rejected(self, spec_1d):
        vals = np.zeros(spec_1d.shape)
        vals[0] = np.inf
        with pytest.raises(ValueError):
            GridFunction(spec_1d, vals)

    def test_interpolation_at_nodes(self, gaussian_bump):
        ax = gaussian_bump.spec.axis()
        np.testing.assert_allclose(gaussian_bump(ax), gaussian_bump.values, atol=1e-14)

    def test_zero_outside_grid(self, gaussian_bump):
        assert gaussian_bump(11.0) == 0.0
        assert gaussian_bump(-10.5) == 0.0

    def test_2d_interpolation(self, spec_2d):
        f = GridFunction.from_callable(spec_2d, lambda x, y: x + 2 * y)
        pts = np.array([[0.5, 0.25], [-1.0, 2.0]])
        np.testing.assert_allclose(f(pts), [1.0, 3.0], atol=1e-12)
        assert f(np.array([[6.0, 0.0]]))[0] == 0.0


class TestOperators:
    def test_sup_norm(self, gaussian_bump):
        assert sup_norm(gaussian_bump) == pytest.approx(1.0, abs=1e-12)

    def test_gradient_of_linear(self, spec_1d):
        f = GridFunction.from_callable(spec_1d, lambda x: 3.0 * x)
        assert discrete_gradient_sup(f) == pytest.approx(3.0, abs=1e-10)

    def test_laplacian_of_quadratic(self, spec_1d):
        f = GridFunction.from_callable(spec_1d, lambda x: x**2)
        assert discrete_laplacian_sup(f) == pytest.approx(2.0, rel=1e-8)

    def test_integral_of_bump(self, spec_1d_fine):
        # integral of e^{-x^2} over R is sqrt(pi); tails below 1e-40 at |x|=10
        f = GridFunction.from_callable(spec_1d_fine, lambda x: np.exp(-(x**2)))
        assert integral(f) == pytest.approx(np.sqrt(np.pi), rel=1e-6)

    def test_2d_laplacian(self, spec_2d):
        f = GridFunction.from_callable(spec_2d, lambda x, y: x**2 + y**2)
        assert discrete_laplacian_sup(f) == pytest.approx(4.0, rel=1e-8)


class TestCsvRoundTrip:
    def test_1d_round_trip(self, gaussian_bump, tmp_path):
        path = tmp_path / "f.csv"
        write_csv(gaussian_bump, path)
        back = read_csv(path, gaussian_bump.spec)
        np.testing.assert_array_equal(back.values, gaussian_bump.values)

    def test_2d_round_trip(self, spec_2d, tmp_path):
        f = GridFunction.from_callable(spec_2d, lambda x, y: np.exp(-(x**2) - y**2))
        path = tmp_path / "f2.csv"
        write_csv(f, path)
        back = read_csv(path, spec_2d)
        np.testing.assert_array_equal(back.values, f.values)

    def test_header(self, gaussian_bump, tmp_path):
        path = tmp_path / "f.csv"
        write_csv(gaussian_bump, path)
        assert path.read_text().splitlines()[0] == "x,value"


@given(scale=st.floats(-5.0, 5.0, allow_nan=False))
@settings(max_examples=25, deadline=None)
def test_sup_norm_homogeneous(scale):
    spec = GridSpec(1, 10.0, 64)
    f = GridFunction.from_callable(spec, lambda x: np.exp(-(x**2)))
    scaled = f.with_values(scale * f.values)
    assert sup_norm(scaled) == pytest.approx(abs(scale) * sup_norm(f), rel=1e-12, abs=1e-12)
