import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjflow import Hamiltonian, build_conjugate_table, legendre_conjugate
from hjflow.hamiltonian import eval_h


class TestFactories:
    def test_quadratic_growth_constant(self):
        # c|p|^2/2 <= (c/2)(|p| + |p|^2)
        assert Hamiltonian.quadratic(2.0).growth_constant == 1.0

    def test_power_growth_constant(self):
        assert Hamiltonian.power(1.5, 1.5).growth_constant == 1.5

    def test_zero(self):
        h = Hamiltonian.zero()
        assert h.growth_constant == 0.0
        assert eval_h(h, 3.0) == 0.0

    @pytest.mark.parametrize("q", [0.5, 2.5, 3.0])
    def test_power_exponent_range(self, q):
        with pytest.raises(ValueError):
            Hamiltonian.power(1.0, q)

    def test_sampled_requires_convexity(self):
        pts = np.linspace(-2, 2, 9)
        with pytest.raises(ValueError, match="convex"):
            Hamiltonian.sampled(pts, -(pts**2))

    def test_sampled_requires_h0_zero(self):
        pts = np.linspace(-2, 2, 9)
        with pytest.raises(ValueError, match="H\\(0\\)"):
            Hamiltonian.sampled(pts, pts**2 + 1.0)

    def test_sampled_growth_bound(self):
        pts = np.linspace(-2, 2, 201)
        h = Hamiltonian.sampled(pts, pts**2)
        k = h.growth_constant
        for p in pts:
            assert abs(eval_h(h, p)) <= k * (abs(p) + p**2) + 1e-12

    def test_from_csv(self, tmp_path):
        pts = np.linspace(-3, 3, 25)
        path = tmp_path / "h.csv"
        with open(path, "w") as fh:
            fh.write("p,value\n")
            for p, v in zip(pts, pts**2):
                fh.write(f"{p},{v}\n")
        h = Hamiltonian.from_csv(path)
        assert h.kind == "sampled"
        assert eval_h(h, 1.0) == pytest.approx(1.0, abs=1e-10)


class TestLegendreConjugate:
    @pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("lam", [0.0, 0.7, -1.3, 4.0])
    def test_quadratic_closed_form(self, c, lam):
        val, attained = legendre_conjugate(Hamiltonian.quadratic(c), lam)
        assert val == pytest.approx(lam**2 / (2 * c), abs=1e-12)
        assert attained

    def test_power_q1_indicator(self):
        h = Hamiltonian.power(2.0, 1.0)
        val, attained = legendre_conjugate(h, 1.5)
        assert val == 0.0 and attained
        val, attained = legendre_conjugate(h, 2.5)
        assert np.isinf(val) and not attained

    @pytest.mark.parametrize("lam", [0.3, 1.0, 2.7])
    def test_power_against_grid_oracle(self, lam):
        # independent oracle: dense scan of lam*s - a s^q
        a, q = 1.5, 1.7
        h = Hamiltonian.power(a, q)
        s = np.linspace(0.0, 50.0, 2_000_001)
        oracle = np.max(lam * s - a * s**q)
        val, attained = legendre_conjugate(h, lam)
        assert attained
        assert val == pytest.approx(oracle, rel=1e-8, abs=1e-8)

    def test_zero_hamiltonian_conjugate(self):
        h = Hamiltonian.zero()
        assert legendre_conjugate(h, 0.0) == (0.0, True)
        val, attained = legendre_conjugate(h, 0.5)
        assert np.isinf(val) and not attained

    def test_sampled_matches_quadratic(self):
        pts = np.linspace(-12.0, 12.0, 4001)
        h = Hamiltonian.sampled(pts, pts**2 / 2.0)
        for lam in (-2.0, 0.0, 0.5, 3.0):
            val, attained = legendre_conjugate(h, lam)
            assert attained
            # vertex scan of a sampled parabola is exact at vertex resolution
            assert val == pytest.approx(lam**2 / 2.0, abs=1e-4)

    def test_sampled_boundary_runaway(self):
        # linear growth |p| on [-2,2]: slope 1, so lam=3 runs away
        pts = np.linspace(-2.0, 2.0, 41)
        h = Hamiltonian.sampled(pts, np.abs(pts))
        val, attained = legendre_conjugate(h, 3.0)
        assert np.isinf(val) and not attained
        val, attained = legendre_conjugate(h, 0.5)
        assert np.isfinite(val) and attained

    def test_2d_lambda_radial(self):
        h = Hamiltonian.quadratic(1.0)
        val, _ = legendre_conjugate(h, np.array([3.0, 4.0]))
        assert val == pytest.approx(25.0 / 2.0, abs=1e-12)


class TestConjugateTable:
    def test_invariants_quadratic(self):
        h = Hamiltonian.quadratic(1.0)
        table = build_conjugate_table(h, 8.0)
        assert table.min_value == pytest.approx(0.0, abs=1e-8)
        assert table.lambda0 == pytest.approx(0.0, abs=1e-12)
        assert np.all(table.values[np.isfinite(table.values)] >= -1e-8)

    def test_growth_lower_bound(self):
        # L(lam) >= lam^2/(16 K) for |lam| >= 2K
        h = Hamiltonian.quadratic(1.0)
        k = h.growth_constant
        table = build_conjugate_table(h, 8.0)
        far = np.abs(table.lambda_nodes) >= 2 * k
        assert np.all(table.values[far] >= table.lambda_nodes[far] ** 2 / (16 * k) - 1e-8)

    def test_even_samples_rejected(self):
        with pytest.raises(ValueError):
            build_conjugate_table(Hamiltonian.quadratic(1.0), 8.0, lambda_samples=256)

    def test_power_q1_partial_domain(self):
        table = build_conjugate_table(Hamiltonian.power(1.0, 1.0), 4.0)
        finite = np.isfinite(table.values)
        assert finite.any() and (~finite).any()
        assert np.all(np.abs(table.lambda_nodes[finite]) <= 1.0 + 1e-12)


@given(lam=st.floats(-6.0, 6.0), c=st.floats(0.2, 4.0))
@settings(max_examples=50, deadline=None)
def test_conjugate_young_inequality(lam, c):
    """L(lam) + H(p) >= lam*p for every p (Fenchel-Young)."""
    h = Hamiltonian.quadratic(c)
    val, _ = legendre_conjugate(h, lam)
    for p in np.linspace(-8, 8, 33):
        assert val + eval_h(h, p) >= lam * p - 1e-9
