import numpy as np
import pytest

from hjflow import (
    DiagnosticsReport,
    DyadicSchedule,
    GridFunction,
    GridSpec,
    Hamiltonian,
    PropertyViolation,
    SolverConfig,
)
from hjflow.grid import discrete_laplacian_sup
from hjflow.regularity import (
    apriori_bound_report,
    pde_residual_along_trajectory,
    time_lipschitz_estimate,
)


def smooth_data(spec):
    return GridFunction.from_callable(spec, lambda x: np.log1p(np.exp(-(x**2) / 2.0)))


@pytest.fixture(scope="module")
def fine_spec():
    return GridSpec(1, 8.0, 2048)


def config_for(ham, t, level):
    return SolverConfig(ham, DyadicSchedule.up_to(t, level))


class TestDiagnosticsReport:
    def test_rejects_nonfinite_field(self):
        with pytest.raises(PropertyViolation):
            DiagnosticsReport(np.nan, 0.0, 0.0, 0.0, 0.0)

    def test_rejects_negative_field(self):
        with pytest.raises(PropertyViolation):
            DiagnosticsReport(1.0, -0.1, 0.0, 0.0, 0.9)

    def test_write_round_trip(self, tmp_path):
        rep = DiagnosticsReport(
            1.5, 0.25, 2.0, 0.75, 4.5, times=("1/4", "1/2"), level=5,
            extra={"gradient_sup_f": 0.5},
        )
        path = tmp_path / "report.txt"
        rep.write(path)
        fields = dict(
            line.split("=", 1) for line in path.read_text().splitlines()
        )
        assert float(fields["gamma_estimate"]) == 1.5
        assert float(fields["witness_C"]) == 4.5
        assert fields["level"] == "5"
        assert fields["times"] == "1/4 1/2"
        assert float(fields["gradient_sup_f"]) == 0.5


class TestTimeLipschitz:
    def test_zero_data(self, spec_1d):
        config = config_for(Hamiltonian.quadratic(1.0), "1/2", 4)
        f = GridFunction.zeros(spec_1d)
        assert time_lipschitz_estimate(f, config, ["1/4", "1/2"]) == 0.0

    def test_heat_flow_bounded_by_laplacian(self, fine_spec):
        # for H = 0 the time derivative is Laplacian/2, and the heat flow
        # contracts the Laplacian sup
        f = smooth_data(fine_spec)
        config = config_for(Hamiltonian.zero(), "1/2", 5)
        gamma = time_lipschitz_estimate(f, config, ["1/8", "1/4", "1/2"])
        assert gamma <= 0.5 * discrete_laplacian_sup(f) + 0.1

    def test_stable_under_level_refinement(self, fine_spec):
        f = smooth_data(fine_spec)
        ham = Hamiltonian.quadratic(1.0)
        g5 = time_lipschitz_estimate(f, config_for(ham, "1/2", 5), ["1/4", "1/2"])
        g6 = time_lipschitz_estimate(f, config_for(ham, "1/2", 6), ["1/4", "1/2"])
        assert g6 == pytest.approx(g5, rel=0.1)

    def test_monotone_in_sample_set(self, fine_spec):
        f = smooth_data(fine_spec)
        config = config_for(Hamiltonian.quadratic(1.0), "1/2", 5)
        small = time_lipschitz_estimate(f, config, ["1/2"])
        large = time_lipschitz_estimate(f, config, ["1/8", "1/4", "1/2"])
        assert large >= small - 1e-12


class TestAprioriBounds:
    def test_zero_data(self, spec_1d):
        config = config_for(Hamiltonian.quadratic(1.0), "1/2", 4)
        rep = apriori_bound_report(GridFunction.zeros(spec_1d), config, ["1/2"])
        assert rep.witness_C == 0.0

    def test_heat_laplacian_contraction(self, fine_spec):
        f = smooth_data(fine_spec)
        config = config_for(Hamiltonian.zero(), "1/2", 5)
        rep = apriori_bound_report(f, config, ["1/4", "1/2"])
        assert rep.sup_laplacian_u <= discrete_laplacian_sup(f) + 1e-8

    def test_full_report_quadratic(self, fine_spec):
        f = smooth_data(fine_spec)
        config = config_for(Hamiltonian.quadratic(1.0), "1/2", 5)
        rep = apriori_bound_report(f, config, ["1/8", "1/4", "1/2"])
        assert rep.level == 5
        assert rep.times == ("1/8", "1/4", "1/2")
        for v in (rep.gamma_estimate, rep.sup_dt_u, rep.sup_laplacian_u,
                  rep.sup_gradient_u, rep.witness_C):
            assert np.isfinite(v) and v >= 0
        assert rep.witness_C == pytest.approx(
            rep.sup_dt_u + rep.sup_laplacian_u + rep.sup_gradient_u
        )
        assert rep.extra["gradient_sup_f"] >= rep.sup_gradient_u - 10 * fine_spec.spacing


class TestPdeResidual:
    def test_zero_data(self, spec_1d):
        config = config_for(Hamiltonian.quadratic(1.0), "1/2", 4)
        res = pde_residual_along_trajectory(GridFunction.zeros(spec_1d), config, ["1/2"])
        assert res[0] <= 1e-10

    def test_heat_defect_small(self, fine_spec):
        f = smooth_data(fine_spec)
        config = config_for(Hamiltonian.zero(), "1/2", 8)
        res = pde_residual_along_trajectory(f, config, ["1/2"])
        assert res[0] <= 1e-3

    def test_residual_halves_with_level(self, fine_spec):
        # the Chernoff defect is first order in dt, so one more level roughly
        # halves the residual
        f = smooth_data(fine_spec)
        ham = Hamiltonian.quadratic(1.0)
        r6 = pde_residual_along_trajectory(f, config_for(ham, "1/2", 6), ["1/2"])[0]
        r7 = pde_residual_along_trajectory(f, config_for(ham, "1/2", 7), ["1/2"])[0]
        assert 0.3 <= r7 / r6 <= 0.7
