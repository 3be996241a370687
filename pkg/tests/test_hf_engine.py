import math

import numpy as np
import pytest

from hfgen.core.eigensolver import eigenvector_derivative, solve_mode
from hfgen.core.errors import DegeneracyError, ParameterError, UnsupportedModelError
from hfgen.core.grid import default_radial_grid
from hfgen.core.hf_engine import (
    anomaly_boundary_route,
    anomaly_matrix_route,
    check_generalized_hf,
    check_generalized_hf_modes,
    classical_hf_residual,
    energy_derivative,
    hermiticity_defect,
    hf_expectation,
    integrated_form,
    off_diagonal_form,
)
from hfgen.core.operators import ModelId, build_radial, build_rotor_gauge_a, build_rotor_gauge_b
from hfgen.models.report import Route
from hfgen.models.rotor import RotorModel, rotor_energy
from tests.conftest import discrete_rotor_slope

MODES = [-2, -1, 0, 1, 2]


class TestRotorDifferential:
    epsilon = 0.3

    def test_gauge_b_carries_the_whole_slope_in_the_anomaly(self, rotor_b):
        reports = check_generalized_hf_modes(rotor_b, self.epsilon, MODES)
        assert [r.n for r in reports] == MODES
        for report in reports:
            slope = discrete_rotor_slope(report.n, self.epsilon, rotor_b.dimension)
            assert report.expectation_formal == 0.0
            assert report.dE_dlambda == pytest.approx(slope, abs=1e-6)
            assert report.delta_matrix_route == pytest.approx(slope, abs=1e-8)
            assert report.delta_boundary_route == pytest.approx(self.epsilon - report.n, abs=1e-12)
            assert report.residual_generalized <= 1e-6
            assert report.residual_naive == pytest.approx(abs(self.epsilon - report.n), abs=2e-3)
            assert report.grid_size == 256

    def test_gauge_a_has_no_anomaly(self, rotor_a):
        h = rotor_a.grid.step
        for report in check_generalized_hf_modes(rotor_a, self.epsilon, MODES):
            n = report.n
            expected_delta = math.sin(n * h) / h - math.sin((n - self.epsilon) * h) / h - self.epsilon
            assert report.delta_matrix_route == pytest.approx(expected_delta, abs=1e-8)
            assert abs(report.delta_matrix_route) < 1e-3
            assert report.delta_boundary_route == pytest.approx(0.0, abs=1e-12)
            assert report.residual_generalized <= 1e-6

    def test_single_mode_entry_point(self, rotor_b):
        report = check_generalized_hf(rotor_b, self.epsilon, 0)
        assert report.n == 0
        assert report.fd_step == 1e-5

    def test_trivial_flux(self):
        family = build_rotor_gauge_a(128, 0.0)
        report = check_generalized_hf(family, 0.0, 0)
        assert report.dE_dlambda == pytest.approx(0.0, abs=1e-7)
        assert report.delta_matrix_route == pytest.approx(0.0, abs=1e-10)

    def test_hf_expectation_and_matrix_route_agree_with_engine(self, rotor_a):
        pair = solve_mode(rotor_a, self.epsilon, 1)
        report = check_generalized_hf(rotor_a, self.epsilon, 1)
        assert hf_expectation(rotor_a, self.epsilon, 1, pair) == pytest.approx(report.expectation_formal)
        assert anomaly_matrix_route(rotor_a, self.epsilon, 1, pair=pair) == pytest.approx(
            report.delta_matrix_route, abs=1e-12
        )

    def test_classical_identity_holds_for_the_matrix(self):
        family = build_rotor_gauge_b(64, self.epsilon)
        assert classical_hf_residual(family, self.epsilon, 1) <= 1e-7

    def test_energy_derivative_needs_positive_step(self, rotor_b):
        with pytest.raises(ParameterError):
            energy_derivative(rotor_b, self.epsilon, 0, delta=0.0)

    def test_stencil_respects_the_degeneracy_guard(self, rotor_b):
        with pytest.raises(DegeneracyError):
            check_generalized_hf_modes(rotor_b, 0.4985, [0], delta=1e-3)


@pytest.mark.slow
def test_rotor_reference_grid():
    epsilon = 0.3
    for builder in (build_rotor_gauge_a, build_rotor_gauge_b):
        family = builder(2048, epsilon)
        for report in check_generalized_hf_modes(family, epsilon, MODES):
            assert report.dE_dlambda == pytest.approx(epsilon - report.n, abs=5e-5)
            assert report.residual_generalized <= 1e-4
            if family.model_id is ModelId.ROTOR_GAUGE_B:
                assert report.delta_matrix_route == pytest.approx(epsilon - report.n, abs=1e-4)
            else:
                assert report.expectation_formal == pytest.approx(epsilon - report.n, abs=1e-4)
                assert abs(report.delta_matrix_route) <= 1e-4


class TestBoundaryRoute:
    def test_rotor_random_points(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 20:
            epsilon = float(rng.uniform(-2.0, 2.0))
            n = int(rng.integers(-3, 4))
            nearest = round(2 * epsilon) / 2
            if abs(epsilon - nearest) < 1e-2:
                continue
            assert anomaly_boundary_route(ModelId.ROTOR_GAUGE_B, epsilon, n) == pytest.approx(epsilon - n, abs=1e-12)
            assert anomaly_boundary_route(ModelId.ROTOR_GAUGE_A, epsilon, n) == pytest.approx(0.0, abs=1e-12)
            checked += 1

    @pytest.mark.parametrize("model_id, lam", [
        (ModelId.ROTOR_GAUGE_A, 0.3),
        (ModelId.ROTOR_GAUGE_B, 0.3),
        (ModelId.RADIAL_LOG, 1.5),
    ])
    def test_phase_invariance(self, model_id, lam):
        base = anomaly_boundary_route(model_id, lam, 0)
        for offset in (0.3, -1.7, 5.0):
            assert anomaly_boundary_route(model_id, lam, 0, phase_offset=offset) == pytest.approx(base, abs=1e-10)

    @pytest.mark.parametrize("kappa", [1.0, 2.0])
    def test_radial(self, kappa):
        assert anomaly_boundary_route("radial-log", kappa, 0) == pytest.approx(-kappa, abs=1e-6 * kappa)

    def test_radial_has_no_excited_states(self):
        with pytest.raises(UnsupportedModelError):
            anomaly_boundary_route(ModelId.RADIAL_LOG, 1.0, 1)


class TestRadialDifferential:
    def test_coarse_grid(self):
        kappa = 1.0
        family = build_radial(default_radial_grid(kappa, n_points=1000), kappa)
        report = check_generalized_hf(family, kappa, 0)
        assert report.expectation_formal == 0.0
        assert report.energy == pytest.approx(-0.5, abs=5e-3)
        assert report.dE_dlambda == pytest.approx(-1.0, abs=2e-2)
        assert report.delta_matrix_route == pytest.approx(-1.0, abs=2e-2)
        assert report.delta_boundary_route == pytest.approx(-1.0, abs=1e-6)
        assert report.residual_generalized <= 2e-2
        assert report.residual_naive == pytest.approx(1.0, abs=2e-2)

    @pytest.mark.slow
    @pytest.mark.parametrize("kappa", [1.0, 2.0])
    def test_default_grid(self, kappa):
        family = build_radial(default_radial_grid(kappa), kappa)
        report = check_generalized_hf(family, kappa, 0)
        assert report.energy == pytest.approx(-0.5 * kappa ** 2, abs=1e-3 * kappa ** 2)
        assert report.dE_dlambda == pytest.approx(-kappa, abs=1e-2 * kappa)
        assert report.delta_boundary_route == pytest.approx(-kappa, abs=1e-6 * kappa)
        assert report.residual_generalized <= 1e-2 * kappa


class TestHermiticityDefect:
    def test_rotor(self):
        family = build_rotor_gauge_b(256, 0.3)
        pair = solve_mode(family, 0.3, 1)
        dpsi = eigenvector_derivative(family, 0.3, 1, center=pair)
        assert abs(hermiticity_defect(family.build(0.3), pair.vector, dpsi)) <= 1e-10

    @staticmethod
    def _radial_defect(kappa, n_points=None):
        family = build_radial(default_radial_grid(kappa, n_points=n_points), kappa)
        pair = solve_mode(family, kappa, 0)
        dpsi = eigenvector_derivative(family, kappa, 0, center=pair)
        return abs(hermiticity_defect(family.build(kappa), pair.vector, dpsi))

    @pytest.mark.parametrize("n_points", [400, 1000])
    def test_radial(self, n_points):
        assert self._radial_defect(1.0, n_points) <= 1e-10

    @pytest.mark.slow
    def test_radial_default_grid(self):
        assert self._radial_defect(1.0) <= 1e-10


def _overlap(e1, e2):
    """⟨Ψ(ε2)|Ψ(ε1)⟩ for the twisted-domain eigenfunctions e^{i(n−ε)θ}/√2π."""
    d = e2 - e1
    return (np.exp(2j * math.pi * d) - 1.0) / (2j * math.pi * d)


class TestIntegratedForm:
    def test_analytic_gauge_b(self):
        report = integrated_form(RotorModel("b"), 0.25, 0.1, 0)
        assert report.route is Route.ANALYTIC
        assert report.residual <= 1e-10
        assert abs(report.matrix_term) <= 1e-12
        expected = (rotor_energy(0, 0.25) - rotor_energy(0, 0.1)) * _overlap(0.25, 0.1)
        assert abs(report.delta_term - expected) <= 1e-10

    def test_analytic_gauge_a_has_no_boundary_term(self):
        report = integrated_form(RotorModel("a"), 0.25, 0.1, 1)
        assert report.residual <= 1e-10
        assert abs(report.delta_term) <= 1e-10

    def test_discrete_gauge_b(self):
        family = build_rotor_gauge_b(256, 0.25)
        report = integrated_form(family, 0.25, 0.1, 0)
        analytic = integrated_form(RotorModel("b"), 0.25, 0.1, 0)
        assert report.route is Route.DISCRETE
        assert report.grid_size == 256
        assert report.residual <= 1e-9
        assert abs(report.matrix_term) <= 1e-9
        assert abs(report.delta_term - analytic.delta_term) <= 1e-3

    def test_needs_distinct_parameters(self):
        with pytest.raises(ParameterError):
            integrated_form(RotorModel("b"), 0.2, 0.2, 0)


class TestOffDiagonalForm:
    @pytest.mark.parametrize("n, m", [(0, 1), (0, 2), (1, 2)])
    def test_analytic_gauge_b(self, n, m):
        epsilon = 0.25
        report = off_diagonal_form(RotorModel("b"), epsilon, n, m)
        assert report.residual <= 1e-8
        assert abs(report.delta_nm - (epsilon - 0.5 * (n + m))) <= 1e-8
        assert report.expectation_formal == 0

    def test_analytic_gauge_a(self):
        report = off_diagonal_form(RotorModel("a"), 0.25, 0, 1)
        assert report.residual <= 1e-8
        assert abs(report.delta_nm) <= 1e-8

    def test_discrete_gauge_b(self):
        epsilon = 0.25
        family = build_rotor_gauge_b(128, epsilon)
        report = off_diagonal_form(family, epsilon, 0, 1)
        assert report.residual <= 1e-6
        assert abs(report.delta_nm - (epsilon - 0.5)) <= 2e-2
        assert report.fd_step == 1e-5

    def test_needs_distinct_modes(self):
        with pytest.raises(ParameterError):
            off_diagonal_form(RotorModel("b"), 0.25, 1, 1)

    def test_respects_the_degeneracy_guard(self):
        with pytest.raises(DegeneracyError):
            off_diagonal_form(RotorModel("b"), 0.5, 0, 1)
