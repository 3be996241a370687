import math

import numpy as np
import pytest

from hfgen.core.eigensolver import (
    align_phase,
    check_degeneracy_guard,
    check_fd_step,
    eigenvector_derivative,
    eigh,
    required_count,
    rotor_reference_mode,
    select_mode,
    solve_mode,
    solve_modes,
)
from hfgen.core.errors import (
    DegeneracyError,
    ModeTrackingError,
    ParameterError,
    PhaseAlignmentError,
)
from hfgen.core.grid import default_radial_grid
from hfgen.core.operators import ModelId, build_radial, build_rotor_gauge_a, build_rotor_gauge_b
from hfgen.models.radial import RadialReference
from tests.conftest import discrete_rotor_energy, random_hermitian


def test_dense_reconstruction():
    matrix = random_hermitian(12)
    pairs = eigh(matrix)
    assert len(pairs) == 12
    assert [p.mode_index for p in pairs] == list(range(12))
    for pair in pairs:
        assert np.linalg.norm(matrix @ pair.vector - pair.energy * pair.vector) <= 1e-10
    energies = [p.energy for p in pairs]
    assert energies == sorted(energies)


def test_diagonal_input_returns_the_standard_basis():
    pairs = eigh(np.array([[1.0, 0.0], [0.0, 2.0]]))
    assert [p.energy for p in pairs] == pytest.approx([1.0, 2.0], abs=1e-15)
    assert np.allclose(np.abs(pairs[0].vector), [1.0, 0.0], atol=1e-15)
    assert np.allclose(np.abs(pairs[1].vector), [0.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("make", [
    lambda: random_hermitian(12, seed=3),
    lambda: build_rotor_gauge_b(64, 0.3).build(0.3),
    lambda: build_rotor_gauge_a(64, 0.3).build(0.3),
], ids=["random", "rotor-b", "rotor-a"])
def test_eigenvectors_are_orthonormal(make):
    vectors = np.column_stack([p.vector for p in eigh(make())])
    gram = vectors.conj().T @ vectors
    assert np.max(np.abs(gram - np.eye(gram.shape[0]))) <= 1e-10


def test_count_limits_the_result():
    assert len(eigh(random_hermitian(10), count=3)) == 3


def test_rejects_non_hermitian_arrays():
    matrix = random_hermitian(4)
    matrix[0, 1] += 1e-3
    with pytest.raises(ParameterError):
        eigh(matrix)
    with pytest.raises(ParameterError):
        eigh(np.zeros((3, 4)))
    with pytest.raises(ParameterError):
        eigh(random_hermitian(4), count=0)


def test_rotor_spectrum_matches_discrete_formula():
    n_points, epsilon = 64, 0.3
    pairs = eigh(build_rotor_gauge_b(n_points, epsilon).build(epsilon), count=6)
    expected = sorted(discrete_rotor_energy(n, epsilon, n_points) for n in range(-4, 5))[:6]
    assert np.allclose([p.energy for p in pairs], expected, rtol=0.0, atol=1e-10)
    assert all(p.residual < 1e-8 for p in pairs)


def test_degeneracy_guard():
    check_degeneracy_guard(ModelId.ROTOR_GAUGE_B, 0.0, 0)
    check_degeneracy_guard(ModelId.ROTOR_GAUGE_B, 0.3, 0)
    check_degeneracy_guard(ModelId.RADIAL_LOG, 0.5, 0)
    with pytest.raises(DegeneracyError) as excinfo:
        check_degeneracy_guard(ModelId.ROTOR_GAUGE_B, 0.5, 0)
    assert excinfo.value.lam == 0.5
    assert excinfo.value.n == 0
    assert "lambda=0.5" in str(excinfo.value)
    with pytest.raises(DegeneracyError):
        check_degeneracy_guard(ModelId.ROTOR_GAUGE_A, 1e-4, 1)
    check_degeneracy_guard(ModelId.ROTOR_GAUGE_A, 0.51, 0, guard=1e-3)
    with pytest.raises(DegeneracyError):
        check_degeneracy_guard(ModelId.ROTOR_GAUGE_A, 0.51, 0, guard=0.05)


def test_required_count():
    assert required_count(ModelId.ROTOR_GAUGE_B, 0.3, -2, 100) == 10
    assert required_count(ModelId.ROTOR_GAUGE_B, 0.3, 0, 100) == 6
    assert required_count(ModelId.ROTOR_GAUGE_B, 0.3, 40, 32) == 32
    assert required_count(ModelId.RADIAL_LOG, 1.0, 0, 100) == 2


@pytest.mark.parametrize("builder, model_id", [
    (build_rotor_gauge_a, ModelId.ROTOR_GAUGE_A),
    (build_rotor_gauge_b, ModelId.ROTOR_GAUGE_B),
])
def test_select_mode_labels_and_aligns(builder, model_id):
    n_points, epsilon = 64, 0.3
    family = builder(n_points, epsilon)
    modes = solve_modes(family, epsilon, [-2, -1, 0, 1, 2])
    for n, pair in modes.items():
        assert pair.mode_index == n
        assert pair.lam == epsilon
        assert pair.energy == pytest.approx(discrete_rotor_energy(n, epsilon, n_points), abs=1e-10)
        overlap = np.vdot(rotor_reference_mode(model_id, n, epsilon, n_points), pair.vector)
        assert abs(overlap.imag) < 1e-11
        assert overlap.real > 0.99


def test_select_mode_without_candidates():
    with pytest.raises(ModeTrackingError):
        select_mode([], ModelId.ROTOR_GAUGE_B, 0, 0.3)


def test_select_mode_reports_missing_mode():
    family = build_rotor_gauge_b(64, 0.3)
    pairs = eigh(family.build(0.3), count=2)
    with pytest.raises(ModeTrackingError) as excinfo:
        select_mode(pairs, ModelId.ROTOR_GAUGE_B, 3, 0.3)
    assert excinfo.value.n == 3


def test_align_phase():
    reference = rotor_reference_mode(ModelId.ROTOR_GAUGE_B, 1, 0.3, 32)
    rotated = reference * np.exp(0.7j)
    aligned = align_phase(reference, rotated)
    assert np.allclose(aligned, reference, atol=1e-14)
    again = align_phase(reference, aligned)
    assert np.array_equal(again, aligned)


def test_align_phase_rejects_small_overlap():
    a = rotor_reference_mode(ModelId.ROTOR_GAUGE_B, 0, 0.3, 32)
    b = rotor_reference_mode(ModelId.ROTOR_GAUGE_B, 1, 0.3, 32)
    with pytest.raises(PhaseAlignmentError):
        align_phase(a, b)


def test_eigenvector_derivative_of_twisted_mode():
    n_points, epsilon, n = 64, 0.3, 1
    family = build_rotor_gauge_b(n_points, epsilon)
    center = solve_mode(family, epsilon, n)
    derivative = eigenvector_derivative(family, epsilon, n)
    theta = family.grid.points
    # the phase convention removes the mean of -iθ
    expected = -1j * (theta - theta.mean()) * center.vector
    assert np.allclose(derivative, expected, atol=1e-6)


def test_fd_step_bounds():
    check_fd_step(1e-5)
    for bad in (1e-9, 0.5):
        with pytest.raises(ParameterError):
            check_fd_step(bad)


def test_radial_ground_state():
    kappa = 1.0
    family = build_radial(default_radial_grid(kappa, n_points=1000), kappa)
    pair = solve_mode(family, kappa, 0)
    assert pair.energy == pytest.approx(-0.5 * kappa ** 2, abs=5e-3)
    assert pair.residual <= 1e-9
    assert np.sum(pair.vector) > 0.0
    assert np.linalg.norm(pair.vector) == pytest.approx(1.0)


def test_radial_has_a_single_bound_state():
    kappa = 1.0
    family = build_radial(default_radial_grid(kappa, n_points=400), kappa)
    pairs = eigh(family.build(kappa), count=2)
    assert pairs[0].energy < 0.0 < pairs[1].energy


@pytest.mark.parametrize("n", [-1, 0, 1])
def test_eigenvector_derivative_vanishes_in_the_peierls_gauge(n):
    family = build_rotor_gauge_a(64, 0.3)
    assert np.linalg.norm(eigenvector_derivative(family, 0.3, n)) <= 1e-6


@pytest.mark.parametrize("builder", [build_rotor_gauge_a, build_rotor_gauge_b])
@pytest.mark.parametrize("delta", [1e-2, 1e-3])
def test_tracked_modes_vary_continuously(builder, delta):
    epsilon = 0.3
    family = builder(64, epsilon)
    for n in (-1, 0, 1):
        center = solve_mode(family, epsilon, n).vector
        for shifted in (epsilon - delta, epsilon + delta):
            neighbour = align_phase(center, solve_mode(family, shifted, n).vector)
            assert np.vdot(center, neighbour).real >= 1.0 - 10.0 * delta ** 2


def test_radial_eigenvector_derivative_follows_the_dilation():
    kappa = 1.0
    family = build_radial(default_radial_grid(kappa, n_points=1000), kappa)
    matrix = family.build(kappa)
    derivative = np.real(eigenvector_derivative(family, kappa, 0))
    # the weights depend on the grid only, so the unit-weight scaling commutes with d/dκ
    dpsi = derivative / np.sqrt(2.0 * math.pi * matrix.weights)
    r = family.grid.points
    window = (r >= 0.1) & (r <= 5.0)
    # ∂_κΨ₀ = (1/κ)(1 + r∂_r)Ψ₀
    expected = RadialReference(kappa).alpha_derivative(r[window])
    error = np.max(np.abs(dpsi[window] - expected)) / np.max(np.abs(expected))
    assert error <= 1e-2
