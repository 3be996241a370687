"""
Hellmann-Feynman engine.

Computes every term of dE/dλ = ⟨∂H/∂λ⟩ + Δ and of its integrated and
off-diagonal forms. Δ is evaluated two ways: from the discrete matrix, as the
expectation of the total entry derivative minus the formal bulk derivative,
and from the closed-form boundary brackets of the analytic eigenfunctions.
"""
import logging
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from hfgen.config import get_settings
from hfgen.core.eigensolver import (
    EigenPair,
    check_degeneracy_guard,
    eigenvector_derivative,
    solve_mode,
    solve_modes,
)
from hfgen.core.errors import NumericalError, ParameterError, UnsupportedModelError
from hfgen.core.operators import (
    HermitianMatrix,
    HermitianOperatorFamily,
    ModelId,
    total_matrix_derivative,
)
from hfgen.models.radial import radial_boundary_anomaly
from hfgen.models.report import HFReport, IntegratedReport, OffDiagReport, Route
from hfgen.models.rotor import RotorModel, inner_product, rotor_boundary_anomaly

logger = logging.getLogger(__name__)

IMAGINARY_TOLERANCE = 1e-10


def _real(value: complex, what: str, lam: float, n: int) -> float:
    value = complex(value)
    if abs(value.imag) > IMAGINARY_TOLERANCE * max(1.0, abs(value.real)):
        raise NumericalError(f"{what} has imaginary part {value.imag:.3e}", lam=lam, n=n)
    return value.real


def _finite(value, what: str, lam: float, n: int):
    if not np.all(np.isfinite(np.asarray(value))):
        raise NumericalError(f"{what} is not finite", lam=lam, n=n)
    return value


def _resolve_step(delta: Optional[float]) -> float:
    delta = get_settings().DEFAULT_FD_STEP if delta is None else float(delta)
    if not delta > 0.0:
        raise ParameterError(f"differentiation step must be positive, got {delta!r}")
    return delta


def _richardson(energies: Dict[float, float], lam: float, delta: float, levels: int) -> float:
    """
    Central differences at steps δ, 2δ, …, 2^levels·δ combined by repeated
    Richardson extrapolation (error ratio 4 per level).
    """
    table = [
        (energies[lam + (2 ** j) * delta] - energies[lam - (2 ** j) * delta]) / (2.0 * (2 ** j) * delta)
        for j in range(levels + 1)
    ]
    factor = 4.0
    while len(table) > 1:
        table = [(factor * table[j] - table[j + 1]) / (factor - 1.0) for j in range(len(table) - 1)]
        factor *= 4.0
    return table[0]


def _stencil(lam: float, delta: float, levels: int) -> List[float]:
    points = []
    for j in range(levels + 1):
        points.extend([lam - (2 ** j) * delta, lam + (2 ** j) * delta])
    return points


def _stencil_energies(
    family: HermitianOperatorFamily, lam: float, modes: Sequence[int], delta: float, levels: int
) -> Dict[int, Dict[float, float]]:
    energies: Dict[int, Dict[float, float]] = {n: {} for n in modes}
    for point in _stencil(lam, delta, levels):
        for n, pair in solve_modes(family, point, list(modes)).items():
            energies[n][point] = pair.energy
    return energies


def energy_derivative(
    family: HermitianOperatorFamily,
    lam: float,
    n: int,
    delta: Optional[float] = None,
    levels: Optional[int] = None,
) -> float:
    """Richardson-extrapolated central difference of the tracked eigenvalue E_n(λ)."""
    delta = _resolve_step(delta)
    levels = get_settings().RICHARDSON_LEVELS if levels is None else levels
    energies = _stencil_energies(family, lam, [n], delta, levels)[n]
    return _finite(_richardson(energies, lam, delta, levels), "dE/dlambda", lam, n)


def hf_expectation(family: HermitianOperatorFamily, lam: float, n: int, pair: Optional[EigenPair] = None) -> float:
    """⟨Ψ_n|∂H/∂λ|Ψ_n⟩ with the discretized formal derivative."""
    pair = solve_mode(family, lam, n) if pair is None else pair
    formal = family.formal_derivative(lam)
    return _real(formal.sandwich(pair.vector, pair.vector), "formal expectation", lam, n)


def _matrix_derivative_expectation(
    derivative: HermitianMatrix, pair: EigenPair, lam: float, n: int
) -> float:
    return _real(derivative.sandwich(pair.vector, pair.vector), "dM/dlambda expectation", lam, n)


def anomaly_matrix_route(
    family: HermitianOperatorFamily,
    lam: float,
    n: int,
    delta: Optional[float] = None,
    pair: Optional[EigenPair] = None,
) -> float:
    """⟨Ψ|dM/dλ|Ψ⟩ − ⟨Ψ|D(∂H/∂λ)|Ψ⟩: the boundary-localized defect."""
    pair = solve_mode(family, lam, n) if pair is None else pair
    derivative = total_matrix_derivative(family, lam, delta)
    total = _matrix_derivative_expectation(derivative, pair, lam, n)
    return total - hf_expectation(family, lam, n, pair)


def anomaly_boundary_route(model_id: Union[ModelId, str], lam: float, n: int, phase_offset: float = 0.0) -> float:
    """
    Δ from the endpoint brackets of the analytic eigenfunctions. A nonzero
    `phase_offset` replaces ∂_λΨ by ∂_λΨ + i·phase_offset·Ψ.
    """
    model_id = ModelId(model_id)
    if model_id is ModelId.ROTOR_GAUGE_A:
        return rotor_boundary_anomaly(n, lam, "a", phase_offset)
    if model_id is ModelId.ROTOR_GAUGE_B:
        return rotor_boundary_anomaly(n, lam, "b", phase_offset)
    if n != 0:
        raise UnsupportedModelError("the radial model has a single bound state, n = 0")
    return radial_boundary_anomaly(lam, phase_offset)


def hermiticity_defect(matrix: HermitianMatrix, psi: np.ndarray, dpsi: np.ndarray) -> complex:
    """⟨Ψ|M ∂Ψ⟩ − ⟨MΨ|∂Ψ⟩ for the full discrete matrix; zero up to rounding."""
    return matrix.sandwich(psi, dpsi) - matrix.adjoint_sandwich(psi, dpsi)


def classical_hf_residual(family: HermitianOperatorFamily, lam: float, n: int, delta: Optional[float] = None) -> float:
    """|dE/dλ − ⟨Ψ|dM/dλ|Ψ⟩|, which the finite matrix always satisfies."""
    pair = solve_mode(family, lam, n)
    derivative = total_matrix_derivative(family, lam, delta)
    return abs(energy_derivative(family, lam, n, delta) - _matrix_derivative_expectation(derivative, pair, lam, n))


def check_generalized_hf_modes(
    family: HermitianOperatorFamily,
    lam: float,
    modes: Sequence[int],
    delta: Optional[float] = None,
) -> List[HFReport]:
    """All terms of the differential identity for several modes sharing eigen-solves."""
    delta = _resolve_step(delta)
    levels = get_settings().RICHARDSON_LEVELS
    modes = list(modes)
    for n in modes:
        for point in [lam] + _stencil(lam, delta, levels):
            check_degeneracy_guard(family.model_id, point, n)

    centers = solve_modes(family, lam, modes)
    energies = _stencil_energies(family, lam, modes, delta, levels)
    derivative = total_matrix_derivative(family, lam, delta)
    formal = family.formal_derivative(lam)

    reports = []
    for n in modes:
        pair = centers[n]
        d_energy = _finite(_richardson(energies[n], lam, delta, levels), "dE/dlambda", lam, n)
        expectation = _real(formal.sandwich(pair.vector, pair.vector), "formal expectation", lam, n)
        delta_matrix = _matrix_derivative_expectation(derivative, pair, lam, n) - expectation
        try:
            delta_boundary = anomaly_boundary_route(family.model_id, lam, n)
        except UnsupportedModelError:
            delta_boundary = None

        report = HFReport(
            model=family.model_id.value,
            lam=lam,
            n=n,
            energy=pair.energy,
            dE_dlambda=d_energy,
            expectation_formal=expectation,
            delta_matrix_route=delta_matrix,
            delta_boundary_route=delta_boundary,
            residual_generalized=abs(d_energy - expectation - delta_matrix),
            residual_naive=abs(d_energy - expectation),
            grid_size=family.dimension,
            fd_step=delta,
        )
        logger.debug("HF check %s lambda=%g n=%d: %s", family.model_id.value, lam, n, report)
        reports.append(report)
    return reports


def check_generalized_hf(
    family: HermitianOperatorFamily, lam: float, n: int, delta: Optional[float] = None
) -> HFReport:
    return check_generalized_hf_modes(family, lam, [n], delta)[0]


def _integrated_analytic(model: RotorModel, lambda1: float, lambda2: float, n: int) -> IntegratedReport:
    psi1 = model.eigenfunction(n, lambda1)
    psi2 = model.eigenfunction(n, lambda2)
    h1_psi1 = model.hamiltonian(lambda1, psi1)
    h2_psi1 = model.hamiltonian(lambda2, psi1)
    h2_psi2 = model.hamiltonian(lambda2, psi2)

    lhs = (model.energy(n, lambda1) - model.energy(n, lambda2)) * inner_product(psi2, psi1)
    matrix_term = inner_product(psi2, h1_psi1) - inner_product(psi2, h2_psi1)
    delta_term = inner_product(psi2, h2_psi1) - inner_product(h2_psi2, psi1)
    return IntegratedReport(
        model=model.model_id.value,
        route=Route.ANALYTIC,
        lambda1=lambda1,
        lambda2=lambda2,
        n=n,
        lhs=lhs,
        matrix_term=matrix_term,
        delta_term=delta_term,
        residual=abs(lhs - matrix_term - delta_term),
    )


def _integrated_discrete(
    family: HermitianOperatorFamily, lambda1: float, lambda2: float, n: int
) -> IntegratedReport:
    pair1 = solve_mode(family, lambda1, n)
    pair2 = solve_mode(family, lambda2, n)
    m1, m2 = family.build(lambda1), family.build(lambda2)
    bulk1, bulk2 = family.bulk(lambda1), family.bulk(lambda2)
    psi1, psi2 = pair1.vector, pair2.vector

    lhs = (pair1.energy - pair2.energy) * complex(np.vdot(psi2, psi1))
    matrix_term = (bulk1 - bulk2).sandwich(psi2, psi1)
    # λ2's bulk stencil plus λ1's own closure acts on Ψ(λ1) in the left slot
    delta_term = (m1 - bulk1 + bulk2).sandwich(psi2, psi1) - m2.adjoint_sandwich(psi2, psi1)
    return IntegratedReport(
        model=family.model_id.value,
        route=Route.DISCRETE,
        lambda1=lambda1,
        lambda2=lambda2,
        n=n,
        lhs=lhs,
        matrix_term=matrix_term,
        delta_term=delta_term,
        residual=abs(lhs - matrix_term - delta_term),
        grid_size=family.dimension,
    )


def integrated_form(
    family_or_model: Union[HermitianOperatorFamily, RotorModel],
    lambda1: float,
    lambda2: float,
    n: int,
) -> IntegratedReport:
    """(E1 − E2)⟨Ψ2|Ψ1⟩ = ⟨Ψ2|(H1 − H2)Ψ1⟩ + Δ(λ1, λ2)."""
    if lambda1 == lambda2:
        raise ParameterError("the integrated form needs lambda1 != lambda2")
    model_id = family_or_model.model_id
    check_degeneracy_guard(model_id, lambda1, n)
    check_degeneracy_guard(model_id, lambda2, n)
    if isinstance(family_or_model, RotorModel):
        return _integrated_analytic(family_or_model, lambda1, lambda2, n)
    return _integrated_discrete(family_or_model, lambda1, lambda2, n)


def _off_diagonal_analytic(model: RotorModel, lam: float, n: int, m: int) -> OffDiagReport:
    psi_n = model.eigenfunction(n, lam)
    psi_m = model.eigenfunction(m, lam)
    dpsi_m = model.eigenfunction_derivative(m, lam)

    lhs = (model.energy(m, lam) - model.energy(n, lam)) * inner_product(psi_n, dpsi_m)
    expectation = inner_product(psi_n, model.formal_derivative(lam, psi_m))
    delta_nm = inner_product(psi_n, model.hamiltonian(lam, dpsi_m)) - inner_product(
        model.hamiltonian(lam, psi_n), dpsi_m
    )
    return OffDiagReport(
        model=model.model_id.value,
        route=Route.ANALYTIC,
        lam=lam,
        n=n,
        m=m,
        lhs=lhs,
        expectation_formal=expectation,
        delta_nm=delta_nm,
        residual=abs(lhs - expectation - delta_nm),
    )


def _off_diagonal_discrete(
    family: HermitianOperatorFamily, lam: float, n: int, m: int, delta: float
) -> OffDiagReport:
    pairs = solve_modes(family, lam, [n, m])
    psi_n, psi_m = pairs[n].vector, pairs[m].vector
    dpsi_m = eigenvector_derivative(family, lam, m, delta, center=pairs[m])
    formal = family.formal_derivative(lam)
    derivative = total_matrix_derivative(family, lam, delta)

    lhs = (pairs[m].energy - pairs[n].energy) * complex(np.vdot(psi_n, dpsi_m))
    expectation = formal.sandwich(psi_n, psi_m)
    delta_nm = (derivative - formal).sandwich(psi_n, psi_m)
    return OffDiagReport(
        model=family.model_id.value,
        route=Route.DISCRETE,
        lam=lam,
        n=n,
        m=m,
        lhs=lhs,
        expectation_formal=expectation,
        delta_nm=delta_nm,
        residual=abs(lhs - expectation - delta_nm),
        grid_size=family.dimension,
        fd_step=delta,
    )


def off_diagonal_form(
    family_or_model: Union[HermitianOperatorFamily, RotorModel],
    lam: float,
    n: int,
    m: int,
    delta: Optional[float] = None,
) -> OffDiagReport:
    """(E_m − E_n)⟨Ψ_n|∂_λΨ_m⟩ = ⟨Ψ_n|∂H/∂λ Ψ_m⟩ + Δ_nm for n ≠ m."""
    if n == m:
        raise ParameterError("the off-diagonal form needs n != m")
    model_id = family_or_model.model_id
    check_degeneracy_guard(model_id, lam, n)
    check_degeneracy_guard(model_id, lam, m)
    if isinstance(family_or_model, RotorModel):
        return _off_diagonal_analytic(family_or_model, lam, n, m)
    return _off_diagonal_discrete(family_or_model, lam, n, m, _resolve_step(delta))
