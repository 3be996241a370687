"""
Hermitian eigensolver, mode labelling and phase alignment.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Union

import numpy as np
from scipy import linalg

from hfgen.config import get_settings
from hfgen.core.errors import (
    DegeneracyError,
    EigensolverError,
    ModeTrackingError,
    ParameterError,
    PhaseAlignmentError,
)
from hfgen.core.grid import TWO_PI
from hfgen.core.operators import HermitianMatrix, HermitianOperatorFamily, ModelId

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
# below this angle a phase rotation is a rounding artefact and is skipped
PHASE_SNAP = 1e-12
MIN_FD_STEP = 1e-7
MAX_FD_STEP = 1e-2
INVERSE_ITERATIONS = 3


@dataclass(frozen=True, eq=False)
class EigenPair:
    mode_index: int
    energy: float
    vector: np.ndarray = field(repr=False)
    lam: Optional[float] = None
    residual: float = 0.0


def _dense_pairs(dense: np.ndarray, count: Optional[int]) -> List[EigenPair]:
    n = dense.shape[0]
    subset = None if count is None or count >= n else [0, count - 1]
    try:
        energies, vectors = linalg.eigh(dense, subset_by_index=subset)
    except linalg.LinAlgError as e:
        raise EigensolverError(f"dense eigensolver failed: {e}")
    return [EigenPair(k, float(energies[k]), vectors[:, k]) for k in range(energies.size)]


def _check_dense_residuals(matrix: HermitianMatrix, pairs: List[EigenPair]) -> List[EigenPair]:
    diagonal, upper, corner = matrix.unit_band()
    norm = float(np.max(np.abs(diagonal)) + 2.0 * np.max(np.abs(upper), initial=0.0) + abs(corner))
    checked = []
    for pair in pairs:
        residual = float(np.linalg.norm(matrix.apply(pair.vector) - pair.energy * pair.vector))
        bound = 1e-9 * max(1.0, abs(pair.energy)) + 64.0 * EPS * norm
        if residual > bound:
            raise EigensolverError(
                f"eigenpair residual {residual:.3e} exceeds {bound:.3e}", n=pair.mode_index
            )
        checked.append(replace(pair, residual=residual))
    return checked


def _refine_pencil_pair(matrix: HermitianMatrix, energy: float, vector: np.ndarray, index: int) -> EigenPair:
    """Inverse iteration on (S − σW) followed by a Rayleigh quotient on the pencil."""
    weights = matrix.weights
    diagonal = matrix.diagonal
    off = matrix.upper.real
    f = np.real(vector) / np.sqrt(weights)
    sigma = energy - 1e-10 * max(1.0, abs(energy))

    banded = np.zeros((3, diagonal.size))
    banded[0, 1:] = off
    banded[2, :-1] = off
    for _ in range(INVERSE_ITERATIONS):
        banded[1] = diagonal - sigma * weights
        try:
            f = linalg.solve_banded((1, 1), banded, weights * f)
        except (linalg.LinAlgError, ValueError) as e:
            raise EigensolverError(f"inverse iteration failed: {e}", n=index)
        f = f / math.sqrt(np.sum(weights * f * f))
        energy = matrix.rayleigh_quotient(np.sqrt(weights) * f)
        sigma = energy - 1e-10 * max(1.0, abs(energy))

    pencil_residual = matrix.stiffness_apply(f).real - energy * weights * f
    scale = (np.max(np.abs(diagonal)) + 2.0 * np.max(np.abs(off))) * np.max(np.abs(f))
    scale += abs(energy) * np.max(weights * np.abs(f))
    residual = float(np.max(np.abs(pencil_residual)) / scale)
    if residual > 1e-9:
        raise EigensolverError(f"pencil backward error {residual:.3e} exceeds 1e-9", n=index)
    vector = np.sqrt(weights) * f
    return EigenPair(index, float(energy), vector / np.linalg.norm(vector), residual=residual)


def _graded_pairs(matrix: HermitianMatrix, count: Optional[int]) -> List[EigenPair]:
    if matrix.corner != 0 or np.any(matrix.upper.imag):
        raise EigensolverError("weighted matrices must be real tridiagonal")
    n = matrix.dimension
    count = n if count is None else min(count, n)
    diagonal, upper, _ = matrix.unit_band()
    try:
        energies, vectors = linalg.eigh_tridiagonal(
            diagonal,
            upper.real,
            select="i",
            select_range=(0, count - 1),
            lapack_driver="stebz",
            tol=2.0 * np.finfo(float).tiny,
        )
    except linalg.LinAlgError as e:
        raise EigensolverError(f"tridiagonal eigensolver failed: {e}")
    pairs = [
        _refine_pencil_pair(matrix, float(energies[k]), vectors[:, k], k) for k in range(energies.size)
    ]
    pairs.sort(key=lambda pair: pair.energy)
    return [replace(pair, mode_index=k) for k, pair in enumerate(pairs)]


def eigh(matrix: Union[HermitianMatrix, np.ndarray], count: Optional[int] = None) -> List[EigenPair]:
    """
    Lowest `count` eigenpairs (all by default) in ascending energy.

    A HermitianMatrix is solved densely and its energies are recomputed with
    the cancellation-free Rayleigh quotient; a weighted (pencil) matrix goes
    through bisection plus inverse iteration because its unit-weight form is
    strongly graded.
    """
    if count is not None and count < 1:
        raise ParameterError(f"eigenpair count must be positive, got {count}")

    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ParameterError("eigh needs a square matrix")
        if not np.array_equal(matrix, matrix.conj().T):
            raise ParameterError("eigh needs an exactly Hermitian matrix")
        return _dense_pairs(matrix, count)

    if matrix.is_weighted:
        return _graded_pairs(matrix, count)

    pairs = _dense_pairs(matrix.to_dense(), count)
    pairs = [replace(pair, energy=matrix.rayleigh_quotient(pair.vector)) for pair in pairs]
    pairs.sort(key=lambda pair: pair.energy)
    pairs = [replace(pair, mode_index=k) for k, pair in enumerate(pairs)]
    return _check_dense_residuals(matrix, pairs)


def check_degeneracy_guard(model_id: ModelId, lam: float, n: int, guard: Optional[float] = None):
    """
    Rotor mode n crosses mode m at ε = (n+m)/2, i.e. on every half-integer
    except ε = n itself. The radial bound state never crosses.
    """
    if not ModelId(model_id).is_rotor:
        return
    guard = get_settings().DEGENERACY_GUARD if guard is None else guard
    nearest = round(2.0 * lam) / 2.0
    if abs(lam - nearest) < guard and nearest != n:
        raise DegeneracyError(
            f"within {guard:g} of the level crossing at {nearest:g}", lam=lam, n=n
        )


def required_count(model_id: ModelId, lam: float, n: int, dimension: int) -> int:
    """How many of the lowest eigenpairs must be computed to contain mode n."""
    if ModelId(model_id).is_rotor:
        count = 2 * int(math.ceil(abs(n - lam))) + 4
    else:
        count = n + 2
    return min(count, dimension)


def rotor_reference_mode(model_id: ModelId, n: int, lam: float, dimension: int) -> np.ndarray:
    """Sampled analytic eigenvector: e^{inθ} (gauge a) or e^{i(n−ε)θ} (gauge b)."""
    theta = TWO_PI * np.arange(dimension) / dimension
    wavenumber = n if ModelId(model_id) is ModelId.ROTOR_GAUGE_A else n - lam
    return np.exp(1j * wavenumber * theta) / math.sqrt(dimension)


def select_mode(pairs: List[EigenPair], model_id: ModelId, n: int, lam: float) -> EigenPair:
    """Pick the eigenpair carrying quantum number n at parameter λ."""
    model_id = ModelId(model_id)
    if not pairs:
        raise ModeTrackingError("no eigenpairs to select from", lam=lam, n=n)
    check_degeneracy_guard(model_id, lam, n)

    if model_id is ModelId.RADIAL_LOG:
        if n < 0 or n >= len(pairs):
            raise ModeTrackingError(f"radial state {n} not among the {len(pairs)} computed", lam=lam, n=n)
        pair = pairs[n]
        vector = pair.vector
        if np.sum(vector.real) < 0.0:
            vector = -vector
        return replace(pair, mode_index=n, lam=lam, vector=vector)

    reference = rotor_reference_mode(model_id, n, lam, pairs[0].vector.size)
    overlaps = [abs(np.vdot(reference, pair.vector)) for pair in pairs]
    best = int(np.argmax(overlaps))
    threshold = get_settings().MIN_MODE_OVERLAP
    if overlaps[best] < threshold:
        raise ModeTrackingError(
            f"best overlap {overlaps[best]:.3f} with the analytic mode is below {threshold}", lam=lam, n=n
        )
    vector = align_phase(reference, pairs[best].vector)
    return replace(pairs[best], mode_index=n, lam=lam, vector=vector)


def align_phase(reference: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Rotate target by a global phase so that ⟨reference|result⟩ is real and ≥ 0."""
    overlap = np.vdot(reference, target)
    magnitude = abs(overlap)
    norm = np.linalg.norm(reference) * np.linalg.norm(target)
    if magnitude <= get_settings().MIN_PHASE_OVERLAP * norm:
        raise PhaseAlignmentError(f"overlap {magnitude / norm:.3f} too small to fix the phase")
    if abs(np.angle(overlap)) <= PHASE_SNAP:
        return target
    return target * (np.conj(overlap) / magnitude)


def solve_mode(family: HermitianOperatorFamily, lam: float, n: int) -> EigenPair:
    """Eigenpair of M(λ) with quantum number n, phase-fixed."""
    count = required_count(family.model_id, lam, n, family.dimension)
    pairs = eigh(family.build(lam), count=count)
    return select_mode(pairs, family.model_id, n, lam)


def solve_modes(family: HermitianOperatorFamily, lam: float, modes: List[int]) -> dict:
    """Several modes from a single eigen-solve of M(λ)."""
    count = max(required_count(family.model_id, lam, n, family.dimension) for n in modes)
    pairs = eigh(family.build(lam), count=count)
    return {n: select_mode(pairs, family.model_id, n, lam) for n in modes}


def check_fd_step(delta: float):
    if not MIN_FD_STEP <= delta <= MAX_FD_STEP:
        raise ParameterError(f"differentiation step {delta!r} outside [{MIN_FD_STEP:g}, {MAX_FD_STEP:g}]")


def eigenvector_derivative(
    family: HermitianOperatorFamily,
    lam: float,
    n: int,
    delta: Optional[float] = None,
    center: Optional[EigenPair] = None,
) -> np.ndarray:
    """(ψ(λ+δ) − ψ(λ−δ))/(2δ) with both neighbours phase-aligned to ψ(λ)."""
    delta = get_settings().DEFAULT_FD_STEP if delta is None else delta
    check_fd_step(delta)
    center = solve_mode(family, lam, n) if center is None else center
    forward = align_phase(center.vector, solve_mode(family, lam + delta, n).vector)
    backward = align_phase(center.vector, solve_mode(family, lam - delta, n).vector)
    return (forward - backward) / (2.0 * delta)
