"""
Hermitian discretizations of the rotor and radial Hamiltonians.

Every family exposes the full matrix M(λ), the formal derivative of the bulk
operator expression, the λ-independent-closure "bulk" stencil and, where it is
known in closed form, the exact entrywise derivative dM/dλ.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from functools import partial
from typing import Callable, Optional, Tuple

import numpy as np

from hfgen.config import get_settings
from hfgen.core.errors import GridError, ParameterError
from hfgen.core.grid import (
    BoundaryCondition,
    Grid,
    GridKind,
    TWO_PI,
    periodic_grid,
)

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
LOG_TWO = math.log(2.0)


class ModelId(str, PyEnum):
    ROTOR_GAUGE_A = "rotor-gauge-a"
    ROTOR_GAUGE_B = "rotor-gauge-b"
    RADIAL_LOG = "radial-log"

    @property
    def is_rotor(self) -> bool:
        return self is not ModelId.RADIAL_LOG


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """
    Banded Hermitian matrix with an optional (0, N-1) wrap coupling.

    Only the diagonal, the first superdiagonal and the corner entry are
    stored; the lower triangle is always the conjugate of the stored entries.
    When `weights` is set the stored band is a stiffness matrix S of the
    pencil (S, W) and the represented matrix is M = W^{-1/2} S W^{-1/2}.
    """
    diagonal: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    corner: complex = 0j
    weights: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        diagonal = np.asarray(self.diagonal, dtype=float)
        upper = np.asarray(self.upper, dtype=complex)
        if upper.size != diagonal.size - 1:
            raise GridError("superdiagonal must have N-1 entries")
        object.__setattr__(self, "diagonal", diagonal)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "corner", complex(self.corner))
        if self.weights is not None:
            weights = np.asarray(self.weights, dtype=float)
            if weights.shape != diagonal.shape or np.any(weights <= 0.0):
                raise GridError("pencil weights must be positive, one per node")
            object.__setattr__(self, "weights", weights)

    @classmethod
    def zeros(cls, dimension: int, weights: Optional[np.ndarray] = None) -> "HermitianMatrix":
        return cls(np.zeros(dimension), np.zeros(dimension - 1, dtype=complex), 0j, weights)

    @property
    def dimension(self) -> int:
        return int(self.diagonal.size)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    @property
    def is_zero(self) -> bool:
        return not (np.any(self.diagonal) or np.any(self.upper) or self.corner)

    @property
    def scale(self) -> np.ndarray:
        """W^{-1/2} per node (ones for an unweighted matrix)."""
        if self.weights is None:
            return np.ones(self.dimension)
        return 1.0 / np.sqrt(self.weights)

    def unit_band(self) -> Tuple[np.ndarray, np.ndarray, complex]:
        """Diagonal, superdiagonal and corner of M itself."""
        if self.weights is None:
            return self.diagonal, self.upper, self.corner
        s = self.scale
        return self.diagonal * s * s, self.upper * (s[:-1] * s[1:]), self.corner * (s[0] * s[-1])

    def to_dense(self) -> np.ndarray:
        diagonal, upper, corner = self.unit_band()
        n = self.dimension
        dense = np.diag(diagonal.astype(complex))
        idx = np.arange(n - 1)
        dense[idx, idx + 1] = upper
        dense[idx + 1, idx] = np.conj(upper)
        if corner != 0 and n > 2:
            dense[0, n - 1] = corner
            dense[n - 1, 0] = np.conj(corner)
        return dense

    def amplitudes(self, vector: np.ndarray) -> np.ndarray:
        """Map a unit-weight vector v to pencil amplitudes f = W^{-1/2} v."""
        if self.weights is None:
            return np.asarray(vector)
        return np.asarray(vector) * self.scale

    def stiffness_apply(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f)
        out = self.diagonal * f
        out = out.astype(np.result_type(out, self.upper, f))
        out[:-1] += self.upper * f[1:]
        out[1:] += np.conj(self.upper) * f[:-1]
        if self.corner != 0 and self.dimension > 2:
            out[0] += self.corner * f[-1]
            out[-1] += np.conj(self.corner) * f[0]
        return out

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """M·v."""
        out = self.stiffness_apply(self.amplitudes(vector))
        if self.weights is None:
            return out
        return out * self.scale

    def sandwich(self, bra: np.ndarray, ket: np.ndarray) -> complex:
        """⟨bra|M ket⟩, evaluated on pencil amplitudes."""
        return complex(np.vdot(self.amplitudes(bra), self.stiffness_apply(self.amplitudes(ket))))

    def adjoint_sandwich(self, bra: np.ndarray, ket: np.ndarray) -> complex:
        """⟨M bra|ket⟩."""
        return complex(np.vdot(self.stiffness_apply(self.amplitudes(bra)), self.amplitudes(ket)))

    def rayleigh_quotient(self, vector: np.ndarray) -> float:
        """
        ⟨v|M|v⟩/⟨v|v⟩ written as row-sum plus coupling-difference terms.

        Each coupling a between nodes i, j contributes |a|·|f_i − u f_j|² with
        u = −a/|a|, so the O(1/h²) entries never cancel against each other.
        """
        f = self.amplitudes(vector)
        pairs_left = [np.arange(self.dimension - 1)]
        pairs_right = [np.arange(1, self.dimension)]
        couplings = [self.upper]
        if self.corner != 0 and self.dimension > 2:
            pairs_left.append(np.array([0]))
            pairs_right.append(np.array([self.dimension - 1]))
            couplings.append(np.array([self.corner]))
        left = np.concatenate(pairs_left)
        right = np.concatenate(pairs_right)
        coupling = np.concatenate(couplings)

        magnitude = np.abs(coupling)
        phase = np.zeros_like(coupling)
        nonzero = magnitude > 0.0
        phase[nonzero] = -coupling[nonzero] / magnitude[nonzero]

        row_sum = self.diagonal.copy()
        np.subtract.at(row_sum, left, magnitude)
        np.subtract.at(row_sum, right, magnitude)

        numerator = np.sum(row_sum * np.abs(f) ** 2)
        numerator += np.sum(magnitude * np.abs(f[left] - phase * f[right]) ** 2)
        return float(numerator / np.vdot(vector, vector).real)

    def max_asymmetry(self) -> float:
        dense = self.to_dense()
        return float(np.max(np.abs(dense - dense.conj().T)))

    def _check_compatible(self, other: "HermitianMatrix"):
        if self.dimension != other.dimension:
            raise GridError("matrix dimensions differ")
        if (self.weights is None) != (other.weights is None) or (
            self.weights is not None and not np.array_equal(self.weights, other.weights)
        ):
            raise GridError("matrices live on different pencil weights")

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        self._check_compatible(other)
        return HermitianMatrix(
            self.diagonal + other.diagonal,
            self.upper + other.upper,
            self.corner + other.corner,
            self.weights,
        )

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        self._check_compatible(other)
        return HermitianMatrix(
            self.diagonal - other.diagonal,
            self.upper - other.upper,
            self.corner - other.corner,
            self.weights,
        )

    def __mul__(self, factor: float) -> "HermitianMatrix":
        factor = float(factor)
        return HermitianMatrix(self.diagonal * factor, self.upper * factor, self.corner * factor, self.weights)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class HermitianOperatorFamily:
    """λ ↦ M(λ) together with the derivative data the HF checks need."""
    model_id: ModelId
    grid: Grid
    parameter: float
    build: Callable[[float], HermitianMatrix] = field(repr=False)
    formal_derivative: Callable[[float], HermitianMatrix] = field(repr=False)
    bulk: Callable[[float], HermitianMatrix] = field(repr=False)
    boundary: Callable[[float], Tuple[BoundaryCondition, ...]] = field(repr=False)
    analytic_derivative: Optional[Callable[[float], HermitianMatrix]] = field(default=None, repr=False)
    hbar: float = 1.0
    mass: float = 1.0

    @property
    def dimension(self) -> int:
        return self.grid.n_points

    @property
    def units(self) -> float:
        """ħ²/m, applied to reported energies at output time."""
        return self.hbar ** 2 / self.mass


# ---------------------------------------------------------------------------
# Rotor
# ---------------------------------------------------------------------------

def _rotor_gauge_a_matrix(grid: Grid, epsilon: float) -> HermitianMatrix:
    h = grid.step
    n = grid.n_points
    hop = np.exp(-1j * epsilon * h) / (2.0 * h * h)
    return HermitianMatrix(
        np.full(n, 1.0 / (h * h)),
        np.full(n - 1, -hop),
        -np.conj(hop),
    )


def _rotor_gauge_a_formal(grid: Grid, epsilon: float) -> HermitianMatrix:
    # i∂_θ + ε with the antisymmetric central stencil
    h = grid.step
    n = grid.n_points
    return HermitianMatrix(np.full(n, float(epsilon)), np.full(n - 1, 0.5j / h), -0.5j / h)


def _rotor_gauge_a_derivative(grid: Grid, epsilon: float) -> HermitianMatrix:
    h = grid.step
    n = grid.n_points
    hop = 1j * np.exp(-1j * epsilon * h) / (2.0 * h)
    return HermitianMatrix(np.zeros(n), np.full(n - 1, hop), np.conj(hop))


def _rotor_gauge_b_matrix(grid: Grid, epsilon: float) -> HermitianMatrix:
    h = grid.step
    n = grid.n_points
    coupling = 1.0 / (2.0 * h * h)
    return HermitianMatrix(
        np.full(n, 1.0 / (h * h)),
        np.full(n - 1, -coupling, dtype=complex),
        -coupling * np.exp(1j * TWO_PI * epsilon),
    )


def _rotor_gauge_b_derivative(grid: Grid, epsilon: float) -> HermitianMatrix:
    h = grid.step
    n = grid.n_points
    corner = -1j * math.pi * np.exp(1j * TWO_PI * epsilon) / (h * h)
    return HermitianMatrix(np.zeros(n), np.zeros(n - 1, dtype=complex), corner)


def _periodic_laplacian(grid: Grid, epsilon: float) -> HermitianMatrix:
    return _rotor_gauge_b_matrix(grid, 0.0)


def _zero_matrix(grid: Grid, epsilon: float, weights: Optional[np.ndarray] = None) -> HermitianMatrix:
    return HermitianMatrix.zeros(grid.n_points, weights)


def _untwisted_boundary(epsilon: float) -> Tuple[BoundaryCondition, ...]:
    return (BoundaryCondition.periodic(),)


def _twisted_boundary(epsilon: float) -> Tuple[BoundaryCondition, ...]:
    return (BoundaryCondition.twisted(TWO_PI * epsilon),)


def build_rotor_gauge_a(n_points: int, epsilon: float, hbar: float = 1.0, mass: float = 1.0) -> HermitianOperatorFamily:
    """Peierls-phased periodic Laplacian −½(∂_θ − iε)² on N sites."""
    grid = periodic_grid(n_points)
    return HermitianOperatorFamily(
        model_id=ModelId.ROTOR_GAUGE_A,
        grid=grid,
        parameter=float(epsilon),
        build=partial(_rotor_gauge_a_matrix, grid),
        formal_derivative=partial(_rotor_gauge_a_formal, grid),
        bulk=partial(_rotor_gauge_a_matrix, grid),
        boundary=_untwisted_boundary,
        analytic_derivative=partial(_rotor_gauge_a_derivative, grid),
        hbar=hbar,
        mass=mass,
    )


def build_rotor_gauge_b(n_points: int, epsilon: float, hbar: float = 1.0, mass: float = 1.0) -> HermitianOperatorFamily:
    """Plain Laplacian −½∂²_θ with the wrap coupling twisted by e^{i2πε}."""
    grid = periodic_grid(n_points)
    return HermitianOperatorFamily(
        model_id=ModelId.ROTOR_GAUGE_B,
        grid=grid,
        parameter=float(epsilon),
        build=partial(_rotor_gauge_b_matrix, grid),
        formal_derivative=partial(_zero_matrix, grid),
        bulk=partial(_periodic_laplacian, grid),
        boundary=_twisted_boundary,
        analytic_derivative=partial(_rotor_gauge_b_derivative, grid),
        hbar=hbar,
        mass=mass,
    )


def gauge_unitary(grid: Grid, epsilon: float) -> np.ndarray:
    """Diagonal of U = e^{−iεθ}; M_b(ε) = U M_a(ε) U†."""
    if grid.kind is not GridKind.PERIODIC_ANGLE:
        raise GridError("gauge transformation needs a periodic-angle grid")
    return np.exp(-1j * epsilon * grid.points)


# ---------------------------------------------------------------------------
# Radial
# ---------------------------------------------------------------------------

def log_matching_offset(kappa: float) -> float:
    """c in f ~ a(log r + c): log κ + γ_E − log 2 for the K₀ profile."""
    return math.log(kappa) + EULER_GAMMA - LOG_TWO


def _radial_layout(grid: Grid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = grid.log_points
    dx = np.diff(x)
    cell = np.empty(grid.n_points)
    cell[0] = 0.5 * dx[0]
    cell[1:-1] = 0.5 * (dx[:-1] + dx[1:])
    # the Dirichlet ghost node sits one step past r_max
    cell[-1] = dx[-1]
    weights = grid.points ** 2 * cell
    return x, dx, weights


def _radial_reflecting_stiffness(grid: Grid) -> HermitianMatrix:
    x, dx, weights = _radial_layout(grid)
    inv = 0.5 / dx
    diagonal = np.empty(grid.n_points)
    diagonal[0] = inv[0]
    diagonal[1:-1] = inv[:-1] + inv[1:]
    diagonal[-1] = 2.0 * inv[-1]
    return HermitianMatrix(diagonal, -inv.astype(complex), 0j, weights)


def _check_kappa(grid: Grid, kappa: float):
    if not kappa > 0.0:
        raise ParameterError(f"kappa must be positive, got {kappa!r}")
    settings = get_settings()
    product = kappa * grid.r_min
    # beyond RADIAL_KAPPA_RMIN_MAX the logarithmic layer near r_min is gone
    if product >= settings.RADIAL_KAPPA_RMIN_MAX:
        raise GridError(f"kappa*r_min = {product:.3g} leaves no logarithmic layer; lower r_min")
    if product > settings.RADIAL_KAPPA_RMIN_WARN:
        logger.warning("kappa*r_min = %.3g is not small; the log closure loses accuracy", product)


def _radial_matrix(grid: Grid, kappa: float) -> HermitianMatrix:
    _check_kappa(grid, kappa)
    reflecting = _radial_reflecting_stiffness(grid)
    diagonal = reflecting.diagonal.copy()
    diagonal[0] += 0.5 / (grid.log_points[0] + log_matching_offset(kappa))
    return HermitianMatrix(diagonal, reflecting.upper, 0j, reflecting.weights)


def _radial_bulk(grid: Grid, kappa: float) -> HermitianMatrix:
    return _radial_reflecting_stiffness(grid)


def _radial_formal(grid: Grid, kappa: float) -> HermitianMatrix:
    return HermitianMatrix.zeros(grid.n_points, _radial_layout(grid)[2])


def _radial_derivative(grid: Grid, kappa: float) -> HermitianMatrix:
    _check_kappa(grid, kappa)
    weights = _radial_layout(grid)[2]
    diagonal = np.zeros(grid.n_points)
    shift = grid.log_points[0] + log_matching_offset(kappa)
    diagonal[0] = -0.5 / (kappa * shift * shift)
    return HermitianMatrix(diagonal, np.zeros(grid.n_points - 1, dtype=complex), 0j, weights)


def _radial_boundary(kappa: float) -> Tuple[BoundaryCondition, ...]:
    return (BoundaryCondition.log_at_origin(kappa), BoundaryCondition.dirichlet())


def build_radial(grid: Grid, kappa: float, hbar: float = 1.0, mass: float = 1.0) -> HermitianOperatorFamily:
    """
    s-wave operator −½(d²/dr² + (1/r)d/dr) with the K₀-compatible
    logarithmic closure at r_min and Dirichlet data one step past r_max.

    The discretization is a finite-volume scheme in x = log r: the pencil
    (S, W) with W_j = r_j²·(cell width) is stored directly and the Hermitian
    unit-weight matrix is W^{-1/2} S W^{-1/2}.
    """
    if grid.kind is not GridKind.RADIAL:
        raise GridError("build_radial needs a radial grid")
    _check_kappa(grid, kappa)
    return HermitianOperatorFamily(
        model_id=ModelId.RADIAL_LOG,
        grid=grid,
        parameter=float(kappa),
        build=partial(_radial_matrix, grid),
        formal_derivative=partial(_radial_formal, grid),
        bulk=partial(_radial_bulk, grid),
        boundary=_radial_boundary,
        analytic_derivative=partial(_radial_derivative, grid),
        hbar=hbar,
        mass=mass,
    )


def radial_wavefunction(matrix: HermitianMatrix, vector: np.ndarray) -> np.ndarray:
    """Ψ(r_j) = v_j / sqrt(2π W_j), normalized so Σ 2π W_j Ψ_j² = 1."""
    if matrix.weights is None:
        raise GridError("radial wavefunctions need pencil weights")
    vector = np.asarray(vector)
    norm = math.sqrt(np.vdot(vector, vector).real)
    return (vector / norm) / np.sqrt(TWO_PI * matrix.weights)


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------

def total_matrix_derivative(
    family: HermitianOperatorFamily,
    lam: float,
    delta: Optional[float] = None,
    analytic: bool = True,
) -> HermitianMatrix:
    """
    Entrywise dM/dλ: the exact entry derivative when the family provides one,
    otherwise (M(λ+δ) − M(λ−δ))/(2δ).
    """
    if analytic and family.analytic_derivative is not None:
        return family.analytic_derivative(lam)
    step = get_settings().DEFAULT_FD_STEP if delta is None else delta
    if not step > 0.0:
        raise ParameterError(f"finite-difference step must be positive, got {step!r}")
    return (family.build(lam + step) - family.build(lam - step)) * (0.5 / step)
