"""
Grids and boundary conditions
"""
import math
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import Optional

import numpy as np

from hfgen.config import get_settings
from hfgen.core.errors import GridError, ParameterError

MIN_POINTS = 8
TWO_PI = 2.0 * math.pi


class GridKind(str, PyEnum):
    PERIODIC_ANGLE = "periodic-angle"
    RADIAL = "radial"


@dataclass(frozen=True, eq=False)
class Grid:
    """Ordered sample points plus the per-interval steps between them."""
    kind: GridKind
    points: np.ndarray = field(repr=False)
    spacing: np.ndarray = field(repr=False)

    @property
    def n_points(self) -> int:
        return int(self.points.size)

    @property
    def step(self) -> float:
        """Uniform angular step h = 2π/N of a periodic grid."""
        if self.kind is not GridKind.PERIODIC_ANGLE:
            raise GridError("only periodic-angle grids have a single step")
        return TWO_PI / self.n_points

    @property
    def r_min(self) -> float:
        return float(self.points[0])

    @property
    def r_max(self) -> float:
        return float(self.points[-1])

    @property
    def log_points(self) -> np.ndarray:
        return np.log(self.points)


def periodic_grid(n_points: int) -> Grid:
    """θ_j = 2πj/N on [0, 2π)."""
    if int(n_points) != n_points or n_points < MIN_POINTS:
        raise GridError(f"periodic grid needs an integer N >= {MIN_POINTS}, got {n_points}")
    n_points = int(n_points)
    h = TWO_PI / n_points
    points = h * np.arange(n_points)
    spacing = np.full(n_points, h)
    return Grid(GridKind.PERIODIC_ANGLE, points, spacing)


def radial_grid_from_points(points) -> Grid:
    points = np.asarray(points, dtype=float)
    if points.ndim != 1 or points.size < MIN_POINTS:
        raise GridError(f"radial grid needs at least {MIN_POINTS} points")
    if not np.all(np.isfinite(points)):
        raise GridError("radial grid points must be finite")
    if points[0] <= 0.0:
        raise GridError(f"radial grid must start at r_min > 0, got {points[0]!r}")
    spacing = np.diff(points)
    if np.any(spacing <= 0.0):
        raise GridError("radial grid must be strictly increasing")
    return Grid(GridKind.RADIAL, points, spacing)


def radial_grid(r_min: float, r_max: float, n_points: int, spacing: str = "log") -> Grid:
    """
    Radial grid on [r_min, r_max].

    Log spacing is built as exp(x_min + k·Δx) so the logarithmic steps are
    uniform to rounding.
    """
    if int(n_points) != n_points or n_points < MIN_POINTS:
        raise GridError(f"radial grid needs an integer N >= {MIN_POINTS}, got {n_points}")
    if not (0.0 < r_min < r_max) or not math.isfinite(r_max):
        raise GridError(f"radial grid needs 0 < r_min < r_max < inf, got [{r_min}, {r_max}]")
    n_points = int(n_points)
    if spacing == "log":
        x_min = math.log(r_min)
        dx = (math.log(r_max) - x_min) / (n_points - 1)
        points = np.exp(x_min + dx * np.arange(n_points))
    elif spacing == "uniform":
        points = np.linspace(r_min, r_max, n_points)
    else:
        raise GridError(f"unknown radial spacing {spacing!r}")
    return radial_grid_from_points(points)


def default_radial_grid(
    kappa: float,
    n_points: Optional[int] = None,
    r_min: Optional[float] = None,
    r_max: Optional[float] = None,
) -> Grid:
    """Log-spaced grid on [r_min, scale/κ] with the configured defaults."""
    if kappa <= 0.0:
        raise ParameterError(f"kappa must be positive, got {kappa!r}")
    settings = get_settings()
    n_points = settings.RADIAL_GRID_SIZE if n_points is None else n_points
    r_min = settings.RADIAL_R_MIN if r_min is None else r_min
    r_max = settings.RADIAL_R_MAX_SCALE / kappa if r_max is None else r_max
    return radial_grid(r_min, r_max, n_points, spacing="log")


class BoundaryKind(str, PyEnum):
    TWISTED_PERIODIC = "twisted-periodic"
    LOG_AT_ORIGIN = "log-at-origin"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class BoundaryCondition:
    variant: BoundaryKind
    twist_phase: float = 0.0
    kappa: Optional[float] = None

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.TWISTED_PERIODIC, 0.0)

    @classmethod
    def twisted(cls, phase: float) -> "BoundaryCondition":
        return cls(BoundaryKind.TWISTED_PERIODIC, float(np.mod(phase, TWO_PI)))

    @classmethod
    def log_at_origin(cls, kappa: float) -> "BoundaryCondition":
        if not kappa > 0.0:
            raise ParameterError(f"log-at-origin strength kappa must be positive, got {kappa!r}")
        return cls(BoundaryKind.LOG_AT_ORIGIN, kappa=float(kappa))

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.DIRICHLET)

    @property
    def is_periodic(self) -> bool:
        return self.variant is BoundaryKind.TWISTED_PERIODIC and self.twist_phase == 0.0

    @property
    def twist_factor(self) -> complex:
        return complex(np.exp(1j * self.twist_phase))
