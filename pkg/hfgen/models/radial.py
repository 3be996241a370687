"""
Closed-form reference data for the two-dimensional delta interaction,
written as the s-wave radial operator with a logarithmic condition at r = 0.
"""
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from hfgen.core.errors import GridError, NumericalError, ParameterError
from hfgen.core.grid import Grid, GridKind
from hfgen.models.bessel import EULER_GAMMA, bessel_k0, bessel_k1

SQRT_PI = math.sqrt(math.pi)
# b in f ~ a(log(αr) + b) for the K₀ profile
K0_MATCHING_CONSTANT = EULER_GAMMA - math.log(2.0)
BOUNDARY_X_LOW = 1e-8
BOUNDARY_X_HIGH = 60.0
LOG_SAMPLE_RADII = (1e-9, 1e-8)


def _check_alpha(alpha: float):
    if not alpha > 0.0:
        raise ParameterError(f"alpha must be positive, got {alpha!r}")


def radial_ground_state(alpha: float, r):
    """Ψ₀(α, r) = (α/√π)·K₀(αr), normalized in L²(ℝ², d²r)."""
    _check_alpha(alpha)
    return (alpha / SQRT_PI) * bessel_k0(alpha * np.asarray(r, dtype=float))


def radial_ground_state_slope(alpha: float, r):
    """∂Ψ₀/∂r = −(α²/√π)·K₁(αr)."""
    _check_alpha(alpha)
    return -(alpha * alpha / SQRT_PI) * bessel_k1(alpha * np.asarray(r, dtype=float))


def radial_ground_state_alpha_derivative(alpha: float, r):
    """∂_αΨ₀ = (1/√π)(K₀(αr) + αr·K₀′(αr)) with K₀′ = −K₁."""
    _check_alpha(alpha)
    x = alpha * np.asarray(r, dtype=float)
    return (bessel_k0(x) - x * bessel_k1(x)) / SQRT_PI


def radial_energy_exact(alpha: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    """E₀ = −ħ²α²/2m."""
    return -0.5 * (hbar ** 2 / mass) * alpha * alpha


def radial_energy_derivative_exact(alpha: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    return -(hbar ** 2 / mass) * alpha


def radial_anomaly_exact(alpha: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    """Δ₀ = −ħ²α/m."""
    return -(hbar ** 2 / mass) * alpha


def radial_boundary_bracket(alpha: float, r: float, phase_offset: float = 0.0) -> complex:
    """
    π·r·(Ψ Φ′ − Ψ′ Φ) at radius r, where Φ = ∂_αΨ₀ + i·phase_offset·Ψ₀.

    With Φ′ = (α/√π)(αr·K₀ − K₁) this is α·(αr)²(K₀² − K₁²) for the real part.
    """
    x = alpha * r
    k0 = bessel_k0(x)
    k1 = bessel_k1(x)
    psi = (alpha / SQRT_PI) * k0
    d_psi = -(alpha * alpha / SQRT_PI) * k1
    phi = (k0 - x * k1) / SQRT_PI + 1j * phase_offset * psi
    d_phi = (alpha / SQRT_PI) * (x * k0 - k1) + 1j * phase_offset * d_psi
    return complex(math.pi * r * (psi * d_phi - d_psi * phi))


def radial_boundary_anomaly(alpha: float, phase_offset: float = 0.0) -> float:
    """
    Δ₀ = −π[r(Ψ Φ′ − Ψ′ Φ)]_0^∞ evaluated at αr = 1e-8 and αr = 60, where
    the small-argument logarithm and the exponential tail have taken over.
    """
    _check_alpha(alpha)
    value = radial_boundary_bracket(alpha, BOUNDARY_X_LOW / alpha, phase_offset)
    value -= radial_boundary_bracket(alpha, BOUNDARY_X_HIGH / alpha, phase_offset)
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise NumericalError(f"radial boundary term has imaginary part {value.imag:.3e}", lam=alpha, n=0)
    return value.real


def dilation_relation_residual(alpha: float, grid: Grid, amplitude: float = 1.0) -> float:
    """
    max |∂_αΨ − (1/α)(1 + r∂_r)Ψ| over the interior grid points, for Ψ = amplitude·Ψ₀.
    """
    _check_alpha(alpha)
    if grid.kind is not GridKind.RADIAL:
        raise GridError("dilation relation needs a radial grid")
    r = grid.points[1:-1]
    lhs = amplitude * radial_ground_state_alpha_derivative(alpha, r)
    psi = amplitude * radial_ground_state(alpha, r)
    slope = amplitude * radial_ground_state_slope(alpha, r)
    rhs = (psi + r * slope) / alpha
    return float(np.max(np.abs(lhs - rhs)))


def beta_from_kappa(kappa: float, alpha0: float = 1.0) -> float:
    """1/β = b + log(κ/α₀) with b = γ_E − log 2 for the K₀-compatible member."""
    _check_alpha(kappa)
    _check_alpha(alpha0)
    inverse = K0_MATCHING_CONSTANT + math.log(kappa / alpha0)
    if inverse == 0.0:
        raise ParameterError("beta is infinite at this subtraction point")
    return 1.0 / inverse


def kappa_from_beta(beta: float, alpha0: float = 1.0) -> float:
    if beta == 0.0:
        raise ParameterError("beta = 0 admits no bound state")
    _check_alpha(alpha0)
    return alpha0 * math.exp(1.0 / beta - K0_MATCHING_CONSTANT)


def dilated_beta(beta: float) -> float:
    """Domain parameter reached by acting with the dilation generator: β/(β+1)."""
    if beta == -1.0:
        raise ParameterError("beta = -1 is mapped to infinity")
    return beta / (beta + 1.0)


def log_boundary_coefficients(
    profile: Callable[[np.ndarray], np.ndarray],
    alpha0: float = 1.0,
    radii: Tuple[float, float] = LOG_SAMPLE_RADII,
) -> Tuple[float, float]:
    """
    (c0, c1) of f(r) ≈ c0·log(α₀r) + c1 as r → 0, read off from two small radii.
    """
    r1, r2 = radii
    if not 0.0 < r1 < r2:
        raise ParameterError("sample radii must satisfy 0 < r1 < r2")
    f1, f2 = (float(v) for v in profile(np.array([r1, r2])))
    c0 = (f2 - f1) / math.log(r2 / r1)
    c1 = f1 - c0 * math.log(alpha0 * r1)
    return c0, c1


@dataclass(frozen=True)
class RadialReference:
    alpha: float

    def __post_init__(self):
        _check_alpha(self.alpha)

    def energy(self, hbar: float = 1.0, mass: float = 1.0) -> float:
        return radial_energy_exact(self.alpha, hbar, mass)

    def wavefunction(self, r):
        return radial_ground_state(self.alpha, r)

    def alpha_derivative(self, r):
        return radial_ground_state_alpha_derivative(self.alpha, r)

    def anomaly(self, hbar: float = 1.0, mass: float = 1.0) -> float:
        return radial_anomaly_exact(self.alpha, hbar, mass)

    def beta(self, alpha0: float = 1.0) -> float:
        return beta_from_kappa(self.alpha, alpha0)
