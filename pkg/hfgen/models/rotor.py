"""
Closed-form reference data for the flux-threaded planar rotor.

Gauge "a" carries the flux in the operator, −½(∂_θ − iε)² on periodic
functions. Gauge "b" carries it in the domain, −½∂²_θ on functions with
ψ(2π) = e^{−i2πε}ψ(0). Both have E_n(ε) = ½(n − ε)².
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from hfgen.core.errors import NumericalError, ParameterError
from hfgen.core.grid import TWO_PI
from hfgen.core.operators import ModelId

NORM = 1.0 / math.sqrt(TWO_PI)
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-13
QUAD_LIMIT = 200

GAUGES = {"a": ModelId.ROTOR_GAUGE_A, "b": ModelId.ROTOR_GAUGE_B}


def rotor_energy(n: int, epsilon: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    return 0.5 * (hbar ** 2 / mass) * (n - epsilon) ** 2


def rotor_anomaly_exact(n: int, epsilon: float, hbar: float = 1.0, mass: float = 1.0) -> float:
    """Δ_n(ε) = ε − n of the twisted-domain gauge."""
    return (hbar ** 2 / mass) * (epsilon - n)


@dataclass(frozen=True)
class ModeFunction:
    """(a + bθ)·e^{iqθ} on [0, 2π]."""
    a: complex
    b: complex
    q: float

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (self.a + self.b * theta) * np.exp(1j * self.q * theta)

    def covariant_derivative(self, shift: float = 0.0) -> "ModeFunction":
        """(∂_θ − i·shift) f."""
        k = 1j * (self.q - shift)
        return ModeFunction(self.b + k * self.a, k * self.b, self.q)

    def _check_same_wavenumber(self, other: "ModeFunction"):
        if self.q != other.q:
            raise ParameterError("mode functions with different wavenumbers cannot be added")

    def __add__(self, other: "ModeFunction") -> "ModeFunction":
        self._check_same_wavenumber(other)
        return ModeFunction(self.a + other.a, self.b + other.b, self.q)

    def __sub__(self, other: "ModeFunction") -> "ModeFunction":
        self._check_same_wavenumber(other)
        return ModeFunction(self.a - other.a, self.b - other.b, self.q)

    def __mul__(self, factor: complex) -> "ModeFunction":
        return ModeFunction(factor * self.a, factor * self.b, self.q)

    __rmul__ = __mul__


def inner_product(bra: ModeFunction, ket: ModeFunction) -> complex:
    """∫_0^{2π} conj(bra)·ket dθ by adaptive quadrature."""
    def integrand(theta):
        return np.conj(bra(theta)) * ket(theta)

    options = dict(epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    re, _ = integrate.quad(lambda t: float(integrand(t).real), 0.0, TWO_PI, **options)
    im, _ = integrate.quad(lambda t: float(integrand(t).imag), 0.0, TWO_PI, **options)
    return complex(re, im)


class RotorModel:
    """
    Analytic rotor in one gauge: eigenfunctions, their ε-derivatives and the
    formal operators, all as ModeFunction maps.
    """

    def __init__(self, gauge: str):
        if gauge not in GAUGES:
            raise ParameterError(f"unknown rotor gauge {gauge!r}; expected 'a' or 'b'")
        self.gauge = gauge
        self.model_id = GAUGES[gauge]

    def __repr__(self) -> str:
        return f"RotorModel(gauge={self.gauge!r})"

    def _shift(self, epsilon: float) -> float:
        return epsilon if self.gauge == "a" else 0.0

    def _wavenumber(self, n: int, epsilon: float) -> float:
        return float(n) if self.gauge == "a" else float(n - epsilon)

    def energy(self, n: int, epsilon: float) -> float:
        return rotor_energy(n, epsilon)

    def eigenfunction(self, n: int, epsilon: float) -> ModeFunction:
        return ModeFunction(NORM, 0.0, self._wavenumber(n, epsilon))

    def eigenfunction_derivative(self, n: int, epsilon: float, phase_offset: float = 0.0) -> ModeFunction:
        """∂_εΨ_n plus i·phase_offset·Ψ_n."""
        slope = 0.0 if self.gauge == "a" else -1j * NORM
        return ModeFunction(1j * phase_offset * NORM, slope, self._wavenumber(n, epsilon))

    def hamiltonian(self, epsilon: float, f: ModeFunction) -> ModeFunction:
        shift = self._shift(epsilon)
        return -0.5 * f.covariant_derivative(shift).covariant_derivative(shift)

    def formal_derivative(self, epsilon: float, f: ModeFunction) -> ModeFunction:
        """∂H/∂ε of the operator expression: i(∂_θ − iε) in gauge a, 0 in gauge b."""
        if self.gauge == "b":
            return 0.0 * f
        return 1j * f.covariant_derivative(epsilon)

    def boundary_anomaly(self, n: int, epsilon: float, phase_offset: float = 0.0) -> float:
        """
        ½{[(DΨ)*Φ]_0^{2π} − [Ψ* DΦ]_0^{2π}} with D = ∂_θ − iε (gauge a) or
        ∂_θ (gauge b) and Φ = ∂_εΨ_n, evaluated in closed form at the endpoints.
        """
        shift = self._shift(epsilon)
        psi = self.eigenfunction(n, epsilon)
        phi = self.eigenfunction_derivative(n, epsilon, phase_offset)
        d_psi = psi.covariant_derivative(shift)
        d_phi = phi.covariant_derivative(shift)

        def bracket(theta: float) -> complex:
            return complex(np.conj(d_psi(theta)) * phi(theta) - np.conj(psi(theta)) * d_phi(theta))

        value = 0.5 * (bracket(TWO_PI) - bracket(0.0))
        if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
            raise NumericalError(f"boundary term has imaginary part {value.imag:.3e}", lam=epsilon, n=n)
        return value.real


@dataclass(frozen=True)
class RotorReference:
    epsilon: float

    def energy(self, n: int) -> float:
        return rotor_energy(n, self.epsilon)

    def eigenfunction(self, n: int, theta, gauge: str = "b") -> np.ndarray:
        return RotorModel(gauge).eigenfunction(n, self.epsilon)(theta)

    def anomaly(self, n: int, gauge: str = "b") -> float:
        return rotor_anomaly_exact(n, self.epsilon) if gauge == "b" else 0.0


def rotor_boundary_anomaly(n: int, epsilon: float, gauge: str = "b", phase_offset: float = 0.0) -> float:
    return RotorModel(gauge).boundary_anomaly(n, epsilon, phase_offset)
