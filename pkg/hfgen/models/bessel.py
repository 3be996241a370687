"""
Modified Bessel functions K0, K1, I0, I1 of real positive argument.

Small arguments (x <= 2) use the power series around the origin. Larger
arguments use the integral representation

    K_nu(x) = ∫_0^∞ exp(-x cosh t) cosh(nu t) dt

with the trapezoidal rule, which converges exponentially for this integrand.
"""
import math
import warnings

import numpy as np

from hfgen.core.errors import ParameterError

EULER_GAMMA = 0.57721566490153286061
SERIES_SWITCH = 2.0
UNDERFLOW_LIMIT = 700.0
TRAPEZOID_STEP = 0.1
# above this argument the step shrinks like 1/sqrt(x) to resolve the peak width
TRAPEZOID_SCALE_X = 10.0
# e^{-50} relative to the peak of the scaled integrand
TAIL_EXPONENT = 50.0
MAX_TERMS = 400


class BesselUnderflowWarning(RuntimeWarning):
    """K_nu(x) underflowed and was returned as 0."""


def _prepare(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ParameterError("Bessel functions are defined here for finite x > 0 only")
    return arr


def _finish(x, values):
    if np.ndim(x) == 0:
        return float(values)
    return values


def _series(quarter_sq: np.ndarray, first_term: np.ndarray, ratio, harmonic=None):
    """
    Sum Σ_k t_k (optionally weighted by harmonic-type coefficients) where
    t_{k+1} = t_k · quarter_sq · ratio(k).
    """
    term = first_term.copy()
    total = term * (harmonic(0) if harmonic else 1.0)
    for k in range(1, MAX_TERMS):
        term = term * quarter_sq * ratio(k)
        contribution = term * (harmonic(k) if harmonic else 1.0)
        total = total + contribution
        if np.all(np.abs(contribution) <= 1e-17 * np.abs(total)):
            break
    return total


def _harmonic(k: int) -> float:
    return math.fsum(1.0 / j for j in range(1, k + 1))


def _i0_series(x: np.ndarray) -> np.ndarray:
    q = 0.25 * x * x
    return _series(q, np.ones_like(x), lambda k: 1.0 / (k * k))


def _i1_series(x: np.ndarray) -> np.ndarray:
    q = 0.25 * x * x
    return _series(q, 0.5 * x, lambda k: 1.0 / (k * (k + 1)))


def _k0_series(x: np.ndarray) -> np.ndarray:
    q = 0.25 * x * x
    tail = _series(q, np.ones_like(x), lambda k: 1.0 / (k * k), harmonic=_harmonic)
    return -(np.log(0.5 * x) + EULER_GAMMA) * _i0_series(x) + tail


def _k1_series(x: np.ndarray) -> np.ndarray:
    q = 0.25 * x * x
    tail = _series(
        q,
        np.ones_like(x),
        lambda k: 1.0 / (k * (k + 1)),
        harmonic=lambda k: _harmonic(k) + _harmonic(k + 1) - 2.0 * EULER_GAMMA,
    )
    return 1.0 / x + np.log(0.5 * x) * _i1_series(x) - 0.25 * x * tail


def _k_integral(x: np.ndarray, order: int) -> np.ndarray:
    step = TRAPEZOID_STEP * min(1.0, math.sqrt(TRAPEZOID_SCALE_X / float(np.max(x))))
    t_max = math.acosh(1.0 + TAIL_EXPONENT / float(np.min(x)))
    t = step * np.arange(int(math.ceil(t_max / step)) + 1)
    integrand = np.exp(-np.outer(x, np.cosh(t) - 1.0)) * np.cosh(order * t)
    weights = np.full(t.size, step)
    weights[0] *= 0.5
    return np.exp(-x) * (integrand @ weights)


def _bessel_k(x, order: int, series):
    arr = _prepare(x)
    flat = np.atleast_1d(arr).astype(float)
    out = np.zeros_like(flat)

    small = flat <= SERIES_SWITCH
    large = (flat > SERIES_SWITCH) & (flat <= UNDERFLOW_LIMIT)
    huge = flat > UNDERFLOW_LIMIT
    if np.any(small):
        out[small] = series(flat[small])
    if np.any(large):
        out[large] = _k_integral(flat[large], order)
    if np.any(huge):
        warnings.warn(
            f"K{order}(x) underflows for x > {UNDERFLOW_LIMIT:g}; returning 0",
            BesselUnderflowWarning,
            stacklevel=3,
        )
    return _finish(x, out.reshape(arr.shape) if arr.ndim else out[0])


def bessel_k0(x):
    return _bessel_k(x, 0, _k0_series)


def bessel_k1(x):
    return _bessel_k(x, 1, _k1_series)


def bessel_i0(x):
    arr = _prepare(x)
    out = _i0_series(np.atleast_1d(arr))
    return _finish(x, out.reshape(arr.shape) if arr.ndim else out[0])


def bessel_i1(x):
    arr = _prepare(x)
    out = _i1_series(np.atleast_1d(arr))
    return _finish(x, out.reshape(arr.shape) if arr.ndim else out[0])
