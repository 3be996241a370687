"""
Report models for the three forms of the Hellmann-Feynman identity
"""
from enum import Enum as PyEnum
from typing import ClassVar, Optional

from pydantic import BaseModel, ConfigDict, model_validator


class Route(str, PyEnum):
    DISCRETE = "discrete"
    ANALYTIC = "analytic"


class _Report(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    # fields carrying an energy scale; multiplied by ħ²/m on output
    ENERGY_FIELDS: ClassVar[tuple] = ()
    # residual_relative = residual / max(1, |reference|), fixed at construction in ħ = m = 1
    RESIDUAL_FIELD: ClassVar[Optional[str]] = None
    REFERENCE_FIELD: ClassVar[Optional[str]] = None

    @model_validator(mode="before")
    @classmethod
    def _fill_relative_residual(cls, data):
        if cls.RESIDUAL_FIELD is None or not isinstance(data, dict) or data.get("residual_relative") is not None:
            return data
        residual = data.get(cls.RESIDUAL_FIELD)
        reference = data.get(cls.REFERENCE_FIELD)
        if residual is None or reference is None:
            return data
        return {**data, "residual_relative": float(residual) / max(1.0, abs(reference))}

    def scaled(self, factor: float):
        """Copy with every energy-valued field multiplied by `factor` (ħ²/m)."""
        if factor == 1.0:
            return self
        update = {}
        for name in self.ENERGY_FIELDS:
            value = getattr(self, name)
            if value is not None:
                update[name] = value * factor
        return self.model_copy(update=update)

    def passes(self, tolerance: float) -> bool:
        return self.residual_relative <= tolerance


class HFReport(_Report):
    model: str
    lam: float
    n: int
    energy: float
    dE_dlambda: float
    expectation_formal: float
    delta_matrix_route: float
    delta_boundary_route: Optional[float] = None
    residual_generalized: float
    residual_naive: float
    residual_relative: Optional[float] = None
    grid_size: int
    fd_step: float

    ENERGY_FIELDS = (
        "energy",
        "dE_dlambda",
        "expectation_formal",
        "delta_matrix_route",
        "delta_boundary_route",
        "residual_generalized",
        "residual_naive",
    )
    RESIDUAL_FIELD = "residual_generalized"
    REFERENCE_FIELD = "dE_dlambda"


class IntegratedReport(_Report):
    model: str
    route: Route
    lambda1: float
    lambda2: float
    n: int
    lhs: complex
    matrix_term: complex
    delta_term: complex
    residual: float
    residual_relative: Optional[float] = None
    grid_size: Optional[int] = None

    ENERGY_FIELDS = ("lhs", "matrix_term", "delta_term", "residual")
    RESIDUAL_FIELD = "residual"
    REFERENCE_FIELD = "lhs"


class OffDiagReport(_Report):
    model: str
    route: Route
    lam: float
    n: int
    m: int
    lhs: complex
    expectation_formal: complex
    delta_nm: complex
    residual: float
    residual_relative: Optional[float] = None
    grid_size: Optional[int] = None
    fd_step: Optional[float] = None

    ENERGY_FIELDS = ("lhs", "expectation_formal", "delta_nm", "residual")
    RESIDUAL_FIELD = "residual"
    REFERENCE_FIELD = "lhs"


class ConvergenceRow(_Report):
    model: str
    lam: float
    n: int
    level: int
    grid_size: int
    h: float
    energy_error: float
    energy_order: Optional[float] = None
    delta_error: float
    delta_order: Optional[float] = None

    ENERGY_FIELDS = ("energy_error", "delta_error")
