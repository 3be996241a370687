"""
Experiment configuration model
"""
from enum import Enum as PyEnum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from hfgen.config import get_settings
from hfgen.core.eigensolver import check_degeneracy_guard
from hfgen.core.errors import DegeneracyError
from hfgen.core.grid import MIN_POINTS
from hfgen.core.operators import ModelId


class ExperimentModel(str, PyEnum):
    ROTOR_A = "rotor-a"
    ROTOR_B = "rotor-b"
    RADIAL = "radial"

    @property
    def model_id(self) -> ModelId:
        return {
            ExperimentModel.ROTOR_A: ModelId.ROTOR_GAUGE_A,
            ExperimentModel.ROTOR_B: ModelId.ROTOR_GAUGE_B,
            ExperimentModel.RADIAL: ModelId.RADIAL_LOG,
        }[self]

    @property
    def gauge(self) -> Optional[str]:
        return {ExperimentModel.ROTOR_A: "a", ExperimentModel.ROTOR_B: "b"}.get(self)


class Form(str, PyEnum):
    DIFFERENTIAL = "differential"
    INTEGRATED = "integrated"
    OFFDIAG = "offdiag"


FORM_ORDER = [Form.DIFFERENTIAL, Form.INTEGRATED, Form.OFFDIAG]


class Sweep(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    count: int = Field(ge=1)

    def points(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


def _settings_default(name: str):
    return lambda: getattr(get_settings(), name)


class ExperimentConfig(BaseModel):
    """One run of the CLI: model, parameter points, modes, forms and output."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: ExperimentModel
    parameter: Optional[float] = None
    sweep: Optional[Sweep] = None
    parameter2: Optional[float] = None
    modes: List[int] = Field(default_factory=lambda: [0])
    pairs: List[Tuple[int, int]] = Field(default_factory=lambda: [(0, 1)])
    grid_size: Optional[int] = None
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    fd_step: float = Field(default_factory=_settings_default("DEFAULT_FD_STEP"))
    forms: List[Form] = Field(default_factory=lambda: [Form.DIFFERENTIAL])
    analytic: bool = False
    hbar: float = Field(default=1.0, gt=0.0)
    mass: float = Field(default=1.0, gt=0.0)
    workers: int = Field(default_factory=_settings_default("WORKERS"), ge=1)
    levels: int = Field(default_factory=_settings_default("CONVERGENCE_LEVELS"), ge=3)
    tolerance: Optional[float] = Field(default=None, gt=0.0)
    output_path: str = "hfgen.csv"

    @field_validator("grid_size")
    @classmethod
    def _grid_size_large_enough(cls, value):
        if value is not None and value < MIN_POINTS:
            raise ValueError(f"grid_size must be >= {MIN_POINTS}")
        return value

    @field_validator("fd_step")
    @classmethod
    def _fd_step_in_range(cls, value):
        if not 1e-8 <= value <= 1e-1:
            raise ValueError("fd_step must lie in [1e-8, 1e-1]")
        return value

    @field_validator("forms")
    @classmethod
    def _forms_unique(cls, value):
        if not value:
            raise ValueError("at least one form is required")
        return [form for form in FORM_ORDER if form in value]

    @field_validator("pairs")
    @classmethod
    def _pairs_off_diagonal(cls, value):
        for n, m in value:
            if n == m:
                raise ValueError(f"off-diagonal pair ({n}, {m}) needs n != m")
        return value

    @model_validator(mode="after")
    def _check_parameters(self):
        if (self.parameter is None) == (self.sweep is None):
            raise ValueError("give exactly one of a parameter value or a sweep")
        points = self.points
        if Form.INTEGRATED in self.forms:
            if self.parameter2 is None:
                raise ValueError("the integrated form needs a second parameter value")
            if self.parameter2 in points:
                raise ValueError("the integrated form needs lambda1 != lambda2")
            points = points + [self.parameter2]
        if self.model is ExperimentModel.RADIAL:
            if any(p <= 0.0 for p in points):
                raise ValueError("kappa must be positive at every sweep point")
            if self.analytic:
                raise ValueError("the analytic route exists for the rotor only")
            if any(n != 0 for n in self.modes) and Form.DIFFERENTIAL in self.forms:
                raise ValueError("the radial model has a single bound state, n = 0")
        if self.model is not ExperimentModel.RADIAL:
            modes = set(self.modes)
            if Form.OFFDIAG in self.forms:
                modes.update(n for pair in self.pairs for n in pair)
            for lam in points:
                for n in sorted(modes):
                    try:
                        check_degeneracy_guard(self.model.model_id, lam, n)
                    except DegeneracyError as e:
                        raise ValueError(str(e))
        return self

    @property
    def points(self) -> List[float]:
        if self.sweep is not None:
            return self.sweep.points()
        return [float(self.parameter)]

    @property
    def resolved_grid_size(self) -> int:
        if self.grid_size is not None:
            return self.grid_size
        settings = get_settings()
        if self.model is ExperimentModel.RADIAL:
            return settings.RADIAL_GRID_SIZE
        return settings.ROTOR_GRID_SIZE

    @property
    def units(self) -> float:
        return self.hbar ** 2 / self.mass
