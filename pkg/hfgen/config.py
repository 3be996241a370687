"""
Application Configuration
"""
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "hfgen"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Differentiation
    DEFAULT_FD_STEP: float = 1e-5
    RICHARDSON_LEVELS: int = 1

    # Mode tracking
    DEGENERACY_GUARD: float = 1e-3
    MIN_MODE_OVERLAP: float = 0.9
    MIN_PHASE_OVERLAP: float = 0.5

    # Grids
    ROTOR_GRID_SIZE: int = 2048
    RADIAL_GRID_SIZE: int = 4000
    RADIAL_R_MIN: float = 1e-6
    RADIAL_R_MAX_SCALE: float = 40.0
    RADIAL_KAPPA_RMIN_WARN: float = 0.01
    RADIAL_KAPPA_RMIN_MAX: float = 0.1

    # PASS thresholds
    PASS_TOL_ROTOR: float = 1e-4
    PASS_TOL_RADIAL: float = 1e-2
    PASS_TOL_INTEGRATED: float = 1e-10
    PASS_TOL_OFFDIAG: float = 1e-8

    # Convergence study
    CONVERGENCE_BASE_GRID: int = 64
    CONVERGENCE_LEVELS: int = 4

    # Output
    WORKERS: int = 1
    OUTPUT_DIR: str = "."
    CSV_SCHEMA_VERSION: int = 2

    class Config:
        env_file = ".env"
        case_sensitive = True

    @property
    def log_level_value(self) -> str:
        return self.LOG_LEVEL.strip().upper()


@lru_cache()
def get_settings() -> Settings:
    return Settings()
