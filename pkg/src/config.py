"""Centralized configuration for the NV holonomy simulator."""

from dataclasses import asdict, dataclass, replace
from functools import lru_cache

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


@dataclass(frozen=True)
class Tolerances:
    """Numerical contracts shared by every module. Values are absolute."""

    hermitian: float = 1e-12
    unitary: float = 1e-10
    norm: float = 1e-10
    closure: float = 1e-6
    stability_guard: float = 0.1
    frame_defect: float = 0.1
    eigenbasis_offdiag: float = 0.05
    extract_unitary: float = 1e-6
    dark_residual: float = 1e-12

    def merged(self, overrides: dict[str, float] | None) -> "Tolerances":
        """Return a copy with the non-null entries of ``overrides`` applied."""
        if not overrides:
            return self
        known = asdict(self)
        unknown = sorted(set(overrides) - set(known))
        if unknown:
            from src.utils.errors import ConfigurationError

            raise ConfigurationError(f"Unknown tolerance keys: {', '.join(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items() if v is not None})


class Config(BaseSettings):
    """Application configuration loaded from environment variables and ``.env``."""

    model_config = SettingsConfigDict(env_prefix="NVHOLO_", extra="ignore")

    # Application settings
    LOG_LEVEL: str = "INFO"
    SWEEP_WORKERS: int = 1

    # Numerical tolerances
    HERMITIAN_TOL: float = 1e-12
    UNITARY_TOL: float = 1e-10
    NORM_TOL: float = 1e-10
    CLOSURE_TOL: float = 1e-6
    STABILITY_GUARD: float = 0.1
    FRAME_DEFECT_LIMIT: float = 0.1
    EIGENBASIS_OFFDIAG_LIMIT: float = 0.05
    EXTRACT_UNITARY_TOL: float = 1e-6
    DARK_RESIDUAL_TOL: float = 1e-12

    # Grid defaults
    WINDOW_FACTOR: float = 8.0
    PATH_SAMPLES: int = 20001
    DEFAULT_STEPS: int = 48000

    def tolerances(self) -> Tolerances:
        return Tolerances(
            hermitian=self.HERMITIAN_TOL,
            unitary=self.UNITARY_TOL,
            norm=self.NORM_TOL,
            closure=self.CLOSURE_TOL,
            stability_guard=self.STABILITY_GUARD,
            frame_defect=self.FRAME_DEFECT_LIMIT,
            eigenbasis_offdiag=self.EIGENBASIS_OFFDIAG_LIMIT,
            extract_unitary=self.EXTRACT_UNITARY_TOL,
            dark_residual=self.DARK_RESIDUAL_TOL,
        )

    def validate_numerics(self) -> list[str]:
        """Validate tolerance and grid settings. Returns list of errors."""
        errors = []
        for name, value in self.tolerances().__dict__.items():
            if not value > 0:
                errors.append(f"tolerance {name} must be positive, got {value}")
        if self.WINDOW_FACTOR <= 0:
            errors.append("WINDOW_FACTOR must be positive")
        if self.PATH_SAMPLES < 3:
            errors.append("PATH_SAMPLES must be at least 3")
        if self.DEFAULT_STEPS < 2:
            errors.append("DEFAULT_STEPS must be at least 2")
        return errors

    def validate_runtime(self) -> list[str]:
        """Validate process-level settings. Returns list of errors."""
        errors = []
        if self.LOG_LEVEL.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            errors.append(f"LOG_LEVEL {self.LOG_LEVEL!r} is not a logging level")
        if self.SWEEP_WORKERS < 1:
            errors.append("SWEEP_WORKERS must be at least 1")
        return errors


@lru_cache
def get_config() -> Config:
    """Get singleton config instance."""
    return Config()


def default_tolerances() -> Tolerances:
    return get_config().tolerances()
