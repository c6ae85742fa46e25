"""
Experiment and application configuration
"""

import os
import re
from pathlib import Path
from typing import Any, List, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator

from .errors import ValidationError
from .logging import LogConfig
from .selectors import Procedure

DEFAULT_SNR_GRID = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]
DEFAULT_NOMINAL_GRID = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99]
ENV_PATTERN = re.compile(r"\$\{([^}]+)\}")


class ExperimentConfig(BaseModel):
    """Settings shared by the experiment drivers

    The simulation design is n x p Gaussian with a 2-sparse signal
    (snr, snr, 0, ..., 0); `sigma2` defaults to 1 in simulations and to the
    full-model estimate for the bootstrap.
    """

    n: int = Field(default=20, ge=1)
    p: int = Field(default=200, ge=1)
    k: int = Field(default=2, ge=1)
    snr_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_SNR_GRID))
    trials: int = Field(default=500, ge=1)
    alpha_level: float = 0.1
    nominal_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_NOMINAL_GRID))
    seed: int = Field(default=0, ge=0)
    procedure: Procedure = Procedure.MS
    sigma2: Optional[float] = None
    lam: float = 1.0
    fixed_design: bool = False
    workers: int = Field(default=1, ge=1)
    response: str = "y"
    points: int = Field(default=61, ge=2)
    bound: float = 3.0

    @field_validator("snr_grid", "nominal_grid")
    @classmethod
    def validate_grid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("Grids must be nonempty")
        return v

    @field_validator("nominal_grid")
    @classmethod
    def validate_nominal(cls, v: List[float]) -> List[float]:
        if any(not 0.0 < level < 1.0 for level in v):
            raise ValueError("Nominal levels must lie in (0, 1)")
        return v

    @field_validator("alpha_level")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("alpha_level must lie in (0, 1)")
        return v

    @field_validator("sigma2")
    @classmethod
    def validate_sigma2(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 0:
            raise ValueError("sigma2 must be positive when supplied")
        return v

    @field_validator("lam", "bound")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("Must be positive")
        return v

    @model_validator(mode="after")
    def validate_sizes(self) -> "ExperimentConfig":
        if self.k > self.p:
            raise ValueError("k must not exceed p")
        return self

    @property
    def simulation_sigma2(self) -> float:
        return 1.0 if self.sigma2 is None else self.sigma2


class AppConfig(BaseModel):
    """Configuration for the command line application"""

    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)
    logging: LogConfig = Field(default_factory=LogConfig)
    data_path: Optional[Path] = None
    output_directory: Path = Path("results")

    @classmethod
    def from_yaml(cls, config_path: Union[str, Path]) -> "AppConfig":
        """Load configuration from a YAML file

        `${VAR}` references are replaced by environment variables, after
        loading a `.env` file if one is present.

        Args:
            config_path: Path to the YAML configuration file

        Returns:
            AppConfig instance with settings from the YAML file

        Raises:
            FileNotFoundError: If the config file doesn't exist
            ValidationError: If a referenced environment variable is not set
        """
        load_dotenv()
        with open(config_path) as f:
            config_dict = yaml.safe_load(f) or {}

        config_dict = _substitute_env(config_dict)
        if isinstance(config_dict.get("data_path"), str):
            config_dict["data_path"] = Path(config_dict["data_path"])
        if isinstance(config_dict.get("output_directory"), str):
            config_dict["output_directory"] = Path(config_dict["output_directory"])

        config_dict["experiment"] = ExperimentConfig(**(config_dict.get("experiment") or {}))
        config_dict["logging"] = LogConfig(**(config_dict.get("logging") or {}))
        return cls(**config_dict)


def _substitute_env(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _substitute_env(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_substitute_env(item) for item in value]
    if isinstance(value, str):

        def lookup(match: "re.Match[str]") -> str:
            name = match.group(1)
            if name not in os.environ:
                raise ValidationError(f"Environment variable {name} not found", diagnostics={"variable": name})
            return os.environ[name]

        return ENV_PATTERN.sub(lookup, value)
    return value
