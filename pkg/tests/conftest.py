"""
Shared test fixtures and configuration
"""

import tempfile
from pathlib import Path
from typing import Callable, Generator, Optional
from unittest.mock import MagicMock

import numpy as np
import pytest

from selection_inference.config import ExperimentConfig
from selection_inference.data import Dataset
from selection_inference.logging import BaseLogger


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator shared by a single test"""
    return np.random.default_rng(20240601)


@pytest.fixture
def orthogonal_data() -> Dataset:
    """Identity design with y = (3, -2, 1) and unit noise variance"""
    return Dataset(X=np.eye(3), y=np.array([3.0, -2.0, 1.0]), sigma2=1.0)


@pytest.fixture
def make_dataset() -> Callable[..., Dataset]:
    """Factory for random Gaussian datasets with unit-norm columns"""

    def factory(
        n: int,
        p: int,
        seed: int = 0,
        beta: Optional[np.ndarray] = None,
        sigma2: float = 1.0,
    ) -> Dataset:
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((n, p))
        X = X / np.linalg.norm(X, axis=0)
        mean = X @ beta if beta is not None else np.zeros(n)
        y = mean + np.sqrt(sigma2) * rng.standard_normal(n)
        return Dataset(X=X, y=y, sigma2=sigma2)

    return factory


@pytest.fixture
def small_config() -> ExperimentConfig:
    """Experiment settings small enough for unit tests"""
    return ExperimentConfig(
        n=10,
        p=20,
        k=2,
        snr_grid=[1.0, 5.0],
        trials=8,
        alpha_level=0.1,
        nominal_grid=[0.5, 0.9],
        seed=7,
    )


@pytest.fixture
def mock_logger() -> MagicMock:
    """Create a mock logger"""
    logger = MagicMock(spec=BaseLogger)
    logger.show_progress.return_value.__enter__.return_value = lambda: None
    return logger


@pytest.fixture
def orthogonal_csv(temp_dir: Path) -> Path:
    """CSV whose centered predictors are orthogonal: x1 = (1,-1,1,-1), x2 = (1,1,-1,-1)"""
    path = temp_dir / "toy.csv"
    path.write_text(
        "x1,x2,y\n1,1,3\n-1,1,-1\n1,-1,2\n-1,-1,0\n",
        encoding="utf-8",
    )
    return path
