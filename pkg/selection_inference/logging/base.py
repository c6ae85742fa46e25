"""
Logger interface shared by the experiment drivers and the CLI
"""

import logging
from abc import ABC, abstractmethod
from contextlib import AbstractContextManager
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from pydantic import BaseModel, Field, field_validator

Advance = Callable[[], None]


class LogConfig(BaseModel):
    """Where experiment logs go and how they look

    `file_path` receives one JSON object per record when `file_logging` is
    on; the console gets the human-readable format.
    """

    level: str = "INFO"
    file_path: Optional[Path] = None
    rotation_size_mb: int = Field(default=10, ge=1)
    backup_count: int = Field(default=5, ge=0)
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    console_logging: bool = True
    file_logging: bool = False
    use_colors: bool = True
    show_separators: bool = False

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"Unknown log level: {v}")
        return level

    @property
    def numeric_level(self) -> int:
        return logging.getLevelName(self.level)


class BaseLogger(ABC):
    """Sink for run progress, per-trial failures and result summaries

    Every message method takes structured keyword context (SNR, trial,
    diagnostics of a failed trial, ...) that implementations render or
    serialize alongside the message.
    """

    def __init__(self, name: str, config: LogConfig):
        self.name = name
        self.config = config

    @abstractmethod
    def debug(self, message: str, **context: Any) -> None: ...

    @abstractmethod
    def info(self, message: str, **context: Any) -> None: ...

    @abstractmethod
    def warning(self, message: str, **context: Any) -> None:
        """Used for trials that fail numerically and are counted, not raised"""

    @abstractmethod
    def error(self, message: str, **context: Any) -> None: ...

    @abstractmethod
    def start_task(self, message: str) -> None:
        """Mark the start of a long-running command step"""

    @abstractmethod
    def end_task(self, message: str, success: bool = True) -> None: ...

    @abstractmethod
    def show_table(self, title: str, rows: Dict[str, Any]) -> None:
        """Summarize a result table, one key/value pair per row (e.g. coverage per SNR)"""

    @abstractmethod
    def show_progress(self, total: int, description: str = "Trials") -> AbstractContextManager[Advance]:
        """
        Track completion of `total` trials or replications

        Returns:
            Context manager yielding an `advance()` callable, called once per
            finished unit
        """
