"""
Logging for experiments and inference runs
"""

import json
import logging
import logging.handlers
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Iterator, Optional

import termcolor

from .base import BaseLogger, LogConfig
from .typer_logger import TyperLogger

SECTION_SEPARATOR = "=" * 80
INDENT = "  "
PROGRESS_STEPS = 10


class StructuredLogRecord:
    """Log message with the experiment it belongs to and structured context"""

    def __init__(
        self,
        level: int,
        msg: str,
        experiment: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        self.level = level
        self.msg = msg
        self.experiment = experiment
        self.context = context or {}
        self.timestamp = datetime.now(timezone.utc)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "timestamp": self.timestamp.isoformat(),
            "level": logging.getLevelName(self.level),
            "message": self.msg,
            "experiment": self.experiment,
            "context": self.context,
        }


class DebugFormatter(logging.Formatter):
    """Console formatter with colors and indented context"""

    COLORS = {
        "DEBUG": "dark_grey",
        "INFO": "white",
        "WARNING": "yellow",
        "ERROR": "red",
        "CRITICAL": "red",
    }

    def __init__(self, fmt: str, use_colors: bool = True, show_separators: bool = False):
        super().__init__(fmt)
        self.use_colors = use_colors
        self.show_separators = show_separators

    def format(self, record: logging.LogRecord) -> str:
        formatted = super().format(record)
        if self.use_colors:
            formatted = termcolor.colored(formatted, self.COLORS.get(record.levelname, "white"))

        structured = getattr(record, "structured_data", None)
        if structured is not None and structured.context:
            formatted += f"\n{INDENT}Context:"
            for key, value in structured.context.items():
                if isinstance(value, (dict, list)):
                    value = json.dumps(value, default=str)
                formatted += f"\n{INDENT}{INDENT}{key}: {value}"

        if self.show_separators:
            formatted = f"\n{SECTION_SEPARATOR}\n{formatted}\n{SECTION_SEPARATOR}\n"
        return formatted


class JsonFormatter(logging.Formatter):
    """One JSON object per log line"""

    def format(self, record: logging.LogRecord) -> str:
        structured = getattr(record, "structured_data", None)
        if structured is not None:
            data = structured.to_dict()
        else:
            data = {
                "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
                "level": record.levelname,
                "message": record.getMessage(),
            }
        data["logger"] = record.name
        if record.exc_info:
            data["exception"] = self.formatException(record.exc_info)
        return json.dumps(data, default=str)


class InferenceLogger(BaseLogger):
    """Logger on the standard logging module with console and rotating JSON file output"""

    def __init__(self, name: str, config: LogConfig, experiment: Optional[str] = None):
        super().__init__(name, config)
        self.experiment = experiment
        self.logger = logging.getLogger(name)
        self.logger.setLevel(config.numeric_level)
        self.logger.handlers.clear()
        self.logger.propagate = False

        if config.console_logging:
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(
                DebugFormatter(
                    config.format,
                    use_colors=config.use_colors,
                    show_separators=config.show_separators,
                )
            )
            self.logger.addHandler(console_handler)

        if config.file_logging and config.file_path:
            config.file_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                filename=str(config.file_path),
                maxBytes=config.rotation_size_mb * 1024 * 1024,
                backupCount=config.backup_count,
            )
            file_handler.setFormatter(JsonFormatter())
            self.logger.addHandler(file_handler)

    def log(self, level: int, msg: str, context: Optional[Dict[str, Any]] = None) -> None:
        """
        Log a structured message

        Args:
            level: Log level (e.g. logging.INFO)
            msg: Log message
            context: Optional structured context
        """
        if not self.logger.isEnabledFor(level):
            return
        record = self.logger.makeRecord(self.name, level, __file__, 0, msg, (), None)
        record.structured_data = StructuredLogRecord(level, msg, experiment=self.experiment, context=context)
        self.logger.handle(record)

    def debug(self, message: str, **context: Any) -> None:
        self.log(logging.DEBUG, message, context)

    def info(self, message: str, **context: Any) -> None:
        self.log(logging.INFO, message, context)

    def warning(self, message: str, **context: Any) -> None:
        self.log(logging.WARNING, message, context)

    def error(self, message: str, **context: Any) -> None:
        self.log(logging.ERROR, message, context)

    def start_task(self, message: str) -> None:
        self.info(message)

    def end_task(self, message: str, success: bool = True) -> None:
        self.log(logging.INFO if success else logging.ERROR, message, {"success": success})

    def show_table(self, title: str, rows: Dict[str, Any]) -> None:
        self.info(title, **rows)

    @contextmanager
    def show_progress(self, total: int, description: str = "Trials") -> Iterator[Callable[[], None]]:
        done = 0
        step = max(1, total // PROGRESS_STEPS)

        def advance() -> None:
            nonlocal done
            done += 1
            if done % step == 0 or done == total:
                self.debug(description, completed=done, total=total)

        yield advance


__all__ = [
    "BaseLogger",
    "LogConfig",
    "InferenceLogger",
    "TyperLogger",
    "StructuredLogRecord",
    "DebugFormatter",
    "JsonFormatter",
]
