"""
Tests for the experiment and console loggers
"""

import io
import json
import logging
from pathlib import Path

import pydantic
import pytest
from rich.console import Console

from selection_inference.logging import DebugFormatter, InferenceLogger, LogConfig, StructuredLogRecord, TyperLogger


@pytest.fixture
def console_buffer() -> io.StringIO:
    """Buffer capturing rich console output"""
    return io.StringIO()


@pytest.fixture
def typer_logger(console_buffer: io.StringIO) -> TyperLogger:
    """Console logger writing to a buffer"""
    console = Console(file=console_buffer, force_terminal=False, width=120)
    return TyperLogger("test", LogConfig(level="INFO"), console=console)


def test_json_file_logging(temp_dir: Path):
    """Test structured context reaches the rotating JSON log"""
    path = temp_dir / "logs" / "run.jsonl"
    config = LogConfig(level="DEBUG", file_path=path, file_logging=True, console_logging=False)
    logger = InferenceLogger("test.json", config, experiment="coverage")
    logger.info("Coverage at SNR", snr=0.5, adjusted=0.9)
    logger.debug("progress", completed=1)
    for handler in logger.logger.handlers:
        handler.flush()

    lines = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
    assert [line["message"] for line in lines] == ["Coverage at SNR", "progress"]
    assert lines[0]["experiment"] == "coverage"
    assert lines[0]["context"] == {"snr": 0.5, "adjusted": 0.9}
    assert lines[0]["level"] == "INFO"
    assert lines[0]["logger"] == "test.json"


def test_level_filtering(temp_dir: Path):
    """Test messages below the configured level are dropped"""
    path = temp_dir / "run.jsonl"
    config = LogConfig(level="WARNING", file_path=path, file_logging=True, console_logging=False)
    logger = InferenceLogger("test.level", config)
    logger.info("hidden")
    logger.warning("Trial failed", trial=3)
    for handler in logger.logger.handlers:
        handler.flush()
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["context"] == {"trial": 3}


def test_progress_reports_every_tenth(temp_dir: Path):
    """Test progress is logged in tenths"""
    path = temp_dir / "run.jsonl"
    config = LogConfig(level="DEBUG", file_path=path, file_logging=True, console_logging=False)
    logger = InferenceLogger("test.progress", config)
    with logger.show_progress(100, "Trials") as advance:
        for _ in range(100):
            advance()
    for handler in logger.logger.handlers:
        handler.flush()
    assert len(path.read_text(encoding="utf-8").splitlines()) == 10


def test_debug_formatter_context():
    """Test context is appended below the message"""
    formatter = DebugFormatter("%(levelname)s %(message)s", use_colors=False)
    record = logging.LogRecord("test", logging.INFO, __file__, 0, "Loaded data", (), None)
    record.structured_data = StructuredLogRecord(logging.INFO, "Loaded data", context={"n": 442, "p": 10})
    formatted = formatter.format(record)
    assert formatted.splitlines() == ["INFO Loaded data", "  Context:", "    n: 442", "    p: 10"]


def test_typer_logger_levels(typer_logger: TyperLogger, console_buffer: io.StringIO):
    """Test debug output is suppressed at INFO"""
    typer_logger.debug("invisible")
    typer_logger.info("Loaded data", n=4)
    output = console_buffer.getvalue()
    assert "invisible" not in output
    assert "[INFO] Loaded data" in output
    assert "n: 4" in output


def test_typer_logger_table(typer_logger: TyperLogger, console_buffer: io.StringIO):
    """Test tables render keys and values"""
    typer_logger.show_table("Coverage", {"snr=1": "adjusted=0.900 z=0.610"})
    output = console_buffer.getvalue()
    assert "Coverage" in output
    assert "adjusted=0.900" in output


def test_typer_logger_progress(typer_logger: TyperLogger):
    """Test the progress context yields an advance callable"""
    with typer_logger.show_progress(3, "Bootstrap") as advance:
        for _ in range(3):
            advance()


def test_typer_logger_task(typer_logger: TyperLogger, console_buffer: io.StringIO):
    """Test task completion messages"""
    typer_logger.start_task("Running coverage experiment")
    typer_logger.end_task("Coverage table written", success=False)
    assert "✗ Coverage table written" in console_buffer.getvalue()


def test_log_config_level():
    """Test levels are normalized and unknown levels rejected"""
    assert LogConfig(level="debug").numeric_level == logging.DEBUG
    with pytest.raises(pydantic.ValidationError):
        LogConfig(level="chatty")
