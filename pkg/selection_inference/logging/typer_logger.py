"""
Rich console logger for the command line
"""

import logging
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Callable, Dict, Iterator, Optional

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table
from rich.text import Text

from .base import BaseLogger, LogConfig

LEVEL_STYLES = {
    "DEBUG": "dim",
    "INFO": "blue",
    "WARNING": "yellow",
    "ERROR": "red",
}


class TyperLogger(BaseLogger):
    """Logger with rich formatting and spinners

    Writes to stderr so stdout carries only command output.
    """

    def __init__(self, name: str, config: LogConfig, console: Optional[Console] = None):
        super().__init__(name, config)
        self.console = console or Console(stderr=True)
        self._spinner: Optional[Progress] = None

    def _format_message(self, message: str, level: str, context: Dict[str, Any]) -> Text:
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        text = Text()
        text.append(f"[{timestamp}] ", style="dim")
        text.append(f"[{level}] ", style=LEVEL_STYLES.get(level, "white"))
        text.append(message)
        for key, value in context.items():
            text.append(f"\n  {key}: {value}", style="dim")
        return text

    def _stop_spinner(self) -> None:
        if self._spinner:
            self._spinner.stop()
            self._spinner = None

    def _emit(self, level: int, message: str, context: Dict[str, Any]) -> None:
        if level < self.config.numeric_level:
            return
        self._stop_spinner()
        self.console.print(self._format_message(message, logging.getLevelName(level), context))

    def debug(self, message: str, **context: Any) -> None:
        self._emit(logging.DEBUG, message, context)

    def info(self, message: str, **context: Any) -> None:
        self._emit(logging.INFO, message, context)

    def warning(self, message: str, **context: Any) -> None:
        self._emit(logging.WARNING, message, context)

    def error(self, message: str, **context: Any) -> None:
        self._emit(logging.ERROR, message, context)

    def start_task(self, message: str) -> None:
        self._stop_spinner()
        self._spinner = Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=self.console,
            transient=True,
        )
        self._spinner.add_task(message, total=None)
        self._spinner.start()

    def end_task(self, message: str, success: bool = True) -> None:
        self._stop_spinner()
        status, color = ("✓", "green") if success else ("✗", "red")
        self.console.print(f"{status} {message}", style=color)

    def show_table(self, title: str, rows: Dict[str, Any]) -> None:
        table = Table(title=title, show_header=True, header_style="bold magenta")
        table.add_column("Key", style="cyan")
        table.add_column("Value", style="white")
        for key, value in rows.items():
            table.add_row(str(key), str(value))
        self.console.print(table)

    @contextmanager
    def show_progress(self, total: int, description: str = "Trials") -> Iterator[Callable[[], None]]:
        self._stop_spinner()
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=self.console,
            transient=True,
        ) as progress:
            task = progress.add_task(description, total=total)
            yield lambda: progress.update(task, advance=1)
