"""
Selection events {y : Ay <= b} assembled from row blocks
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import ValidationError
from .base import RowBlock

DEFAULT_CONTAINS_TOL = 1e-10
MAX_DUMP_ENTRIES = 1_000_000


@dataclass(frozen=True)
class SelectionEvent:
    """Polyhedral selection event, stored as a tuple of row blocks"""

    dimension: int
    blocks: Tuple[RowBlock, ...] = ()

    def __post_init__(self) -> None:
        for block in self.blocks:
            if block.dimension != self.dimension:
                raise ValidationError(
                    "Row block dimension does not match the event",
                    diagnostics={"event": self.dimension, "block": block.dimension},
                )

    @classmethod
    def of(cls, *blocks: RowBlock) -> "SelectionEvent":
        if not blocks:
            raise ValidationError("At least one row block is needed to infer the dimension")
        return cls(dimension=blocks[0].dimension, blocks=tuple(blocks))

    @classmethod
    def empty(cls, dimension: int) -> "SelectionEvent":
        return cls(dimension=dimension)

    @property
    def row_count(self) -> int:
        return sum(block.row_count for block in self.blocks)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """A v for all rows (v may be a vector or an n x q matrix)"""
        v = np.asarray(v, dtype=float)
        if not self.blocks:
            return np.zeros((0,) + v.shape[1:])
        return np.concatenate([block.apply(v) for block in self.blocks], axis=0)

    def offsets(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0)
        return np.concatenate([block.offsets() for block in self.blocks])

    def slack(self, y: np.ndarray) -> np.ndarray:
        """b - A y; nonnegative on the event"""
        ay = self.apply(y)
        b = self.offsets()
        return (b[:, None] - ay) if ay.ndim == 2 else (b - ay)

    def to_explicit(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.blocks:
            return np.zeros((0, self.dimension)), np.zeros(0)
        parts = [block.to_explicit() for block in self.blocks]
        return np.vstack([a for a, _ in parts]), np.concatenate([b for _, b in parts])

    def rows(self) -> Iterator[Tuple[np.ndarray, float]]:
        for block in self.blocks:
            yield from block.rows()

    def dump_csv(self, path: Union[str, Path]) -> Path:
        """
        Write the explicit (A, b) rows to CSV for inspection

        Columns are a_0..a_{n-1} followed by b.

        Raises:
            ValidationError: If the instance is too large to materialize
        """
        if self.row_count * self.dimension > MAX_DUMP_ENTRIES:
            raise ValidationError(
                "Event too large for an explicit dump",
                diagnostics={"rows": self.row_count, "dimension": self.dimension},
            )
        a, b = self.to_explicit()
        frame = pd.DataFrame(a, columns=[f"a_{i}" for i in range(self.dimension)])
        frame["b"] = b
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
        return path


def compose_events(e1: SelectionEvent, e2: SelectionEvent) -> SelectionEvent:
    """
    Intersect two events by concatenating their rows

    Raises:
        ValidationError: If the ambient dimensions differ
    """
    if e1.dimension != e2.dimension:
        raise ValidationError(
            "Cannot compose events of different dimension",
            diagnostics={"left": e1.dimension, "right": e2.dimension},
        )
    return SelectionEvent(dimension=e1.dimension, blocks=e1.blocks + e2.blocks)


def contains(event: SelectionEvent, y: np.ndarray, tol: float = DEFAULT_CONTAINS_TOL) -> bool:
    """True iff A y <= b + tol * (1 + ||y||) row-wise"""
    y = np.asarray(y, dtype=float)
    if y.shape[0] != event.dimension:
        raise ValidationError(
            "Response dimension does not match the event",
            diagnostics={"event": event.dimension, "response": y.shape[0]},
        )
    if event.row_count == 0:
        return True
    return bool(np.min(event.slack(y)) >= -tol * (1.0 + np.linalg.norm(y)))


def contains_columns(event: SelectionEvent, ys: np.ndarray, tol: float = DEFAULT_CONTAINS_TOL) -> np.ndarray:
    """Vectorized `contains` over the columns of an n x q matrix"""
    ys = np.asarray(ys, dtype=float)
    if event.row_count == 0:
        return np.ones(ys.shape[1], dtype=bool)
    worst = np.min(event.slack(ys), axis=0)
    return worst >= -tol * (1.0 + np.linalg.norm(ys, axis=0))
