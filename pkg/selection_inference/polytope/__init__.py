"""
Polyhedral selection events and their one-dimensional truncation
"""

from .base import RowBlock
from .event import SelectionEvent, compose_events, contains, contains_columns
from .rows import DominanceRows, ExplicitRows
from .truncation import TruncationInterval, truncation_interval, truncation_limits

__all__ = [
    "RowBlock",
    "ExplicitRows",
    "DominanceRows",
    "SelectionEvent",
    "compose_events",
    "contains",
    "contains_columns",
    "TruncationInterval",
    "truncation_interval",
    "truncation_limits",
]
