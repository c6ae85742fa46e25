"""
Base row-generator interface for selection events
"""

from abc import ABC, abstractmethod
from typing import Iterator, Tuple

import numpy as np


class RowBlock(ABC):
    """A block of affine constraints a_j^T y <= b_j

    Blocks never have to materialize A: the truncation computation only
    needs the products A y and A eta, which `apply` returns directly.
    """

    @property
    @abstractmethod
    def dimension(self) -> int:
        """Ambient dimension n of y"""
        pass

    @property
    @abstractmethod
    def row_count(self) -> int:
        """Number of rows generated by the block"""
        pass

    @abstractmethod
    def apply(self, v: np.ndarray) -> np.ndarray:
        """
        Compute A v for the rows of this block

        Args:
            v: vector of length n, or an n x q matrix of column vectors

        Returns:
            Array of shape (row_count,) or (row_count, q)
        """
        pass

    @abstractmethod
    def offsets(self) -> np.ndarray:
        """Right-hand side b of the block"""
        pass

    @abstractmethod
    def to_explicit(self) -> Tuple[np.ndarray, np.ndarray]:
        """Materialize (A, b); intended for small instances and debugging"""
        pass

    def rows(self) -> Iterator[Tuple[np.ndarray, float]]:
        """Iterate over rows as (a_j, b_j) pairs"""
        a, b = self.to_explicit()
        for a_j, b_j in zip(a, b):
            yield a_j, float(b_j)
