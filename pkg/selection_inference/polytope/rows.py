"""
Explicit and implicit (factored) row blocks
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from .base import RowBlock


class ExplicitRows(RowBlock):
    """Rows stored as a dense matrix A with offsets b"""

    def __init__(self, a: np.ndarray, b: Optional[np.ndarray] = None):
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.zeros(a.shape[0]) if b is None else np.asarray(b, dtype=float).reshape(-1)
        if b.shape[0] != a.shape[0]:
            raise ValidationError(
                "Offsets do not match the number of rows",
                diagnostics={"rows": a.shape[0], "offsets": b.shape[0]},
            )
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValidationError("Constraint rows must be finite")
        self._a = a
        self._b = b

    @property
    def dimension(self) -> int:
        return self._a.shape[1]

    @property
    def row_count(self) -> int:
        return self._a.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._a @ v

    def offsets(self) -> np.ndarray:
        return self._b

    def to_explicit(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._a, self._b


class DominanceRows(RowBlock):
    """Implicit rows stating that each leader dominates every other column

    For the projected design M = X^T (I - Q Q^T) and each leader (i, s_i)
    the block generates, with b = 0,

        (-s_i m_i + m_j)^T y <= 0   for every j in `others`
        (-s_i m_i - m_j)^T y <= 0   for every j in `others`
        -s_i m_i^T y <= 0

    Marginal screening uses Q empty and all selected columns as leaders.
    Each OMP step uses the basis of the previously selected columns and
    a single leader. Only X^T v is ever formed, so the cost of `apply`
    is O(np) regardless of the number of rows.
    """

    def __init__(
        self,
        design: np.ndarray,
        leaders: Sequence[Tuple[int, int]],
        others: Sequence[int],
        basis: Optional[np.ndarray] = None,
    ):
        self.design = np.asarray(design, dtype=float)
        n = self.design.shape[0]
        self.basis = np.zeros((n, 0)) if basis is None else np.asarray(basis, dtype=float).reshape(n, -1)
        self.leaders = tuple((int(i), int(s)) for i, s in leaders)
        self.others = np.asarray(others, dtype=int).reshape(-1)

    @property
    def dimension(self) -> int:
        return self.design.shape[0]

    @property
    def row_count(self) -> int:
        return len(self.leaders) * (2 * self.others.size + 1)

    def _projected(self, v: np.ndarray) -> np.ndarray:
        if self.basis.shape[1]:
            v = v - self.basis @ (self.basis.T @ v)
        return self.design.T @ v

    def _expand(self, u: np.ndarray) -> np.ndarray:
        blocks = []
        others = u[self.others]
        for index, sign in self.leaders:
            lead = sign * u[index]
            blocks.append(others - lead)
            blocks.append(-others - lead)
            blocks.append(np.expand_dims(-lead, 0))
        if not blocks:
            return np.zeros((0,) + u.shape[1:])
        return np.concatenate(blocks, axis=0)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._expand(self._projected(np.asarray(v, dtype=float)))

    def offsets(self) -> np.ndarray:
        return np.zeros(self.row_count)

    def to_explicit(self) -> Tuple[np.ndarray, np.ndarray]:
        m = self.design.T
        if self.basis.shape[1]:
            m = m - (m @ self.basis) @ self.basis.T
        return self._expand(m), self.offsets()
