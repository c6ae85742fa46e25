"""
Dense least squares through a thin QR factorization
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import RankDeficient


@dataclass(frozen=True)
class QRFactor:
    """Thin QR factorization X_S = QR of a column block

    Reused by every solve against the same block so that the factorization
    is paid once per selected model.
    """

    q: np.ndarray
    r: np.ndarray

    @classmethod
    def of(cls, x_s: np.ndarray) -> "QRFactor":
        """
        Factor a design block, rejecting numerically rank deficient input

        Args:
            x_s: n x k matrix

        Returns:
            QRFactor of the block

        Raises:
            RankDeficient: If k > n or a diagonal entry of R falls below
                n * eps * max|diag(R)|
        """
        x_s = np.asarray(x_s, dtype=float)
        if x_s.ndim == 1:
            x_s = x_s[:, None]
        n, k = x_s.shape
        if k == 0:
            return cls(q=np.zeros((n, 0)), r=np.zeros((0, 0)))
        if k > n:
            raise RankDeficient(
                f"Cannot factor {n}x{k} block: more columns than rows",
                diagnostics={"rows": n, "cols": k},
            )
        q, r = linalg.qr(x_s, mode="economic")
        diag = np.abs(np.diag(r))
        tol = n * np.finfo(float).eps * diag.max()
        if diag.max() == 0 or diag.min() <= tol:
            raise RankDeficient(
                "Design block is numerically rank deficient",
                diagnostics={"min_diag": float(diag.min()), "tolerance": float(tol), "cols": k},
            )
        return cls(q=q, r=r)

    @property
    def rank(self) -> int:
        return self.r.shape[0]

    def solve(self, y: np.ndarray) -> np.ndarray:
        """Least squares coefficients R^{-1} Q^T y"""
        if self.rank == 0:
            return np.zeros(0)
        return linalg.solve_triangular(self.r, self.q.T @ y, lower=False)

    def pseudoinverse_apply(self, v: np.ndarray) -> np.ndarray:
        """(X_S^T)^+ v = Q R^{-T} v, the minimum-norm solution of X_S^T eta = v"""
        if self.rank == 0:
            return np.zeros(self.q.shape[0])
        return self.q @ linalg.solve_triangular(self.r, v, trans="T", lower=False)

    def project(self, y: np.ndarray) -> np.ndarray:
        """Orthogonal projection of y onto the column span"""
        return self.q @ (self.q.T @ y)

    def residual(self, y: np.ndarray) -> np.ndarray:
        """(I - X_S X_S^+) y"""
        return y - self.project(y)

    def gram_inverse_diagonal(self) -> np.ndarray:
        """Diagonal of (X_S^T X_S)^{-1}"""
        r_inv = linalg.solve_triangular(self.r, np.eye(self.rank), lower=False)
        return np.sum(r_inv**2, axis=1)


def least_squares(x_s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Minimize ||y - X_S beta||^2

    Args:
        x_s: n x k design block with full column rank
        y: response of length n

    Returns:
        Coefficient vector of length k

    Raises:
        RankDeficient: If the block is numerically rank deficient
    """
    return QRFactor.of(x_s).solve(np.asarray(y, dtype=float))


def pseudoinverse_apply(x_s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    Apply (X_S^T)^+ to a vector in coefficient space

    Args:
        x_s: n x k design block with full column rank
        v: vector of length k

    Returns:
        eta of length n with X_S^T eta = v

    Raises:
        RankDeficient: If the block is numerically rank deficient
    """
    return QRFactor.of(x_s).pseudoinverse_apply(np.asarray(v, dtype=float))
