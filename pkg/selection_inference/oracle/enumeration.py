"""
Exhaustive checks on small instances: partition of R^n, NNLS and OMP replays
"""

from itertools import combinations, product
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel

from ..data import Dataset
from ..errors import ValidationError
from ..polytope import contains_columns
from ..selectors import Procedure, SelectedModel, encode_ms_event

MAX_PARTITION_P = 5
MAX_PARTITION_K = 2
MAX_BRUTE_FORCE_P = 12
TIE_RTOL = 1e-9


class PartitionReport(BaseModel):
    """Outcome of checking that marginal screening regions tile the sample"""

    samples: int
    candidates: int
    skipped: List[int]
    violations: List[int]
    mismatches: List[int]

    @property
    def checked(self) -> int:
        return self.samples - len(self.skipped)


def _is_tie(scores: np.ndarray, k: int) -> bool:
    magnitude = np.sort(np.abs(scores))[::-1]
    scale = TIE_RTOL * max(1.0, float(magnitude[0]))
    if magnitude[k - 1] <= scale:
        return True
    return k < magnitude.size and magnitude[k - 1] - magnitude[k] <= scale


def enumerate_partition(data: Dataset, k: int, grid: np.ndarray) -> PartitionReport:
    """
    Check that every sampled y lies in exactly one marginal screening region

    All C(p, k) 2^k candidate (support, signs) regions are encoded once;
    each sample is then tested against every region. Samples on a tie
    hyperplane (two scores equal in magnitude at the cut, or a zero score
    among the selected) are skipped.

    Args:
        data: Small dataset (p <= 5)
        k: Model size (k <= 2)
        grid: Responses, shape (count, n)

    Returns:
        PartitionReport listing skipped samples, samples in zero or several
        regions, and samples whose unique region differs from marginal_screen
    """
    if data.p > MAX_PARTITION_P or not 1 <= k <= min(MAX_PARTITION_K, data.p):
        raise ValidationError(
            "Partition enumeration is limited to p <= 5 and k <= 2",
            diagnostics={"p": data.p, "k": k},
        )
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.shape[1] != data.n:
        raise ValidationError("Grid rows must have length n", diagnostics={"n": data.n, "grid": grid.shape})

    candidates = [
        (support, signs)
        for support in combinations(range(data.p), k)
        for signs in product((1, -1), repeat=k)
    ]
    membership = np.vstack(
        [
            contains_columns(
                encode_ms_event(
                    data,
                    SelectedModel(procedure=Procedure.MS, support=list(support), signs=list(signs)),
                ),
                grid.T,
                tol=0.0,
            )
            for support, signs in candidates
        ]
    )

    scores = grid @ data.X
    skipped, violations, mismatches = [], [], []
    for i in range(grid.shape[0]):
        if _is_tie(scores[i], k):
            skipped.append(i)
            continue
        hits = np.flatnonzero(membership[:, i])
        if hits.size != 1:
            violations.append(i)
            continue
        support, signs = candidates[int(hits[0])]
        order = np.argsort(-np.abs(scores[i]), kind="stable")[:k]
        expected = sorted((int(j), 1 if scores[i, j] >= 0 else -1) for j in order)
        if expected != sorted(zip(support, signs)):
            mismatches.append(i)

    return PartitionReport(
        samples=grid.shape[0],
        candidates=len(candidates),
        skipped=skipped,
        violations=violations,
        mismatches=mismatches,
    )


def brute_force_nnls(data: Dataset) -> Tuple[np.ndarray, float]:
    """
    NNLS by enumerating all 2^p active sets

    Each set is solved by unconstrained least squares; sets with a negative
    coefficient are infeasible. The best feasible objective wins.

    Returns:
        Tuple of (beta, 1/2 ||y - X beta||^2)
    """
    if data.p > MAX_BRUTE_FORCE_P:
        raise ValidationError("Brute-force NNLS is limited to p <= 12", diagnostics={"p": data.p})
    X, y = data.X, data.y
    best_beta = np.zeros(data.p)
    best = 0.5 * float(y @ y)
    for size in range(1, data.p + 1):
        for subset in combinations(range(data.p), size):
            cols = list(subset)
            coef, *_ = np.linalg.lstsq(X[:, cols], y, rcond=None)
            if np.any(coef < 0):
                continue
            beta = np.zeros(data.p)
            beta[cols] = coef
            residual = y - X @ beta
            objective = 0.5 * float(residual @ residual)
            if objective < best:
                best, best_beta = objective, beta
    return best_beta, best


def replay_omp(data: Dataset, k: int) -> Tuple[List[int], List[int]]:
    """
    Reference OMP using dense least squares refits and an explicit scan for the maximum

    Returns:
        Tuple of (support in selection order, signs)
    """
    X, y = data.X, data.y
    support: List[int] = []
    signs: List[int] = []
    residual = y.copy()
    for _ in range(k):
        best, best_score = -1, -1.0
        for j in range(data.p):
            if j in support:
                continue
            score = abs(float(X[:, j] @ residual))
            if score > best_score:
                best, best_score = j, score
        support.append(best)
        signs.append(1 if X[:, best] @ residual >= 0 else -1)
        coef, *_ = np.linalg.lstsq(X[:, support], y, rcond=None)
        residual = y - X[:, support] @ coef
    return support, signs
