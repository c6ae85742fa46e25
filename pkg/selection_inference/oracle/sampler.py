"""
Rejection sampling of y ~ N(mean, sigma2 I) conditioned on a selection event
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import AcceptanceTooLow, ValidationError
from ..polytope import SelectionEvent, contains_columns

MIN_ACCEPTANCE = 1e-6
DEFAULT_MAX_DRAWS = 10_000_000
BATCH_SIZE = 4096


@dataclass
class RejectionSampler:
    """Exact sampler for a Gaussian restricted to {y : Ay <= b}

    Batch b is drawn from a generator seeded with (seed, b). The batch
    counter persists across calls, so repeated calls continue the stream
    instead of replaying it; draws depend only on `seed` and the sizes of
    the calls made so far.
    """

    mean: np.ndarray
    sigma2: float
    event: SelectionEvent
    seed: int = 0
    max_draws: int = DEFAULT_MAX_DRAWS
    draws: int = field(default=0, init=False)
    accepted: int = field(default=0, init=False)
    batches: int = field(default=0, init=False)

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if self.mean.shape[0] != self.event.dimension:
            raise ValidationError(
                "Sampler mean does not match the event dimension",
                diagnostics={"mean": self.mean.shape[0], "event": self.event.dimension},
            )
        if not self.sigma2 > 0:
            raise ValidationError("Sampler variance must be positive", diagnostics={"sigma2": self.sigma2})
        if self.max_draws < 1:
            raise ValidationError("max_draws must be positive")

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.draws if self.draws else 0.0


def rejection_sample_conditional(sampler: RejectionSampler, count: int) -> np.ndarray:
    """
    Draw `count` i.i.d. responses from the conditional law of y given the event

    Args:
        sampler: RejectionSampler; its draw counters are updated
        count: Number of accepted draws

    Returns:
        Array of shape (count, n); every row lies inside the event

    Raises:
        AcceptanceTooLow: If max_draws is exhausted, or acceptance falls
            below 1e-6 after a million draws
    """
    if count < 1:
        raise ValidationError("Sample count must be positive", diagnostics={"count": count})
    n = sampler.mean.shape[0]
    sd = np.sqrt(sampler.sigma2)
    kept = []
    total = 0
    while total < count:
        if sampler.draws >= sampler.max_draws or (
            sampler.draws >= 1_000_000 and sampler.acceptance_rate < MIN_ACCEPTANCE
        ):
            raise AcceptanceTooLow(
                "Rejection sampler could not collect enough draws",
                diagnostics={
                    "accepted": total,
                    "requested": count,
                    "draws": sampler.draws,
                    "acceptance_rate": sampler.acceptance_rate,
                },
            )
        size = min(BATCH_SIZE, sampler.max_draws - sampler.draws)
        rng = np.random.default_rng([sampler.seed, sampler.batches])
        sampler.batches += 1
        proposals = sampler.mean[None, :] + sd * rng.standard_normal((size, n))
        inside = contains_columns(sampler.event, proposals.T, tol=0.0)
        sampler.draws += size
        sampler.accepted += int(inside.sum())
        kept.append(proposals[inside])
        total += int(inside.sum())
    return np.concatenate(kept, axis=0)[:count]
