"""
Result records and tables emitted by the harness
"""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..data import Dataset
from ..inference import InferenceResult
from ..selectors import SelectedModel

COVERAGE_COLUMNS = [
    "snr",
    "trials",
    "intervals",
    "adjusted_covered",
    "z_covered",
    "adjusted_coverage",
    "z_coverage",
    "screened_trials",
    "failures",
]
BOOTSTRAP_COLUMNS = [
    "nominal",
    "replications",
    "intervals",
    "adjusted_covered",
    "z_covered",
    "adjusted_coverage",
    "z_coverage",
    "failures",
]
HISTOGRAM_COLUMNS = ["bin_lower", "bin_upper", "count", "density"]
QQ_COLUMNS = ["theoretical", "empirical"]
SHAPE_COLUMNS = ["observed", "adjusted_lower", "adjusted_upper", "z_lower", "z_upper"]


def _proportion(covered: int, total: int) -> float:
    return covered / total if total else math.nan


class CoverageCounts(BaseModel):
    """Order-independent tallies; merged by addition"""

    intervals: int = 0
    adjusted_covered: int = 0
    z_covered: int = 0
    screened: int = 0
    failures: int = 0

    def __add__(self, other: "CoverageCounts") -> "CoverageCounts":
        return CoverageCounts(
            intervals=self.intervals + other.intervals,
            adjusted_covered=self.adjusted_covered + other.adjusted_covered,
            z_covered=self.z_covered + other.z_covered,
            screened=self.screened + other.screened,
            failures=self.failures + other.failures,
        )


class CoverageRow(BaseModel):
    """Coverage of selective and z intervals at one SNR"""

    snr: float
    trials: int
    intervals: int
    adjusted_covered: int
    z_covered: int
    adjusted_coverage: float
    z_coverage: float
    screened_trials: int
    failures: int

    @classmethod
    def from_counts(cls, snr: float, trials: int, counts: CoverageCounts) -> "CoverageRow":
        return cls(
            snr=snr,
            trials=trials,
            intervals=counts.intervals,
            adjusted_covered=counts.adjusted_covered,
            z_covered=counts.z_covered,
            adjusted_coverage=_proportion(counts.adjusted_covered, counts.intervals),
            z_coverage=_proportion(counts.z_covered, counts.intervals),
            screened_trials=counts.screened,
            failures=counts.failures,
        )


class BootstrapRow(BaseModel):
    """Residual bootstrap coverage at one nominal level"""

    nominal: float
    replications: int
    intervals: int
    adjusted_covered: int
    z_covered: int
    adjusted_coverage: float
    z_coverage: float
    failures: int

    @classmethod
    def from_counts(cls, nominal: float, replications: int, counts: CoverageCounts) -> "BootstrapRow":
        return cls(
            nominal=nominal,
            replications=replications,
            intervals=counts.intervals,
            adjusted_covered=counts.adjusted_covered,
            z_covered=counts.z_covered,
            adjusted_coverage=_proportion(counts.adjusted_covered, counts.intervals),
            z_coverage=_proportion(counts.z_covered, counts.intervals),
            failures=counts.failures,
        )


class PivotNullResult(BaseModel):
    """Pivots evaluated at the true target, with a KS test against Uniform(0, 1)"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    pivots: np.ndarray
    ks_statistic: float
    ks_pvalue: float
    failures: int

    def histogram(self, bins: int = 20) -> List[dict]:
        counts, edges = np.histogram(self.pivots, bins=bins, range=(0.0, 1.0))
        total = max(int(counts.sum()), 1)
        width = 1.0 / bins
        return [
            {"bin_lower": float(lo), "bin_upper": float(hi), "count": int(c), "density": c / (total * width)}
            for lo, hi, c in zip(edges[:-1], edges[1:], counts)
        ]

    def qq(self) -> List[dict]:
        ordered = np.sort(self.pivots)
        theoretical = (np.arange(1, ordered.size + 1) - 0.5) / max(ordered.size, 1)
        return [{"theoretical": float(t), "empirical": float(e)} for t, e in zip(theoretical, ordered)]


class InferenceRecord(BaseModel):
    """One JSON line of the infer command"""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    index: int
    name: str
    beta_hat: float
    pivot: float
    p_value: float
    L: float
    U: float
    z_lo: float
    z_hi: float
    v_minus: float
    v_plus: float
    eta_norm: float
    sigma2: float

    @classmethod
    def from_result(cls, result: InferenceResult) -> "InferenceRecord":
        t = result.truncation
        return cls(
            index=result.coefficient_index,
            name=result.name,
            beta_hat=float(result.beta_hat),
            pivot=float(result.pivot),
            p_value=float(result.p_value),
            L=float(result.interval[0]),
            U=float(result.interval[1]),
            z_lo=float(result.z_interval[0]),
            z_hi=float(result.z_interval[1]),
            v_minus=float(t.v_minus),
            v_plus=float(t.v_plus),
            eta_norm=t.eta_norm,
            sigma2=float(result.sigma2),
        )


class ScreenRecord(BaseModel):
    """Selected model as printed by the screen command"""

    procedure: str
    support: List[int]
    names: List[str]
    signs: List[int]
    stage_supports: Optional[dict] = None

    @classmethod
    def from_model(cls, data: Dataset, model: SelectedModel) -> "ScreenRecord":
        return cls(
            procedure=model.procedure.value,
            support=list(model.support),
            names=[data.column_names[j] for j in model.support],
            signs=list(model.signs),
            stage_supports=model.stage_supports,
        )
