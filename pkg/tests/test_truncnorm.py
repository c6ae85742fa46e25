"""
Tests for the truncated Gaussian pivot and its inversion
"""

import math

import numpy as np
import pytest
from scipy import special

from selection_inference import truncnorm
from selection_inference.errors import BracketFailure, DegenerateInterval, ValidationError
from selection_inference.truncnorm import PivotSpec, invert_pivot, tie_side, tn_cdf


def test_untruncated_is_normal_cdf():
    """Test infinite bounds reduce to Phi"""
    spec = PivotSpec(observed=0.3, mean=0.0, variance=1.0, lower=-math.inf, upper=math.inf)
    assert tn_cdf(spec) == pytest.approx(special.ndtr(0.3), abs=1e-15)


def test_symmetric_truncation_median():
    """Test the CDF at the center of a symmetric truncation"""
    spec = PivotSpec(observed=0.0, mean=0.0, variance=1.0, lower=-1.0, upper=1.0)
    assert tn_cdf(spec) == pytest.approx(0.5, abs=1e-15)


def test_right_tail():
    """Test a truncation eight standard deviations into the right tail"""
    spec = PivotSpec(observed=8.5, mean=0.0, variance=1.0, lower=8.0, upper=math.inf)
    expected = (special.ndtr(-8.0) - special.ndtr(-8.5)) / special.ndtr(-8.0)
    assert tn_cdf(spec) == pytest.approx(expected, rel=1e-10)


def test_left_tail():
    """Test a truncation eight standard deviations into the left tail"""
    spec = PivotSpec(observed=-8.5, mean=0.0, variance=1.0, lower=-math.inf, upper=-8.0)
    expected = special.ndtr(-8.5) / special.ndtr(-8.0)
    assert tn_cdf(spec) == pytest.approx(expected, rel=1e-10)


def test_far_tail_stays_finite():
    """Test a contrast forty standard deviations past the boundary"""
    spec = PivotSpec(observed=40.01, mean=0.0, variance=1.0, lower=40.0, upper=41.0)
    value = tn_cdf(spec)
    assert 0.0 < value < 1.0
    # exponential approximation of the truncated tail
    assert value == pytest.approx(1.0 - math.exp(-40.0 * 0.01), rel=1e-2)


def test_endpoints():
    """Test F is 0 at the lower bound and 1 at the upper bound"""
    assert tn_cdf(PivotSpec(observed=-1.0, mean=0.2, variance=1.0, lower=-1.0, upper=2.0)) == 0.0
    assert tn_cdf(PivotSpec(observed=2.0, mean=0.2, variance=1.0, lower=-1.0, upper=2.0)) == 1.0


def test_decreasing_in_mean():
    """Test F is strictly decreasing in the mean"""
    values = [
        tn_cdf(PivotSpec(observed=0.4, mean=m, variance=2.0, lower=-1.0, upper=3.0))
        for m in np.linspace(-5.0, 5.0, 41)
    ]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_invalid_specs():
    """Test variance, ordering and observation checks"""
    with pytest.raises(ValidationError):
        PivotSpec(observed=0.0, mean=0.0, variance=0.0, lower=-1.0, upper=1.0)
    with pytest.raises(DegenerateInterval):
        PivotSpec(observed=1.0, mean=0.0, variance=1.0, lower=1.0, upper=1.0)
    with pytest.raises(ValidationError):
        PivotSpec(observed=5.0, mean=0.0, variance=1.0, lower=-1.0, upper=1.0)


def test_numerically_empty_interval():
    """Test a width below 1e-14 sd raises"""
    spec = PivotSpec(observed=0.0, mean=0.0, variance=1.0, lower=0.0, upper=1e-20)
    with pytest.raises(DegenerateInterval):
        tn_cdf(spec)


def test_invert_untruncated_closed_form():
    """Test inversion without truncation matches the z bound"""
    lower = invert_pivot(1.3, 4.0, -math.inf, math.inf, target=0.95)
    upper = invert_pivot(1.3, 4.0, -math.inf, math.inf, target=0.05)
    assert lower == pytest.approx(1.3 - 2.0 * 1.6448536269514722, abs=1e-8)
    assert upper == pytest.approx(1.3 + 2.0 * 1.6448536269514722, abs=1e-8)


def test_invert_round_trip(rng: np.random.Generator):
    """Test F_{invert(target)}(observed) recovers the target"""
    for _ in range(50):
        lower = rng.uniform(-4.0, 1.0)
        upper = lower + rng.uniform(0.1, 5.0)
        observed = rng.uniform(lower, upper)
        variance = rng.uniform(0.25, 4.0)
        target = rng.uniform(0.01, 0.99)
        x = invert_pivot(observed, variance, lower, upper, target)
        assert tn_cdf(PivotSpec(observed, x, variance, lower, upper)) == pytest.approx(target, abs=1e-6)


def test_invert_far_root():
    """Test a root hundreds of standard deviations from the observation"""
    x = invert_pivot(0.001, 1.0, 0.0, math.inf, target=0.5)
    assert x < -100.0
    assert tn_cdf(PivotSpec(0.001, x, 1.0, 0.0, math.inf)) == pytest.approx(0.5, abs=1e-6)


def test_invert_bracket_failure(monkeypatch):
    """Test the doubling cap is enforced"""
    monkeypatch.setattr(truncnorm, "MAX_DOUBLINGS", 0)
    with pytest.raises(BracketFailure) as e:
        invert_pivot(0.001, 1.0, 0.0, math.inf, target=0.5)
    assert e.value.diagnostics["doublings"] == 0


def test_invert_invalid_target():
    """Test targets outside (0, 1) are rejected"""
    with pytest.raises(ValidationError):
        invert_pivot(0.0, 1.0, -1.0, 1.0, target=1.0)


def test_invert_tie_fails_fast(monkeypatch):
    """Test an observation on a truncation limit is named instead of bracketed"""

    def no_bracketing(*args, **kwargs):
        raise AssertionError("bracketing should not start")

    monkeypatch.setattr(truncnorm, "_expand", no_bracketing)
    with pytest.raises(DegenerateInterval) as e:
        invert_pivot(0.0, 1.0, 0.0, math.inf, target=0.95)
    assert e.value.diagnostics["tie"] == "lower"
    with pytest.raises(DegenerateInterval) as e:
        invert_pivot(3.0, 4.0, -math.inf, 3.0 + 1e-9, target=0.05)
    assert e.value.diagnostics["tie"] == "upper"


def test_tie_side():
    """Test ties are measured in standard deviations"""
    assert tie_side(1e-9, 1.0, 0.0, 1.0) == "lower"
    assert tie_side(1e-9, 1e-4, 0.0, 1.0) is None
    assert tie_side(0.5, 1.0, 0.0, 1.0) is None
    assert tie_side(0.0, 0.0, 0.0, 1.0) is None


def test_narrow_far_truncation_round_trip():
    """Test a truncation 1e-5 sd wide still inverts when the root lies ~1e6 sd away"""
    lower, upper = 0.0, 1e-5
    x = invert_pivot(5e-6, 1.0, lower, upper, target=0.995)
    assert -2e6 < x < -5e5
    assert tn_cdf(PivotSpec(5e-6, x, 1.0, lower, upper)) == pytest.approx(0.995, abs=1e-6)
    x = invert_pivot(5e-6, 1.0, lower, upper, target=0.005)
    assert 5e5 < x < 2e6
    assert tn_cdf(PivotSpec(5e-6, x, 1.0, lower, upper)) == pytest.approx(0.005, abs=1e-6)


def test_narrow_far_truncation_is_exponential():
    """Test the far-tail CDF of a narrow interval against its exponential limit"""
    mean, width, observed = -1e5, 1e-4, 4e-5
    rate = -mean
    expected = -math.expm1(-rate * observed) / -math.expm1(-rate * width)
    assert tn_cdf(PivotSpec(observed, mean, 1.0, 0.0, width)) == pytest.approx(expected, rel=1e-6)
    # mirrored into the left tail
    assert tn_cdf(PivotSpec(-observed, -mean, 1.0, -width, 0.0)) == pytest.approx(1.0 - expected, rel=1e-6)
