"""
Tests for the selection procedures and their selection events
"""

import numpy as np
import pydantic
import pytest

from selection_inference.data import Dataset
from selection_inference.errors import ModelMismatch, RankDeficient, ValidationError
from selection_inference.oracle import brute_force_nnls, replay_omp
from selection_inference.polytope import contains
from selection_inference.selectors import (
    Lasso,
    MarginalScreening,
    MarginalScreeningLasso,
    NonNegativeLeastSquares,
    OrthogonalMatchingPursuit,
    Procedure,
    SelectedModel,
    create_selector,
    encode_ms_event,
    encode_nnls_event,
    lasso_solve,
    marginal_screen,
    ms_plus_lasso,
    nnls_solve,
    omp_select,
)


def test_marginal_screen_example(orthogonal_data: Dataset):
    """Test the top two of |x_j^T y| = (3, 2, 1) with their signs"""
    model = marginal_screen(orthogonal_data, 2)
    assert model.support == [0, 1]
    assert model.signs == [1, -1]
    assert model.procedure == Procedure.MS


def test_marginal_screen_ties_go_to_lowest_index():
    """Test equal scores select the lowest index"""
    data = Dataset(X=np.eye(3), y=np.ones(3))
    assert marginal_screen(data, 1).support == [0]


def test_marginal_screen_k_range(orthogonal_data: Dataset):
    """Test k outside [1, min(n, p)] is rejected"""
    for k in (0, 4):
        with pytest.raises(ValidationError):
            marginal_screen(orthogonal_data, k)


def test_ms_event_all_columns(orthogonal_data: Dataset):
    """Test k = p leaves only the sign rows"""
    model, event = MarginalScreening(3).run(orthogonal_data)
    assert event.row_count == 3
    assert contains(event, orthogonal_data.y)


def test_ms_event_row_count_and_membership(make_dataset):
    """Test k(2(p - k) + 1) rows and that the event holds its own response"""
    data = make_dataset(8, 6, seed=1)
    model, event = MarginalScreening(2).run(data)
    assert event.row_count == 2 * (2 * 4 + 1)
    assert contains(event, data.y)


def test_ms_event_characterizes_selection(make_dataset, rng: np.random.Generator):
    """Test other responses are in the event iff they select the same model"""
    data = make_dataset(3, 4, seed=2)
    model, event = MarginalScreening(2).run(data)
    agree = disagree = 0
    for _ in range(200):
        y = data.y + rng.standard_normal(3)
        same = marginal_screen(data.with_response(y), 2)
        expected = sorted(zip(same.support, same.signs)) == sorted(zip(model.support, model.signs))
        assert contains(event, y) == expected
        agree += expected
        disagree += not expected
    assert agree and disagree


def test_omp_example():
    """Test OMP picks column 0 then column 2"""
    data = Dataset(X=np.eye(3), y=np.array([3.0, -1.0, 2.0]))
    model = omp_select(data, 2)
    assert model.support == [0, 2]
    assert model.signs == [1, 1]


def test_omp_single_step_matches_screening(make_dataset):
    """Test k = 1 OMP selects and encodes exactly like marginal screening"""
    data = make_dataset(6, 5, seed=3)
    omp_model, omp_event = OrthogonalMatchingPursuit(1).run(data)
    ms_model, ms_event = MarginalScreening(1).run(data)
    assert omp_model.support == ms_model.support
    assert omp_model.signs == ms_model.signs
    np.testing.assert_allclose(omp_event.to_explicit()[0], ms_event.to_explicit()[0], atol=1e-12)


def test_omp_matches_replay(rng: np.random.Generator):
    """Test OMP against the dense reference on a correlated design"""
    base = rng.standard_normal((8, 1))
    X = 0.6 * base + rng.standard_normal((8, 12))
    data = Dataset.from_arrays(X, rng.standard_normal(8))
    model = omp_select(data, 4)
    support, signs = replay_omp(data, 4)
    assert model.support == support
    assert model.signs == signs


def test_omp_event_holds_response(make_dataset):
    """Test the ordered event holds y and its implicit rows match the explicit form"""
    data = make_dataset(10, 8, seed=4)
    model, event = OrthogonalMatchingPursuit(3).run(data)
    assert contains(event, data.y)
    a, b = event.to_explicit()
    np.testing.assert_allclose(event.apply(data.y), a @ data.y, atol=1e-12)
    assert event.row_count == sum(2 * (8 - step - 1) + 1 for step in range(3))


def test_omp_rank_collapse():
    """Test a duplicated column chosen after the residual vanishes"""
    data = Dataset(X=np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]), y=np.array([1.0, 0.0]))
    with pytest.raises(RankDeficient):
        omp_select(data, 2)


def test_nnls_example():
    """Test NNLS clips the negative coordinate"""
    data = Dataset(X=np.eye(2), y=np.array([1.0, -2.0]))
    beta, model = nnls_solve(data)
    np.testing.assert_allclose(beta, [1.0, 0.0])
    assert model.support == [0]
    assert model.signs == [1]


def test_nnls_empty_support():
    """Test X^T y <= 0 selects nothing and leaves the rows X^T y <= 0"""
    data = Dataset(X=np.eye(2), y=np.array([-1.0, -2.0]))
    model, event = NonNegativeLeastSquares().run(data)
    assert model.support == []
    assert event.row_count == 2
    assert contains(event, data.y)
    assert not contains(event, np.array([0.5, -1.0]))


def test_nnls_matches_brute_force(make_dataset):
    """Test NNLS objective and KKT conditions against enumeration"""
    for seed in range(10):
        data = make_dataset(6, 4, seed=seed, beta=np.array([1.0, 0.5, 0.0, 0.0]))
        beta, model = nnls_solve(data)
        _, best = brute_force_nnls(data)
        residual = data.y - data.X @ beta
        assert 0.5 * residual @ residual == pytest.approx(best, abs=1e-9)
        assert np.all(beta >= 0)
        gradient = data.X.T @ residual
        assert np.all(gradient <= 1e-10)
        np.testing.assert_allclose(gradient[model.support], 0.0, atol=1e-10)


def test_nnls_event_characterizes_selection(make_dataset, rng: np.random.Generator):
    """Test the event holds y and other responses iff they keep the support"""
    data = make_dataset(6, 4, seed=11, beta=np.array([2.0, 1.0, 0.0, 0.0]))
    model, event = NonNegativeLeastSquares().run(data)
    assert contains(event, data.y)
    for _ in range(100):
        y = data.y + 0.5 * rng.standard_normal(6)
        same = nnls_solve(data.with_response(y))[1].support == model.support
        assert contains(event, y) == same


def test_lasso_orthogonal_soft_threshold():
    """Test the Lasso on an orthogonal design is soft thresholding"""
    data = Dataset(X=np.eye(3), y=np.array([3.0, -0.5, 2.0]))
    beta, model = lasso_solve(data, 1.0)
    np.testing.assert_allclose(beta, [2.0, 0.0, 1.0], atol=1e-10)
    assert model.support == [0, 2]
    assert model.signs == [1, 1]


def test_lasso_large_penalty(orthogonal_data: Dataset):
    """Test lambda >= ||X^T y||_inf selects nothing and bounds |X^T y|"""
    model, event = Lasso(3.0).run(orthogonal_data)
    assert model.support == []
    assert event.row_count == 6
    assert contains(event, orthogonal_data.y)
    assert not contains(event, np.array([3.5, 0.0, 0.0]))


def test_lasso_kkt(make_dataset):
    """Test the returned active set satisfies the KKT conditions"""
    data = make_dataset(20, 8, seed=5, beta=np.array([3.0, -2.0, 0, 0, 0, 0, 0, 0]))
    lam = 0.4 * float(np.max(np.abs(data.X.T @ data.y)))
    beta, model = lasso_solve(data, lam)
    correlation = data.X.T @ (data.y - data.X @ beta)
    np.testing.assert_allclose(correlation[model.support], lam * np.array(model.signs), rtol=1e-9)
    inactive = [j for j in range(8) if j not in model.support]
    assert np.all(np.abs(correlation[inactive]) <= lam * (1 + 1e-9))


def test_lasso_event_characterizes_selection(make_dataset, rng: np.random.Generator):
    """Test the event holds y and other responses iff they keep active set and signs"""
    data = make_dataset(10, 5, seed=6, beta=np.array([2.0, -1.5, 0, 0, 0]))
    lam = 0.5 * float(np.max(np.abs(data.X.T @ data.y)))
    selector = Lasso(lam)
    model, event = selector.run(data)
    assert contains(event, data.y)
    for _ in range(100):
        y = data.y + 0.3 * rng.standard_normal(10)
        other = selector.select(data.with_response(y))
        same = (other.support, other.signs) == (model.support, model.signs)
        assert contains(event, y) == same


def test_lasso_invalid_penalty(orthogonal_data: Dataset):
    """Test a nonpositive penalty is rejected"""
    with pytest.raises(ValidationError):
        lasso_solve(orthogonal_data, 0.0)


def test_ms_lasso_small_penalty_keeps_screened(make_dataset):
    """Test a tiny penalty keeps every screened column"""
    data = make_dataset(10, 12, seed=7)
    model, event = ms_plus_lasso(data, 3, 1e-8)
    screened = marginal_screen(data, 3)
    assert model.support == sorted(screened.support)
    assert model.stage_supports["screened"] == screened.support
    assert contains(event, data.y)


def test_ms_lasso_large_penalty_selects_nothing(make_dataset):
    """Test lambda above the screened correlations empties the model"""
    data = make_dataset(10, 12, seed=8)
    lam = float(np.max(np.abs(data.X.T @ data.y))) + 1.0
    model, event = ms_plus_lasso(data, 3, lam)
    assert model.support == []
    assert contains(event, data.y)


def test_ms_lasso_composed_rows(make_dataset):
    """Test the composed event stacks screening and Lasso rows and re-encodes identically"""
    data = make_dataset(15, 10, seed=9, beta=np.array([3.0, 3.0] + [0.0] * 8))
    selector = MarginalScreeningLasso(4, 0.5)
    model, event = selector.run(data)
    screened = marginal_screen(data, 4)
    ms_rows = encode_ms_event(data, screened).row_count
    assert event.row_count == ms_rows + 2 * 4 - model.size
    np.testing.assert_allclose(selector.encode(data, model).to_explicit()[0], event.to_explicit()[0], atol=1e-12)
    assert model.stage_signs["lasso"] == model.signs


def test_selected_model_validation():
    """Test duplicate indices and bad signs are rejected"""
    with pytest.raises(pydantic.ValidationError):
        SelectedModel(procedure=Procedure.MS, support=[1, 1], signs=[1, 1])
    with pytest.raises(pydantic.ValidationError):
        SelectedModel(procedure=Procedure.MS, support=[1], signs=[0])
    with pytest.raises(pydantic.ValidationError):
        SelectedModel(procedure=Procedure.MS, support=[1, 2], signs=[1])


def test_encode_rejects_foreign_models(orthogonal_data: Dataset):
    """Test procedure and index mismatches"""
    nnls_model = SelectedModel(procedure=Procedure.NNLS, support=[0], signs=[1])
    with pytest.raises(ModelMismatch):
        encode_ms_event(orthogonal_data, nnls_model)
    with pytest.raises(ModelMismatch):
        encode_nnls_event(orthogonal_data, SelectedModel(procedure=Procedure.NNLS, support=[5], signs=[1]))


def test_create_selector():
    """Test the factory and its parameter checks"""
    assert isinstance(create_selector("ms", k=2), MarginalScreening)
    assert isinstance(create_selector(Procedure.OMP, k=2), OrthogonalMatchingPursuit)
    assert isinstance(create_selector("nnls"), NonNegativeLeastSquares)
    assert isinstance(create_selector("lasso", lam=1.0), Lasso)
    assert isinstance(create_selector("ms-lasso", k=2, lam=1.0), MarginalScreeningLasso)
    with pytest.raises(ValidationError):
        create_selector("forward-stepwise", k=2)
    with pytest.raises(ValidationError):
        create_selector("ms")
    with pytest.raises(ValidationError):
        create_selector("ms-lasso", k=2)
