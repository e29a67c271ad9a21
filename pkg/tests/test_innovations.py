import json

import numpy as np
import pytest

from flip.covariance import LagCovSet, analytic_lag_covs
from flip.errors import DimensionError, SingularCovarianceError
from flip.evaluation import simulate_replicates
from flip.hilbert import CoordVector, Grid, fourier_basis
from flip.innovations import (
    constant_schedule,
    detect_fma_order,
    dump_state,
    innovations_fixed,
    innovations_fma,
    innovations_increasing,
    one_step_predictions,
    oracle_best_linear_predictor,
    oracle_predict,
    predict_fixed,
    predict_increasing,
    v_limit_gap,
)
from flip.models import LinearProcessModel, NoiseSpec, simulate


def scaled(matrix, target_norm):
    return matrix * target_norm / np.linalg.norm(matrix, 2)


def random_models(seed, count, max_dim):
    """FMA(1), FMA(2) and FAR(1) models with invertible operators."""
    rng = np.random.default_rng(seed)
    models = []
    for idx in range(count):
        D = int(rng.integers(1, max_dim + 1))
        noise = NoiseSpec(np.sort(rng.uniform(0.2, 1.5, D))[::-1])
        kind = idx % 3
        if kind == 0:
            models.append(LinearProcessModel.fma([scaled(rng.standard_normal((D, D)), 0.6)], noise))
        elif kind == 1:
            gammas = [scaled(rng.standard_normal((D, D)), 0.5), scaled(rng.standard_normal((D, D)), 0.3)]
            models.append(LinearProcessModel.fma(gammas, noise))
        else:
            models.append(LinearProcessModel.far1(scaled(rng.standard_normal((D, D)), 0.7), noise))
    return models


@pytest.fixture
def scalar_ma1():
    return LagCovSet((np.array([[1.25]]), np.array([[0.5]])), vanishes_beyond=True)


@pytest.fixture
def white_noise():
    return analytic_lag_covs(LinearProcessModel.fma([np.zeros((2, 2))], NoiseSpec([1.0, 0.5])))


def test_scalar_ma1_hand_values(scalar_ma1):
    state = innovations_fixed(scalar_ma1, 2)
    assert abs(state.V[0][0, 0] - 1.25) <= 1e-12
    assert abs(state.theta_block(1, 1)[0, 0] - 0.4) <= 1e-12
    assert abs(state.V[1][0, 0] - 1.05) <= 1e-12
    assert abs(state.theta_block(2, 1)[0, 0] - 0.5 / 1.05) <= 1e-12
    assert abs(state.theta_block(2, 2)[0, 0]) <= 1e-12


def test_predict_fixed_scalar_ma1(scalar_ma1):
    state = innovations_fixed(scalar_ma1, 3)
    assert np.array_equal(predict_fixed(state, []), [0.0])
    assert predict_fixed(state, np.array([[1.0]]))[0] == pytest.approx(0.4, abs=1e-12)


def test_predict_fixed_with_coord_vectors(scalar_ma1):
    basis = fourier_basis(Grid(16), 1)
    state = innovations_fixed(scalar_ma1, 3)
    prediction = predict_fixed(state, [CoordVector(basis, [1.0])])
    assert isinstance(prediction, CoordVector)
    assert prediction.coords[0] == pytest.approx(0.4)


def test_predictions_beyond_n_max(scalar_ma1):
    state = innovations_fixed(scalar_ma1, 2)
    with pytest.raises(DimensionError):
        one_step_predictions(state, np.ones((3, 1)))


def test_white_noise_predicts_zero(white_noise):
    state = innovations_fixed(white_noise, 10)
    assert all(not np.any(state.theta_block(n, i)) for n in range(11) for i in range(1, n + 1))
    assert all(np.array_equal(V, np.diag([1.0, 0.5])) for V in state.V)

    x = simulate(LinearProcessModel.fma([np.zeros((2, 2))], NoiseSpec([1.0, 0.5])), 10, seed=0)
    assert not np.any(one_step_predictions(state, x).predictions)


def test_v_is_symmetric_psd_and_nonincreasing():
    lagcovs = analytic_lag_covs(random_models(1, 1, 4)[0])
    state = innovations_fixed(lagcovs, 30)
    assert np.array_equal(state.V[0], lagcovs.lag(0))
    for n, V in enumerate(state.V):
        assert state.V_operator(n).is_symmetric(1e-9)
        assert np.linalg.eigvalsh(V).min() >= -1e-8
    assert state.theta_operator(30, 0).in_dim == lagcovs.dim
    assert np.array_equal(state.theta_operator(5, 2).entries, state.theta_block(5, 2))
    v = state.v_nuclear_series()
    assert np.all(np.diff(v) <= 1e-9)


def test_fixed_matches_oracle():
    rng = np.random.default_rng(10)
    model = LinearProcessModel.fma([scaled(rng.standard_normal((2, 2)), 0.7)], NoiseSpec([1.0, 0.4]))
    lagcovs = analytic_lag_covs(model)
    state = innovations_fixed(lagcovs, 20)
    assert _oracle_discrepancy(state, lagcovs, model, 20, runs=10) <= 1e-8


def test_oracle_equivalence_random_models():
    for seed, model in enumerate(random_models(3, 50, 5)):
        n_max = 20
        lagcovs = analytic_lag_covs(model, max_lag=n_max)
        state = innovations_fixed(lagcovs, n_max)
        assert _oracle_discrepancy(state, lagcovs, model, n_max, runs=5, seed=seed) <= 1e-8


def _oracle_discrepancy(state, lagcovs, model, n_max, runs, seed=0):
    paths, _ = simulate_replicates(model, n_max, runs, seed)
    predictions = one_step_predictions(state, paths)
    worst = 0.0
    for n in range(1, n_max + 1):
        betas = oracle_best_linear_predictor(lagcovs, state.dims[:n], state.dims[n])
        expected = oracle_predict(betas, paths[:, :n, :])
        actual = predictions.predictions[:, n, : state.dims[n]]
        worst = max(worst, float(np.abs(actual - expected).max()))
    return worst


def test_fma_recursion_matches_full_recursion():
    rng = np.random.default_rng(6)
    model = LinearProcessModel.fma(
        [scaled(rng.standard_normal((3, 3)), 0.5), scaled(rng.standard_normal((3, 3)), 0.3)],
        NoiseSpec([1.0, 0.6, 0.3]),
    )
    lagcovs = analytic_lag_covs(model)
    full = innovations_fixed(lagcovs, 50)
    short = innovations_fma(lagcovs, 2, 50)
    assert short.q_star == 2
    assert all(len(row) <= 2 for row in short.theta)
    for n in range(51):
        assert np.abs(full.V[n] - short.V[n]).max() <= 1e-12
        for i in range(1, n + 1):
            assert np.abs(full.theta_block(n, i) - short.theta_block(n, i)).max() <= 1e-12


def test_fma_recursion_scalar_ma1(scalar_ma1):
    full = innovations_fixed(scalar_ma1, 10)
    short = innovations_fma(scalar_ma1, 1, 10)
    for n in range(1, 11):
        assert short.theta_block(n, 1)[0, 0] == pytest.approx(full.theta_block(n, 1)[0, 0], abs=1e-14)
        for i in range(2, n + 1):
            assert short.theta_block(n, i)[0, 0] == 0.0
            assert abs(full.theta_block(n, i)[0, 0]) <= 1e-10


def test_fma_recursion_order_zero(white_noise):
    state = innovations_fma(white_noise, 0, 5)
    assert not np.any(one_step_predictions(state, np.ones((5, 2))).predictions)


def test_fma_recursion_rejects_nonzero_lags(scalar_ma1):
    with pytest.raises(ValueError):
        innovations_fma(scalar_ma1, 0, 5)


def test_detect_fma_order():
    rng = np.random.default_rng(12)
    noise = NoiseSpec([1.0, 0.5, 0.25])
    full = LinearProcessModel.fma([0.3 * rng.standard_normal((3, 3)), 0.3 * rng.standard_normal((3, 3))], noise)
    assert detect_fma_order(analytic_lag_covs(full), 2) == 2

    gamma_1 = np.zeros((3, 3))
    gamma_1[:2, :2] = [[0.4, 0.1], [0.0, 0.3]]
    gamma_2 = np.zeros((3, 3))
    gamma_2[2, 2] = 0.5
    hidden = LinearProcessModel.fma([gamma_1, gamma_2], noise)
    assert detect_fma_order(analytic_lag_covs(hidden), 2) == 2
    assert detect_fma_order(analytic_lag_covs(hidden).project(2), 2) == 1

    white = LinearProcessModel.fma([np.zeros((3, 3))], noise)
    assert detect_fma_order(analytic_lag_covs(white), 1) == 0


def test_v_converges_for_invertible_ma1(scalar_ma1):
    state = innovations_fixed(scalar_ma1, 50)
    assert v_limit_gap(state) < 1e-6
    assert state.V[50][0, 0] == pytest.approx(1.0, abs=1e-10)


def test_singular_covariance_names_step():
    lagcovs = LagCovSet((np.diag([1.0, 0.0]), 0.1 * np.eye(2)), vanishes_beyond=True)
    with pytest.raises(SingularCovarianceError) as info:
        innovations_fixed(lagcovs, 3)
    assert info.value.step == (1, 1)


def test_constant_schedule_reduces_to_fixed():
    model = random_models(5, 1, 3)[0]
    lagcovs = analytic_lag_covs(model, max_lag=15)
    fixed = innovations_fixed(lagcovs, 15)
    increasing = innovations_increasing(lagcovs, constant_schedule(lagcovs.dim), n_max=15)
    for n in range(16):
        assert np.abs(fixed.V[n] - increasing.V[n]).max() <= 1e-12
        for i in range(1, n + 1):
            assert np.abs(fixed.theta_block(n, i) - increasing.theta_block(n, i)).max() <= 1e-12


def test_increasing_schedule_matches_oracle():
    rng = np.random.default_rng(14)
    model = LinearProcessModel.fma([scaled(rng.standard_normal((3, 3)), 0.6)], NoiseSpec([1.0, 0.5, 0.3]))
    lagcovs = analytic_lag_covs(model)
    dims = (1, 1, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3)
    state = innovations_increasing(lagcovs, dims)
    assert state.schedule == dims
    assert state.theta_block(2, 1).shape == (2, 1)
    assert state.V[2].shape == (2, 2)
    assert _oracle_discrepancy(state, lagcovs, model, len(dims) - 1, runs=10) <= 1e-8


def test_increasing_white_noise(white_noise):
    state = innovations_increasing(white_noise, (1, 1, 2, 2))
    assert np.array_equal(state.V[0], [[1.0]])
    assert np.array_equal(state.V[3], np.diag([1.0, 0.5]))
    assert not np.any(predict_increasing(state, np.ones((3, 2))))


def test_increasing_prediction_lives_in_target_dimension():
    model = LinearProcessModel.fma([0.4 * np.eye(3)], NoiseSpec([1.0, 0.5, 0.25]))
    state = innovations_increasing(analytic_lag_covs(model), (1, 2, 2, 3))
    assert predict_increasing(state, np.ones((3, 3))).shape == (3,)
    assert predict_increasing(state, np.ones((2, 3))).shape == (2,)


def test_innovations_are_orthogonal():
    model = LinearProcessModel.fma([[[0.6]]], NoiseSpec([1.0]))
    state = innovations_fixed(analytic_lag_covs(model), 6)
    runs = 4000
    paths, _ = simulate_replicates(model, 6, runs, seed=100)
    innovations = one_step_predictions(state, paths).innovations[:, :, 0]
    for k, j in [(1, 3), (2, 4), (0, 5)]:
        band = 4 * np.sqrt(state.V[k][0, 0] * state.V[j][0, 0] / runs)
        assert abs(np.mean(innovations[:, k] * innovations[:, j])) <= band


def test_dump_state(tmp_path, scalar_ma1):
    state = innovations_fma(scalar_ma1, 1, 4)
    path = tmp_path / "state.json"
    dump_state(path, state)
    with open(path) as f:
        dumped = json.load(f)
    assert dumped["kind"] == "fixed"
    assert dumped["q_star"] == 1
    assert len(dumped["V"]) == 5
    assert len(dumped["theta"]) == 4
    assert dumped["theta"][0]["n"] == 1
    assert dumped["theta"][0]["block"][0][0] == pytest.approx(0.4)
