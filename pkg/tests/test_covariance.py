import numpy as np
import pytest

from flip.covariance import (
    LagCovSet,
    analytic_lag_cov_far1,
    analytic_lag_cov_fma,
    analytic_lag_covs,
    assemble_block_covariance,
    covariance_eigenbasis,
    empirical_lag_cov,
    empirical_lag_covs,
    projected_lag_cov,
    read_lag_covs,
    write_lag_covs,
)
from flip.errors import DimensionError
from flip.hilbert import CoordVector, Grid, fourier_basis
from flip.models import LinearProcessModel, NoiseSpec, simulate, simulate_noise


@pytest.fixture
def scalar_ma1():
    return LinearProcessModel.fma([[[0.5]]], NoiseSpec([1.0]))


@pytest.fixture
def fma2():
    rng = np.random.default_rng(21)
    gammas = [0.4 * rng.standard_normal((3, 3)), 0.2 * rng.standard_normal((3, 3))]
    return LinearProcessModel.fma(gammas, NoiseSpec([1.0, 0.6, 0.3]))


def test_fma_lag_covariances_scalar(scalar_ma1):
    assert analytic_lag_cov_fma(scalar_ma1, 0).entries[0, 0] == pytest.approx(1.25)
    assert analytic_lag_cov_fma(scalar_ma1, 1).entries[0, 0] == pytest.approx(0.5)
    assert analytic_lag_cov_fma(scalar_ma1, 2).entries[0, 0] == 0.0


def test_fma_lag_covariance_orientation():
    gamma = np.array([[0.0, 1.0], [0.0, 0.0]])
    model = LinearProcessModel.fma([gamma], NoiseSpec([1.0, 0.5]))
    c1 = analytic_lag_cov_fma(model, 1).entries
    # X_{t+1} = eps_{t+1} + gamma eps_t, so E[X_{t+1} X_t^T] = gamma C_eps
    assert np.allclose(c1, gamma @ np.diag([1.0, 0.5]))


def test_white_noise_lag_covariances():
    model = LinearProcessModel.fma([np.zeros((2, 2))], NoiseSpec([1.0, 0.5]))
    lagcovs = analytic_lag_covs(model)
    assert np.array_equal(lagcovs.lag(0), np.diag([1.0, 0.5]))
    assert not np.any(lagcovs.lag(1))
    assert not np.any(lagcovs.lag(7))


def test_far1_zero_phi():
    model = LinearProcessModel.far1(np.zeros((2, 2)), NoiseSpec([1.0, 0.5]))
    assert np.allclose(analytic_lag_cov_far1(model, 0).entries, np.diag([1.0, 0.5]))
    assert not np.any(analytic_lag_cov_far1(model, 1).entries)


def test_far1_scalar():
    model = LinearProcessModel.far1([[0.8]], NoiseSpec([1.0]))
    c0 = analytic_lag_cov_far1(model, 0).entries[0, 0]
    assert c0 == pytest.approx(1 / 0.36, abs=1e-9)
    assert analytic_lag_cov_far1(model, 1).entries[0, 0] == pytest.approx(0.8 * c0)


def test_far1_diagonal():
    model = LinearProcessModel.far1(np.diag([0.5, 0.2]), NoiseSpec([1.0, 1.0]))
    assert np.allclose(analytic_lag_cov_far1(model, 0).entries, np.diag([4 / 3, 25 / 24]), atol=1e-10)


def test_far1_set_is_truncated():
    model = LinearProcessModel.far1([[0.5]], NoiseSpec([1.0]))
    lagcovs = analytic_lag_covs(model, max_lag=60)
    assert lagcovs.max_lag >= 60
    assert not lagcovs.vanishes_beyond
    with pytest.raises(DimensionError):
        lagcovs.lag(lagcovs.max_lag + 1)


def test_negative_lag_is_transpose(fma2):
    lagcovs = analytic_lag_covs(fma2)
    assert np.array_equal(lagcovs.lag(-1), lagcovs.lag(1).T)
    assert lagcovs.lag(0).shape == (3, 3)


def test_empirical_constant_trajectory():
    assert not np.any(empirical_lag_cov(np.ones((20, 2)), 1).entries)


def test_empirical_lag_too_large():
    with pytest.raises(DimensionError):
        empirical_lag_cov(np.zeros((5, 1)), 5)


def test_empirical_accepts_coord_vectors():
    basis = fourier_basis(Grid(16), 2)
    trajectory = np.random.default_rng(5).standard_normal((30, 2))
    vectors = [CoordVector(basis, row) for row in trajectory]
    assert np.array_equal(empirical_lag_cov(vectors, 1).entries, empirical_lag_cov(trajectory, 1).entries)
    assert np.array_equal(empirical_lag_covs(vectors, 3).lag(2), empirical_lag_covs(trajectory, 3).lag(2))


def test_empirical_scalar_ma1(scalar_ma1):
    n = 100_000
    X = simulate(scalar_ma1, n, seed=5)
    assert abs(empirical_lag_cov(X, 1).entries[0, 0] - 0.5) <= 3 * np.sqrt(3 / n)


def test_empirical_noise_lag0():
    n = 100_000
    eps = simulate_noise(NoiseSpec([1.0, 0.25]), n, seed=9)
    estimate = empirical_lag_cov(eps, 0).entries
    assert np.abs(estimate - np.diag([1.0, 0.25])).max() <= 3 * np.sqrt(2 / n)


def test_empirical_set(scalar_ma1):
    lagcovs = empirical_lag_covs(simulate(scalar_ma1, 500, seed=1), 3)
    assert lagcovs.provenance == "empirical"
    assert lagcovs.max_lag == 3


def test_projected_lag_cov():
    lag1 = np.arange(16.0).reshape(4, 4)
    lagcovs = LagCovSet((10 * np.eye(4), lag1))
    assert np.array_equal(projected_lag_cov(lagcovs, 3, 2, 1).entries, lag1[:3, :2])
    assert np.array_equal(projected_lag_cov(lagcovs, 4, 4, 1).entries, lag1)
    assert projected_lag_cov(lagcovs, 1, 1, 0).entries.shape == (1, 1)
    with pytest.raises(DimensionError):
        projected_lag_cov(lagcovs, 5, 1, 0)


def test_block_covariance_single_step(fma2):
    lagcovs = analytic_lag_covs(fma2)
    block = assemble_block_covariance(lagcovs, (3,))
    assert np.allclose(block.matrix, lagcovs.lag(0))


def test_block_covariance_white_noise():
    model = LinearProcessModel.fma([np.zeros((2, 2))], NoiseSpec([1.0, 0.5]))
    block = assemble_block_covariance(analytic_lag_covs(model), (2, 2, 2))
    assert np.array_equal(block.matrix, np.diag([1.0, 0.5] * 3))


def test_block_covariance_scalar_ma1(scalar_ma1):
    block = assemble_block_covariance(analytic_lag_covs(scalar_ma1), (1, 1, 1))
    expected = np.array([[1.25, 0.5, 0.0], [0.5, 1.25, 0.5], [0.0, 0.5, 1.25]])
    assert np.allclose(block.matrix, expected)


def test_block_covariance_mixed_dims(fma2):
    lagcovs = analytic_lag_covs(fma2)
    block = assemble_block_covariance(lagcovs, (1, 2, 2))
    assert block.k == 5
    assert np.allclose(block.block(3, 1), lagcovs.lag(2)[:2, :1])
    assert np.allclose(block.block(1, 3), lagcovs.lag(-2)[:1, :2])
    with pytest.raises(ValueError):
        assemble_block_covariance(lagcovs, (2, 1))
    with pytest.raises(DimensionError):
        assemble_block_covariance(lagcovs, (1, 4))


def test_block_covariance_psd(fma2):
    block = assemble_block_covariance(analytic_lag_covs(fma2), (3,) * 8)
    assert block.min_eigenvalue >= -1e-8


def test_lag_cov_file(tmp_path, fma2):
    lagcovs = analytic_lag_covs(fma2)
    path = tmp_path / "lagcovs.txt"
    write_lag_covs(path, lagcovs)
    assert path.read_text().startswith("# lagcov D=3 H=2")

    loaded = read_lag_covs(path)
    assert loaded.vanishes_beyond
    assert np.array_equal(loaded.lag(2), lagcovs.lag(2))


def test_eigenbasis_identity_rotation():
    eigenbasis = covariance_eigenbasis(np.diag([3.0, 2.0, 1.0]))
    assert np.allclose(eigenbasis.eigenvalues, [3.0, 2.0, 1.0])
    assert np.allclose(eigenbasis.rotation, np.eye(3))
    assert eigenbasis.tail_sum(1) == pytest.approx(3.0)


def test_eigenbasis_two_by_two():
    eigenbasis = covariance_eigenbasis(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(eigenbasis.eigenvalues, [3.0, 1.0])
    assert np.allclose(eigenbasis.rotation[:, 0], np.array([1.0, 1.0]) / np.sqrt(2))
    assert np.allclose(eigenbasis.rotation[:, 1], np.array([1.0, -1.0]) / np.sqrt(2))


def test_eigenbasis_reconstruction():
    B = np.random.default_rng(8).standard_normal((6, 6))
    C0 = B @ B.T
    eigenbasis = covariance_eigenbasis(C0)
    V, lam = eigenbasis.rotation, eigenbasis.eigenvalues
    assert np.abs(C0 - V @ np.diag(lam) @ V.T).max() <= 1e-10 * np.abs(C0).max()
    assert np.all(np.diff(lam) <= 0)


def test_eigenbasis_rejects_indefinite():
    with pytest.raises(ValueError):
        covariance_eigenbasis(np.diag([1.0, -0.5]))


def test_eigenbasis_rotates_basis_functions():
    basis = fourier_basis(Grid(64), 2)
    eigenbasis = covariance_eigenbasis(np.array([[2.0, 1.0], [1.0, 2.0]]), basis)
    rotated = eigenbasis.basis
    assert rotated.kind == "covariance-eigenbasis"
    assert np.abs(rotated.gram_matrix() - np.eye(2)).max() <= 1e-8
    expected = (basis.functions[0].values + basis.functions[1].values) / np.sqrt(2)
    assert np.allclose(rotated.functions[0].values, expected)


def test_rotated_lag_covariances_are_diagonal_at_lag0(fma2):
    lagcovs = analytic_lag_covs(fma2)
    eigenbasis = covariance_eigenbasis(lagcovs.lag(0))
    rotated = eigenbasis.rotate_lag_covs(lagcovs)
    assert np.allclose(rotated.lag(0), np.diag(eigenbasis.eigenvalues), atol=1e-12)
