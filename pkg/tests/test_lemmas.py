import numpy as np
import pytest

from flip.evaluation import lemma_checks
from flip.models import LinearProcessModel, NoiseSpec


def test_white_noise_passes():
    model = LinearProcessModel.fma([np.zeros((3, 3))], NoiseSpec([1.0, 0.5, 0.25]))
    report = lemma_checks(model, 3, 5, 4)
    assert report.all_ok
    assert report.cross_covariance_margin == pytest.approx(0.0, abs=1e-12)
    assert report.block_margin == pytest.approx(0.0, abs=1e-9)
    assert report.alpha == pytest.approx(0.25 / (2 * np.pi))


def test_scalar_ma1_passes():
    model = LinearProcessModel.fma([[[0.5]]], NoiseSpec([1.0]))
    report = lemma_checks(model, 1, 10, 10)
    assert report.all_ok
    assert report.block_min_eigenvalue == pytest.approx(1.25 - np.cos(np.pi / 11))
    assert report.alpha == pytest.approx(0.25 / (2 * np.pi), abs=1e-12)


def test_boundary_model_fails_positive_density():
    model = LinearProcessModel.fma([[[1.0]]], NoiseSpec([1.0]))
    report = lemma_checks(model, 1, 10, 10)
    assert not report.positive_density_ok
    assert report.cross_covariance_ok
    assert report.block_spectrum_ok
    assert not report.all_ok

    row = report.as_row()
    assert row["positive_density_ok"] == "fail"
    assert row["cross_covariance_ok"] == "pass"


def test_random_models_pass_covariance_checks():
    rng = np.random.default_rng(40)
    for _ in range(10):
        D = int(rng.integers(2, 5))
        gamma = rng.standard_normal((D, D))
        gamma *= 0.6 / np.linalg.norm(gamma, 2)
        noise = NoiseSpec(np.sort(rng.uniform(0.2, 1.5, D))[::-1])
        model = LinearProcessModel.fma([gamma], noise)
        for d in range(1, D + 1):
            report = lemma_checks(model, d, 6, 5, omega_grid_size=256)
            assert report.cross_covariance_ok
            assert report.block_spectrum_ok


def test_far1_checks():
    model = LinearProcessModel.far1(np.diag([0.5, 0.4, 0.3]), NoiseSpec([1.0, 0.5, 0.25]))
    report = lemma_checks(model, 2, 8, 10)
    assert report.all_ok
    assert report.H == 10
