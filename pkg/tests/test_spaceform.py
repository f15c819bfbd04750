import numpy as np
import pytest

from cotkahler.errors import DomainError, LowDimensionWarning
from cotkahler.spaceform import (SpaceFormChart, fd_christoffel_oracle, fd_curvature_oracle, metric_at,
                                 metric_compatibility_residual, sampling_radius, sectional_curvature)


def skew_curvature(c, g):
    n = g.shape[0]
    d = np.eye(n)
    return c * (np.einsum("hi,jk->hkij", d, g) - np.einsum("hj,ik->hkij", d, g))


def test_origin_is_euclidean():
    ms = metric_at(SpaceFormChart(2, 1.0), [0.0, 0.0])
    assert np.array_equal(ms.g, np.eye(2))
    assert not ms.gamma.any()


def test_flat_chart():
    ms = metric_at(SpaceFormChart(3, 0.0), [0.4, -1.1, 0.7])
    assert np.array_equal(ms.g, np.eye(3))
    assert not ms.gamma.any()
    assert not ms.riemann.any()


def test_negative_riemann_against_oracle():
    chart = SpaceFormChart(2, -1.0)
    x = np.array([0.3, -0.4])
    ms = metric_at(chart, x)
    np.testing.assert_allclose(ms.riemann, skew_curvature(-1.0, ms.g), atol=1e-14)
    np.testing.assert_allclose(fd_curvature_oracle(chart, x), ms.riemann, atol=1e-10)


def test_christoffel_oracle():
    assert np.max(np.abs(fd_christoffel_oracle(SpaceFormChart(3, 0.0), [0.5, 0.2, -0.1], 1e-5))) < 1e-10
    assert np.max(np.abs(fd_christoffel_oracle(SpaceFormChart(3, 1.0), [0.0, 0.0, 0.0], 1e-5))) < 1e-9
    chart = SpaceFormChart(2, -1.0)
    x = [0.2, 0.1]
    np.testing.assert_allclose(fd_christoffel_oracle(chart, x, 1e-5), metric_at(chart, x).gamma, atol=1e-8)


def test_sectional_curvature_examples(rng):
    assert sectional_curvature(SpaceFormChart(3, 0.0), [0.3, 0.2, 0.1], [1, 0, 0], [0, 1, 0]) == 0.0
    assert sectional_curvature(SpaceFormChart(2, 1.0), [0, 0], [1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-12)
    u, v = rng.normal(size=(2, 2))
    k = sectional_curvature(SpaceFormChart(2, -1.0), [0.5, 0.5], u, v)
    assert k == pytest.approx(-1.0, abs=1e-9)


@pytest.mark.parametrize("c", [-1.0, -0.25, 0.0, 1.0, 4.0])
def test_constant_sectional_curvature(c, rng):
    chart = SpaceFormChart(3, c)
    r = sampling_radius(c)
    for _ in range(20):
        x = rng.uniform(-1, 1, 3)
        x *= 0.95 * r * rng.uniform() / np.linalg.norm(x)
        u, v = rng.normal(size=(2, 3))
        assert abs(sectional_curvature(chart, x, u, v) - c) < 1e-9


def test_metric_compatibility(rng):
    chart = SpaceFormChart(3, -1.0)
    assert metric_compatibility_residual(chart, [0.2, -0.3, 0.4]) < 1e-8


def test_riemann_matches_fd_oracle(rng):
    chart = SpaceFormChart(3, 1.0)
    x = np.array([0.3, -0.5, 0.2])
    np.testing.assert_allclose(fd_curvature_oracle(chart, x), metric_at(chart, x).riemann, atol=1e-8)


def test_parallel_vectors_rejected():
    with pytest.raises(DomainError):
        sectional_curvature(SpaceFormChart(2, 1.0), [0.1, 0.1], [1, 2], [2, 4])


def test_outside_chart_rejected():
    with pytest.raises(DomainError):
        metric_at(SpaceFormChart(2, -1.0), [2.0, 0.0])


def test_dimension_validation():
    with pytest.raises(ValueError):
        SpaceFormChart(1, 0.0)
    with pytest.warns(LowDimensionWarning):
        SpaceFormChart(2, 1.0)


def test_sampling_radius():
    assert sampling_radius(1.0) == 1.0
    assert sampling_radius(0.0) == 2.0
    # boundary of the chart for c = -1 is |x| = 2; stay strictly inside
    assert sampling_radius(-4.0) == 0.5
