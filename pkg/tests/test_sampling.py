"""
Tests for sampling from U_delta
"""

from fractions import Fraction

import numpy as np
import pytest

from src.core.bounds import u_delta
from src.core.sampling import empirical_copula, sample_u_delta
from src.core.verify import uniform_grid

F = Fraction


def test_samples_are_reproducible(w_diag):
    first = sample_u_delta(w_diag, 500, seed=7)
    second = sample_u_delta(w_diag, 500, seed=7)
    assert first.shape == (500, 2)
    assert np.array_equal(first, second)
    assert not np.array_equal(first, sample_u_delta(w_diag, 500, seed=8))


def test_samples_lie_in_unit_square(ex412):
    samples = sample_u_delta(ex412, 2000, seed=1)
    assert np.all((samples >= 0) & (samples <= 1))


def test_w_samples_follow_the_two_lines(w_diag):
    samples = sample_u_delta(w_diag, 1000, seed=3)
    x, y = samples[:, 0], samples[:, 1]
    low = x < 0.5
    assert np.allclose(y[low], x[low] + 0.5)
    assert np.allclose(y[~low], x[~low] - 0.5)


def test_rejects_empty_request(w_diag):
    with pytest.raises(ValueError):
        sample_u_delta(w_diag, 0)


def test_empirical_copula_counts():
    samples = np.array([[0.1, 0.2], [0.6, 0.7], [0.9, 0.4]])
    c = empirical_copula(samples, [F(0), F(1, 2), F(1)])
    assert c[1, 1] == pytest.approx(1 / 3)
    assert c[2, 2] == pytest.approx(1.0)
    assert c[2, 1] == pytest.approx(2 / 3)
    assert c[0, 0] == 0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["x2_chords", "ex412", "w_diag"])
def test_empirical_copula_approaches_u(name, request):
    d = request.getfixturevalue(name)
    points = uniform_grid(32)
    exact = u_delta(d).grid(points).astype(float)
    empirical = empirical_copula(sample_u_delta(d, 100_000, seed=2024), points)
    assert np.abs(empirical - exact).max() < 0.01
