# tests/test_sampler.py

import math

import numpy as np
import pytest
from scipy.stats import kstest

from config.settings import KS_ALPHA, SAMPLER_BLOCK_SIZE, SAMPLER_CHECK_N
from core.copulas import SCHEME_MODES, RandomizationScheme, checkerboard, interpolating_cdf
from core.errors import InputError
from core.measures import JointDistribution
from core.sampler import block_generator, interpolating_sample

SEED = 424242
GRID = [0.25, 0.5, 0.75]


def _empirical_cdf(samples, u, v):
    return float(np.mean((samples[:, 0] <= u) & (samples[:, 1] <= v)))


def _within_three_se(samples, u, v, expected):
    n = len(samples)
    se = math.sqrt(max(expected * (1 - expected), 1e-12) / n)
    return abs(_empirical_cdf(samples, u, v) - expected) <= 3 * se


@pytest.mark.parametrize("mode", SCHEME_MODES)
def test_reproducible_across_workers_and_ranges(mode, bernoulli_example):
    scheme = RandomizationScheme(mode)
    n = 3 * SAMPLER_BLOCK_SIZE + 17
    serial = interpolating_sample(bernoulli_example, scheme, n, SEED)
    threaded = interpolating_sample(bernoulli_example, scheme, n, SEED, workers=4)
    np.testing.assert_array_equal(serial, threaded)
    cut = SAMPLER_BLOCK_SIZE + 5
    head = interpolating_sample(bernoulli_example, scheme, cut, SEED)
    tail = interpolating_sample(bernoulli_example, scheme, n - cut, SEED, start=cut, workers=2)
    np.testing.assert_array_equal(np.vstack([head, tail]), serial)


def test_different_seeds_differ(bernoulli_example):
    scheme = RandomizationScheme()
    a = interpolating_sample(bernoulli_example, scheme, 100, 1)
    b = interpolating_sample(bernoulli_example, scheme, 100, 2)
    assert not np.array_equal(a, b)


def test_block_generator_streams_are_distinct():
    a = block_generator(SEED, 0).random(4)
    b = block_generator(SEED, 1).random(4)
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(a, block_generator(SEED, 0).random(4))


def test_bad_sizes(bernoulli_example):
    with pytest.raises(InputError):
        interpolating_sample(bernoulli_example, RandomizationScheme(), 0, SEED)
    with pytest.raises(InputError):
        interpolating_sample(bernoulli_example, RandomizationScheme(), 10, SEED, start=-1)


def test_samples_stay_in_atom_cells(bernoulli_example):
    samples = interpolating_sample(bernoulli_example, RandomizationScheme("independent"), 5000, SEED)
    assert samples.shape == (5000, 2)
    assert np.all((samples > 0) & (samples <= 1))


@pytest.mark.parametrize("mode", SCHEME_MODES)
def test_marginals_are_uniform(mode, bernoulli_example):
    J = JointDistribution((0, 1, 2), ("a", "b"), np.array([[0.1, 0.2], [0.0, 0.3], [0.25, 0.15]]))
    for joint in (bernoulli_example, J):
        samples = interpolating_sample(joint, RandomizationScheme(mode), SAMPLER_CHECK_N, SEED, workers=4)
        assert kstest(samples[:, 0], "uniform").pvalue > KS_ALPHA
        assert kstest(samples[:, 1], "uniform").pvalue > KS_ALPHA


def test_shared_scheme_matches_checkerboard(bernoulli_example):
    C = checkerboard(bernoulli_example)
    samples = interpolating_sample(bernoulli_example, RandomizationScheme("shared"), SAMPLER_CHECK_N, SEED)
    for u in GRID:
        for v in GRID:
            assert _within_three_se(samples, u, v, C.cdf(u, v))


def test_antithetic_scheme_matches_its_cdf(bernoulli_example):
    scheme = RandomizationScheme("antithetic")
    samples = interpolating_sample(bernoulli_example, scheme, SAMPLER_CHECK_N, SEED + 1)
    for u in GRID:
        for v in GRID:
            assert _within_three_se(samples, u, v, interpolating_cdf(bernoulli_example, scheme, u, v))


def test_antithetic_differs_from_checkerboard(bernoulli_example):
    samples = interpolating_sample(bernoulli_example, RandomizationScheme("antithetic"),
                                   SAMPLER_CHECK_N, SEED)
    # checkerboard gives 0.578125 here, antithetic 0.5
    assert abs(_empirical_cdf(samples, 0.75, 0.75) - 0.5) < 0.01


def test_degenerate_joint():
    J = JointDistribution(("x",), ("y",), np.array([[1.0]]))
    for mode in SCHEME_MODES:
        samples = interpolating_sample(J, RandomizationScheme(mode), 1000, SEED)
        assert np.all((samples > 0) & (samples <= 1))
    anti = interpolating_sample(J, RandomizationScheme("antithetic"), 1000, SEED)
    np.testing.assert_allclose(anti[:, 0] + anti[:, 1], 1.0, atol=1e-15)
