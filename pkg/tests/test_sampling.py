import math

import numpy as np
import pytest

from spnkit.core import DataError, UnknownFamilyError, finalize, make_leaf, make_product, make_sum
from spnkit.sampling import leaf_sample, random_source, sample

from conftest import ALL_CONFIGURATIONS, binary_joint, cat

nan = np.nan


def test_unconditional_samples_follow_the_joint(binary):
    draws = sample(binary, np.full((200000, 3), nan), 7)
    codes = (draws @ np.array([4.0, 2.0, 1.0])).astype(int)
    frequencies = np.bincount(codes, minlength=8) / len(draws)
    expected = np.array([binary_joint(*row) for row in ALL_CONFIGURATIONS])
    assert 0.5 * np.abs(frequencies - expected).sum() < 0.01


def test_conditional_samples_follow_the_posterior(binary):
    template = np.tile([nan, 0.0, 0.0], (20000, 1))
    draws = sample(binary, template, 21)
    np.testing.assert_array_equal(draws[:, 1:], 0.0)
    assert abs(draws[:, 0].mean() - 0.8) < 0.01


def test_evidence_cells_are_never_touched(binary):
    template = np.array([[1.0, nan, 0.0], [nan, 1.0, nan], [0.0, 0.0, 1.0]])
    draws = sample(binary, template, 3)
    observed = ~np.isnan(template)
    np.testing.assert_array_equal(draws[observed], template[observed])
    assert not np.isnan(draws).any()
    assert np.isin(draws, [0.0, 1.0]).all()


def test_same_seed_same_samples(binary):
    template = np.full((50, 3), nan)
    np.testing.assert_array_equal(sample(binary, template, 99), sample(binary, template, 99))
    assert not np.array_equal(sample(binary, template, 99), sample(binary, template, 100))


def test_generator_is_accepted_and_advanced(binary):
    rng = random_source(5)
    assert random_source(rng) is rng
    first = sample(binary, np.full((20, 3), nan), rng)
    second = sample(binary, np.full((20, 3), nan), rng)
    assert not np.array_equal(first, second)


def test_complete_rows_come_back_unchanged(binary):
    result = sample(binary, ALL_CONFIGURATIONS, 0)
    np.testing.assert_array_equal(result, ALL_CONFIGURATIONS)
    assert result is not ALL_CONFIGURATIONS


def test_impossible_evidence_is_a_data_error():
    network = finalize(make_product([cat([1.0, 0.0], 0), cat([0.5, 0.5], 1)]))
    with pytest.raises(DataError, match="probability zero"):
        sample(network, np.array([[1.0, nan]]), 0)


def test_gaussian_mixture_samples():
    network = finalize(make_sum([make_leaf("gaussian", {"mean": -5.0, "stdev": 1.0}, 0),
                                 make_leaf("gaussian", {"mean": 5.0, "stdev": 1.0}, 0)], [0.25, 0.75]))
    draws = sample(network, np.full((40000, 1), nan), 11)[:, 0]
    assert abs((draws > 0).mean() - 0.75) < 0.01
    assert abs(draws.mean() - 2.5) < 0.1


def test_leaf_sample_per_family():
    rng = random_source(4)
    assert {leaf_sample("categorical", {"p": [1.0, 0.0]}, rng) for _ in range(200)} == {0.0}
    assert min(leaf_sample("pareto", {"a": 2.0}, rng) for _ in range(2000)) >= 1.0
    draws = [leaf_sample("gaussian", {"mean": 5.0, "stdev": 1.0}, rng) for _ in range(20000)]
    assert abs(np.mean(draws) - 5.0) < 0.03


def test_leaf_sample_unknown_family():
    with pytest.raises(UnknownFamilyError):
        leaf_sample("poisson", {"rate": 1.0}, 0)


@pytest.mark.parametrize("evidence", [[nan, nan, nan], [1.0, nan, nan], [nan, 0.0, nan], [nan, 0.0, 0.0]])
def test_conditional_frequencies_match_enumeration(binary, evidence):
    evidence = np.array(evidence)
    draws = sample(binary, np.tile(evidence, (100000, 1)), 2024)
    observed = ~np.isnan(evidence)
    consistent = [row for row in ALL_CONFIGURATIONS if np.array_equal(row[observed], evidence[observed])]
    joint = np.array([binary_joint(*row) for row in consistent])
    for row, p in zip(consistent, joint / joint.sum()):
        frequency = np.all(draws == row, axis=1).mean()
        assert abs(frequency - p) <= 3 * math.sqrt(p * (1 - p) / len(draws))
