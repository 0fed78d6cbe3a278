import math

import numpy as np
import pytest

from spnkit.core import Context, DataError, NodeKind, validate
from spnkit.inference import log_likelihood, mpe
from spnkit.io import to_json
from spnkit.learning import (column_partition, dependence_score, fit_leaf_mle, learn_classifier, learn_structure,
                             row_cluster)
from spnkit.systems import LearnHyperparams


def test_categorical_fit_is_laplace_smoothed():
    column = Context.from_families(["Categorical"], cardinalities={0: 3})[0]
    params = fit_leaf_mle("Categorical", [0, 1, 1, 1, np.nan], column)
    np.testing.assert_allclose(params["p"], [2 / 7, 4 / 7, 1 / 7])
    params = fit_leaf_mle("categorical", [0, 1, 1, 1], hyperparams=LearnHyperparams(laplace_alpha=0.0))
    np.testing.assert_allclose(params["p"], [0.25, 0.75])


def test_gaussian_fit_and_stdev_floor():
    params = fit_leaf_mle("Gaussian", [1.0, 2.0, 3.0])
    assert params["mean"] == 2.0
    assert abs(params["stdev"] - math.sqrt(2.0 / 3.0)) < 1e-12
    assert fit_leaf_mle("Gaussian", [4.0, 4.0, 4.0])["stdev"] == 1e-6


def test_pareto_fit():
    params = fit_leaf_mle("Pareto", [math.e, math.e, math.e ** 2])
    assert abs(params["a"] - 0.75) < 1e-12
    with pytest.raises(DataError):
        fit_leaf_mle("Pareto", [0.5, 2.0])


def test_fit_needs_observed_values():
    with pytest.raises(DataError, match="empty"):
        fit_leaf_mle("Gaussian", [np.nan, np.nan])


def test_row_cluster_separates_two_blobs(two_cluster_data):
    labels = row_cluster(two_cluster_data, [0, 1], 2, 0)
    truth = two_cluster_data[:, 2].astype(int)
    assert labels[0] == 0
    assert (labels == truth).mean() > 0.98


def test_row_cluster_is_deterministic(two_cluster_data):
    first = row_cluster(two_cluster_data, [0, 1], 3, 17)
    second = row_cluster(two_cluster_data, [0, 1], 3, 17)
    np.testing.assert_array_equal(first, second)


def test_identical_rows_form_one_cluster():
    data = np.tile([1.0, 2.0], (30, 1))
    np.testing.assert_array_equal(row_cluster(data, [0, 1], 2, 0), np.zeros(30, dtype=int))


def test_independent_columns_are_separated():
    data = np.random.default_rng(3).normal(size=(1000, 3))
    assert column_partition(data, [0, 1, 2]) == [[0], [1], [2]]


def test_dependent_columns_stay_together():
    rng = np.random.default_rng(4)
    base = rng.normal(size=1000)
    data = np.c_[rng.normal(size=1000), base, 2.0 * base + 1.0]
    assert column_partition(data, [0, 1, 2]) == [[0], [1, 2]]
    assert column_partition(data, [0, 1, 2], threshold=1.0) == [[0], [1], [2]]


def test_dependence_scores_by_column_type(two_cluster_data, classifier_context):
    assert dependence_score(two_cluster_data, 0, 2, classifier_context) > 0.9
    labels = np.c_[two_cluster_data[:, 2], two_cluster_data[:, 2]]
    context = Context.from_families(["Categorical", "Categorical"])
    assert abs(dependence_score(labels, 0, 1, context) - 1.0) < 1e-9
    constant = np.c_[np.ones(10), np.arange(10.0)]
    assert dependence_score(constant, 0, 1) == 0.0


def test_learned_network_beats_independent_baseline(two_cluster_data):
    features = two_cluster_data[:, :2]
    network = learn_structure(features, Context.from_families(["Gaussian", "Gaussian"]))
    assert validate(network).ok
    assert network[network.root].kind == NodeKind.SUM

    baseline = 0.0
    for column in features.T:
        mean, stdev = column.mean(), column.std()
        baseline += np.mean(-0.5 * ((column - mean) / stdev) ** 2 - math.log(stdev * math.sqrt(2 * math.pi)))
    assert log_likelihood(network, features).mean() >= baseline + 1.0


def test_single_column_learns_a_leaf():
    data = np.random.default_rng(0).normal(size=(50, 1))
    network = learn_structure(data, Context.from_families(["Gaussian"]))
    assert len(network) == 1
    assert network[0].kind == NodeKind.LEAF


def test_small_data_is_factorized(two_cluster_data):
    network = learn_structure(two_cluster_data, Context.from_families(["Gaussian", "Gaussian", "Categorical"]),
                              LearnHyperparams(min_instances=5000))
    root = network[network.root]
    assert root.kind == NodeKind.PRODUCT
    assert [network[c].scope_var for c in root.children] == [0, 1, 2]


def test_learning_is_deterministic(two_cluster_data, classifier_context):
    hyperparams = LearnHyperparams(seed=42, cluster_count=3)
    first = learn_structure(two_cluster_data, classifier_context, hyperparams)
    second = learn_structure(two_cluster_data, classifier_context, hyperparams)
    assert to_json(first) == to_json(second)


def test_training_data_must_be_complete(classifier_context):
    data = np.array([[1.0, 2.0, 0.0], [1.0, np.nan, 1.0]])
    with pytest.raises(DataError) as excinfo:
        learn_structure(data, classifier_context)
    assert (excinfo.value.row, excinfo.value.column) == (1, 1)
    with pytest.raises(DataError):
        learn_structure(np.empty((0, 3)), classifier_context)


def test_classifier_weights_are_label_frequencies(two_cluster_data, classifier_context):
    network = learn_classifier(two_cluster_data, classifier_context, 2)
    root = network[network.root]
    assert root.kind == NodeKind.SUM
    np.testing.assert_allclose(root.weights, [0.5, 0.5])


def test_classifier_predicts_labels(two_cluster_data, classifier_context):
    network = learn_classifier(two_cluster_data, classifier_context, 2)
    queries = two_cluster_data.copy()
    queries[:, 2] = np.nan
    predicted = mpe(network, queries)[:, 2]
    assert (predicted == two_cluster_data[:, 2]).mean() >= 0.95
    queries = np.array([[3.0, 4.0, np.nan], [12.0, 18.0, np.nan]])
    np.testing.assert_array_equal(mpe(network, queries), [[3.0, 4.0, 0.0], [12.0, 18.0, 1.0]])


def test_classifier_with_a_single_label(two_cluster_data, classifier_context):
    data = two_cluster_data[:500]
    network = learn_classifier(data, classifier_context, 2)
    assert validate(network).ok
    queries = data[:10].copy()
    queries[:, 2] = np.nan
    np.testing.assert_array_equal(mpe(network, queries)[:, 2], 0.0)


def test_classifier_label_must_be_categorical(two_cluster_data, classifier_context):
    with pytest.raises(DataError, match="not categorical"):
        learn_classifier(two_cluster_data, classifier_context, 0)
    with pytest.raises(DataError, match="out of range"):
        learn_classifier(two_cluster_data, classifier_context, 5)
