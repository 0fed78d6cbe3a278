import numpy as np
import pytest

from spnkit.core import Context, DataError, finalize, generate_random_structure, make_leaf, make_sum
from spnkit.inference import log_likelihood
from spnkit.learning import ParameterLayout, backprop_log_gradients, finite_difference_gradient, optimize_parameters
from spnkit.sampling import sample
from spnkit.systems import OptimizeOptions

nan = np.nan


def _normalized(network):
    layout = ParameterLayout(network)
    return layout.unpack(layout.pack())


@pytest.mark.parametrize("seed", range(20))
def test_backprop_matches_finite_differences(seed):
    context = Context.from_families(["Gaussian", "Categorical", "Pareto"],
                                    cardinalities={1: 3}, ranges={0: (-2.0, 2.0)})
    network = _normalized(generate_random_structure(context, depth=2, fanout=2, seed=seed))
    data = sample(network, np.full((40, 3), nan), seed)
    data[::5, 1] = nan

    exact = backprop_log_gradients(network, data)
    approximate, layout = finite_difference_gradient(network, data)
    assert len(exact) == layout.size
    np.testing.assert_allclose(exact.values, approximate, rtol=1e-4, atol=1e-6)


def test_weight_gradient_points_towards_the_better_child():
    network = finalize(make_sum([make_leaf("gaussian", {"mean": 0.0, "stdev": 1.0}, 0),
                                 make_leaf("gaussian", {"mean": 5.0, "stdev": 1.0}, 0)], [0.5, 0.5]))
    gradient = backprop_log_gradients(network, np.array([[0.1], [-0.2], [0.3]]))
    weights = gradient.for_node(network.root)
    assert weights[0] > 0 > weights[1]
    assert abs(weights.sum()) < 1e-12


def test_identical_children_have_zero_weight_gradient():
    leaf = {"mean": 1.0, "stdev": 2.0}
    network = finalize(make_sum([make_leaf("gaussian", leaf, 0), make_leaf("gaussian", leaf, 0)], [0.3, 0.7]))
    gradient = backprop_log_gradients(network, np.array([[0.0], [3.0]]))
    np.testing.assert_allclose(gradient.for_node(network.root), 0.0, atol=1e-12)


def test_zero_likelihood_rows_are_excluded(pareto_mixture):
    gradient = backprop_log_gradients(pareto_mixture, np.array([[0.5], [2.0], [3.0]]))
    assert gradient.rows_used == 2
    assert gradient.rows_excluded == 1
    assert np.isfinite(gradient.values).all()
    with pytest.raises(DataError, match="finite"):
        backprop_log_gradients(pareto_mixture, np.array([[0.5]]))


def test_zero_epochs_returns_the_input(binary):
    result = optimize_parameters(binary, np.array([[1.0, 0.0, 1.0]]), OptimizeOptions(epochs=0))
    assert result is binary


def test_optimizing_one_row_improves_it(binary):
    row = np.array([[1.0, 0.0, 1.0]])
    optimized = optimize_parameters(binary, row, OptimizeOptions(epochs=50, learning_rate=0.1))
    assert [(n.kind, n.children) for n in optimized.nodes] == [(n.kind, n.children) for n in binary.nodes]
    assert optimized != binary
    assert log_likelihood(optimized, row)[0] >= -1.907305
    assert log_likelihood(optimized, row)[0] > log_likelihood(binary, row)[0]


@pytest.mark.parametrize("learning_rate", [0.01, 0.5, 5.0])
def test_optimizer_never_returns_a_worse_network(binary, learning_rate):
    data = sample(binary, np.full((200, 3), nan), 8)
    data[::3, 2] = nan
    before = log_likelihood(binary, data).mean()
    optimized = optimize_parameters(binary, data, OptimizeOptions(epochs=20, learning_rate=learning_rate))
    assert log_likelihood(optimized, data).mean() >= before


def test_repeated_row_drives_log_likelihood_towards_zero(binary):
    rows = np.tile([1.0, 0.0, 1.0], (10, 1))
    scores = []
    for epochs in [0, 10, 100, 300]:
        optimized = optimize_parameters(binary, rows, OptimizeOptions(epochs=epochs, learning_rate=1.0))
        scores.append(log_likelihood(optimized, rows).mean())
    assert scores == sorted(scores)
    assert scores[0] < -1.9
    assert -0.05 < scores[-1] <= 0.0
