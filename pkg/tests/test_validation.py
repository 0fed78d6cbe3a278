import pytest

from spnkit.core import (CATEGORICAL, ConfigurationError, ConstructionError, Context, InvalidNetworkError, Network,
                         ViolationKind, finalize, generate_random_structure, make_leaf, make_product, make_sum,
                         require_valid, structure_stats, validate)
from spnkit.core.network import LeafNode, SumNode

from conftest import cat


def test_binary_example_is_valid(binary):
    report = validate(binary)
    assert report.ok
    assert str(report) == "ok"
    assert require_valid(binary) is binary


def test_binary_example_structure_stats(binary):
    stats = structure_stats(binary)
    assert stats.as_dict() == {"sum": 2, "product": 4, "leaf": 8, "edges": 13, "depth": 4, "params": 10}
    assert stats.nodes == 14


def test_single_leaf_stats():
    stats = structure_stats(finalize(cat([0.2, 0.8], 0)))
    assert stats.as_dict() == {"sum": 0, "product": 0, "leaf": 1, "edges": 0, "depth": 0, "params": 1}


def test_overlapping_product_breaks_decomposability():
    network = finalize(make_product([cat([0.5, 0.5], 0), cat([0.2, 0.8], 0)]))
    report = validate(network)
    assert not report.ok
    assert [v.kind for v in report.violations] == [ViolationKind.DECOMPOSABILITY]
    assert "decomposability" in str(report)
    with pytest.raises(InvalidNetworkError, match="decomposability"):
        require_valid(network)


def test_sum_over_different_scopes_breaks_completeness():
    network = finalize(make_sum([cat([0.5, 0.5], 0), cat([0.2, 0.8], 1)], [0.5, 0.5]))
    violations = validate(network).of_kind(ViolationKind.COMPLETENESS)
    assert len(violations) == 1
    assert violations[0].node == network.root


def test_hand_built_violations_are_reported_not_raised():
    leaf0 = LeafNode(CATEGORICAL, {"p": (0.5, 0.6)}, 0)
    leaf1 = LeafNode(CATEGORICAL, {"p": (0.5, 0.5)}, 0)
    root = SumNode((0, 1), (0.5, 0.6))
    scope = frozenset({0})
    report = validate(Network([leaf0, leaf1, root], [scope, scope, scope]))
    kinds = {v.kind for v in report.violations}
    assert kinds == {ViolationKind.PARAM_INVALID, ViolationKind.WEIGHT_NORMALIZATION}


def test_child_ids_must_precede_parents():
    leaf = LeafNode(CATEGORICAL, {"p": (0.5, 0.5)}, 0)
    root = SumNode((1, 2), (0.5, 0.5))
    scope = frozenset({0})
    report = validate(Network([root, leaf, leaf], [scope, scope, scope]))
    assert report.of_kind(ViolationKind.STRUCTURAL)


@pytest.fixture
def mixed_context():
    return Context.from_families(["Gaussian", "Categorical", "Gaussian", "Pareto"],
                                 cardinalities={1: 3}, ranges={0: (0.0, 1.0), 2: (-5.0, 5.0)})


def test_random_structures_are_valid_and_reproducible(mixed_context):
    first = generate_random_structure(mixed_context, depth=2, fanout=3, seed=11)
    second = generate_random_structure(mixed_context, depth=2, fanout=3, seed=11)
    assert validate(first).ok
    assert first == second
    assert first.scope == frozenset({0, 1, 2, 3})


def test_random_structures_differ_across_seeds(mixed_context):
    networks = [generate_random_structure(mixed_context, depth=2, fanout=2, seed=s) for s in range(5)]
    assert any(a != b for a, b in zip(networks, networks[1:]))


def test_random_structure_arguments_are_checked(mixed_context):
    with pytest.raises(ConstructionError):
        generate_random_structure(mixed_context, depth=0, fanout=2, seed=0)
    with pytest.raises(ConstructionError):
        generate_random_structure(mixed_context, depth=1, fanout=1, seed=0)
    with pytest.raises(ConfigurationError):
        generate_random_structure(Context.from_families(["Categorical", "Gaussian"]), depth=1, fanout=2, seed=0)


def test_single_leaf_network_width_follows_its_variable():
    leaf = make_leaf("gaussian", {"mean": 0.0, "stdev": 1.0}, 2)
    network = finalize(leaf)
    assert validate(network).ok
    assert network.num_variables == 3
