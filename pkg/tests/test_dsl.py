import numpy as np
import pytest

from spnkit.core import (DslSyntaxError, InvalidParamsError, ModelError, NodeKind, UnknownFamilyError,
                         WeightNormalizationError, finalize, make_leaf, make_product, make_sum)
from spnkit.inference import log_likelihood
from spnkit.io import parse_dsl, print_dsl
from spnkit.io.dsl import tokenize

from conftest import ALL_CONFIGURATIONS, BINARY_DSL

GAUSSIAN_PAIR = "0.5 * Gaussian(mean=0, stdev=1, scope=0) + {} * Gaussian(mean=1, stdev=2, scope=0)"


def test_printed_text_parses_back_to_the_same_network(binary):
    text = print_dsl(binary)
    again = parse_dsl(text)
    assert again == binary
    assert print_dsl(again) == text
    for a, b in zip(again.nodes, binary.nodes):
        if a.kind == NodeKind.SUM:
            assert a.weights == b.weights
        elif a.kind == NodeKind.LEAF:
            assert a.params == b.params


def test_printed_form(binary):
    text = print_dsl(binary)
    assert text.startswith("0.40000000000000002 * (Categorical(p=[0.20000000000000001, 0.80000000000000004], scope=0)")
    assert text.endswith(")\n")
    assert text.count("\n") == 1


def test_non_sum_root_is_printed_as_one_term():
    network = parse_dsl("Gaussian(mean=1.5, stdev=2, scope=0) * Categorical(p=[0.25, 0.75], scope=1)")
    assert network[network.root].kind == NodeKind.PRODUCT
    assert print_dsl(network) == \
        "1.0 * (Gaussian(mean=1.5, stdev=2.0, scope=0) * Categorical(p=[0.25, 0.75], scope=1))\n"
    assert parse_dsl(print_dsl(network)) == network


def test_single_weighted_term_is_its_child():
    network = parse_dsl("1.0 * Gaussian(mean=0, stdev=1, scope=0)")
    assert len(network) == 1


def test_numbers_and_comments():
    text = "# header\n5e-1 * Gaussian(mean=-1.5E0, stdev=.5, scope=0)  # left\n+ 0.5 * Gaussian(mean=2., stdev=1, scope=0)\n"
    network = parse_dsl(text)
    first = network[network[network.root].children[0]]
    assert first.params == {"mean": -1.5, "stdev": 0.5}


def test_source_and_printed_text_evaluate_identically(binary_text):
    network = parse_dsl(binary_text)
    again = parse_dsl(print_dsl(network))
    np.testing.assert_array_equal(log_likelihood(network, ALL_CONFIGURATIONS),
                                  log_likelihood(again, ALL_CONFIGURATIONS))


def test_weights_must_add_up_to_one():
    with pytest.raises(WeightNormalizationError, match="line 1, column 1"):
        parse_dsl(GAUSSIAN_PAIR.format("0.6"))
    network = parse_dsl(GAUSSIAN_PAIR.format("0.5000004"))
    assert abs(sum(network[network.root].weights) - 1.0) < 1e-12


def test_unexpected_character_position():
    with pytest.raises(DslSyntaxError) as excinfo:
        parse_dsl("0.5 * Gaussian(mean=0, stdev=1, scope=0)\n+ 0.5 * ?")
    assert (excinfo.value.line, excinfo.value.column) == (2, 9)


def test_unclosed_leaf_reports_expected_tokens():
    with pytest.raises(DslSyntaxError) as excinfo:
        parse_dsl("Categorical(p=[0.5, 0.5], scope=0")
    assert excinfo.value.line == 1
    assert "end of input" in str(excinfo.value)
    assert excinfo.value.expected == ["','"]


def test_trailing_tokens_are_rejected():
    with pytest.raises(DslSyntaxError, match="end of input"):
        parse_dsl("Gaussian(mean=0, stdev=1, scope=0) )")


@pytest.mark.parametrize("text, message", [
    ("-0.5 * Gaussian(mean=0, stdev=1, scope=0) + 1.5 * Gaussian(mean=0, stdev=1, scope=0)", "non-negative"),
    ("Gaussian(mean=0, mean=1, stdev=1, scope=0)", "duplicate"),
    ("Gaussian(mean=0, stdev=1)", "scope"),
    ("Gaussian(mean=0, stdev=1, scope=1.5)", "scope"),
    ("Gaussian(mean=0, stdev=1, scope=[0])", "scope"),
    ("0.5 Gaussian(mean=0, stdev=1, scope=0)", "expected '\\*'"),
])
def test_syntax_errors(text, message):
    with pytest.raises(DslSyntaxError, match=message):
        parse_dsl(text)


def test_unknown_family_and_bad_params():
    with pytest.raises(UnknownFamilyError):
        parse_dsl("Poisson(mu=1, scope=0)")
    with pytest.raises(InvalidParamsError):
        parse_dsl("Gaussian(mean=0, stdev=-1, scope=0)")


def test_shared_child_is_printed_once_per_parent():
    shared = make_leaf("gaussian", {"mean": 0.0, "stdev": 1.0}, 1)
    network = finalize(make_sum([make_product([make_leaf("categorical", {"p": [0.2, 0.8]}, 0), shared]),
                                 make_product([make_leaf("categorical", {"p": [0.6, 0.4]}, 0), shared])],
                                [0.5, 0.5]))
    again = parse_dsl(print_dsl(network))
    assert (len(network), len(again)) == (6, 7)
    rows = np.array([[0.0, 0.3], [1.0, -1.2], [np.nan, 2.0]])
    np.testing.assert_allclose(log_likelihood(again, rows), log_likelihood(network, rows), rtol=0, atol=1e-12)


def _binary_tokens():
    return [token.text for token in tokenize(BINARY_DSL) if token.kind != "EOF"]


def test_binary_tokens_rejoin_to_the_same_network(binary):
    assert parse_dsl(" ".join(_binary_tokens())) == binary


@pytest.mark.parametrize("position", range(len(_binary_tokens())))
def test_deleting_any_token_is_rejected(position):
    tokens = _binary_tokens()
    del tokens[position]
    with pytest.raises(ModelError):
        parse_dsl(" ".join(tokens))


@pytest.mark.parametrize("seed", range(10))
def test_perturbed_weight_is_rejected(seed):
    tokens = _binary_tokens()
    weights = [i for i, (text, after) in enumerate(zip(tokens, tokens[1:])) if after == "*" and text[0].isdigit()]
    assert len(weights) == 4
    rng = np.random.default_rng(seed)
    index = weights[int(rng.integers(len(weights)))]
    tokens[index] = repr(float(tokens[index]) * rng.uniform(1.1, 2.0))
    with pytest.raises(WeightNormalizationError):
        parse_dsl(" ".join(tokens))
