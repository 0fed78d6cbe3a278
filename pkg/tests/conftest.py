import itertools

import numpy as np
import pytest

from spnkit.core import Context, finalize, make_leaf, make_product, make_sum
from spnkit.io import parse_dsl

BINARY_DSL = """
# three binary variables
0.4 * (Categorical(p=[0.2, 0.8], scope=0) *
       (0.3 * (Categorical(p=[0.3, 0.7], scope=1) *
               Categorical(p=[0.4, 0.6], scope=2))
      + 0.7 * (Categorical(p=[0.5, 0.5], scope=1) *
               Categorical(p=[0.6, 0.4], scope=2))))
+ 0.6 * (Categorical(p=[0.2, 0.8], scope=0) *
         Categorical(p=[0.3, 0.7], scope=1) *
         Categorical(p=[0.4, 0.6], scope=2))
"""

ALL_CONFIGURATIONS = np.array(list(itertools.product([0.0, 1.0], repeat=3)))


def cat(p, scope):
    return make_leaf("categorical", {"p": p}, scope)


def build_binary_handles():
    """Node-by-node construction, including a nested product that finalization flattens."""
    p0 = make_product([cat([0.3, 0.7], 1), cat([0.4, 0.6], 2)])
    p1 = make_product([cat([0.5, 0.5], 1), cat([0.6, 0.4], 2)])
    s1 = make_sum([p0, p1], [0.3, 0.7])
    p2 = make_product([cat([0.2, 0.8], 0), s1])
    p3 = make_product([cat([0.2, 0.8], 0), cat([0.3, 0.7], 1)])
    p4 = make_product([p3, cat([0.4, 0.6], 2)])
    return make_sum([p2, p4], [0.4, 0.6])


def binary_joint(x0, x1, x2):
    """Brute-force probability of a complete configuration."""
    c = lambda p, v: p[int(v)]
    left = c([0.2, 0.8], x0) * (0.3 * c([0.3, 0.7], x1) * c([0.4, 0.6], x2)
                                + 0.7 * c([0.5, 0.5], x1) * c([0.6, 0.4], x2))
    right = c([0.2, 0.8], x0) * c([0.3, 0.7], x1) * c([0.4, 0.6], x2)
    return 0.4 * left + 0.6 * right


@pytest.fixture
def binary_text():
    return BINARY_DSL


@pytest.fixture
def binary():
    return parse_dsl(BINARY_DSL)


@pytest.fixture
def binary_built():
    return finalize(build_binary_handles())


@pytest.fixture
def pareto_mixture():
    return finalize(make_sum([make_leaf("pareto", {"a": 2.0}, 0), make_leaf("pareto", {"a": 3.0}, 0)],
                             [0.3, 0.7]))


@pytest.fixture
def two_cluster_data():
    """1000 rows: two isotropic Gaussian clusters (means 5 and 15) and a 0/1 label column."""
    rng = np.random.default_rng(1234)
    features = np.r_[rng.normal(5, 1, (500, 2)), rng.normal(15, 1, (500, 2))]
    labels = np.r_[np.zeros((500, 1)), np.ones((500, 1))]
    return np.c_[features, labels]


@pytest.fixture
def classifier_context():
    return Context.from_families(["Gaussian", "Gaussian", "Categorical"])
