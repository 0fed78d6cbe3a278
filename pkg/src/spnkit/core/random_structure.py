"""
Random valid SPN structures over a context, for testing and benchmarking.
"""
import logging
from typing import List

import numpy as np

from .context import ColumnSpec, Context
from .errors import ConfigurationError, ConstructionError
from .network import NodeHandle, Network, finalize, make_leaf, make_product, make_sum

logger = logging.getLogger(__name__)


class _RandomBuilder:
    """Alternates sum layers (`fanout` children) and product layers (random scope partitions)."""

    def __init__(self, context: Context, fanout: int, rng: np.random.Generator):
        self.context = context
        self.fanout = fanout
        self.rng = rng

    def leaf(self, var: int) -> NodeHandle:
        column: ColumnSpec = self.context[var]
        if column.family.random_params is None:
            raise ConfigurationError(f"Family {column.family.label} cannot draw random parameters")
        if column.categorical and column.cardinality is None:
            raise ConfigurationError(f"context[{var}]: categorical column needs a cardinality")
        return make_leaf(column.family, column.family.random_params(column, self.rng), var)

    def leaves(self, scope: List[int]) -> NodeHandle:
        if len(scope) == 1:
            return self.leaf(scope[0])
        return make_product([self.leaf(var) for var in scope])

    def sum_layer(self, scope: List[int], depth: int) -> NodeHandle:
        weights = self.rng.dirichlet(np.ones(self.fanout))
        children = [self.product_layer(scope, depth) for _ in range(self.fanout)]
        return make_sum(children, weights)

    def product_layer(self, scope: List[int], depth: int) -> NodeHandle:
        if len(scope) == 1:
            return self.sum_layer(scope, depth - 1) if depth > 1 else self.leaf(scope[0])
        blocks = self.partition(scope)
        if depth > 1:
            return make_product([self.sum_layer(block, depth - 1) for block in blocks])
        return make_product([self.leaves(block) for block in blocks])

    def partition(self, scope: List[int]) -> List[List[int]]:
        count = int(self.rng.integers(2, len(scope) + 1))
        order = self.rng.permutation(scope)
        labels = np.concatenate([np.arange(count), self.rng.integers(0, count, len(scope) - count)])
        return [sorted(int(v) for v in order[labels == b]) for b in range(count)]


def generate_random_structure(context: Context, depth: int, fanout: int, seed: int) -> Network:
    """
    Generate a random valid network over every column of the context.

    Args:
        context: Column families and domains
        depth: Number of sum layers (>= 1)
        fanout: Children per sum node (>= 2)
        seed: Seed for the PCG64 generator; equal seeds give identical networks

    Returns:
        Finalized network

    Raises:
        ConstructionError: If depth < 1 or fanout < 2
        ConfigurationError: If a column lacks the domain data its family needs
    """
    if depth < 1:
        raise ConstructionError(f"depth must be >= 1, got {depth}")
    if fanout < 2:
        raise ConstructionError(f"fanout must be >= 2, got {fanout}")
    rng = np.random.Generator(np.random.PCG64(seed))
    builder = _RandomBuilder(context, fanout, rng)
    network = finalize(builder.sum_layer(list(range(len(context))), depth))
    logger.info("Generated random structure with %d nodes (depth %d, fanout %d)", len(network), depth, fanout)
    return network
