"""
Ancestral and conditional sampling.

A template matrix marks the cells to sample with NaN. Each row gets a bottom-up
evidence pass (missing cells marginalized), then a top-down pass that picks sum
children from their posterior branch probabilities w_k * exp(child value) and
draws leaf values for missing cells. With an all-missing template the posterior
equals the prior weights, which is plain ancestral sampling.

The random source is numpy's Generator over PCG64, seeded with a 64-bit integer.
"""
import logging
from typing import Union

import numpy as np
from scipy.special import softmax

from ..core.errors import DataError
from ..core.leaves import LeafFamily, Params, resolve_family
from ..core.network import Network, NodeKind
from ..inference.evaluation import evaluate_matrix, check_data

logger = logging.getLogger(__name__)

RandomSource = np.random.Generator


def random_source(seed: Union[int, RandomSource, None] = None) -> RandomSource:
    """Seeded PCG64 stream; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def leaf_sample(family: Union[str, LeafFamily], params: Params, rng: Union[int, RandomSource, None] = None) -> float:
    """
    One draw from a leaf distribution.

    Raises:
        UnknownFamilyError: If a family name is not registered
        InvalidParamsError: If the parameters are rejected
    """
    descriptor = resolve_family(family)
    return float(descriptor.sample(descriptor.canonical_params(params), random_source(rng), 1)[0])


def sample(network: Network, template, rng: Union[int, RandomSource, None] = None) -> np.ndarray:
    """
    Fill the missing cells of a template by sampling from the network conditioned
    on each row's observed cells.

    Args:
        network: Finalized valid network
        template: Rows x columns matrix; NaN cells are sampled, the rest is evidence
        rng: Seed or Generator

    Returns:
        Completed matrix; evidence cells are unchanged

    Raises:
        DataError: On malformed data or evidence with probability zero
    """
    rng = random_source(rng)
    matrix = check_data(network, template)
    missing = np.isnan(matrix)
    completed = matrix.copy()
    if not missing.any():
        return completed

    values = evaluate_matrix(network, matrix)
    impossible = np.flatnonzero(np.isneginf(values[:, network.root]))
    if len(impossible):
        raise DataError("evidence has probability zero", int(impossible[0]))

    active = np.zeros((matrix.shape[0], len(network)), dtype=bool)
    active[:, network.root] = True
    for node_id in range(network.root, -1, -1):
        rows = np.flatnonzero(active[:, node_id])
        if len(rows) == 0:
            continue
        node = network[node_id]
        if node.kind == NodeKind.SUM:
            children = np.asarray(node.children)
            with np.errstate(divide="ignore"):
                logits = values[np.ix_(rows, children)] + np.log(node.weights)
            cdf = np.cumsum(softmax(logits, axis=1), axis=1)
            u = rng.random(len(rows)) * cdf[:, -1]
            picks = np.minimum((cdf <= u[:, None]).sum(axis=1), len(children) - 1)
            for position, child in enumerate(children):
                active[rows[picks == position], child] = True
        elif node.kind == NodeKind.PRODUCT:
            active[np.ix_(rows, list(node.children))] = True
        else:
            fill = rows[missing[rows, node.scope_var]]
            if len(fill):
                completed[fill, node.scope_var] = node.family.sample(node.params, rng, len(fill))
    return completed
