"""
Bottom-up log-domain evaluation: joint, marginal and conditional queries.

Missing cells are NaN. A leaf over a missing variable contributes log 1 = 0,
which marginalizes that variable out. Nodes are visited once in id order,
which is a topological order for finalized networks.
"""
import logging
from typing import Iterable

import numpy as np
from scipy.special import logsumexp

from ..core.errors import DataError
from ..core.network import LeafNode, Network, NodeKind

logger = logging.getLogger(__name__)

LogValueTable = np.ndarray


def check_data(network: Network, data) -> np.ndarray:
    """
    Coerce query data to a 2-D float matrix and check it against the network.

    Raises:
        DataError: On a column-count mismatch, nonfinite evidence, or evidence
            outside a leaf family's domain (reported with row and column)
    """
    try:
        matrix = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise DataError(f"data is not numeric: {e}") from e
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise DataError(f"data must be a matrix, got {matrix.ndim} dimensions")
    if matrix.shape[1] != network.num_variables:
        raise DataError(f"data has {matrix.shape[1]} columns, network expects {network.num_variables}")

    infinite = np.argwhere(np.isinf(matrix))
    if len(infinite):
        row, column = infinite[0]
        raise DataError("nonfinite evidence", int(row), int(column))

    for node in network.nodes:
        if node.kind != NodeKind.LEAF or node.family.invalid_mask is None:
            continue
        column = matrix[:, node.scope_var]
        observed = np.flatnonzero(~np.isnan(column))
        bad = node.family.invalid_mask(node.params, column[observed])
        if bad.any():
            row = int(observed[np.argmax(bad)])
            raise DataError(f"value {float(column[row])!r} outside the {node.family.label} domain",
                            row, node.scope_var)
    return matrix


def leaf_log_values(node: LeafNode, column: np.ndarray) -> np.ndarray:
    """Log density per row; missing cells contribute 0."""
    out = np.zeros(len(column))
    observed = ~np.isnan(column)
    if observed.any():
        out[observed] = node.family.log_density(node.params, column[observed])
    return out


def evaluate_matrix(network: Network, matrix: np.ndarray) -> LogValueTable:
    """Bottom-up pass over an already checked matrix."""
    values = np.empty((matrix.shape[0], len(network)))
    for node_id, node in enumerate(network.nodes):
        if node.kind == NodeKind.LEAF:
            values[:, node_id] = leaf_log_values(node, matrix[:, node.scope_var])
        elif node.kind == NodeKind.PRODUCT:
            values[:, node_id] = values[:, list(node.children)].sum(axis=1)
        else:
            children = values[:, list(node.children)]
            with np.errstate(divide="ignore"):
                log_weights = np.log(node.weights)
            values[:, node_id] = logsumexp(children + log_weights, axis=1)
            # fully marginalized children: the weights sum to 1, keep the value at exactly log 1
            values[(children == 0.0).all(axis=1), node_id] = 0.0
    return values


def node_log_values(network: Network, data) -> LogValueTable:
    """
    Log value of every node for every row (natural log).

    Args:
        network: Finalized network
        data: One row (1-D) or a rows x columns matrix; NaN marks missing cells

    Returns:
        Array of shape (nodes,) for a single row, else (rows, nodes)
    """
    single = np.ndim(data) == 1
    values = evaluate_matrix(network, check_data(network, data))
    return values[0] if single else values


def log_likelihood(network: Network, data) -> np.ndarray:
    """
    Log-probability (density) of each row; missing cells are marginalized.

    Raises:
        DataError: On malformed data (see check_data)
    """
    matrix = check_data(network, data)
    return evaluate_matrix(network, matrix)[:, network.root]


def conditional_log_likelihood(network: Network, data, query_columns: Iterable[int]) -> np.ndarray:
    """
    log P(query | evidence) per row, where the query is the given columns and the
    evidence is every other observed cell.

    Raises:
        DataError: If some row's evidence has probability zero
    """
    matrix = check_data(network, data)
    evidence = matrix.copy()
    evidence[:, list(query_columns)] = np.nan
    joint = evaluate_matrix(network, matrix)[:, network.root]
    marginal = evaluate_matrix(network, evidence)[:, network.root]
    impossible = np.flatnonzero(np.isneginf(marginal))
    if len(impossible):
        raise DataError("evidence has probability zero", int(impossible[0]))
    return joint - marginal
