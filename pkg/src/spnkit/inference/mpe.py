"""
Approximate most probable explanation through the max circuit.

Bottom-up, sum nodes keep the best weighted child instead of the weighted sum
and missing-variable leaves are evaluated at their mode. Top-down, the argmax
child is followed at every max node (ties go to the smallest child id) and
every child of a product; reached leaves over missing cells emit their mode.
"""
import logging
from typing import Dict

import numpy as np

from ..core.network import Network, NodeKind
from .evaluation import check_data

logger = logging.getLogger(__name__)


def max_circuit_values(network: Network, matrix: np.ndarray):
    """
    Bottom-up pass of the max circuit.

    Returns:
        (values, choices): log values (rows x nodes) and, per sum node, the chosen
        child id for every row
    """
    rows = matrix.shape[0]
    missing = np.isnan(matrix)
    values = np.empty((rows, len(network)))
    choices: Dict[int, np.ndarray] = {}
    for node_id, node in enumerate(network.nodes):
        if node.kind == NodeKind.LEAF:
            column = np.where(missing[:, node.scope_var], node.family.mode(node.params), matrix[:, node.scope_var])
            values[:, node_id] = node.family.log_density(node.params, column)
        elif node.kind == NodeKind.PRODUCT:
            values[:, node_id] = values[:, list(node.children)].sum(axis=1)
        else:
            order = np.argsort(node.children, kind="stable")
            children = np.asarray(node.children)[order]
            with np.errstate(divide="ignore"):
                log_weights = np.log(np.asarray(node.weights)[order])
            weighted = values[:, children] + log_weights
            best = np.argmax(weighted, axis=1)
            values[:, node_id] = weighted[np.arange(rows), best]
            choices[node_id] = children[best]
    return values, choices


def mpe(network: Network, data) -> np.ndarray:
    """
    Complete the missing cells of each row with an approximate MPE assignment.
    Observed cells are copied unchanged.

    Raises:
        DataError: On malformed data (see check_data)
    """
    matrix = check_data(network, data)
    missing = np.isnan(matrix)
    completed = matrix.copy()
    values, choices = max_circuit_values(network, matrix)
    if np.isneginf(values[:, network.root]).any():
        logger.warning("MPE: %d row(s) have zero-probability evidence", int(np.isneginf(values[:, network.root]).sum()))

    active = np.zeros((matrix.shape[0], len(network)), dtype=bool)
    active[:, network.root] = True
    for node_id in range(network.root, -1, -1):
        reached = active[:, node_id]
        if not reached.any():
            continue
        node = network[node_id]
        if node.kind == NodeKind.SUM:
            chosen = choices[node_id]
            for child in node.children:
                active[:, child] |= reached & (chosen == child)
        elif node.kind == NodeKind.PRODUCT:
            for child in node.children:
                active[:, child] |= reached
        else:
            fill = reached & missing[:, node.scope_var]
            completed[fill, node.scope_var] = node.family.mode(node.params)
    return completed
