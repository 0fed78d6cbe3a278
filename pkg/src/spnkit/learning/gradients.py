"""
Gradients of the mean log-likelihood by reverse-mode differentiation of the log circuit.

Parameters live in an unconstrained space: sum weights and categorical pmfs as
softmax logits, Gaussian (mean, log std) and Pareto log shape. Leaves of
families without gradient handlers are held fixed.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import softmax

from ..core.errors import DataError
from ..core.network import LeafNode, Network, NodeKind, SumNode
from ..inference.evaluation import check_data, evaluate_matrix

logger = logging.getLogger(__name__)


class ParameterLayout:
    """
    Position of every trainable parameter of a network in one flat vector.

    Sum nodes contribute one logit per child; differentiable leaves contribute
    their family's unconstrained coordinates.
    """

    def __init__(self, network: Network):
        self.network = network
        self.slices: Dict[int, slice] = {}
        offset = 0
        for node_id, node in enumerate(network.nodes):
            if node.kind == NodeKind.SUM:
                width = len(node.children)
            elif node.kind == NodeKind.LEAF and node.family.differentiable:
                width = len(node.family.to_unconstrained(node.params))
            else:
                continue
            self.slices[node_id] = slice(offset, offset + width)
            offset += width
        self.size = offset

    def pack(self, network: Optional[Network] = None) -> np.ndarray:
        """Unconstrained parameter vector of the network (default: the layout's own)."""
        network = network if network is not None else self.network
        theta = np.empty(self.size)
        for node_id, position in self.slices.items():
            node = network[node_id]
            if node.kind == NodeKind.SUM:
                with np.errstate(divide="ignore"):
                    theta[position] = np.log(node.weights)
            else:
                theta[position] = node.family.to_unconstrained(node.params)
        return theta

    def unpack(self, theta: np.ndarray) -> Network:
        """Network with the same structure and the parameters encoded by theta."""
        replacements = {}
        for node_id, position in self.slices.items():
            node = self.network[node_id]
            if node.kind == NodeKind.SUM:
                weights = softmax(theta[position])
                replacements[node_id] = SumNode(node.children, tuple(float(w) for w in weights))
            else:
                params = node.family.from_unconstrained(np.asarray(theta[position]))
                replacements[node_id] = LeafNode(node.family, node.family.canonical_params(params), node.scope_var)
        return self.network.with_nodes(replacements)


@dataclass
class GradientVector:
    """Gradient of the mean log-likelihood over the rows with finite likelihood."""

    layout: ParameterLayout
    values: np.ndarray
    mean_log_likelihood: float
    rows_used: int
    rows_excluded: int

    def for_node(self, node_id: int) -> np.ndarray:
        return self.values[self.layout.slices[node_id]]

    def __len__(self) -> int:
        return len(self.values)


def log_adjoints(network: Network, values: np.ndarray) -> np.ndarray:
    """
    Derivative of the root log value with respect to every node's log value,
    per row. Rows are assumed to have a finite root value.
    """
    adjoints = np.zeros_like(values)
    adjoints[:, network.root] = 1.0
    for node_id in range(network.root, -1, -1):
        node = network[node_id]
        upstream = adjoints[:, node_id]
        if node.kind == NodeKind.PRODUCT:
            for child in node.children:
                adjoints[:, child] += upstream
        elif node.kind == NodeKind.SUM:
            live = upstream != 0.0
            for child, weight in zip(node.children, node.weights):
                share = np.zeros(len(values))
                with np.errstate(invalid="ignore", over="ignore"):
                    share[live] = weight * np.exp(values[live, child] - values[live, node_id])
                adjoints[:, child] += upstream * share
    return adjoints


def backprop_log_gradients(network: Network, data, layout: Optional[ParameterLayout] = None) -> GradientVector:
    """
    Exact gradient of the mean log-likelihood with respect to the unconstrained
    parameters, from one bottom-up and one top-down pass.

    Rows with log-likelihood -inf are left out of the mean and counted.

    Args:
        network: Finalized valid network
        data: Rows x columns; NaN cells are marginalized
        layout: Parameter layout for the network (built when omitted)

    Raises:
        DataError: On malformed data, or when no row has finite likelihood
    """
    layout = layout if layout is not None else ParameterLayout(network)
    matrix = check_data(network, data)
    values = evaluate_matrix(network, matrix)
    finite = np.isfinite(values[:, network.root])
    excluded = int((~finite).sum())
    if excluded:
        logger.warning("Gradient: %d row(s) with log-likelihood -inf excluded", excluded)
    if not finite.any():
        raise DataError("no row has a finite log-likelihood")
    matrix, values = matrix[finite], values[finite]
    rows = len(matrix)

    adjoints = log_adjoints(network, values)
    grad = np.zeros(layout.size)
    for node_id, position in layout.slices.items():
        node = network[node_id]
        upstream = adjoints[:, node_id]
        if node.kind == NodeKind.SUM:
            live = upstream != 0.0
            for offset, (child, weight) in enumerate(zip(node.children, node.weights)):
                ratio = np.zeros(rows)
                with np.errstate(invalid="ignore", over="ignore"):
                    ratio[live] = np.exp(values[live, child] - values[live, node_id])
                grad[position.start + offset] = np.sum(upstream * weight * (ratio - 1.0))
        else:
            column = matrix[:, node.scope_var]
            observed = ~np.isnan(column) & (upstream != 0.0)
            if observed.any():
                local = node.family.grad_log_density(node.params, column[observed])
                grad[position] = upstream[observed] @ local
    grad /= rows
    mean = float(values[:, network.root].mean())
    return GradientVector(layout, grad, mean, rows, excluded)


def finite_difference_gradient(network: Network, data, h: float = 1e-5) -> Tuple[np.ndarray, ParameterLayout]:
    """Central finite differences of the mean log-likelihood in the unconstrained space."""
    layout = ParameterLayout(network)
    theta = layout.pack()
    matrix = check_data(network, data)
    grad = np.zeros(layout.size)

    def mean_ll(vector: np.ndarray) -> float:
        candidate = layout.unpack(vector)
        return float(evaluate_matrix(candidate, matrix)[:, candidate.root].mean())

    for index in range(layout.size):
        step = np.zeros(layout.size)
        step[index] = h
        grad[index] = (mean_ll(theta + step) - mean_ll(theta - step)) / (2.0 * h)
    return grad, layout
