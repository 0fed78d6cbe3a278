"""
Top-down structure learning.

Data slices (a set of rows and a set of columns) are processed from a queue.
Each slice becomes a leaf (one column), a naive factorization (too few rows),
a product node (the columns split into independent groups) or a sum node (the
rows split into clusters). Nodes are linked bottom-up once every slice has
been processed, then the network is finalized.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..core.context import Context
from ..core.errors import DataError
from ..core.network import Network, NodeHandle, SumHandle, finalize, make_leaf, make_product, make_sum
from ..core.validation import require_valid
from ..systems.configuration_manager import LearnHyperparams
from .leaf_fitting import fit_leaf_mle
from .splitting import column_partition, row_cluster

logger = logging.getLogger(__name__)


@dataclass
class DataSlice:
    """Rows and columns of the training data handled by one node."""

    id: int
    rows: np.ndarray
    columns: List[int]


@dataclass
class NodeBuild:
    """A pending inner node: its kind and the slices of its children."""

    kind: str
    children: List[int]
    weights: List[float] = field(default_factory=list)


def _check_training_data(data, context: Context) -> np.ndarray:
    try:
        data = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise DataError(f"training data is not numeric: {e}") from e
    if data.ndim != 2 or data.shape[0] == 0:
        raise DataError("training data must be a non-empty matrix")
    if data.shape[1] != len(context):
        raise DataError(f"data has {data.shape[1]} columns, context has {len(context)}")
    missing = np.argwhere(np.isnan(data))
    if len(missing):
        row, column = missing[0]
        raise DataError("training data must be complete", int(row), int(column))
    infinite = np.argwhere(np.isinf(data))
    if len(infinite):
        row, column = infinite[0]
        raise DataError("training data must be finite", int(row), int(column))
    return data


class StructureLearner:
    """Queue-driven recursive decomposition of a training matrix."""

    def __init__(self, data: np.ndarray, context: Context, hyperparams: LearnHyperparams):
        self.data = data
        self.context = context
        self.hyperparams = hyperparams
        self.rng = np.random.Generator(np.random.PCG64(hyperparams.seed))
        self.slices: Dict[int, DataSlice] = {}
        self.builds: Dict[int, NodeBuild] = {}
        self.leaves: Dict[int, NodeHandle] = {}

    def new_slice(self, rows: np.ndarray, columns: List[int]) -> DataSlice:
        data_slice = DataSlice(len(self.slices), rows, list(columns))
        self.slices[data_slice.id] = data_slice
        return data_slice

    def leaf(self, rows: np.ndarray, column: int) -> NodeHandle:
        spec = self.context[column]
        params = fit_leaf_mle(spec.family, self.data[rows, column], spec, self.hyperparams)
        return make_leaf(spec.family, params, column)

    def learn(self) -> NodeHandle:
        queue = deque([self.new_slice(np.arange(len(self.data)), list(range(len(self.context))))])
        while queue:
            current = queue.popleft()
            children = self.split(current)
            queue.extend(children)
        return self.link()

    def split(self, current: DataSlice) -> List[DataSlice]:
        rows, columns = current.rows, current.columns
        if len(columns) == 1:
            self.leaves[current.id] = self.leaf(rows, columns[0])
            return []

        if len(rows) < self.hyperparams.min_instances:
            logger.debug("Slice %d: %d rows, naive factorization", current.id, len(rows))
            return self.factorize(current)

        groups = column_partition(self.data[rows], columns, self.context, self.hyperparams.dependence_threshold)
        if len(groups) > 1:
            logger.debug("Slice %d: column split into %s", current.id, groups)
            children = [self.new_slice(rows, group) for group in groups]
            self.builds[current.id] = NodeBuild("product", [c.id for c in children])
            return children

        seed = int(self.rng.integers(0, 2 ** 31 - 1))
        labels = row_cluster(self.data[rows], columns, self.hyperparams.cluster_count, seed, self.context)
        clusters = [rows[labels == label] for label in range(int(labels.max()) + 1)]
        clusters = [cluster for cluster in clusters if len(cluster)]
        if len(clusters) > 1:
            logger.debug("Slice %d: row split into clusters of %s rows", current.id, [len(c) for c in clusters])
            children = [self.new_slice(cluster, columns) for cluster in clusters]
            weights = [len(cluster) / len(rows) for cluster in clusters]
            self.builds[current.id] = NodeBuild("sum", [c.id for c in children], weights)
            return children

        logger.debug("Slice %d: no split found, naive factorization", current.id)
        return self.factorize(current)

    def factorize(self, current: DataSlice) -> List[DataSlice]:
        children = [self.new_slice(current.rows, [column]) for column in current.columns]
        self.builds[current.id] = NodeBuild("product", [c.id for c in children])
        return children

    def link(self) -> NodeHandle:
        handles: Dict[int, NodeHandle] = dict(self.leaves)
        for slice_id in sorted(self.builds, reverse=True):
            build = self.builds[slice_id]
            children = [handles[c] for c in build.children]
            if build.kind == "sum":
                handles[slice_id] = make_sum(children, build.weights)
            else:
                handles[slice_id] = make_product(children)
        return handles[0]


def learn_structure(data, context: Context, hyperparams: Optional[LearnHyperparams] = None) -> Network:
    """
    Learn a network from complete training data.

    Args:
        data: Rows x columns matrix without missing cells
        context: Statistical type per column; missing domains are filled from the data
        hyperparams: Stopping rule, split settings, seed and leaf fitting settings

    Returns:
        Finalized valid network whose scope is every column

    Raises:
        DataError: On empty, incomplete or mismatched data
    """
    hyperparams = (hyperparams or LearnHyperparams()).validate()
    data = _check_training_data(data, context)
    context = context.with_domains(data)
    logger.info("Learning structure from %d rows x %d columns (min_instances=%d, threshold=%s, k=%d, seed=%d)",
                data.shape[0], data.shape[1], hyperparams.min_instances, hyperparams.dependence_threshold,
                hyperparams.cluster_count, hyperparams.seed)
    root = StructureLearner(data, context, hyperparams).learn()
    network = require_valid(finalize(root))
    logger.info("Learned network with %d nodes", len(network))
    return network


def learn_classifier(data, context: Context, label_column: int,
                     hyperparams: Optional[LearnHyperparams] = None) -> Network:
    """
    Learn a classifier: a root sum with one child per label value, each child
    learned on the rows carrying that label (label column included).

    Args:
        data: Complete training data
        context: Statistical type per column
        label_column: Index of the categorical label column

    Returns:
        Finalized network; the root weights are the label frequencies

    Raises:
        DataError: On empty data, or if the label column is not categorical
    """
    hyperparams = (hyperparams or LearnHyperparams()).validate()
    data = _check_training_data(data, context)
    if not 0 <= label_column < len(context):
        raise DataError(f"label column {label_column} is out of range", column=label_column)
    if not context[label_column].categorical:
        raise DataError(f"label column {label_column} is not categorical", column=label_column)
    context = context.with_domains(data)

    labels = data[:, label_column]
    values = np.unique(labels)
    logger.info("Learning classifier over %d label value(s) in column %d", len(values), label_column)
    children = []
    weights = []
    for value in values:
        rows = labels == value
        learner = StructureLearner(data[rows], context, hyperparams)
        children.append(learner.learn())
        weights.append(int(rows.sum()) / len(data))

    if len(children) == 1:
        root = SumHandle(children, weights)
    else:
        root = make_sum(children, weights)
    network = require_valid(finalize(root))
    logger.info("Learned classifier with %d nodes", len(network))
    return network
