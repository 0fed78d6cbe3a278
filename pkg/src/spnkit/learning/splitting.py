"""
Data-slice splits for structure learning.

Row splits cluster instances with k-means; column splits group variables that
are pairwise dependent, where dependence is scored per column-type pair and
the groups are the connected components of the thresholded dependence graph.
"""
import itertools
import logging
from typing import List, Optional, Sequence

import networkx as nx
import numpy as np
from sklearn.cluster import KMeans
from sklearn.metrics import normalized_mutual_info_score

from ..core.context import Context

logger = logging.getLogger(__name__)

KMEANS_RESTARTS = 3
KMEANS_MAX_ITER = 100


def _is_discrete(context: Optional[Context], column: int) -> bool:
    return context is not None and context[column].categorical


def _one_hot(values: np.ndarray) -> np.ndarray:
    categories, codes = np.unique(values, return_inverse=True)
    encoded = np.zeros((len(values), len(categories)))
    encoded[np.arange(len(values)), codes] = 1.0
    return encoded


def _z_score(values: np.ndarray) -> np.ndarray:
    std = values.std()
    if std == 0.0:
        return np.zeros((len(values), 1))
    return ((values - values.mean()) / std).reshape(-1, 1)


def cluster_features(data: np.ndarray, columns: Sequence[int], context: Optional[Context] = None) -> np.ndarray:
    """Feature matrix for row clustering: z-scored continuous and one-hot discrete columns."""
    blocks = []
    for column in columns:
        values = data[:, column]
        blocks.append(_one_hot(values) if _is_discrete(context, column) else _z_score(values))
    return np.hstack(blocks)


def row_cluster(data: np.ndarray, columns: Sequence[int], k: int, seed: int,
                context: Optional[Context] = None) -> np.ndarray:
    """
    Partition the rows of a slice with k-means.

    Args:
        data: Slice rows (all columns of the dataset)
        columns: Columns in play
        k: Number of clusters
        seed: Random state for the seeded restarts
        context: Marks discrete columns (one-hot encoded); without it every column is continuous

    Returns:
        Cluster label per row, numbered by first appearance; fewer than k
        labels may be present
    """
    data = np.asarray(data, dtype=float)
    features = cluster_features(data, columns, context)
    if len(np.unique(features, axis=0)) < k:
        logger.debug("Row split: fewer than %d distinct rows, single cluster", k)
        return np.zeros(len(data), dtype=int)

    kmeans = KMeans(n_clusters=k, n_init=KMEANS_RESTARTS, max_iter=KMEANS_MAX_ITER, random_state=seed)
    labels = kmeans.fit_predict(features)

    _, first_seen = np.unique(labels, return_index=True)
    order = np.unique(labels)[np.argsort(first_seen)]
    relabel = {int(old): new for new, old in enumerate(order)}
    return np.array([relabel[int(v)] for v in labels], dtype=int)


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    if a.std() == 0.0 or b.std() == 0.0:
        return 0.0
    return float(abs(np.corrcoef(a, b)[0, 1]))


def _correlation_ratio(categories: np.ndarray, values: np.ndarray) -> float:
    total = float(((values - values.mean()) ** 2).sum())
    if total == 0.0:
        return 0.0
    between = 0.0
    for category in np.unique(categories):
        group = values[categories == category]
        between += len(group) * (group.mean() - values.mean()) ** 2
    return float(np.sqrt(between / total))


def _mutual_information(a: np.ndarray, b: np.ndarray) -> float:
    if len(np.unique(a)) < 2 or len(np.unique(b)) < 2:
        return 0.0
    return float(normalized_mutual_info_score(a, b))


def dependence_score(data: np.ndarray, i: int, j: int, context: Optional[Context] = None) -> float:
    """
    Dependence between two columns in [0, 1]: normalized mutual information for
    two discrete columns, |Pearson r| for two continuous ones and the correlation
    ratio for a mixed pair. Constant columns score 0.
    """
    a, b = data[:, i], data[:, j]
    discrete_a, discrete_b = _is_discrete(context, i), _is_discrete(context, j)
    if discrete_a and discrete_b:
        score = _mutual_information(a, b)
    elif not discrete_a and not discrete_b:
        score = _pearson(a, b)
    elif discrete_a:
        score = _correlation_ratio(a, b)
    else:
        score = _correlation_ratio(b, a)
    return min(max(score, 0.0), 1.0)


def column_partition(data: np.ndarray, columns: Sequence[int], context: Optional[Context] = None,
                     threshold: float = 0.3) -> List[List[int]]:
    """
    Group the columns of a slice into mutually independent blocks.

    Two columns are linked when their dependence score exceeds the threshold;
    the groups are the connected components, each sorted, ordered by their
    smallest column.
    """
    data = np.asarray(data, dtype=float)
    graph = nx.Graph()
    graph.add_nodes_from(columns)
    for i, j in itertools.combinations(columns, 2):
        if dependence_score(data, i, j, context) > threshold:
            graph.add_edge(i, j)
    groups = sorted(sorted(component) for component in nx.connected_components(graph))
    logger.debug("Column split of %s: %d group(s)", list(columns), len(groups))
    return groups
