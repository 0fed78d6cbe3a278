"""
SPN graph representation: construction handles, finalized nodes and the Network.

Networks are built from handles (make_sum / make_product / make_leaf) and then
finalized: singleton sums and products are collapsed, nested products are
flattened, sum weights are normalized, ids are assigned children-before-parent
and scopes are computed bottom-up. A finalized Network is immutable.
"""
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import (ConstructionError, CycleError, EmptyNetworkError,
                     UnreachableNodeError, WeightNormalizationError)
from .leaves import NORMALIZATION_TOLERANCE, LeafFamily, LeafRegistry, ParamValue, resolve_family

logger = logging.getLogger(__name__)

Scope = frozenset


class NodeKind(Enum):
    SUM = "sum"
    PRODUCT = "product"
    LEAF = "leaf"


# ---------------------------------------------------------------------------
# Construction handles (unfinalized, single-threaded)
# ---------------------------------------------------------------------------

class NodeHandle:
    """Base class for unfinalized nodes."""

    kind: NodeKind

    @property
    def children(self) -> List["NodeHandle"]:
        return []


class SumHandle(NodeHandle):
    kind = NodeKind.SUM

    def __init__(self, children: List[NodeHandle], weights: List[float]):
        self._children = children
        self.weights = weights

    @property
    def children(self) -> List[NodeHandle]:
        return self._children


class ProductHandle(NodeHandle):
    kind = NodeKind.PRODUCT

    def __init__(self, children: List[NodeHandle]):
        self._children = children

    @property
    def children(self) -> List[NodeHandle]:
        return self._children


class LeafHandle(NodeHandle):
    kind = NodeKind.LEAF

    def __init__(self, family: LeafFamily, params: Dict[str, ParamValue], scope_var: int):
        self.family = family
        self.params = params
        self.scope_var = scope_var


Child = Union[NodeHandle, "Network"]


def _as_handle(child: Child) -> NodeHandle:
    if isinstance(child, Network):
        return child.to_handles()
    if isinstance(child, NodeHandle):
        return child
    raise ConstructionError(f"Expected a node handle or a network, got {type(child).__name__}")


def make_sum(children: Sequence[Child], weights: Sequence[float]) -> SumHandle:
    """
    Create a sum node: a convex combination of subnetworks over the same scope.

    Weights are stored as given and normalized at finalization.

    Raises:
        ConstructionError: On fewer than 2 children, a length mismatch or a negative weight
    """
    children = list(children)
    weights = [float(w) for w in weights]
    if len(children) != len(weights):
        raise ConstructionError(f"Sum has {len(children)} children but {len(weights)} weights")
    if len(children) < 2:
        raise ConstructionError("Sum needs at least 2 children")
    for w in weights:
        if not math.isfinite(w) or w < 0.0:
            raise ConstructionError(f"Sum weight must be a finite non-negative number, got {w!r}")
    return SumHandle([_as_handle(c) for c in children], weights)


def make_product(children: Sequence[Child]) -> ProductHandle:
    """
    Create a product node over subnetworks with disjoint scopes.

    Raises:
        ConstructionError: On fewer than 2 children
    """
    children = list(children)
    if len(children) < 2:
        raise ConstructionError("Product needs at least 2 children")
    return ProductHandle([_as_handle(c) for c in children])


def make_leaf(family: Union[str, LeafFamily], params: Mapping[str, Any], scope_var: int,
              registry: Optional[LeafRegistry] = None) -> LeafHandle:
    """
    Create a univariate leaf.

    Args:
        family: Family name or descriptor
        params: Parameter record, checked by the family validator
        scope_var: Index of the variable (data column) the leaf models
        registry: Registry used to resolve a family name

    Raises:
        UnknownFamilyError: If the family is not registered
        InvalidParamsError: If the parameters are rejected
        ConstructionError: If scope_var is not a non-negative integer
    """
    descriptor = resolve_family(family, registry)
    if isinstance(scope_var, bool) or int(scope_var) != scope_var or scope_var < 0:
        raise ConstructionError(f"Leaf scope must be a non-negative integer, got {scope_var!r}")
    return LeafHandle(descriptor, descriptor.canonical_params(params), int(scope_var))


# ---------------------------------------------------------------------------
# Finalized nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SumNode:
    children: Tuple[int, ...]
    weights: Tuple[float, ...]
    kind = NodeKind.SUM


@dataclass(frozen=True)
class ProductNode:
    children: Tuple[int, ...]
    kind = NodeKind.PRODUCT


@dataclass(frozen=True)
class LeafNode:
    family: LeafFamily
    params: Dict[str, ParamValue]
    scope_var: int
    kind = NodeKind.LEAF

    @property
    def children(self) -> Tuple[int, ...]:
        return ()


Node = Union[SumNode, ProductNode, LeafNode]


class Network:
    """
    Finalized SPN: an id-indexed node store in children-before-parent order.
    The root is the node with the largest id.
    """

    finalized = True

    def __init__(self, nodes: Sequence[Node], scopes: Sequence[Scope]):
        self._nodes: Tuple[Node, ...] = tuple(nodes)
        self._scopes: Tuple[Scope, ...] = tuple(scopes)

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self._nodes

    @property
    def scopes(self) -> Tuple[Scope, ...]:
        return self._scopes

    @property
    def root(self) -> int:
        return len(self._nodes) - 1

    @property
    def scope(self) -> Scope:
        return self._scopes[-1]

    @property
    def num_variables(self) -> int:
        """Data width this network expects: one column per variable index up to the largest."""
        return max(self.scope) + 1

    def __len__(self) -> int:
        return len(self._nodes)

    def __getitem__(self, node_id: int) -> Node:
        return self._nodes[node_id]

    def __iter__(self):
        return iter(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self._nodes == other._nodes

    __hash__ = None

    def __repr__(self) -> str:
        return f"Network(nodes={len(self)}, scope={sorted(self.scope)})"

    def leaf_ids(self) -> List[int]:
        return [i for i, node in enumerate(self._nodes) if node.kind == NodeKind.LEAF]

    def with_nodes(self, replacements: Mapping[int, Node]) -> "Network":
        """Copy of the network with some nodes swapped for nodes of identical structure."""
        nodes = list(self._nodes)
        for node_id, node in replacements.items():
            old = nodes[node_id]
            if node.kind != old.kind or node.children != old.children:
                raise ConstructionError(f"Replacement for node {node_id} changes the structure")
            if node.kind == NodeKind.LEAF and node.scope_var != old.scope_var:
                raise ConstructionError(f"Replacement for leaf {node_id} changes its scope")
            nodes[node_id] = node
        return Network(nodes, self._scopes)

    def to_handles(self) -> NodeHandle:
        """Rebuild construction handles (shared nodes stay shared); returns the root handle."""
        handles: List[NodeHandle] = []
        for node in self._nodes:
            if node.kind == NodeKind.LEAF:
                handles.append(LeafHandle(node.family, dict(node.params), node.scope_var))
            elif node.kind == NodeKind.PRODUCT:
                handles.append(ProductHandle([handles[c] for c in node.children]))
            else:
                handles.append(SumHandle([handles[c] for c in node.children], list(node.weights)))
        return handles[-1]


# ---------------------------------------------------------------------------
# Finalization
# ---------------------------------------------------------------------------

def _reachable_graph(root: NodeHandle) -> Tuple[nx.DiGraph, Dict[int, NodeHandle]]:
    graph = nx.DiGraph()
    handles = {id(root): root}
    graph.add_node(id(root))
    stack = [root]
    while stack:
        handle = stack.pop()
        for child in handle.children:
            if not isinstance(child, NodeHandle):
                raise ConstructionError(f"Unresolvable child of type {type(child).__name__}")
            graph.add_edge(id(handle), id(child))
            if id(child) not in handles:
                handles[id(child)] = child
                stack.append(child)
    return graph, handles


def _post_order(root: Any, children_of) -> List[Any]:
    """Iterative post-order DFS; children are visited in stored order."""
    order = []
    seen = {id(root)}
    stack = [(root, iter(children_of(root)))]
    while stack:
        node, pending = stack[-1]
        for child in pending:
            if id(child) not in seen:
                seen.add(id(child))
                stack.append((child, iter(children_of(child))))
                break
        else:
            stack.pop()
            order.append(node)
    return order


def normalize_weights(weights: Sequence[float]) -> Tuple[float, ...]:
    """
    Normalize near-normalized sum weights.

    Weights already summing to 1 up to rounding are returned unchanged.

    Raises:
        WeightNormalizationError: If the total is further than 1e-6 from 1
    """
    total = math.fsum(weights)
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise WeightNormalizationError(total)
    if abs(total - 1.0) <= len(weights) * sys.float_info.epsilon:
        return tuple(float(w) for w in weights)
    return tuple(w / total for w in weights)


def _simplify(order: List[NodeHandle]) -> Dict[int, NodeHandle]:
    """Map each handle (by identity) to its collapsed/flattened replacement."""
    resolved: Dict[int, NodeHandle] = {}
    for handle in order:
        if handle.kind == NodeKind.LEAF:
            resolved[id(handle)] = handle
            continue
        children = [resolved[id(c)] for c in handle.children]
        if handle.kind == NodeKind.SUM:
            weights = normalize_weights(handle.weights)
            if len(children) == 1:
                resolved[id(handle)] = children[0]
            else:
                resolved[id(handle)] = SumHandle(children, list(weights))
            continue
        flat: List[NodeHandle] = []
        for child in children:
            if child.kind == NodeKind.PRODUCT:
                flat.extend(child.children)
            else:
                flat.append(child)
        resolved[id(handle)] = flat[0] if len(flat) == 1 else ProductHandle(flat)
    return resolved


def finalize(root: Union[NodeHandle, Network, None], pool: Optional[Iterable[NodeHandle]] = None) -> Network:
    """
    Turn a handle graph into an immutable Network.

    Args:
        root: Root handle (a Network is re-finalized from its handles)
        pool: Optional full set of nodes; any of them not reachable from the root is an error

    Returns:
        Finalized network

    Raises:
        EmptyNetworkError: If there is no root
        CycleError: If the graph has a directed cycle
        UnreachableNodeError: If a pool node is not reachable from the root
        WeightNormalizationError: If a sum's weights do not add up to 1 within 1e-6
    """
    if isinstance(root, Network):
        root = root.to_handles()
    if root is None:
        raise EmptyNetworkError("Cannot finalize an empty network")
    if not isinstance(root, NodeHandle):
        raise ConstructionError(f"Expected a node handle, got {type(root).__name__}")

    graph, handles = _reachable_graph(root)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleError(f"Cycle detected through {len(cycle)} node(s)")
    if pool is not None:
        unreachable = [h for h in pool if id(h) not in handles]
        if unreachable:
            raise UnreachableNodeError(f"{len(unreachable)} node(s) are not reachable from the root")

    resolved = _simplify(_post_order(root, lambda h: h.children))
    simple_root = resolved[id(root)]

    ids: Dict[int, int] = {}
    nodes: List[Node] = []
    scopes: List[Scope] = []
    for handle in _post_order(simple_root, lambda h: h.children):
        child_ids = tuple(ids[id(c)] for c in handle.children)
        if handle.kind == NodeKind.LEAF:
            nodes.append(LeafNode(handle.family, dict(handle.params), handle.scope_var))
            scopes.append(frozenset((handle.scope_var,)))
        else:
            if handle.kind == NodeKind.SUM:
                nodes.append(SumNode(child_ids, tuple(handle.weights)))
            else:
                nodes.append(ProductNode(child_ids))
            scopes.append(frozenset().union(*(scopes[c] for c in child_ids)))
        ids[id(handle)] = len(nodes) - 1

    network = Network(nodes, scopes)
    logger.debug("Finalized network: %d nodes, scope %s", len(network), sorted(network.scope))
    return network
