"""
Validity checks and structure statistics for finalized networks.
"""
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List

import networkx as nx

from .errors import InvalidNetworkError
from .leaves import NORMALIZATION_TOLERANCE
from .network import Network, NodeKind


class ViolationKind(Enum):
    COMPLETENESS = "completeness"
    DECOMPOSABILITY = "decomposability"
    WEIGHT_NORMALIZATION = "weight-normalization"
    PARAM_INVALID = "param-invalid"
    STRUCTURAL = "structural"


@dataclass(frozen=True)
class Violation:
    node: int
    kind: ViolationKind
    message: str

    def __str__(self) -> str:
        return f"node {self.node}: {self.kind.value}: {self.message}"


@dataclass
class ValidityReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def raise_if_invalid(self):
        """
        Raises:
            InvalidNetworkError: Listing every violation, when the report is not ok
        """
        if not self.ok:
            details = "; ".join(str(v) for v in self.violations)
            raise InvalidNetworkError(f"Network is invalid: {details}")

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def validate(network: Network) -> ValidityReport:
    """
    Check completeness, decomposability, weight normalization, leaf parameters
    and the structural invariants of a finalized network. Violations are data,
    never exceptions.
    """
    report = ValidityReport()
    add = report.violations.append
    scopes = network.scopes

    for node_id, node in enumerate(network.nodes):
        children = node.children
        if any(c >= node_id or c < 0 for c in children):
            add(Violation(node_id, ViolationKind.STRUCTURAL, "child id not smaller than parent id"))
            continue

        if node.kind == NodeKind.LEAF:
            violations = node.family.validate(node.params)
            for message in violations:
                add(Violation(node_id, ViolationKind.PARAM_INVALID, message))
            if scopes[node_id] != frozenset((node.scope_var,)):
                add(Violation(node_id, ViolationKind.STRUCTURAL, "leaf scope differs from its variable"))
            continue

        if len(children) < 2:
            add(Violation(node_id, ViolationKind.STRUCTURAL, f"{node.kind.value} node has fewer than 2 children"))
        union = frozenset().union(*(scopes[c] for c in children))
        if scopes[node_id] != union:
            add(Violation(node_id, ViolationKind.STRUCTURAL, "scope differs from the union of child scopes"))

        if node.kind == NodeKind.SUM:
            if len(node.weights) != len(children):
                add(Violation(node_id, ViolationKind.STRUCTURAL, "weight count differs from child count"))
            total = math.fsum(node.weights)
            if any(w < 0.0 for w in node.weights) or abs(total - 1.0) > NORMALIZATION_TOLERANCE:
                add(Violation(node_id, ViolationKind.WEIGHT_NORMALIZATION,
                              f"weights add up to {total!r} or contain negatives"))
            first = scopes[children[0]]
            for child in children[1:]:
                if scopes[child] != first:
                    add(Violation(node_id, ViolationKind.COMPLETENESS,
                                  f"child {child} has scope {sorted(scopes[child])}, sibling {children[0]} has {sorted(first)}"))
        else:
            for a, b in itertools.combinations(children, 2):
                overlap = scopes[a] & scopes[b]
                if overlap:
                    add(Violation(node_id, ViolationKind.DECOMPOSABILITY,
                                  f"children {a} and {b} share variable(s) {sorted(overlap)}"))
    return report


def require_valid(network: Network) -> Network:
    """Return the network unchanged, or raise InvalidNetworkError."""
    validate(network).raise_if_invalid()
    return network


@dataclass(frozen=True)
class StructureStats:
    sum: int
    product: int
    leaf: int
    edges: int
    depth: int
    params: int

    @property
    def nodes(self) -> int:
        return self.sum + self.product + self.leaf

    def as_dict(self) -> Dict[str, int]:
        return {"sum": self.sum, "product": self.product, "leaf": self.leaf,
                "edges": self.edges, "depth": self.depth, "params": self.params}


def structure_stats(network: Network) -> StructureStats:
    """Count nodes by kind, edges, depth (edges on the longest root-to-leaf path) and free parameters."""
    counts = {kind: 0 for kind in NodeKind}
    params = 0
    edges = 0
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(network)))
    for node_id, node in enumerate(network.nodes):
        counts[node.kind] += 1
        edges += len(node.children)
        graph.add_edges_from((node_id, c) for c in node.children)
        if node.kind == NodeKind.SUM:
            params += len(node.weights) - 1
        elif node.kind == NodeKind.LEAF:
            params += node.family.free_parameters(node.params)
    return StructureStats(
        sum=counts[NodeKind.SUM],
        product=counts[NodeKind.PRODUCT],
        leaf=counts[NodeKind.LEAF],
        edges=edges,
        depth=nx.dag_longest_path_length(graph),
        params=params,
    )
