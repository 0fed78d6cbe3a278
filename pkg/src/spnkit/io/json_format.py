"""
JSON model documents.

    {"version": "1.0", "root": <id>, "nodes": [{"id", "kind", ...}, ...]}

Nodes are listed in id order, children before parents, and the root is the
last node. Sum nodes carry children and weights, product nodes children, and
leaves family, scope and params. Floats are written with repr precision, so
parameters survive a round trip bit for bit.
"""
import json
import logging
import math
from typing import Any, Dict, List, Optional

from ..core.errors import (ConstructionError, InvalidParamsError, SchemaError, UnknownFamilyError,
                           WeightNormalizationError)
from ..core.leaves import NORMALIZATION_TOLERANCE, LeafRegistry, resolve_family
from ..core.network import Network, NodeHandle, NodeKind, finalize, make_leaf, make_product, make_sum

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1.0"
NODE_FIELDS = {
    "sum": {"id", "kind", "children", "weights"},
    "product": {"id", "kind", "children"},
    "leaf": {"id", "kind", "family", "scope", "params"},
}


def to_document(network: Network) -> Dict[str, Any]:
    """JSON-ready mapping for a finalized network."""
    nodes: List[Dict[str, Any]] = []
    for node_id, node in enumerate(network.nodes):
        record: Dict[str, Any] = {"id": node_id, "kind": node.kind.value}
        if node.kind == NodeKind.LEAF:
            record["family"] = node.family.label
            record["scope"] = node.scope_var
            record["params"] = {name: list(value) if isinstance(value, tuple) else value
                                for name, value in node.params.items()}
        else:
            record["children"] = list(node.children)
            if node.kind == NodeKind.SUM:
                record["weights"] = list(node.weights)
        nodes.append(record)
    return {"version": FORMAT_VERSION, "root": network.root, "nodes": nodes}


def to_json(network: Network, indent: Optional[int] = 2) -> str:
    return json.dumps(to_document(network), indent=indent) + "\n"


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class _DocumentReader:
    """Checks a parsed document field by field and builds construction handles."""

    def __init__(self, registry: Optional[LeafRegistry]):
        self.registry = registry
        self.handles: List[NodeHandle] = []

    def read(self, document: Any) -> NodeHandle:
        if not isinstance(document, dict):
            raise SchemaError("$", "document must be an object")
        for key in ("version", "root", "nodes"):
            if key not in document:
                raise SchemaError(f"$.{key}", "missing field")
        unknown = sorted(set(document) - {"version", "root", "nodes"})
        if unknown:
            raise SchemaError(f"$.{unknown[0]}", "unknown field")
        if document["version"] != FORMAT_VERSION:
            raise SchemaError("$.version", f"unsupported version {document['version']!r}, expected {FORMAT_VERSION!r}")
        nodes = document["nodes"]
        if not isinstance(nodes, list) or not nodes:
            raise SchemaError("$.nodes", "must be a non-empty list")

        for index, record in enumerate(nodes):
            self.handles.append(self.node(index, record))

        root = document["root"]
        if not _is_int(root) or root != len(nodes) - 1:
            raise SchemaError("$.root", f"must be the largest node id {len(nodes) - 1}, got {root!r}")
        return self.handles[root]

    def node(self, index: int, record: Any) -> NodeHandle:
        path = f"$.nodes[{index}]"
        if not isinstance(record, dict):
            raise SchemaError(path, "node must be an object")
        if "id" not in record:
            raise SchemaError(f"{path}.id", "missing field")
        if not _is_int(record["id"]) or record["id"] != index:
            raise SchemaError(f"{path}.id", f"expected {index} (ids must be contiguous, in order), got {record['id']!r}")
        kind = record.get("kind")
        if kind not in NODE_FIELDS:
            raise SchemaError(f"{path}.kind", f"must be one of sum, product, leaf, got {kind!r}")
        for key in sorted(NODE_FIELDS[kind] - set(record)):
            raise SchemaError(f"{path}.{key}", f"missing field for a {kind} node")
        for key in sorted(set(record) - NODE_FIELDS[kind]):
            raise SchemaError(f"{path}.{key}", f"not allowed on a {kind} node")

        if kind == "leaf":
            return self.leaf(path, record)
        children = self.children(path, index, record["children"])
        try:
            if kind == "product":
                return make_product(children)
            weights = self.weights(path, record["weights"], len(children))
            return make_sum(children, weights)
        except ConstructionError as e:
            raise SchemaError(path, str(e)) from e

    def children(self, path: str, index: int, children: Any) -> List[NodeHandle]:
        if not isinstance(children, list):
            raise SchemaError(f"{path}.children", "must be a list of node ids")
        handles = []
        for position, child in enumerate(children):
            if not _is_int(child) or child < 0:
                raise SchemaError(f"{path}.children[{position}]", f"must be a node id, got {child!r}")
            if child >= index:
                raise SchemaError(f"{path}.children[{position}]",
                                  f"child id {child} is not smaller than parent id {index}")
            handles.append(self.handles[child])
        return handles

    def weights(self, path: str, weights: Any, count: int) -> List[float]:
        if not isinstance(weights, list) or not all(_is_number(w) for w in weights):
            raise SchemaError(f"{path}.weights", "must be a list of numbers")
        if len(weights) != count:
            raise SchemaError(f"{path}.weights", f"has {len(weights)} entries for {count} children")
        total = math.fsum(weights)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise WeightNormalizationError(total, f"{path}.weights: weights add up to {total!r}, expected 1")
        return [float(w) for w in weights]

    def leaf(self, path: str, record: Dict[str, Any]) -> NodeHandle:
        if not isinstance(record["family"], str):
            raise SchemaError(f"{path}.family", "must be a string")
        try:
            family = resolve_family(record["family"], self.registry)
        except UnknownFamilyError as e:
            raise SchemaError(f"{path}.family", str(e)) from e
        scope = record["scope"]
        if not _is_int(scope) or scope < 0:
            raise SchemaError(f"{path}.scope", f"must be a non-negative integer, got {scope!r}")
        params = record["params"]
        if not isinstance(params, dict):
            raise SchemaError(f"{path}.params", "must be an object")
        try:
            return make_leaf(family, params, scope)
        except InvalidParamsError as e:
            raise SchemaError(f"{path}.params", str(e)) from e


def from_json(text: str, registry: Optional[LeafRegistry] = None) -> Network:
    """
    Read a JSON model document into a finalized network.

    Raises:
        SchemaError: On malformed JSON or a document violating the schema; the
            error path names the offending field (e.g. "$.nodes[3].weights")
        WeightNormalizationError: If a sum's weights do not add up to 1 within 1e-6
        UnreachableNodeError: If some node is not reachable from the root
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON: {e}") from e
    reader = _DocumentReader(registry)
    root = reader.read(document)
    network = finalize(root, pool=reader.handles)
    logger.debug("Read JSON model with %d nodes", len(network))
    return network
