"""Graphviz DOT export."""
from ..core.network import Network, NodeKind

SUM_LABEL = "+"
PRODUCT_LABEL = "×"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(network: Network) -> str:
    """
    DOT digraph of the network: one statement per node in id order, then one
    per edge. Sum edges are labeled with their weight rounded to 3 decimals.
    """
    lines = ["digraph spn {"]
    for node_id, node in enumerate(network.nodes):
        if node.kind == NodeKind.SUM:
            attributes = f"label={_quote(SUM_LABEL)}, shape=circle"
        elif node.kind == NodeKind.PRODUCT:
            attributes = f"label={_quote(PRODUCT_LABEL)}, shape=circle"
        else:
            attributes = f"label={_quote(f'{node.family.label}({node.scope_var})')}, shape=box"
        lines.append(f"  n{node_id} [{attributes}];")
    for node_id, node in enumerate(network.nodes):
        if node.kind == NodeKind.SUM:
            for child, weight in zip(node.children, node.weights):
                lines.append(f"  n{node_id} -> n{child} [label={_quote(f'{weight:.3f}')}];")
        else:
            for child in node.children:
                lines.append(f"  n{node_id} -> n{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"
