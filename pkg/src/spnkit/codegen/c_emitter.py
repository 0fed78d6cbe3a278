"""
C99 code generation for network log-likelihood evaluation.

The evaluator is straight-line code with one `const double` per node in id
order. Missing inputs are NaN, detected by self-inequality, and marginalized.
Sum nodes use log-sum-exp around their largest term.
"""
import logging
import math
from typing import List, Optional

from ..core.errors import CodegenError
from ..core.network import Network, NodeKind
from ..core.numeric import c_double
from ..systems.configuration_manager import EmitOptions

logger = logging.getLogger(__name__)

HEADER = """\
/*
 * Sum-product network log-likelihood evaluator, generated by spnkit.
 *
 * double {name}(const double *x);
 *
 *   x        array of {width} doubles; x[i] is the value of variable i and
 *            NaN marks a missing value, which is marginalized out
 *   returns  natural log of the probability (density) of x, or -INFINITY
 *
 * Nodes: {sums} sum, {products} product, {leaves} leaf. The function is
 * reentrant: no heap allocation and no global state.
 */
#include <math.h>
"""

MAIN = """
#include <stdio.h>
#include <stdlib.h>

/* Reads comma-separated rows from standard input (empty field or nan = missing)
 * and prints one log-likelihood per line. */
int main(void)
{{
    static char line[1 << 16];
    double x[{width}];
    long row = 0;

    while (fgets(line, sizeof line, stdin) != NULL) {{
        char *p = line;
        int i;

        if (line[0] == '\\n' || line[0] == '\\r' || line[0] == '\\0') {{
            continue;
        }}
        for (i = 0; i < {width}; ++i) {{
            char *end = p;
            while (*p == ' ' || *p == '\\t') {{
                ++p;
            }}
            if (*p == ',' || *p == '\\n' || *p == '\\r' || *p == '\\0') {{
                x[i] = NAN;
                end = p;
            }} else {{
                x[i] = strtod(p, &end);
                if (end == p) {{
                    fprintf(stderr, "row %ld, column %d: not a number\\n", row, i);
                    return 3;
                }}
            }}
            p = end;
            while (*p == ' ' || *p == '\\t') {{
                ++p;
            }}
            if (*p == ',') {{
                ++p;
            }}
        }}
        printf("%.17g\\n", {name}(x));
        ++row;
    }}
    return 0;
}}
"""


def _leaf_statement(node_id: int, node) -> str:
    if node.family.emit_c is None:
        raise CodegenError(f"Leaf family {node.family.label} has no C emission handler (node {node_id})")
    x = f"x[{node.scope_var}]"
    return f"    const double n{node_id} = ({x} != {x}) ? 0.0 : {node.family.emit_c(node.params, x)};"


def _sum_statements(node_id: int, node) -> List[str]:
    terms = []
    for child, weight in zip(node.children, node.weights):
        if weight > 0.0:
            terms.append((child, f"{c_double(math.log(weight))} + n{child}"))
    if not terms:
        return [f"    const double n{node_id} = -INFINITY;"]

    lines = [f"    const double t{node_id}_{k} = {expr};" for k, (_, expr) in enumerate(terms)]
    names = [f"t{node_id}_{k}" for k in range(len(terms))]
    maximum = names[-1]
    for name in reversed(names[:-1]):
        maximum = f"fmax({name}, {maximum})"
    lines.append(f"    const double m{node_id} = {maximum};")
    total = " + ".join(f"exp({name} - m{node_id})" for name in names)
    all_zero = " && ".join(f"n{child} == 0.0" for child in node.children)
    lines.append(
        f"    const double n{node_id} = ({all_zero}) ? 0.0 : "
        f"(m{node_id} == -INFINITY) ? -INFINITY : m{node_id} + log({total});"
    )
    return lines


def emit_source(network: Network, options: Optional[EmitOptions] = None) -> str:
    """
    Emit a self-contained C99 translation unit evaluating the network's log-likelihood.

    Args:
        network: Finalized network
        options: Function name and whether to add a CSV-reading main

    Returns:
        C source text; identical networks give identical text

    Raises:
        CodegenError: If the network is not finalized or a leaf family has no emission handler
    """
    options = (options or EmitOptions()).validate()
    if not isinstance(network, Network):
        raise CodegenError(f"Expected a finalized network, got {type(network).__name__}")

    counts = {kind: 0 for kind in NodeKind}
    body = []
    for node_id, node in enumerate(network.nodes):
        counts[node.kind] += 1
        if node.kind == NodeKind.LEAF:
            body.append(_leaf_statement(node_id, node))
        elif node.kind == NodeKind.PRODUCT:
            body.append(f"    const double n{node_id} = {' + '.join(f'n{c}' for c in node.children)};")
        else:
            body.extend(_sum_statements(node_id, node))

    width = network.num_variables
    parts = [
        HEADER.format(name=options.function_name, width=width, sums=counts[NodeKind.SUM],
                      products=counts[NodeKind.PRODUCT], leaves=counts[NodeKind.LEAF]),
        f"double {options.function_name}(const double *x)\n{{",
        *body,
        f"    return n{network.root};",
        "}",
    ]
    source = "\n".join(parts) + "\n"
    if options.emit_main:
        source += MAIN.format(name=options.function_name, width=width)
    logger.info("Emitted C evaluator %s for %d nodes", options.function_name, len(network))
    return source
