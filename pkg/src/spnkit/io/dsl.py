"""
Text DSL for networks: a single-pass recursive-descent parser and a canonical printer.

    network  = sumexpr EOF ;
    sumexpr  = wterm ('+' wterm)* | prodexpr ;
    wterm    = NUMBER '*' prodexpr ;
    prodexpr = atom ('*' atom)* ;
    atom     = leaf | '(' sumexpr ')' ;
    leaf     = IDENT '(' arg (',' arg)* ')' ;
    arg      = IDENT '=' (NUMBER | '[' NUMBER (',' NUMBER)* ']') ;

'#' starts a comment that runs to the end of the line. A bare product
expression stands for a single term of weight 1.
"""
import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

from ..core.errors import DslSyntaxError, WeightNormalizationError
from ..core.leaves import NORMALIZATION_TOLERANCE, LeafRegistry, resolve_family
from ..core.network import Network, NodeHandle, NodeKind, finalize, make_leaf, make_product, make_sum
from ..core.numeric import format_float

TOKEN_PATTERNS = [
    ("SKIP", r"[ \t\r]+|#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("NUMBER", r"-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PUNCT", r"[+*()\[\],=]"),
]
TOKENIZER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_PATTERNS))

LeafArg = Union[float, List[float]]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


def tokenize(text: str) -> List[Token]:
    """
    Split DSL text into tokens with 1-based line and column positions.

    Raises:
        DslSyntaxError: On a character that starts no token
    """
    tokens = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = TOKENIZER.match(text, position)
        if match is None:
            raise DslSyntaxError(f"unexpected character {text[position]!r}", line, position - line_start + 1)
        kind = match.lastgroup
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
        elif kind != "SKIP":
            tokens.append(Token(kind, match.group(), line, position - line_start + 1))
        position = match.end()
    tokens.append(Token("EOF", "", line, position - line_start + 1))
    return tokens


class DslParser:
    """Recursive-descent parser producing construction handles."""

    def __init__(self, text: str, registry: Optional[LeafRegistry] = None):
        self.tokens = tokenize(text)
        self.index = 0
        self.registry = registry

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, expected: Sequence[str] = (), token: Optional[Token] = None):
        token = token or self.current
        raise DslSyntaxError(message, token.line, token.column, expected)

    def check(self, text: str) -> bool:
        return self.current.kind == "PUNCT" and self.current.text == text

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        if not self.check(text):
            self.error(f"unexpected {self.current.describe()}", [repr(text)])
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            self.error(f"unexpected {self.current.describe()}", [what])
        return self.advance()

    # network = sumexpr EOF
    def parse(self) -> NodeHandle:
        root = self.sumexpr()
        if self.current.kind != "EOF":
            self.error(f"unexpected {self.current.describe()}", ["end of input"])
        return root

    # sumexpr = wterm ('+' wterm)* | prodexpr
    def sumexpr(self) -> NodeHandle:
        start = self.current
        if start.kind != "NUMBER":
            return self.prodexpr()

        weights, children = [], []
        weight, child = self.wterm()
        weights.append(weight)
        children.append(child)
        while self.check("+"):
            self.advance()
            weight, child = self.wterm()
            weights.append(weight)
            children.append(child)

        total = math.fsum(weights)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise WeightNormalizationError(
                total, f"line {start.line}, column {start.column}: sum weights add up to {total!r}, expected 1")
        if len(children) == 1:
            return children[0]
        return make_sum(children, weights)

    # wterm = NUMBER '*' prodexpr
    def wterm(self):
        token = self.expect_kind("NUMBER", "a weight")
        weight = float(token.text)
        if weight < 0.0:
            self.error("sum weight must be non-negative", token=token)
        self.expect("*")
        return weight, self.prodexpr()

    # prodexpr = atom ('*' atom)*
    def prodexpr(self) -> NodeHandle:
        atoms = [self.atom()]
        while self.check("*"):
            self.advance()
            atoms.append(self.atom())
        return atoms[0] if len(atoms) == 1 else make_product(atoms)

    # atom = leaf | '(' sumexpr ')'
    def atom(self) -> NodeHandle:
        if self.check("("):
            self.advance()
            inner = self.sumexpr()
            self.expect(")")
            return inner
        if self.current.kind == "IDENT":
            return self.leaf()
        self.error(f"unexpected {self.current.describe()}", ["'('", "a leaf family name"])

    # leaf = IDENT '(' arg (',' arg)* ')'
    def leaf(self) -> NodeHandle:
        name = self.advance()
        family = resolve_family(name.text, self.registry)
        self.expect("(")
        args: Dict[str, LeafArg] = {}
        while True:
            key, value = self.arg(args)
            args[key] = value
            if self.check(")"):
                break
            self.expect(",")
        self.advance()

        if "scope" not in args:
            self.error(f"{family.label} leaf is missing the 'scope' argument", token=name)
        scope = args.pop("scope")
        if isinstance(scope, list) or scope != int(scope) or scope < 0:
            self.error("scope must be a non-negative integer", token=name)
        return make_leaf(family, args, int(scope))

    # arg = IDENT '=' (NUMBER | '[' NUMBER (',' NUMBER)* ']')
    def arg(self, seen: Dict[str, LeafArg]):
        key = self.expect_kind("IDENT", "an argument name")
        if key.text in seen:
            self.error(f"duplicate argument {key.text!r}", token=key)
        self.expect("=")
        if not self.check("["):
            return key.text, float(self.expect_kind("NUMBER", "a number or '['").text)
        self.advance()
        values = [float(self.expect_kind("NUMBER", "a number").text)]
        while self.check(","):
            self.advance()
            values.append(float(self.expect_kind("NUMBER", "a number").text))
        self.expect("]")
        return key.text, values


def parse_dsl(text: str, registry: Optional[LeafRegistry] = None) -> Network:
    """
    Parse DSL text into a finalized network.

    Raises:
        DslSyntaxError: With line, column and the expected tokens
        WeightNormalizationError: If a sum's weights do not add up to 1 within 1e-6
        UnknownFamilyError: On an unregistered leaf family
        InvalidParamsError: If a leaf's parameters are rejected
    """
    return finalize(DslParser(text, registry).parse())


def _leaf_text(node) -> str:
    args = []
    for spec in node.family.param_schema:
        value = node.params[spec.name]
        if isinstance(value, tuple):
            args.append(f"{spec.name}=[{', '.join(format_float(v) for v in value)}]")
        else:
            args.append(f"{spec.name}={format_float(value)}")
    args.append(f"scope={node.scope_var}")
    return f"{node.family.label}({', '.join(args)})"


def print_dsl(network: Network) -> str:
    """
    Canonical DSL text: fully parenthesized, weights with 17 significant
    digits, children in stored order. A non-sum root is written as a single
    term of weight 1.0.

    The grammar has no way to name a node, so a child shared by several
    parents is written out once per parent and parses back as separate copies.
    """

    def terms(node) -> str:
        return " + ".join(f"{format_float(w)} * {atom(c)}" for w, c in zip(node.weights, node.children))

    def atom(node_id: int) -> str:
        node = network[node_id]
        if node.kind == NodeKind.LEAF:
            return _leaf_text(node)
        if node.kind == NodeKind.PRODUCT:
            return "(" + " * ".join(atom(c) for c in node.children) + ")"
        return "(" + terms(node) + ")"

    root = network[network.root]
    if root.kind == NodeKind.SUM:
        return terms(root) + "\n"
    return f"1.0 * {atom(network.root)}\n"
