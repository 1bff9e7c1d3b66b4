"""Hasse diagrams as Graphviz DOT text, plus a small DOT grammar checker."""
from __future__ import annotations

import re

from .order import Preorder, hasse_edges


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(p, name: str = "hasse") -> str:
    """One node per element, one edge per covering pair, drawn bottom to top.

    Accepts anything with a ``poset`` attribute (lattices, completions)
    or a poset itself.  Nodes are ``n0 .. n{k-1}`` in carrier order.
    """
    P: Preorder = getattr(p, "poset", p)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i, lab in enumerate(P.labels):
        lines.append(f"  n{i} [label={_quote(lab)}];")
    for i, j in hasse_edges(P):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class DotSyntaxError(ValueError):
    pass


_DOT_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*|/\*.*?\*/)
  | (?P<arrow>->|--)
  | (?P<punct>[{}\[\];,=:])
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<number>-?(?:\.\d+|\d+(?:\.\d*)?))
  | (?P<ident>[A-Za-z_\x80-\uffff][A-Za-z_0-9\x80-\uffff]*)
""", re.VERBOSE | re.DOTALL)

_KEYWORDS = {"strict", "graph", "digraph", "node", "edge", "subgraph"}


def _dot_tokens(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        if not m:
            raise DotSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        val = m.group()
        if kind == "ident" and val.lower() in _KEYWORDS:
            kind = val.lower()
        elif kind in ("quoted", "number", "ident"):
            kind = "id"
        elif kind == "punct":
            kind = val
        out.append((kind, val))
    return out


class _DotParser:
    """Recursive descent over the standard graph/stmt_list grammar."""

    def __init__(self, tokens):
        self.toks, self.i = tokens, 0
        self.nodes, self.edges = set(), []

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise DotSyntaxError(f"expected {kind}, got {got!r}")
        self.i += 1
        return self.toks[self.i - 1][1]

    def graph(self):
        if self.peek() == "strict":
            self.take("strict")
        if self.peek() == "digraph":
            self.directed = True
            self.take("digraph")
        else:
            self.directed = False
            self.take("graph")
        if self.peek() == "id":
            self.take("id")
        self.take("{")
        self.stmt_list()
        self.take("}")
        if self.i != len(self.toks):
            raise DotSyntaxError("trailing tokens after graph")

    def stmt_list(self):
        while self.peek() not in ("}", None):
            self.stmt()
            if self.peek() == ";":
                self.take(";")

    def stmt(self):
        k = self.peek()
        if k in ("graph", "node", "edge"):
            self.take(k)
            self.attr_list()
            return
        if k in ("subgraph", "{"):
            self.subgraph()
            ends = None
        elif self.i + 1 < len(self.toks) and self.toks[self.i + 1][0] == "=":
            self.take("id")
            self.take("=")
            self.take("id")
            return
        else:
            ends = self.node_id()
        if self.peek() == "arrow":
            while self.peek() == "arrow":
                op = self.take("arrow")
                if op != ("->" if self.directed else "--"):
                    raise DotSyntaxError(f"edge operator {op!r} in the wrong graph type")
                nxt = self.subgraph() if self.peek() in ("subgraph", "{") else self.node_id()
                if ends is not None and nxt is not None:
                    self.edges.append((ends, nxt))
                ends = nxt
            if self.peek() == "[":
                self.attr_list()
        elif ends is not None and self.peek() == "[":
            self.attr_list()

    def node_id(self):
        name = self.take("id")
        self.nodes.add(name)
        if self.peek() == ":":
            self.take(":")
            self.take("id")
            if self.peek() == ":":
                self.take(":")
                self.take("id")
        return name

    def subgraph(self):
        if self.peek() == "subgraph":
            self.take("subgraph")
            if self.peek() == "id":
                self.take("id")
        self.take("{")
        self.stmt_list()
        self.take("}")
        return None

    def attr_list(self):
        while self.peek() == "[":
            self.take("[")
            while self.peek() == "id":
                self.take("id")
                self.take("=")
                self.take("id")
                if self.peek() in (",", ";"):
                    self.take(self.peek())
            self.take("]")


def validate_dot(text: str) -> tuple[int, int]:
    """Parse DOT text; returns ``(node count, edge count)`` or raises
    :class:`DotSyntaxError`."""
    p = _DotParser(_dot_tokens(text))
    p.graph()
    return len(p.nodes), len(p.edges)
