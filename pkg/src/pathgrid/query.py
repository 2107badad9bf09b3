"""Path-query DSL: parsing, selector resolution, and bounded BFS enumeration.

Grammar (keywords case-insensitive):

    query      := "PATHS" "LENGTH" ("<=" | "=") INT
                  "FROM" selector "TO" selector
                  ["MODE" ("SIMPLE" | "WALK")]
                  ["WHERE" cond {"AND" cond}]
    selector   := "NODES" "(" STRING {"," STRING} ")"
                | IDENT "=" literal
                | IDENT "IN" "(" literal {"," literal} ")"
    cond       := ("edge" | "intermediate" | "node") "." IDENT comparator literal
                | ("edge" | "intermediate" | "node") "." IDENT "IN" "(" literal {"," literal} ")"
    comparator := "=" | "!=" | "<" | "<=" | ">" | ">="

`degree` is a reserved pseudo-attribute on node subjects, evaluated against
the full graph's total degree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .graph import CATEGORICAL, GEO, QUANTITATIVE, Graph, Path

DEFAULT_RESULT_CAP = 1_000_000

AT_MOST = "at-most"
EXACTLY = "exactly"
SIMPLE = "simple"
WALK = "walk"

ORDERING_OPS = ("<", "<=", ">", ">=")


class QueryError(ValueError):
    """Semantically invalid query for the given graph."""


class ParseError(QueryError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ResultCapExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"query exceeded the result cap of {cap} paths")
        self.cap = cap


class QueryCancelled(RuntimeError):
    pass


@dataclass(frozen=True)
class NodeSelector:
    kind: str  # "ids" | "attr-eq" | "attr-in"
    ids: tuple[str, ...] = ()
    attr: str = ""
    values: tuple = ()


@dataclass(frozen=True)
class Constraint:
    subject: str  # "edge" | "intermediate" | "node"
    attr: str
    op: str  # comparator or "IN"
    values: tuple  # single literal for comparators, many for IN

    @property
    def value(self):
        return self.values[0]


@dataclass(frozen=True)
class PathQuery:
    start: NodeSelector
    end: NodeSelector
    max_len: int
    len_mode: str = AT_MOST
    path_mode: str = SIMPLE
    constraints: tuple[Constraint, ...] = ()
    result_cap: int = DEFAULT_RESULT_CAP

    def __post_init__(self):
        if self.max_len < 1:
            raise QueryError("max length must be >= 1")
        if self.result_cap < 1:
            raise QueryError("result cap must be >= 1")


@dataclass(frozen=True)
class QueryResult:
    n_start: frozenset[str]
    n_end: frozenset[str]
    paths: tuple[Path, ...]
    query: PathQuery
    truncated: bool = False  # always False: cap overflow aborts instead

    def length_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for p in self.paths:
            hist[p.length] = hist.get(p.length, 0) + 1
        return dict(sorted(hist.items()))


# --- tokenizer / parser ---------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>-?\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|[<>=(),.])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"PATHS", "LENGTH", "FROM", "TO", "MODE", "WHERE", "AND", "NODES", "IN", "SIMPLE", "WALK"}


@dataclass
class _Token:
    kind: str  # "string" | "number" | "ident" | "op" | "eof"
    text: str
    value: object
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok_text = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            nl = tok_text.count("\n")
            if nl:
                line += nl
                line_start = pos + tok_text.rindex("\n") + 1
        elif kind == "string":
            value = tok_text[1:-1].replace('\\"', '"').replace("\\\\", "\\")
            tokens.append(_Token("string", tok_text, value, line, col))
        elif kind == "number":
            value = float(tok_text) if "." in tok_text else int(tok_text)
            tokens.append(_Token("number", tok_text, value, line, col))
        else:
            tokens.append(_Token(kind, tok_text, tok_text, line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", None, line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str):
        raise ParseError(message, self.cur.line, self.cur.column)

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        return self.cur.kind == "ident" and self.cur.text.upper() == word

    def expect_keyword(self, word: str):
        if not self.at_keyword(word):
            self.error(f"expected {word}, found {self.cur.text!r}")
        return self.advance()

    def expect_op(self, *ops: str) -> str:
        if self.cur.kind != "op" or self.cur.text not in ops:
            self.error(f"expected one of {', '.join(ops)}, found {self.cur.text!r}")
        return self.advance().text

    def parse_query(self) -> PathQuery:
        self.expect_keyword("PATHS")
        self.expect_keyword("LENGTH")
        op = self.expect_op("<=", "=")
        if self.cur.kind != "number" or not isinstance(self.cur.value, int):
            self.error("expected an integer path length")
        max_len = self.advance().value
        if max_len < 1:
            self.error("path length must be >= 1")
        self.expect_keyword("FROM")
        start = self.parse_selector()
        self.expect_keyword("TO")
        end = self.parse_selector()
        path_mode = SIMPLE
        if self.at_keyword("MODE"):
            self.advance()
            if self.at_keyword("SIMPLE"):
                self.advance()
            elif self.at_keyword("WALK"):
                self.advance()
                path_mode = WALK
            else:
                self.error("expected SIMPLE or WALK")
        constraints = []
        if self.at_keyword("WHERE"):
            self.advance()
            constraints.append(self.parse_cond())
            while self.at_keyword("AND"):
                self.advance()
                constraints.append(self.parse_cond())
        if self.cur.kind != "eof":
            self.error(f"unexpected trailing input {self.cur.text!r}")
        return PathQuery(
            start=start,
            end=end,
            max_len=max_len,
            len_mode=AT_MOST if op == "<=" else EXACTLY,
            path_mode=path_mode,
            constraints=tuple(constraints),
        )

    def parse_selector(self) -> NodeSelector:
        if self.at_keyword("NODES"):
            self.advance()
            self.expect_op("(")
            ids = [self.expect_string()]
            while self.cur.kind == "op" and self.cur.text == ",":
                self.advance()
                ids.append(self.expect_string())
            self.expect_op(")")
            return NodeSelector("ids", ids=tuple(ids))
        if self.cur.kind != "ident":
            self.error(f"expected a selector, found {self.cur.text!r}")
        attr = self.advance().text
        if self.at_keyword("IN"):
            self.advance()
            return NodeSelector("attr-in", attr=attr, values=tuple(self.parse_literal_list()))
        self.expect_op("=")
        return NodeSelector("attr-eq", attr=attr, values=(self.parse_literal(),))

    def parse_cond(self) -> Constraint:
        if self.cur.kind != "ident" or self.cur.text.lower() not in ("edge", "intermediate", "node"):
            self.error(f"expected edge, intermediate or node, found {self.cur.text!r}")
        subject = self.advance().text.lower()
        self.expect_op(".")
        if self.cur.kind != "ident":
            self.error("expected an attribute name")
        attr = self.advance().text
        if self.at_keyword("IN"):
            self.advance()
            return Constraint(subject, attr, "IN", tuple(self.parse_literal_list()))
        op = self.expect_op("=", "!=", "<", "<=", ">", ">=")
        return Constraint(subject, attr, op, (self.parse_literal(),))

    def parse_literal_list(self) -> list:
        self.expect_op("(")
        values = [self.parse_literal()]
        while self.cur.kind == "op" and self.cur.text == ",":
            self.advance()
            values.append(self.parse_literal())
        self.expect_op(")")
        return values

    def parse_literal(self):
        if self.cur.kind in ("string", "number"):
            return self.advance().value
        self.error(f"expected a string or number literal, found {self.cur.text!r}")

    def expect_string(self) -> str:
        if self.cur.kind != "string":
            self.error(f"expected a quoted string, found {self.cur.text!r}")
        return self.advance().value


def parse_query(text: str, graph: Graph | None = None) -> PathQuery:
    """Parse DSL text; when a graph is given, also validate attribute names
    and comparator/kind compatibility against its schema."""
    query = _Parser(text).parse_query()
    if graph is not None:
        validate_query(graph, query)
    return query


def _selector_attr_kind(graph: Graph, selector: NodeSelector) -> None:
    if selector.kind == "ids":
        return
    if selector.attr not in graph.schema:
        raise QueryError(f"unknown attribute {selector.attr!r} in selector")
    kind = graph.schema[selector.attr]
    if kind == GEO:
        raise QueryError(f"cannot select on geo attribute {selector.attr!r}")
    for v in selector.values:
        _check_literal_kind(kind, selector.attr, v)


def _check_literal_kind(kind: str, attr: str, literal) -> None:
    if kind == CATEGORICAL and not isinstance(literal, str):
        raise QueryError(f"attribute {attr!r} is categorical; expected a string literal, got {literal!r}")
    if kind == QUANTITATIVE and not isinstance(literal, (int, float)):
        raise QueryError(f"attribute {attr!r} is quantitative; expected a number literal, got {literal!r}")


def _constraint_kind(graph: Graph, c: Constraint) -> str:
    if c.attr == "degree":
        if c.subject == "edge":
            raise QueryError("degree is a node pseudo-attribute; not valid on edge subjects")
        return QUANTITATIVE
    if c.attr not in graph.schema:
        raise QueryError(f"unknown attribute {c.attr!r} in constraint")
    kind = graph.schema[c.attr]
    if kind == GEO:
        raise QueryError(f"cannot constrain geo attribute {c.attr!r}")
    return kind


def validate_query(graph: Graph, query: PathQuery) -> None:
    _selector_attr_kind(graph, query.start)
    _selector_attr_kind(graph, query.end)
    for c in query.constraints:
        kind = _constraint_kind(graph, c)
        if c.op in ORDERING_OPS and kind != QUANTITATIVE:
            raise QueryError(f"comparator {c.op} requires a quantitative attribute, but {c.attr!r} is {kind}")
        for v in c.values:
            _check_literal_kind(kind, c.attr, v)


def resolve_selector(graph: Graph, selector: NodeSelector) -> set[str]:
    """Exact node id set for a selector; unknown ids in an id list are errors,
    an attribute value matching nothing is an empty (valid) result."""
    if selector.kind == "ids":
        missing = [i for i in selector.ids if i not in graph.nodes]
        if missing:
            raise QueryError(f"unknown node id(s) in selector: {', '.join(sorted(missing))}")
        return set(selector.ids)
    _selector_attr_kind(graph, selector)
    values = set(selector.values)
    return {nid for nid, node in graph.nodes.items() if node.attrs.get(selector.attr) in values}


def _compare(op: str, actual, expected) -> bool:
    if actual is None:
        return False  # absent attributes never match
    if op == "=":
        return actual == expected
    if op == "!=":
        return actual != expected
    if op == "<":
        return actual < expected
    if op == "<=":
        return actual <= expected
    if op == ">":
        return actual > expected
    if op == ">=":
        return actual >= expected
    if op == "IN":
        return actual in expected
    raise QueryError(f"unknown comparator {op!r}")


def _node_predicate(graph: Graph, constraints: list[Constraint]) -> Callable[[str], bool]:
    if not constraints:
        return lambda nid: True
    cache: dict[str, bool] = {}

    def ok(nid: str) -> bool:
        hit = cache.get(nid)
        if hit is None:
            attrs = graph.nodes[nid].attrs
            hit = all(
                _compare(
                    c.op,
                    graph.degree(nid) if c.attr == "degree" else attrs.get(c.attr),
                    c.values if c.op == "IN" else c.value,
                )
                for c in constraints
            )
            cache[nid] = hit
        return hit

    return ok


def _edge_predicate(graph: Graph, constraints: list[Constraint]) -> Callable[[str], bool]:
    if not constraints:
        return lambda eid: True
    cache: dict[str, bool] = {}

    def ok(eid: str) -> bool:
        hit = cache.get(eid)
        if hit is None:
            attrs = graph.edges[eid].attrs
            hit = all(
                _compare(c.op, attrs.get(c.attr), c.values if c.op == "IN" else c.value)
                for c in constraints
            )
            cache[eid] = hit
        return hit

    return ok


def enumerate_paths(
    graph: Graph,
    query: PathQuery,
    should_cancel: Callable[[], bool] | None = None,
) -> QueryResult:
    """Enumerate all paths matching the query by level-synchronous BFS from
    the start set. Raises ResultCapExceeded rather than truncating, so
    downstream statistics never see a biased sample. ``should_cancel`` is
    polled once per BFS level."""
    validate_query(graph, query)
    n_start = resolve_selector(graph, query.start)
    n_end = resolve_selector(graph, query.end)

    edge_ok = _edge_predicate(graph, [c for c in query.constraints if c.subject == "edge"])
    inter_ok = _node_predicate(graph, [c for c in query.constraints if c.subject == "intermediate"])
    any_ok = _node_predicate(graph, [c for c in query.constraints if c.subject == "node"])

    simple = query.path_mode == SIMPLE
    collect_all = query.len_mode == AT_MOST
    end_set = n_end
    edges = graph.edges
    out_index = graph.out_index

    results: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    # frontier entries: (edge id seq, node id seq)
    frontier: list[tuple[tuple[str, ...], tuple[str, ...]]] = [
        ((), (s,)) for s in sorted(n_start) if any_ok(s)
    ]
    for level in range(1, query.max_len + 1):
        if should_cancel is not None and should_cancel():
            raise QueryCancelled()
        collect = collect_all or level == query.max_len
        nxt: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
        for eids, nids in frontier:
            tail = nids[-1]
            if level > 1 and not inter_ok(tail):
                continue  # tail becomes interior in any extension
            for eid in out_index.get(tail, ()):
                if not edge_ok(eid):
                    continue
                v = edges[eid].dst
                if simple and v in nids:
                    continue
                if not any_ok(v):
                    continue
                ext = (eids + (eid,), nids + (v,))
                if collect and v in end_set:
                    results.append(ext)
                    if len(results) > query.result_cap:
                        raise ResultCapExceeded(query.result_cap)
                if level < query.max_len:
                    nxt.append(ext)
        frontier = nxt

    paths = tuple(
        sorted(
            (Path(edges=eids, nodes=nids) for eids, nids in results),
            key=Path.sort_key,
        )
    )
    return QueryResult(
        n_start=frozenset(n_start),
        n_end=frozenset(n_end),
        paths=paths,
        query=query,
    )


def run_query(graph: Graph, dsl: str, result_cap: int | None = None,
              should_cancel: Callable[[], bool] | None = None) -> QueryResult:
    query = parse_query(dsl, graph)
    if result_cap is not None:
        query = replace(query, result_cap=result_cap)
    return enumerate_paths(graph, query, should_cancel=should_cancel)
