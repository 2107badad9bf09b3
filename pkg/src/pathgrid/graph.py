"""Immutable multivariate directed graph model shared by all other modules.

Attribute values are plain Python values validated against an explicit
schema: ``str`` for categorical attributes, ``float``/``int`` for
quantitative ones, and an ``(lat, lon)`` tuple for geo attributes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

CATEGORICAL = "categorical"
QUANTITATIVE = "quantitative"
GEO = "geo"

ATTR_KINDS = (CATEGORICAL, QUANTITATIVE, GEO)

AttrValue = object  # str | float | int | tuple[float, float]


class GraphError(ValueError):
    """Invalid graph input: duplicate ids, dangling endpoints, bad attributes."""


def _check_attr(kind: str, name: str, value: AttrValue) -> AttrValue:
    if kind == CATEGORICAL:
        if not isinstance(value, str):
            raise GraphError(f"attribute {name!r} expects a categorical string, got {value!r}")
        return value
    if kind == QUANTITATIVE:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise GraphError(f"attribute {name!r} expects a number, got {value!r}")
        if not math.isfinite(value):
            raise GraphError(f"attribute {name!r} must be finite, got {value!r}")
        return value
    if kind == GEO:
        try:
            lat, lon = value  # type: ignore[misc]
        except (TypeError, ValueError):
            raise GraphError(f"attribute {name!r} expects (lat, lon), got {value!r}") from None
        lat, lon = float(lat), float(lon)
        if not (-90.0 <= lat <= 90.0):
            raise GraphError(f"attribute {name!r}: latitude {lat} out of [-90, 90]")
        if not (-180.0 <= lon <= 180.0):
            raise GraphError(f"attribute {name!r}: longitude {lon} out of [-180, 180]")
        return (lat, lon)
    raise GraphError(f"unknown attribute kind {kind!r} for {name!r}")


@dataclass(frozen=True)
class Node:
    id: str
    attrs: Mapping[str, AttrValue] = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    attrs: Mapping[str, AttrValue] = field(default_factory=dict)


@dataclass(frozen=True)
class Graph:
    """Validated directed graph. Treat as immutable after ``build_graph``."""

    nodes: Mapping[str, Node]
    edges: Mapping[str, Edge]
    schema: Mapping[str, str]
    out_index: Mapping[str, tuple[str, ...]]
    in_index: Mapping[str, tuple[str, ...]]

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise GraphError(f"unknown node id {node_id!r}") from None

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edges[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id!r}") from None

    def out_edges(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self.out_index.get(node_id, ())

    def in_edges(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self.in_index.get(node_id, ())

    def degree(self, node_id: str) -> int:
        """Total degree (in + out); self-loops count once on each index."""
        self.node(node_id)
        return len(self.out_index.get(node_id, ())) + len(self.in_index.get(node_id, ()))

    def node_attr(self, node_id: str, name: str):
        return self.nodes[node_id].attrs.get(name)

    def attr_kind(self, name: str) -> str:
        try:
            return self.schema[name]
        except KeyError:
            raise GraphError(f"unknown attribute {name!r}") from None


def build_graph(
    nodes: Iterable[Node],
    edges: Iterable[Edge],
    schema: Mapping[str, str] | None = None,
) -> Graph:
    """Validate nodes/edges against the schema and build adjacency indexes.

    Rejects duplicate ids, dangling edge endpoints, attribute names missing
    from the schema, and values not matching their declared kind.
    """
    schema = dict(schema or {})
    for name, kind in schema.items():
        if kind not in ATTR_KINDS:
            raise GraphError(f"schema kind for {name!r} must be one of {ATTR_KINDS}, got {kind!r}")

    node_map: dict[str, Node] = {}
    for n in nodes:
        if not n.id:
            raise GraphError("node id must be non-empty")
        if n.id in node_map:
            raise GraphError(f"duplicate node id {n.id!r}")
        node_map[n.id] = Node(n.id, _validated_attrs(schema, n.attrs, f"node {n.id!r}"))

    edge_map: dict[str, Edge] = {}
    out_index: dict[str, list[str]] = {}
    in_index: dict[str, list[str]] = {}
    for e in edges:
        if not e.id:
            raise GraphError("edge id must be non-empty")
        if e.id in edge_map:
            raise GraphError(f"duplicate edge id {e.id!r}")
        if e.src not in node_map:
            raise GraphError(f"edge {e.id!r} has dangling source {e.src!r}")
        if e.dst not in node_map:
            raise GraphError(f"edge {e.id!r} has dangling target {e.dst!r}")
        edge_map[e.id] = Edge(e.id, e.src, e.dst, _validated_attrs(schema, e.attrs, f"edge {e.id!r}"))
        out_index.setdefault(e.src, []).append(e.id)
        in_index.setdefault(e.dst, []).append(e.id)

    return Graph(
        nodes=node_map,
        edges=edge_map,
        schema=schema,
        out_index={k: tuple(sorted(v)) for k, v in out_index.items()},
        in_index={k: tuple(sorted(v)) for k, v in in_index.items()},
    )


def _validated_attrs(schema: Mapping[str, str], attrs: Mapping[str, AttrValue], owner: str) -> dict:
    out = {}
    for name, value in attrs.items():
        if name not in schema:
            raise GraphError(f"{owner}: attribute {name!r} not in schema")
        out[name] = _check_attr(schema[name], name, value)
    return out


@dataclass(frozen=True)
class Path:
    """An edge sequence whose consecutive edges chain; length = edge count."""

    edges: tuple[str, ...]
    nodes: tuple[str, ...]

    def __post_init__(self):
        if len(self.edges) < 1:
            raise GraphError("a path needs at least one edge")
        if len(self.nodes) != len(self.edges) + 1:
            raise GraphError("path node sequence must have len(edges) + 1 entries")

    @classmethod
    def from_edges(cls, graph: Graph, edge_ids: Iterable[str]) -> "Path":
        ids = tuple(edge_ids)
        if not ids:
            raise GraphError("a path needs at least one edge")
        nodes = [graph.edge(ids[0]).src]
        for eid in ids:
            e = graph.edge(eid)
            if e.src != nodes[-1]:
                raise GraphError(f"edge {eid!r} does not chain: {e.src!r} != {nodes[-1]!r}")
            nodes.append(e.dst)
        return cls(edges=ids, nodes=tuple(nodes))

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def start(self) -> str:
        return self.nodes[0]

    @property
    def end(self) -> str:
        return self.nodes[-1]

    def node_at(self, j: int) -> str:
        if not 0 <= j <= self.length:
            raise GraphError(f"position {j} out of [0, {self.length}]")
        return self.nodes[j]

    def sort_key(self):
        return (self.start, self.end, self.length, self.edges)
