"""Drill-down from cell selections to concrete paths, motif groups, and
layouted subgraphs for node-link rendering."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GEO, Graph, Path
from .overview import View, ViewError


def resolve_selection(view: View, cell_refs: list[tuple[str, str]]) -> list[Path]:
    """Union of the referenced cells' path sets, deduplicated, in the
    engine's deterministic path order."""
    idxs: set[int] = set()
    for ref in cell_refs:
        idxs.update(view.cell_paths(*ref))
    return [view.result.paths[i] for i in sorted(idxs)]


@dataclass(frozen=True)
class Motif:
    """Paths sharing one display-key sequence (e.g. the airport codes a
    journey passes through)."""

    key: tuple[str, ...]
    paths: tuple[Path, ...]

    @property
    def count(self) -> int:
        return len(self.paths)


def group_by_motif(graph: Graph, paths: list[Path], display_attr: str | None = None) -> list[Motif]:
    """Group paths by node display-key sequence, sorted by descending member
    count then key. Nodes missing the display attribute fall back to their id."""
    if display_attr is not None and display_attr not in graph.schema:
        raise ViewError(f"unknown attribute {display_attr!r}")

    def display(nid: str) -> str:
        if display_attr is not None:
            v = graph.nodes[nid].attrs.get(display_attr)
            if isinstance(v, str):
                return v
        return nid

    groups: dict[tuple[str, ...], list[Path]] = {}
    for p in paths:
        groups.setdefault(tuple(display(n) for n in p.nodes), []).append(p)
    motifs = [Motif(key=k, paths=tuple(v)) for k, v in groups.items()]
    motifs.sort(key=lambda m: (-m.count, m.key))
    return motifs


def motifs_to_dict(graph: Graph, motifs: list[Motif]) -> dict:
    return {
        "motifs": [
            {
                "key": list(m.key),
                "count": m.count,
                "paths": [
                    {
                        "nodes": list(p.nodes),
                        "edges": [
                            {
                                "id": eid,
                                "source": graph.edges[eid].src,
                                "target": graph.edges[eid].dst,
                                "attrs": _attrs_to_json(graph, graph.edges[eid].attrs),
                            }
                            for eid in p.edges
                        ],
                    }
                    for p in m.paths
                ],
            }
            for m in motifs
        ]
    }


@dataclass(frozen=True)
class SubgraphView:
    nodes: tuple[tuple[str, float, float], ...]  # (id, x, y)
    edges: tuple[str, ...]
    layout: str  # "force" | "spatial"


FORCE_SEED = 42
FORCE_ITERATIONS = 300


def extract_subgraph(
    graph: Graph,
    paths: list[Path],
    layout: str = "force",
    geo_attr: str | None = None,
) -> SubgraphView:
    """Subgraph of exactly the nodes/edges in the selected paths.

    Force layout is a seed-fixed Fruchterman-Reingold embedding, so repeated
    calls with the same input give identical positions. Spatial layout
    copies (lon, lat) from the graph's geo attribute and errors if any
    included node lacks it.
    """
    node_ids = sorted({n for p in paths for n in p.nodes})
    edge_ids = sorted({e for p in paths for e in p.edges})
    if layout == "spatial":
        if geo_attr is None:
            geo_attr = next((n for n, k in sorted(graph.schema.items()) if k == GEO), None)
            if geo_attr is None:
                raise ViewError("spatial layout requires a geo attribute in the schema")
        missing = [n for n in node_ids if graph.nodes[n].attrs.get(geo_attr) is None]
        if missing:
            raise ViewError(f"spatial layout: nodes lack geo attribute {geo_attr!r}: {', '.join(missing)}")
        positions = {}
        for n in node_ids:
            lat, lon = graph.nodes[n].attrs[geo_attr]
            positions[n] = (lon, lat)
    elif layout == "force":
        positions = _force_layout(graph, node_ids, edge_ids)
    else:
        raise ViewError(f"layout must be force or spatial, got {layout!r}")
    return SubgraphView(
        nodes=tuple((n, positions[n][0], positions[n][1]) for n in node_ids),
        edges=tuple(edge_ids),
        layout=layout,
    )


def _force_layout(graph: Graph, node_ids: list[str], edge_ids: list[str]) -> dict[str, tuple[float, float]]:
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(node_ids)
    g.add_edges_from((graph.edges[e].src, graph.edges[e].dst) for e in edge_ids)
    pos = nx.spring_layout(g, seed=FORCE_SEED, iterations=FORCE_ITERATIONS)
    return {n: (float(x), float(y)) for n, (x, y) in pos.items()}


def subgraph_to_dict(graph: Graph, view: SubgraphView) -> dict:
    return {
        "nodes": [
            {"id": n, "x": x, "y": y, "attrs": _attrs_to_json(graph, graph.nodes[n].attrs)}
            for n, x, y in view.nodes
        ],
        "edges": [
            {
                "id": e,
                "source": graph.edges[e].src,
                "target": graph.edges[e].dst,
                "attrs": _attrs_to_json(graph, graph.edges[e].attrs),
            }
            for e in view.edges
        ],
        "layout": view.layout,
    }


def _attrs_to_json(graph: Graph, attrs) -> dict:
    out = {}
    for k, v in sorted(attrs.items()):
        if graph.schema.get(k) == GEO:
            out[k] = {"lat": v[0], "lon": v[1]}
        else:
            out[k] = v
    return out
