"""Graph loading from CSV and JSON files, plus the shared G0 fixture.

CSV headers carry attribute kinds: ``name:string`` (categorical),
``name:float`` (quantitative), and paired ``X_lat:geo_lat`` /
``X_lon:geo_lon`` columns that fold into a single geo attribute ``X``
(bare ``lat``/``lon`` columns fold into attribute ``geo``).
"""

from __future__ import annotations

import csv
import io
import json
import os
from typing import Mapping

from .graph import CATEGORICAL, GEO, QUANTITATIVE, Edge, Graph, GraphError, Node, build_graph


class IngestError(ValueError):
    """Malformed input file: bad header, bad cell, schema violation."""


_HEADER_KINDS = {"string": CATEGORICAL, "float": QUANTITATIVE}

NODE_RESERVED = ("id",)
EDGE_RESERVED = ("id", "source", "target")


def _geo_base(col: str, suffix: str) -> str:
    if col == suffix[4:]:  # bare "lat" / "lon"
        return "geo"
    if col.endswith("_" + suffix[4:]):
        return col[: -(len(suffix) - 3)]
    raise IngestError(f"{suffix} column must be named 'lat'/'lon' or end in '_lat'/'_lon': {col!r}")


def _parse_header(fields: list[str], reserved: tuple[str, ...], where: str):
    """Returns (column plan, attribute schema). Plan entries are
    (column index, attr name, kind, geo part) with geo part in {None, 'lat', 'lon'}."""
    seen_reserved = []
    plan = []
    schema: dict[str, str] = {}
    geo_parts: dict[str, set[str]] = {}
    for i, raw in enumerate(fields):
        raw = raw.strip()
        if raw in reserved:
            if raw in seen_reserved:
                raise IngestError(f"{where}: duplicate reserved column {raw!r}")
            seen_reserved.append(raw)
            plan.append((i, raw, "reserved", None))
            continue
        if ":" not in raw:
            raise IngestError(f"{where}: column {raw!r} missing ':kind' suffix")
        name, kind = raw.rsplit(":", 1)
        if kind in _HEADER_KINDS:
            if name in schema:
                raise IngestError(f"{where}: duplicate column {name!r}")
            schema[name] = _HEADER_KINDS[kind]
            plan.append((i, name, _HEADER_KINDS[kind], None))
        elif kind in ("geo_lat", "geo_lon"):
            base = _geo_base(name, kind)
            schema[base] = GEO
            geo_parts.setdefault(base, set()).add(kind[4:])
            plan.append((i, base, GEO, kind[4:]))
        else:
            raise IngestError(f"{where}: unknown column kind {kind!r} in {raw!r}")
    for col in reserved:
        if col not in seen_reserved:
            raise IngestError(f"{where}: missing reserved column {col!r}")
    for base, parts in geo_parts.items():
        if parts != {"lat", "lon"}:
            raise IngestError(f"{where}: geo attribute {base!r} needs both _lat and _lon columns")
    return plan, schema


def _parse_rows(reader, plan, where: str):
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        record: dict[str, object] = {}
        attrs: dict[str, object] = {}
        geo_acc: dict[str, dict[str, float]] = {}
        for i, name, kind, geo_part in plan:
            cell = row[i].strip() if i < len(row) else ""
            if kind == "reserved":
                record[name] = cell
                continue
            if cell == "":
                continue  # missing cell -> absent attribute
            if kind == QUANTITATIVE:
                try:
                    attrs[name] = float(cell)
                except ValueError:
                    raise IngestError(f"{where} line {lineno}: {name!r} is not a number: {cell!r}") from None
            elif kind == GEO:
                try:
                    geo_acc.setdefault(name, {})[geo_part] = float(cell)
                except ValueError:
                    raise IngestError(f"{where} line {lineno}: {name!r} {geo_part} is not a number: {cell!r}") from None
            else:
                attrs[name] = cell
        for base, parts in geo_acc.items():
            if set(parts) != {"lat", "lon"}:
                raise IngestError(f"{where} line {lineno}: geo attribute {base!r} has only one coordinate")
            attrs[base] = (parts["lat"], parts["lon"])
        yield record, attrs


def load_csv(node_file, edge_file) -> Graph:
    """Build a graph from typed-header node and edge CSV files.

    Accepts paths or open text files; UTF-8, RFC-4180 quoting.
    """
    with _opened(node_file) as nf:
        node_reader = csv.reader(nf)
        try:
            node_header = next(node_reader)
        except StopIteration:
            raise IngestError("node file is empty (no header)") from None
        node_plan, node_schema = _parse_header(node_header, NODE_RESERVED, "node file")
        nodes = [Node(rec["id"], attrs) for rec, attrs in _parse_rows(node_reader, node_plan, "node file")]

    with _opened(edge_file) as ef:
        edge_reader = csv.reader(ef)
        try:
            edge_header = next(edge_reader)
        except StopIteration:
            raise IngestError("edge file is empty (no header)") from None
        edge_plan, edge_schema = _parse_header(edge_header, EDGE_RESERVED, "edge file")
        edges = [
            Edge(rec["id"], rec["source"], rec["target"], attrs)
            for rec, attrs in _parse_rows(edge_reader, edge_plan, "edge file")
        ]

    schema = dict(node_schema)
    for name, kind in edge_schema.items():
        if schema.get(name, kind) != kind:
            raise IngestError(f"attribute {name!r} declared with conflicting kinds in node and edge files")
        schema[name] = kind
    try:
        return build_graph(nodes, edges, schema)
    except GraphError as exc:
        raise IngestError(str(exc)) from exc


def _opened(f):
    if isinstance(f, (str, os.PathLike)):
        return open(f, "r", encoding="utf-8", newline="")
    return _NonClosing(f)


class _NonClosing:
    def __init__(self, f):
        self.f = f

    def __enter__(self):
        return self.f

    def __exit__(self, *exc):
        return False


def _schema_to_json(schema: Mapping[str, str]) -> dict:
    return {name: schema[name] for name in sorted(schema)}


def _attr_to_json(kind: str, value):
    if kind == GEO:
        lat, lon = value
        return {"lat": lat, "lon": lon}
    return value


def _attr_from_json(kind: str, name: str, value):
    if kind == GEO:
        if not isinstance(value, dict) or set(value) != {"lat", "lon"}:
            raise IngestError(f"geo attribute {name!r} must be {{lat, lon}}, got {value!r}")
        return (value["lat"], value["lon"])
    return value


def graph_to_dict(graph: Graph) -> dict:
    """JSON-ready document; key order is deterministic (sorted ids)."""
    return {
        "schema": _schema_to_json(graph.schema),
        "nodes": [
            {
                "id": n.id,
                "attrs": {k: _attr_to_json(graph.schema[k], v) for k, v in sorted(n.attrs.items())},
            }
            for n in (graph.nodes[i] for i in sorted(graph.nodes))
        ],
        "edges": [
            {
                "id": e.id,
                "source": e.src,
                "target": e.dst,
                "attrs": {k: _attr_to_json(graph.schema[k], v) for k, v in sorted(e.attrs.items())},
            }
            for e in (graph.edges[i] for i in sorted(graph.edges))
        ],
    }


def export_json(graph: Graph, file=None) -> str:
    text = json.dumps(graph_to_dict(graph), indent=2, sort_keys=False)
    if file is not None:
        if isinstance(file, (str, os.PathLike)):
            with open(file, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            file.write(text)
    return text


def graph_from_dict(doc: dict) -> Graph:
    if not isinstance(doc, dict):
        raise IngestError("graph document must be a JSON object")
    schema = doc.get("schema", {})
    if not isinstance(schema, dict):
        raise IngestError("'schema' must be an object")
    nodes = []
    for i, nd in enumerate(doc.get("nodes", [])):
        if not isinstance(nd, dict) or "id" not in nd:
            raise IngestError(f"nodes[{i}]: expected an object with 'id'")
        attrs = {}
        for name, value in (nd.get("attrs") or {}).items():
            if name not in schema:
                raise IngestError(f"nodes[{i}] ({nd['id']!r}): attribute {name!r} not in schema")
            attrs[name] = _attr_from_json(schema[name], name, value)
        nodes.append(Node(nd["id"], attrs))
    edges = []
    for i, ed in enumerate(doc.get("edges", [])):
        if not isinstance(ed, dict) or not {"id", "source", "target"} <= set(ed):
            raise IngestError(f"edges[{i}]: expected an object with id/source/target")
        attrs = {}
        for name, value in (ed.get("attrs") or {}).items():
            if name not in schema:
                raise IngestError(f"edges[{i}] ({ed['id']!r}): attribute {name!r} not in schema")
            attrs[name] = _attr_from_json(schema[name], name, value)
        edges.append(Edge(ed["id"], ed["source"], ed["target"], attrs))
    try:
        return build_graph(nodes, edges, schema)
    except GraphError as exc:
        raise IngestError(str(exc)) from exc


def load_json(file) -> Graph:
    if isinstance(file, (str, os.PathLike)):
        with open(file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = json.load(file)
    return graph_from_dict(doc)


# Flight adapter: maps BTS on-time-performance style rows onto the graph
# schema (airports as nodes, individual flights as directed edges).

FLIGHT_SCHEMA = {
    "city": CATEGORICAL,
    "state": CATEGORICAL,
    "location": GEO,
    "carrier": CATEGORICAL,
    "dep_delay": QUANTITATIVE,
    "dep_time": QUANTITATIVE,
}


def load_flights(file) -> Graph:
    """Load a BTS-style on-time performance CSV extract.

    Expected columns (extras ignored): ORIGIN, DEST, plus optionally
    ORIGIN_CITY_NAME/ORIGIN_STATE_ABR (and DEST_*), CARRIER or
    OP_UNIQUE_CARRIER, DEP_DELAY, DEP_TIME, and per-airport LATITUDE /
    LONGITUDE. Column matching is case-insensitive.
    """
    with _opened(file) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise IngestError("flight file is empty (no header)")
        cols = {c.strip().upper(): c for c in reader.fieldnames}

        def col(row, *names):
            for nm in names:
                if nm in cols:
                    v = row[cols[nm]]
                    if v is not None and v.strip() != "":
                        return v.strip()
            return None

        airports: dict[str, dict] = {}
        edges = []
        for i, row in enumerate(reader):
            origin = col(row, "ORIGIN")
            dest = col(row, "DEST")
            if not origin or not dest:
                raise IngestError(f"flight row {i + 2}: missing ORIGIN/DEST")
            for code, prefix in ((origin, "ORIGIN"), (dest, "DEST")):
                attrs = airports.setdefault(code, {})
                city = col(row, f"{prefix}_CITY_NAME")
                state = col(row, f"{prefix}_STATE_ABR", f"{prefix}_STATE_NM")
                if city:
                    attrs.setdefault("city", city)
                if state:
                    attrs.setdefault("state", state)
                lat = col(row, f"{prefix}_LATITUDE")
                lon = col(row, f"{prefix}_LONGITUDE")
                if lat and lon:
                    attrs.setdefault("location", (float(lat), float(lon)))
            attrs = {}
            carrier = col(row, "CARRIER", "OP_UNIQUE_CARRIER", "OP_CARRIER")
            if carrier:
                attrs["carrier"] = carrier
            delay = col(row, "DEP_DELAY")
            if delay is not None:
                attrs["dep_delay"] = float(delay)
            dep_time = col(row, "DEP_TIME")
            if dep_time is not None:
                attrs["dep_time"] = float(dep_time)
            edges.append(Edge(f"f{i}", origin, dest, attrs))

    nodes = [Node(code, attrs) for code, attrs in sorted(airports.items())]
    try:
        return build_graph(nodes, edges, FLIGHT_SCHEMA)
    except GraphError as exc:
        raise IngestError(str(exc)) from exc


# Shared 7-node fixture used across the test suite and docs.

G0_NODES_CSV = """\
id,region:string
A,west
B,west
C,west
D,mid
E,mid
F,east
G,east
"""

G0_EDGES_CSV = """\
id,source,target
e1,A,D
e2,B,D
e3,B,F
e4,C,E
e5,D,F
e6,D,G
e7,E,G
"""


def g0_graph() -> Graph:
    return load_csv(io.StringIO(G0_NODES_CSV), io.StringIO(G0_EDGES_CSV))
