"""Connectivity overviews over a query result.

The connectivity matrix keys path sets by (start node, end node); the
intermediate node table keys them by (node, (position, length)) over the
interior positions of each path. Both views share aggregation by
categorical node attribute, metric application, reordering, and linked
highlighting. Path sets are stored as sorted tuples of indices into the
query result's path list, so set algebra stays cheap and cells stay
referentially tied to one result.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping

from .graph import CATEGORICAL, GEO, QUANTITATIVE, Graph, GraphError
from .query import QueryResult
from . import seriation

UNSET_GROUP = "(unset)"


class ViewError(ValueError):
    """Invalid view operation: unknown cell, bad axis, non-categorical attribute."""


PathSet = tuple[int, ...]  # sorted indices into QueryResult.paths


@dataclass(frozen=True)
class Key:
    """A row/column key: a single node (leaf) or an attribute-value group."""

    id: str
    members: tuple[str, ...]
    group: bool = False
    attr: str = ""
    value: str = ""
    expanded: bool = False

    @classmethod
    def leaf(cls, node_id: str) -> "Key":
        return cls(id=node_id, members=(node_id,))

    def to_dict(self) -> dict:
        d: dict = {"id": self.id, "members": list(self.members), "group": self.group}
        if self.group:
            d["attr"] = self.attr
            d["value"] = self.value
            d["expanded"] = self.expanded
        return d


def col_id(j: int, l: int) -> str:
    return f"({j},{l})"


@dataclass(frozen=True)
class ColKey:
    """Intermediate-table column: interior position j in paths of length l."""

    j: int
    l: int

    @property
    def id(self) -> str:
        return col_id(self.j, self.l)

    def to_dict(self) -> dict:
        return {"id": self.id, "j": self.j, "l": self.l}


def _union(sets: Iterable[PathSet]) -> PathSet:
    acc: set[int] = set()
    for s in sets:
        acc.update(s)
    return tuple(sorted(acc))


@dataclass(frozen=True)
class MatrixView:
    """Connectivity matrix: rows over resolved start nodes, columns over
    resolved end nodes; leaf cells partition the result's path set."""

    graph: Graph
    result: QueryResult
    rows: tuple[Key, ...]
    cols: tuple[Key, ...]
    leaf_cells: Mapping[tuple[str, str], PathSet]

    axis_names = ("rows", "cols")
    kind = "matrix"

    def axis(self, axis: str) -> tuple[Key, ...]:
        if axis == "rows":
            return self.rows
        if axis == "cols":
            return self.cols
        raise ViewError(f"matrix axis must be rows or cols, got {axis!r}")

    def key(self, axis: str, key_id: str) -> Key:
        return _find_key(self.axis(axis), axis, key_id)

    def cell_paths(self, row_id: str, col_id_: str) -> PathSet:
        row, col = self.key("rows", row_id), self.key("cols", col_id_)
        return _union(
            self.leaf_cells.get((r, c), ()) for r in row.members for c in col.members
        )

    def visible_cells(self) -> list[tuple[Key, Key, PathSet]]:
        out = []
        for r in visible_keys(self.rows):
            for c in visible_keys(self.cols):
                out.append((r, c, self.cell_paths(r.id, c.id)))
        return out

    def replace_axis(self, axis: str, keys: tuple[Key, ...]) -> "MatrixView":
        return replace(self, rows=keys) if axis == "rows" else replace(self, cols=keys)


@dataclass(frozen=True)
class TableView:
    """Intermediate node table: rows over nodes that occur at interior
    positions, columns over (position, length) pairs ordered by (l, j)."""

    graph: Graph
    result: QueryResult
    rows: tuple[Key, ...]
    cols: tuple[ColKey, ...]
    leaf_cells: Mapping[tuple[str, str], PathSet]

    axis_names = ("rows",)
    kind = "table"

    def axis(self, axis: str) -> tuple[Key, ...]:
        if axis == "rows":
            return self.rows
        raise ViewError(f"table axis must be rows, got {axis!r}")

    def key(self, axis: str, key_id: str) -> Key:
        return _find_key(self.axis(axis), axis, key_id)

    def col(self, col_id_: str) -> ColKey:
        for c in self.cols:
            if c.id == col_id_:
                return c
        raise ViewError(f"unknown table column {col_id_!r}")

    def cell_paths(self, row_id: str, col_id_: str) -> PathSet:
        row, col = self.key("rows", row_id), self.col(col_id_)
        return _union(self.leaf_cells.get((r, col.id), ()) for r in row.members)

    def visible_cells(self) -> list[tuple[Key, ColKey, PathSet]]:
        out = []
        for r in visible_keys(self.rows):
            for c in self.cols:
                out.append((r, c, self.cell_paths(r.id, c.id)))
        return out

    def replace_axis(self, axis: str, keys: tuple[Key, ...]) -> "TableView":
        if axis != "rows":
            raise ViewError(f"table axis must be rows, got {axis!r}")
        return replace(self, rows=keys)


View = MatrixView | TableView


def _find_key(keys: tuple[Key, ...], axis: str, key_id: str) -> Key:
    """Resolve a key id against the axis keys, including members of expanded
    groups (those render as addressable leaf rows/columns)."""
    for k in keys:
        if k.id == key_id:
            return k
        if k.group and k.expanded and key_id in k.members:
            return Key.leaf(key_id)
    raise ViewError(f"unknown {axis} key {key_id!r}")


def visible_keys(keys: tuple[Key, ...]) -> list[Key]:
    """Axis keys as rendered: groups followed by their members when expanded."""
    out: list[Key] = []
    for k in keys:
        out.append(k)
        if k.group and k.expanded:
            out.extend(Key.leaf(m) for m in k.members)
    return out


def build_connectivity_matrix(graph: Graph, result: QueryResult) -> MatrixView:
    """One row per resolved start node and one column per resolved end node,
    all-empty rows/columns included; leaf cells partition the path set."""
    rows = tuple(Key.leaf(n) for n in sorted(result.n_start))
    cols = tuple(Key.leaf(n) for n in sorted(result.n_end))
    cells: dict[tuple[str, str], list[int]] = {}
    for i, p in enumerate(result.paths):
        cells.setdefault((p.start, p.end), []).append(i)
    return MatrixView(
        graph=graph,
        result=result,
        rows=rows,
        cols=cols,
        leaf_cells={k: tuple(v) for k, v in cells.items()},
    )


def build_intermediate_table(graph: Graph, result: QueryResult) -> TableView:
    """Columns (j, l) for l in [2, L], j in [1, l-1], where L is the longest
    path present; rows are exactly the nodes occurring at interior positions."""
    max_present = max((p.length for p in result.paths), default=0)
    cols = tuple(
        ColKey(j, l) for l in range(2, max_present + 1) for j in range(1, l)
    )
    cells: dict[tuple[str, str], list[int]] = {}
    row_ids: set[str] = set()
    for i, p in enumerate(result.paths):
        for j in range(1, p.length):
            n = p.nodes[j]
            row_ids.add(n)
            cells.setdefault((n, col_id(j, p.length)), []).append(i)
    rows = tuple(Key.leaf(n) for n in sorted(row_ids))
    return TableView(
        graph=graph,
        result=result,
        rows=rows,
        cols=cols,
        leaf_cells={k: tuple(v) for k, v in cells.items()},
    )


# --- metrics ----------------------------------------------------------------


@dataclass(frozen=True)
class MetricResult:
    """Scalar metrics are None on empty sets where a value would be
    meaningless (min length, fractions); count is 0. Vector metrics are
    per-length counts indexed 1..max_len."""

    scalar: float | int | None = None
    vector: tuple[float, ...] | None = None

    def scalar_or_zero(self) -> float:
        if self.vector is not None:
            return float(sum(self.vector))
        return 0.0 if self.scalar is None else float(self.scalar)

    def to_dict(self) -> dict:
        if self.vector is not None:
            return {"vector": list(self.vector)}
        return {"scalar": self.scalar}


MetricFn = Callable[[Graph, QueryResult, PathSet], MetricResult]


@dataclass(frozen=True)
class Metric:
    name: str
    fn: MetricFn

    def __call__(self, graph: Graph, result: QueryResult, paths: PathSet) -> MetricResult:
        return self.fn(graph, result, paths)


def _count(graph, result, idxs) -> MetricResult:
    return MetricResult(scalar=len(idxs))


def _min_length(graph, result, idxs) -> MetricResult:
    if not idxs:
        return MetricResult(scalar=None)
    return MetricResult(scalar=min(result.paths[i].length for i in idxs))


def per_length_count_metric(max_len: int) -> Metric:
    def fn(graph, result, idxs) -> MetricResult:
        counts = [0] * max_len
        for i in idxs:
            counts[result.paths[i].length - 1] += 1
        return MetricResult(vector=tuple(counts))

    return Metric(f"per_length_count:{max_len}", fn)


def attr_fraction_metric(attr: str, op: str, threshold) -> Metric:
    """Fraction of paths containing at least one edge whose attribute
    satisfies the predicate; None on empty sets. Absent attributes never
    satisfy the predicate."""
    from .query import _compare  # shared comparator semantics

    def fn(graph: Graph, result: QueryResult, idxs: PathSet) -> MetricResult:
        if attr not in graph.schema:
            raise ViewError(f"unknown attribute {attr!r}")
        kind = graph.schema[attr]
        if kind == GEO:
            raise ViewError(f"cannot apply a fraction metric to geo attribute {attr!r}")
        if op in ("<", "<=", ">", ">=") and kind != QUANTITATIVE:
            raise ViewError(f"comparator {op} requires a quantitative attribute, but {attr!r} is {kind}")
        if not idxs:
            return MetricResult(scalar=None)
        hits = 0
        for i in idxs:
            p = result.paths[i]
            if any(_compare(op, graph.edges[eid].attrs.get(attr), threshold) for eid in p.edges):
                hits += 1
        return MetricResult(scalar=hits / len(idxs))

    return Metric(f"attr_fraction:{attr}:{op}:{threshold}", fn)


COUNT = Metric("count", _count)
MIN_LENGTH = Metric("min_length", _min_length)

_CUSTOM_METRICS: dict[str, Callable[..., Metric]] = {}


def register_metric(name: str, factory: Callable[..., Metric]) -> None:
    """Register a named custom metric factory (pure function over path sets)."""
    _CUSTOM_METRICS[name] = factory


def parse_metric(spec: str, max_len: int) -> Metric:
    """Metric from a spec string: ``count``, ``min_length``,
    ``per_length_count``, ``attr_fraction:<attr>:<op>:<literal>``, or a
    registered custom name."""
    parts = spec.split(":")
    head = parts[0]
    if head == "count" and len(parts) == 1:
        return COUNT
    if head == "min_length" and len(parts) == 1:
        return MIN_LENGTH
    if head == "per_length_count" and len(parts) == 1:
        return per_length_count_metric(max_len)
    if head == "attr_fraction":
        if len(parts) != 4:
            raise ViewError("attr_fraction metric needs attr_fraction:<attr>:<op>:<value>")
        _, attr, op, raw = parts
        if op not in ("=", "!=", "<", "<=", ">", ">="):
            raise ViewError(f"unknown comparator {op!r} in metric spec")
        try:
            value: object = float(raw)
        except ValueError:
            value = raw
        return attr_fraction_metric(attr, op, value)
    if head in _CUSTOM_METRICS:
        return _CUSTOM_METRICS[head](*parts[1:])
    raise ViewError(f"unknown metric {spec!r}")


def apply_metric(view: View, metric: Metric) -> dict[tuple[str, str], MetricResult]:
    """Metric result per visible cell, keyed by (row key id, col key id)."""
    return {
        (r.id, c.id): metric(view.graph, view.result, pset)
        for r, c, pset in view.visible_cells()
    }


# --- aggregation ------------------------------------------------------------


def aggregate(view: View, axis: str, attribute: str) -> View:
    """Replace the axis's leaf keys with groups sharing a categorical
    attribute value; group cells are unions of member cells. Nodes lacking
    the attribute form the ``(unset)`` group. Groups start collapsed."""
    kind = view.graph.schema.get(attribute)
    if kind is None:
        raise ViewError(f"unknown attribute {attribute!r}")
    if kind != CATEGORICAL:
        raise ViewError(f"aggregation requires a categorical attribute; {attribute!r} is {kind}")
    keys = view.axis(axis)
    leaf_ids = sorted({m for k in keys for m in k.members})
    groups: dict[str, list[str]] = {}
    for nid in leaf_ids:
        value = view.graph.nodes[nid].attrs.get(attribute)
        groups.setdefault(value if isinstance(value, str) else UNSET_GROUP, []).append(nid)
    new_keys = tuple(
        Key(
            id=f"{attribute}={value}",
            members=tuple(members),
            group=True,
            attr=attribute,
            value=value,
        )
        for value, members in sorted(groups.items())
    )
    return view.replace_axis(axis, new_keys)


def expand(view: View, axis: str, key_id: str, expanded: bool = True) -> View:
    key = view.key(axis, key_id)
    if not key.group:
        raise ViewError(f"key {key_id!r} is not a group")
    keys = tuple(replace(k, expanded=expanded) if k.id == key_id else k for k in view.axis(axis))
    return view.replace_axis(axis, keys)


def reset_axis(view: View, axis: str) -> View:
    """Drop grouping on the axis, restoring sorted leaf keys."""
    leaf_ids = sorted({m for k in view.axis(axis) for m in k.members})
    return view.replace_axis(axis, tuple(Key.leaf(n) for n in leaf_ids))


# --- reordering -------------------------------------------------------------


def _metric_vectors(view: View, axis: str, metric: Metric) -> list[list[float]]:
    keys = view.axis(axis)
    if isinstance(view, MatrixView):
        other = view.cols if axis == "rows" else view.rows
        other_ids = [k.id for k in other]
    else:
        other_ids = [c.id for c in view.cols]
    vectors = []
    for k in keys:
        row = []
        for oid in other_ids:
            pset = view.cell_paths(k.id, oid) if axis == "rows" else view.cell_paths(oid, k.id)
            row.append(metric(view.graph, view.result, pset).scalar_or_zero())
        vectors.append(row)
    return vectors


def reorder(view: View, axis: str, strategy, metric: Metric = COUNT) -> list[str]:
    """Permutation of the axis's key ids.

    ``strategy`` is ``("attribute", name, direction)`` for an attribute sort
    or ``("olo",)`` for agglomerative clustering (average linkage, Euclidean)
    followed by optimal leaf ordering on the metric vectors.
    """
    keys = view.axis(axis)
    if not keys:
        return []
    if strategy[0] == "attribute":
        _, name, direction = strategy
        if name not in view.graph.schema:
            raise ViewError(f"unknown attribute {name!r}")
        if direction not in ("asc", "desc"):
            raise ViewError(f"sort direction must be asc or desc, got {direction!r}")

        def sort_value(k: Key):
            values = [v for v in (view.graph.nodes[m].attrs.get(name) for m in k.members) if v is not None]
            return min(values) if values else None

        present = sorted((k for k in keys if sort_value(k) is not None), key=lambda k: k.id)
        present.sort(key=sort_value, reverse=direction == "desc")  # stable: ties stay id-ascending
        absent = sorted((k for k in keys if sort_value(k) is None), key=lambda k: k.id)
        return [k.id for k in present + absent]  # keys missing the attribute go last
    if strategy[0] == "olo":
        vectors = _metric_vectors(view, axis, metric)
        order = seriation.optimal_leaf_order(vectors, [k.id for k in keys])
        return [keys[i].id for i in order]
    raise ViewError(f"unknown reorder strategy {strategy!r}")


def apply_order(view: View, axis: str, key_ids: list[str]) -> View:
    keys = view.axis(axis)
    by_id = {k.id: k for k in keys}
    if sorted(by_id) != sorted(key_ids):
        raise ViewError("ordering must be a permutation of the axis keys")
    return view.replace_axis(axis, tuple(by_id[i] for i in key_ids))


# --- linked highlighting ----------------------------------------------------


def highlight(source_view: View, source_cell: tuple[str, str], target_view: View) -> list[tuple[str, str]]:
    """Cells of the target view whose path sets intersect the source cell's
    path set. Both views must be built over the same query result."""
    if source_view.result is not target_view.result and source_view.result != target_view.result:
        raise ViewError("highlight requires views over the same query result")
    src = set(source_view.cell_paths(*source_cell))
    out = []
    for r, c, pset in target_view.visible_cells():
        if src and not src.isdisjoint(pset):
            out.append((r.id, c.id))
    return out


# --- exports ----------------------------------------------------------------


def _axis_attr_values(graph: Graph, keys: list[Key]) -> dict:
    """Quantitative attribute values per key (all member values), for
    dotplot rendering downstream."""
    quant = [name for name, kind in sorted(graph.schema.items()) if kind == QUANTITATIVE]
    out = {}
    for k in keys:
        values = {}
        for name in quant:
            vals = [graph.nodes[m].attrs.get(name) for m in k.members]
            vals = [v for v in vals if v is not None]
            if vals:
                values[name] = vals
        cats = {}
        for name, kind in sorted(graph.schema.items()):
            if kind != CATEGORICAL:
                continue
            vals = sorted({graph.nodes[m].attrs.get(name) for m in k.members} - {None})
            if vals:
                cats[name] = vals
        out[k.id] = {**{n: v for n, v in values.items()}, **{n: v for n, v in cats.items()}}
    return out


def view_to_dict(view: View, metric: Metric = COUNT) -> dict:
    """Export JSON document. Cells with empty path sets are omitted; the
    full grid is implied by rows × cols."""
    rows = visible_keys(view.rows)
    if isinstance(view, MatrixView):
        cols = visible_keys(view.cols)
        col_dicts = [c.to_dict() for c in cols]
        col_attr_keys = cols
    else:
        cols = list(view.cols)
        col_dicts = [c.to_dict() for c in cols]
        col_attr_keys = None
    cells = []
    for r in rows:
        for c in cols:
            pset = view.cell_paths(r.id, c.id)
            if not pset:
                continue
            cells.append(
                {
                    "r": r.id,
                    "c": c.id,
                    "count": len(pset),
                    "metric": metric(view.graph, view.result, pset).to_dict(),
                    "aggregated": bool(getattr(r, "group", False) or getattr(c, "group", False)),
                    "paths": list(pset),
                }
            )
    doc = {
        "kind": view.kind,
        "rows": [r.to_dict() for r in rows],
        "cols": col_dicts,
        "cells": cells,
        "rowAttrs": _axis_attr_values(view.graph, rows),
    }
    if col_attr_keys is not None:
        doc["colAttrs"] = _axis_attr_values(view.graph, col_attr_keys)
    return doc


def view_to_csv(view: View, metric: Metric = COUNT) -> str:
    """Delimited export: header of column key ids, one line per visible row
    key; scalar cells (empty string for undefined), vectors joined by '|'."""
    import csv as _csv
    import io as _io

    rows = visible_keys(view.rows)
    cols = visible_keys(view.cols) if isinstance(view, MatrixView) else list(view.cols)
    buf = _io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow([""] + [c.id for c in cols])
    for r in rows:
        line: list[object] = [r.id]
        for c in cols:
            res = metric(view.graph, view.result, view.cell_paths(r.id, c.id))
            if res.vector is not None:
                line.append("|".join(_fmt(v) for v in res.vector))
            else:
                line.append("" if res.scalar is None else _fmt(res.scalar))
        w.writerow(line)
    return buf.getvalue()


def _fmt(v) -> str:
    f = float(v)
    return str(int(f)) if f.is_integer() else repr(f)
