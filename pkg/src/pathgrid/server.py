"""HTTP JSON service exposing the query pipeline with per-query view state.

Dataset and query ids are content-derived (hashes), so replaying a request
sequence against a fresh server yields identical bodies. Queries execute on
a worker pool; clients either poll ``GET /api/queries/{id}`` or pass
``wait=true`` on submission. View-state changes (aggregate/expand/reorder/
selection) are serialized per query and never alter the underlying result.
"""

from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Query as QueryParam, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import details, overview
from .graph import Graph, GraphError
from .ingest import IngestError, graph_from_dict, graph_to_dict, load_csv, load_json
from .overview import COUNT, MatrixView, TableView, ViewError, parse_metric
from .query import (
    ParseError,
    QueryCancelled,
    QueryError,
    ResultCapExceeded,
    enumerate_paths,
    parse_query,
)


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8750
    result_cap: int = 1_000_000
    dataset_dir: str | None = None
    # per-dataset display configuration: name -> {"motif_attr":…, "geo_attr":…}
    datasets: dict[str, dict[str, str]] = field(default_factory=dict)
    static_dir: str | None = None

    @classmethod
    def from_file(cls, path) -> "ServerConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**doc)


@dataclass
class QueryJob:
    id: str
    dataset_id: str
    dsl: str
    status: str = "pending"  # pending | running | done | error | cancelled
    error: str | None = None
    error_status: int = 422
    result: Any = None
    matrix: MatrixView | None = None
    table: TableView | None = None
    selection: list[dict] = field(default_factory=list)
    cancel_event: threading.Event = field(default_factory=threading.Event)
    done_event: threading.Event = field(default_factory=threading.Event)
    lock: threading.RLock = field(default_factory=threading.RLock)


def _normalize_dsl(dsl: str) -> str:
    return " ".join(dsl.split())


def _hash_id(prefix: str, text: str, n: int = 12) -> str:
    return prefix + hashlib.sha256(text.encode("utf-8")).hexdigest()[:n]


def create_app(config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    app = FastAPI(title="pathgrid", version="0.1.0")
    state = {
        "datasets": {},  # id -> (name, Graph)
        "queries": {},  # id -> QueryJob
        "lock": threading.RLock(),
        "executor": ThreadPoolExecutor(max_workers=4),
    }
    app.state.pathgrid = state
    app.state.config = config

    def err(status: int, message: str, **extra):
        raise HTTPException(status_code=status, detail={"error": message, **extra})

    @app.exception_handler(HTTPException)
    async def http_error(request: Request, exc: HTTPException):
        detail = exc.detail if isinstance(exc.detail, dict) else {"error": str(exc.detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    def get_dataset(ds_id: str) -> Graph:
        entry = state["datasets"].get(ds_id)
        if entry is None:
            err(404, f"unknown dataset {ds_id!r}")
        return entry[1]

    def get_job(query_id: str) -> QueryJob:
        job = state["queries"].get(query_id)
        if job is None:
            err(404, f"unknown query {query_id!r}")
        return job

    def get_done_job(query_id: str) -> QueryJob:
        job = get_job(query_id)
        if job.status in ("pending", "running"):
            err(409, f"query {query_id!r} is still {job.status}")
        if job.status == "cancelled":
            err(409, f"query {query_id!r} was cancelled")
        if job.status == "error":
            err(job.error_status, job.error or "query failed")
        return job

    def dataset_summary(ds_id: str) -> dict:
        name, graph = state["datasets"][ds_id]
        return {
            "id": ds_id,
            "name": name,
            "nodes": len(graph.nodes),
            "edges": len(graph.edges),
            "schema": {k: graph.schema[k] for k in sorted(graph.schema)},
        }

    @app.post("/api/datasets")
    async def create_dataset(body: dict):
        name = body.get("name")
        if "graph" in body:
            try:
                graph = graph_from_dict(body["graph"])
            except IngestError as exc:
                err(422, str(exc))
            ds_id = _hash_id("ds_", json.dumps(body["graph"], sort_keys=True))
        elif "path" in body:
            if config.dataset_dir is None:
                err(422, "no dataset directory configured")
            base = Path(config.dataset_dir).resolve()
            target = (base / body["path"]).resolve()
            if not str(target).startswith(str(base)):
                err(422, "dataset path escapes the dataset directory")
            if not target.exists():
                err(404, f"dataset file not found: {body['path']}")
            try:
                if target.suffix == ".json":
                    graph = load_json(target)
                else:
                    edges = body.get("edges_path")
                    if not edges:
                        err(400, "CSV datasets need 'path' (nodes) and 'edges_path'")
                    graph = load_csv(target, (base / edges).resolve())
            except IngestError as exc:
                err(422, str(exc))
            ds_id = _hash_id("ds_", str(target))
        else:
            err(400, "body must carry 'graph' (inline JSON) or 'path'")
        name = name or ds_id
        with state["lock"]:
            state["datasets"][ds_id] = (name, graph)
        return dataset_summary(ds_id)

    @app.get("/api/datasets")
    async def list_datasets():
        return [dataset_summary(ds_id) for ds_id in sorted(state["datasets"])]

    @app.get("/api/datasets/{ds_id}")
    async def read_dataset(ds_id: str):
        graph = get_dataset(ds_id)
        doc = dataset_summary(ds_id)
        # categorical attribute values, for selector autocomplete downstream
        values: dict[str, set] = {}
        for node in graph.nodes.values():
            for attr, value in node.attrs.items():
                if graph.schema.get(attr) == "categorical":
                    values.setdefault(attr, set()).add(value)
        doc["values"] = {k: sorted(values[k]) for k in sorted(values)}
        doc["nodeIds"] = sorted(graph.nodes)
        return doc

    def job_summary(job: QueryJob) -> dict:
        doc = {"id": job.id, "dataset": job.dataset_id, "dsl": job.dsl, "status": job.status}
        if job.status == "done":
            r = job.result
            doc["summary"] = {
                "startNodes": len(r.n_start),
                "endNodes": len(r.n_end),
                "paths": len(r.paths),
                "lengths": {str(k): v for k, v in r.length_histogram().items()},
            }
        if job.status == "error":
            doc["error"] = job.error
        return doc

    def run_job(job: QueryJob, graph: Graph, query):
        with job.lock:
            if job.cancel_event.is_set():
                job.status = "cancelled"
                job.done_event.set()
                return
            job.status = "running"
        try:
            result = enumerate_paths(graph, query, should_cancel=job.cancel_event.is_set)
            with job.lock:
                job.result = result
                job.matrix = overview.build_connectivity_matrix(graph, result)
                job.table = overview.build_intermediate_table(graph, result)
                job.status = "done"
        except QueryCancelled:
            job.status = "cancelled"
        except ResultCapExceeded as exc:
            job.status, job.error, job.error_status = "error", str(exc), 409
        except (QueryError, ViewError, GraphError) as exc:
            job.status, job.error, job.error_status = "error", str(exc), 422
        finally:
            job.done_event.set()

    @app.post("/api/queries")
    async def submit_query(body: dict, wait: bool = False):
        ds_id = body.get("dataset")
        dsl = body.get("dsl")
        if not ds_id or not dsl:
            err(400, "body must carry 'dataset' and 'dsl'")
        graph = get_dataset(ds_id)
        try:
            query = parse_query(dsl, graph)
        except ParseError as exc:
            err(400, str(exc), line=exc.line, column=exc.column)
        except QueryError as exc:
            err(422, str(exc))
        if query.result_cap > config.result_cap:
            from dataclasses import replace

            query = replace(query, result_cap=config.result_cap)
        norm = _normalize_dsl(dsl)
        query_id = _hash_id("q_", f"{ds_id}\n{norm}")
        with state["lock"]:
            job = state["queries"].get(query_id)
            if job is None:
                job = QueryJob(id=query_id, dataset_id=ds_id, dsl=norm)
                state["queries"][query_id] = job
                state["executor"].submit(run_job, job, graph, query)
        if wait:
            job.done_event.wait()
            if job.status == "error":
                err(job.error_status, job.error or "query failed")
        return job_summary(job)

    @app.get("/api/queries/{query_id}")
    async def query_status(query_id: str):
        return job_summary(get_job(query_id))

    @app.delete("/api/queries/{query_id}")
    async def delete_query(query_id: str):
        job = get_job(query_id)
        job.cancel_event.set()
        job.done_event.wait(timeout=30)
        with state["lock"]:
            state["queries"].pop(query_id, None)
        return {"id": query_id, "deleted": True}

    def job_view(job: QueryJob, view_name: str):
        view = job.matrix if view_name == "matrix" else job.table
        if view is None:
            err(409, "query result not ready")
        return view

    def metric_for(job: QueryJob, spec: str):
        try:
            return parse_metric(spec, job.result.query.max_len)
        except ViewError as exc:
            err(422, str(exc))

    @app.get("/api/queries/{query_id}/matrix")
    async def get_matrix(query_id: str, metric: str = "count"):
        job = get_done_job(query_id)
        with job.lock:
            return _view_doc(job, "matrix", metric_for(job, metric))

    @app.get("/api/queries/{query_id}/table")
    async def get_table(query_id: str, metric: str = "count"):
        job = get_done_job(query_id)
        with job.lock:
            return _view_doc(job, "table", metric_for(job, metric))

    def _view_doc(job: QueryJob, view_name: str, metric):
        try:
            return overview.view_to_dict(job_view(job, view_name), metric)
        except ViewError as exc:
            err(422, str(exc))

    def _mutate_view(job: QueryJob, view_name: str, fn):
        with job.lock:
            view = job_view(job, view_name)
            try:
                new_view = fn(view)
            except ViewError as exc:
                err(422, str(exc))
            if view_name == "matrix":
                job.matrix = new_view
            else:
                job.table = new_view
            return new_view

    @app.post("/api/queries/{query_id}/{view_name}/aggregate")
    async def aggregate_view(query_id: str, view_name: str, body: dict):
        job = get_done_job(query_id)
        _check_view_name(view_name)
        axis = body.get("axis", "rows")
        attribute = body.get("attribute")
        if not attribute:
            err(400, "body must carry 'attribute'")
        new_view = _mutate_view(job, view_name, lambda v: overview.aggregate(v, axis, attribute))
        return overview.view_to_dict(new_view, COUNT)

    @app.post("/api/queries/{query_id}/{view_name}/expand")
    async def expand_view(query_id: str, view_name: str, body: dict):
        job = get_done_job(query_id)
        _check_view_name(view_name)
        axis = body.get("axis", "rows")
        key = body.get("key")
        if not key:
            err(400, "body must carry 'key'")
        expanded = bool(body.get("expanded", True))
        new_view = _mutate_view(job, view_name, lambda v: overview.expand(v, axis, key, expanded))
        return overview.view_to_dict(new_view, COUNT)

    @app.post("/api/queries/{query_id}/{view_name}/reorder")
    async def reorder_view(query_id: str, view_name: str, body: dict):
        job = get_done_job(query_id)
        _check_view_name(view_name)
        axis = body.get("axis", "rows")
        strategy_name = body.get("strategy", "olo")
        if strategy_name == "attribute":
            strategy = ("attribute", body.get("attribute", ""), body.get("direction", "asc"))
        elif strategy_name == "olo":
            strategy = ("olo",)
        else:
            err(422, f"unknown reorder strategy {strategy_name!r}")
        metric = metric_for(job, body.get("metric", "count"))
        order_holder = {}

        def apply(view):
            order = overview.reorder(view, axis, strategy, metric)
            order_holder["order"] = order
            return overview.apply_order(view, axis, order)

        _mutate_view(job, view_name, apply)
        return {"axis": axis, "order": order_holder["order"]}

    def _check_view_name(view_name: str):
        if view_name not in ("matrix", "table"):
            err(404, f"unknown view {view_name!r}")

    @app.post("/api/queries/{query_id}/highlight")
    async def highlight_cells(query_id: str, body: dict):
        job = get_done_job(query_id)
        source = body.get("view")
        cell = body.get("cell")
        if source not in ("matrix", "table") or not isinstance(cell, (list, tuple)) or len(cell) != 2:
            err(400, "body must carry view ('matrix'|'table') and cell [row, col]")
        with job.lock:
            src_view = job_view(job, source)
            dst_name = "table" if source == "matrix" else "matrix"
            dst_view = job_view(job, dst_name)
            try:
                cells = overview.highlight(src_view, (cell[0], cell[1]), dst_view)
            except ViewError as exc:
                err(404, str(exc))
        return {"view": dst_name, "cells": [list(c) for c in cells]}

    @app.post("/api/queries/{query_id}/selection")
    async def set_selection(query_id: str, body: dict):
        job = get_done_job(query_id)
        cells = body.get("cells")
        if not isinstance(cells, list):
            err(400, "body must carry 'cells': [{view, r, c}, ...]")
        with job.lock:
            for c in cells:
                if not isinstance(c, dict) or c.get("view") not in ("matrix", "table") or "r" not in c or "c" not in c:
                    err(400, "each cell needs view ('matrix'|'table'), r and c")
                view = job_view(job, c["view"])
                try:
                    view.cell_paths(c["r"], c["c"])
                except ViewError as exc:
                    err(404, str(exc))
            job.selection = cells
        return {"cells": cells, "paths": len(_selected_paths(job))}

    def _selected_paths(job: QueryJob):
        idxs: set[int] = set()
        for c in job.selection:
            view = job_view(job, c["view"])
            idxs.update(view.cell_paths(c["r"], c["c"]))
        return [job.result.paths[i] for i in sorted(idxs)]

    def _dataset_display(job: QueryJob, key: str) -> str | None:
        name = state["datasets"][job.dataset_id][0]
        return config.datasets.get(name, {}).get(key)

    @app.get("/api/queries/{query_id}/selection/paths")
    async def selection_paths(query_id: str, groupBy: str | None = QueryParam(default=None)):
        job = get_done_job(query_id)
        with job.lock:
            paths = _selected_paths(job)
            graph = job.matrix.graph
            display = groupBy or _dataset_display(job, "motif_attr")
            try:
                motifs = details.group_by_motif(graph, paths, display)
            except ViewError as exc:
                err(422, str(exc))
            return details.motifs_to_dict(graph, motifs)

    @app.get("/api/queries/{query_id}/selection/subgraph")
    async def selection_subgraph(query_id: str, layout: str = "force"):
        job = get_done_job(query_id)
        with job.lock:
            paths = _selected_paths(job)
            graph = job.matrix.graph
            try:
                sg = details.extract_subgraph(graph, paths, layout, geo_attr=_dataset_display(job, "geo_attr"))
            except ViewError as exc:
                err(422, str(exc))
            return details.subgraph_to_dict(graph, sg)

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
