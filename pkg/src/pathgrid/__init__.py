"""Query-driven path connectivity analytics for multivariate directed graphs."""

from .graph import Edge, Graph, GraphError, Node, Path, build_graph
from .ingest import IngestError, export_json, g0_graph, load_csv, load_flights, load_json
from .query import (
    Constraint,
    NodeSelector,
    ParseError,
    PathQuery,
    QueryCancelled,
    QueryError,
    QueryResult,
    ResultCapExceeded,
    enumerate_paths,
    parse_query,
    resolve_selector,
    run_query,
)
from .overview import (
    COUNT,
    MIN_LENGTH,
    Key,
    MatrixView,
    Metric,
    MetricResult,
    TableView,
    ViewError,
    aggregate,
    apply_metric,
    apply_order,
    attr_fraction_metric,
    build_connectivity_matrix,
    build_intermediate_table,
    expand,
    highlight,
    parse_metric,
    per_length_count_metric,
    register_metric,
    reorder,
    view_to_csv,
    view_to_dict,
)
from .details import (
    Motif,
    SubgraphView,
    extract_subgraph,
    group_by_motif,
    motifs_to_dict,
    resolve_selection,
    subgraph_to_dict,
)

__version__ = "0.1.0"
