// Typed client for the pathgrid HTTP API. Every number the UI displays comes
// from one of these responses; no path semantics are computed client-side.

export interface DatasetSummary {
  id: string;
  name: string;
  nodes: number;
  edges: number;
  schema: Record<string, string>;
  values?: Record<string, string[]>;
  nodeIds?: string[];
}

export interface QuerySummary {
  startNodes: number;
  endNodes: number;
  paths: number;
  lengths: Record<string, number>;
}

export interface QueryStatus {
  id: string;
  dataset: string;
  dsl: string;
  status: 'pending' | 'running' | 'done' | 'error' | 'cancelled';
  summary?: QuerySummary;
  error?: string;
}

export interface AxisKey {
  id: string;
  members: string[];
  group: boolean;
  attr?: string;
  value?: string;
  expanded?: boolean;
}

export interface TableCol {
  id: string;
  j: number;
  l: number;
}

export interface MetricValue {
  scalar?: number | null;
  vector?: number[];
}

export interface Cell {
  r: string;
  c: string;
  count: number;
  metric: MetricValue;
  aggregated: boolean;
  paths: number[];
}

/** One of the two overviews; empty cells are omitted from `cells`. */
export interface ViewDoc {
  kind: 'matrix' | 'table';
  rows: AxisKey[];
  cols: (AxisKey | TableCol)[];
  cells: Cell[];
  rowAttrs: Record<string, Record<string, (string | number)[]>>;
  colAttrs?: Record<string, Record<string, (string | number)[]>>;
}

export interface HighlightResponse {
  view: 'matrix' | 'table';
  cells: [string, string][];
}

export interface PathEdge {
  id: string;
  source: string;
  target: string;
  attrs: Record<string, unknown>;
}

export interface MotifPath {
  nodes: string[];
  edges: PathEdge[];
}

export interface Motif {
  key: string[];
  count: number;
  paths: MotifPath[];
}

export interface SubgraphNode {
  id: string;
  x: number;
  y: number;
  attrs: Record<string, unknown>;
}

export interface Subgraph {
  nodes: SubgraphNode[];
  edges: PathEdge[];
  layout: 'force' | 'spatial';
}

export interface CellRef {
  view: 'matrix' | 'table';
  r: string;
  c: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly line?: number,
    readonly column?: number,
  ) {
    super(message);
  }
}

async function unwrap<T>(resp: Response): Promise<T> {
  if (resp.ok) {
    return (await resp.json()) as T;
  }
  let message = resp.statusText;
  let line: number | undefined;
  let column: number | undefined;
  try {
    const body = await resp.json();
    if (typeof body.error === 'string') message = body.error;
    if (typeof body.line === 'number') line = body.line;
    if (typeof body.column === 'number') column = body.column;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, message, line, column);
}

export class ApiClient {
  constructor(readonly base: string = '') {}

  private get<T>(path: string): Promise<T> {
    return fetch(this.base + path).then((r) => unwrap<T>(r));
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.base + path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  listDatasets(): Promise<DatasetSummary[]> {
    return this.get('/api/datasets');
  }

  getDataset(id: string): Promise<DatasetSummary> {
    return this.get(`/api/datasets/${id}`);
  }

  createDataset(name: string, graph: unknown): Promise<DatasetSummary> {
    return this.post('/api/datasets', { name, graph });
  }

  submitQuery(dataset: string, dsl: string): Promise<QueryStatus> {
    return this.post('/api/queries?wait=true', { dataset, dsl });
  }

  getQuery(id: string): Promise<QueryStatus> {
    return this.get(`/api/queries/${id}`);
  }

  getView(id: string, view: 'matrix' | 'table', metric: string): Promise<ViewDoc> {
    return this.get(`/api/queries/${id}/${view}?metric=${encodeURIComponent(metric)}`);
  }

  aggregate(id: string, view: string, axis: string, attribute: string): Promise<ViewDoc> {
    return this.post(`/api/queries/${id}/${view}/aggregate`, { axis, attribute });
  }

  expand(id: string, view: string, axis: string, key: string, expanded = true): Promise<ViewDoc> {
    return this.post(`/api/queries/${id}/${view}/expand`, { axis, key, expanded });
  }

  reorder(
    id: string,
    view: string,
    axis: string,
    strategy: string,
    attribute?: string,
    direction?: string,
  ): Promise<ViewDoc> {
    return this.post(`/api/queries/${id}/${view}/reorder`, {
      axis,
      strategy,
      ...(attribute ? { attribute } : {}),
      ...(direction ? { direction } : {}),
    });
  }

  highlight(id: string, view: 'matrix' | 'table', cell: [string, string]): Promise<HighlightResponse> {
    return this.post(`/api/queries/${id}/highlight`, { view, cell });
  }

  select(id: string, cells: CellRef[]): Promise<{ cells: CellRef[]; paths: number }> {
    return this.post(`/api/queries/${id}/selection`, { cells });
  }

  selectionPaths(id: string, groupBy?: string): Promise<{ motifs: Motif[] }> {
    const qs = groupBy ? `?groupBy=${encodeURIComponent(groupBy)}` : '';
    return this.get(`/api/queries/${id}/selection/paths${qs}`);
  }

  selectionSubgraph(id: string, layout: 'force' | 'spatial'): Promise<Subgraph> {
    return this.get(`/api/queries/${id}/selection/subgraph?layout=${layout}`);
  }
}
