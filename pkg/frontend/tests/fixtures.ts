// Shared test fixtures: the small demo graph in dataset-upload form and the
// matrix/table documents the server returns for its west->east query.

import { ViewDoc } from '../src/api.js';

export const G0 = {
  schema: { region: 'categorical' },
  nodes: [
    { id: 'A', attrs: { region: 'west' } },
    { id: 'B', attrs: { region: 'west' } },
    { id: 'C', attrs: { region: 'west' } },
    { id: 'D', attrs: { region: 'mid' } },
    { id: 'E', attrs: { region: 'mid' } },
    { id: 'F', attrs: { region: 'east' } },
    { id: 'G', attrs: { region: 'east' } },
  ],
  edges: [
    { id: 'e1', source: 'A', target: 'D', attrs: {} },
    { id: 'e2', source: 'B', target: 'D', attrs: {} },
    { id: 'e3', source: 'B', target: 'F', attrs: {} },
    { id: 'e4', source: 'C', target: 'E', attrs: {} },
    { id: 'e5', source: 'D', target: 'F', attrs: {} },
    { id: 'e6', source: 'D', target: 'G', attrs: {} },
    { id: 'e7', source: 'E', target: 'G', attrs: {} },
  ],
};

export const G0_DSL = 'PATHS LENGTH <= 2 FROM region = "west" TO region = "east"';

export const G0_MATRIX: ViewDoc = {
  kind: 'matrix',
  rows: [
    { id: 'A', members: ['A'], group: false },
    { id: 'B', members: ['B'], group: false },
    { id: 'C', members: ['C'], group: false },
  ],
  cols: [
    { id: 'F', members: ['F'], group: false },
    { id: 'G', members: ['G'], group: false },
  ],
  cells: [
    { r: 'A', c: 'F', count: 1, metric: { scalar: 1 }, aggregated: false, paths: [0] },
    { r: 'A', c: 'G', count: 1, metric: { scalar: 1 }, aggregated: false, paths: [1] },
    { r: 'B', c: 'F', count: 2, metric: { scalar: 2 }, aggregated: false, paths: [2, 3] },
    { r: 'B', c: 'G', count: 1, metric: { scalar: 1 }, aggregated: false, paths: [4] },
    { r: 'C', c: 'G', count: 1, metric: { scalar: 1 }, aggregated: false, paths: [5] },
  ],
  rowAttrs: {},
  colAttrs: {},
};

export const G0_MATRIX_PER_LENGTH: ViewDoc = {
  ...G0_MATRIX,
  cells: G0_MATRIX.cells.map((cell) =>
    cell.r === 'B' && cell.c === 'F'
      ? { ...cell, metric: { vector: [1, 1] } } // one direct edge, one 2-hop path
      : { ...cell, metric: { vector: [0, cell.count] } },
  ),
};
