// Node-link view of the selection subgraph. Coordinates come from the
// server (force or spatial layout); this module only scales them into the
// viewport and draws circles, labels, and arrows.

import { Subgraph } from './api.js';

const WIDTH = 360;
const HEIGHT = 260;
const MARGIN = 24;

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS('http://www.w3.org/2000/svg', tag);
}

export function renderSubgraph(container: HTMLElement, graph: Subgraph): void {
  container.textContent = '';
  const svg = svgEl('svg');
  svg.setAttribute('class', `node-link ${graph.layout}-layout`);
  svg.setAttribute('viewBox', `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute('width', String(WIDTH));
  svg.setAttribute('height', String(HEIGHT));

  const defs = svgEl('defs');
  const marker = svgEl('marker');
  marker.setAttribute('id', 'arrow');
  marker.setAttribute('viewBox', '0 0 8 8');
  marker.setAttribute('refX', '7');
  marker.setAttribute('refY', '4');
  marker.setAttribute('markerWidth', '6');
  marker.setAttribute('markerHeight', '6');
  marker.setAttribute('orient', 'auto-start-reverse');
  const tip = svgEl('path');
  tip.setAttribute('d', 'M 0 0 L 8 4 L 0 8 z');
  marker.appendChild(tip);
  defs.appendChild(marker);
  svg.appendChild(defs);

  const xs = graph.nodes.map((n) => n.x);
  const ys = graph.nodes.map((n) => n.y);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x: number) =>
    MARGIN + (x1 > x0 ? ((x - x0) / (x1 - x0)) * (WIDTH - 2 * MARGIN) : (WIDTH - 2 * MARGIN) / 2);
  const sy = (y: number) =>
    MARGIN + (y1 > y0 ? ((y1 - y) / (y1 - y0)) * (HEIGHT - 2 * MARGIN) : (HEIGHT - 2 * MARGIN) / 2);

  const pos = new Map(graph.nodes.map((n) => [n.id, [sx(n.x), sy(n.y)] as const]));

  for (const edge of graph.edges) {
    const [ax, ay] = pos.get(edge.source)!;
    const [bx, by] = pos.get(edge.target)!;
    const line = svgEl('line');
    line.setAttribute('class', 'link');
    line.dataset.edge = edge.id;
    line.setAttribute('x1', ax.toFixed(1));
    line.setAttribute('y1', ay.toFixed(1));
    // stop short of the node circle so the arrowhead is visible
    const dx = bx - ax;
    const dy = by - ay;
    const dist = Math.hypot(dx, dy) || 1;
    line.setAttribute('x2', (bx - (dx / dist) * 9).toFixed(1));
    line.setAttribute('y2', (by - (dy / dist) * 9).toFixed(1));
    line.setAttribute('marker-end', 'url(#arrow)');
    svg.appendChild(line);
  }

  for (const node of graph.nodes) {
    const [x, y] = pos.get(node.id)!;
    const g = svgEl('g');
    g.setAttribute('class', 'node');
    g.dataset.node = node.id;
    const circle = svgEl('circle');
    circle.setAttribute('cx', x.toFixed(1));
    circle.setAttribute('cy', y.toFixed(1));
    circle.setAttribute('r', '7');
    const label = svgEl('text');
    label.setAttribute('x', (x + 9).toFixed(1));
    label.setAttribute('y', (y - 9).toFixed(1));
    label.textContent = node.id;
    g.append(circle, label);
    svg.appendChild(g);
  }
  container.appendChild(svg);
}
