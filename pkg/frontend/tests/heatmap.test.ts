import { beforeEach, describe, expect, it } from 'vitest';

import { markSelected, outlineCells, renderHeatmap } from '../src/heatmap.js';
import { ViewDoc } from '../src/api.js';
import { G0_MATRIX, G0_MATRIX_PER_LENGTH } from './fixtures.js';

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="c"></div>';
  container = document.getElementById('c')!;
});

describe('renderHeatmap', () => {
  it('renders the full 3x2 grid including empty cells', () => {
    renderHeatmap(container, G0_MATRIX, 'color');
    expect(container.querySelectorAll('.cell')).toHaveLength(6);
    expect(container.querySelectorAll('tbody tr')).toHaveLength(3);
  });

  it('renders the no-paths cell as empty-distinct, not scale zero', () => {
    renderHeatmap(container, G0_MATRIX, 'color');
    const cf = container.querySelector<HTMLElement>('.cell[data-r="C"][data-c="F"]')!;
    expect(cf.classList.contains('empty')).toBe(true);
    expect(cf.textContent).toBe('');
    const cg = container.querySelector<HTMLElement>('.cell[data-r="C"][data-c="G"]')!;
    expect(cg.classList.contains('empty')).toBe(false);
  });

  it('per-length encoding renders two equal bars for the [1,1] cell', () => {
    renderHeatmap(container, G0_MATRIX_PER_LENGTH, 'bars');
    const bars = container.querySelectorAll<HTMLElement>(
      '.cell[data-r="B"][data-c="F"] .length-bar',
    );
    expect(bars).toHaveLength(2);
    expect(bars[0].style.height).toBe(bars[1].style.height);
    expect(bars[0].dataset.length).toBe('1');
    expect(bars[1].dataset.length).toBe('2');
  });

  it('aggregated cells use the aggregate scale, leaves the leaf scale', () => {
    const doc: ViewDoc = {
      ...G0_MATRIX,
      rows: [
        { id: 'region=west', members: ['A', 'B', 'C'], group: true, expanded: false },
      ],
      cells: [
        { r: 'region=west', c: 'F', count: 3, metric: { scalar: 3 }, aggregated: true, paths: [0, 2, 3] },
        { r: 'region=west', c: 'G', count: 3, metric: { scalar: 3 }, aggregated: true, paths: [1, 4, 5] },
      ],
    };
    renderHeatmap(container, doc, 'color');
    const group = container.querySelector<HTMLElement>('.cell[data-r="region=west"][data-c="F"]')!;
    expect(group.classList.contains('aggregated')).toBe(true);
    renderHeatmap(container, G0_MATRIX, 'color');
    const leaf = container.querySelector<HTMLElement>('.cell[data-r="B"][data-c="F"]')!;
    expect(leaf.classList.contains('aggregated')).toBe(false);
    // saturated ends of the two scales differ (blue vs orange hue)
    expect(group.style.backgroundColor).not.toBe(leaf.style.backgroundColor);
  });

  it('group keys render with a marker and an expand toggle', () => {
    const doc: ViewDoc = {
      ...G0_MATRIX,
      rows: [{ id: 'region=west', members: ['A', 'B', 'C'], group: true, expanded: false }],
      cells: [],
    };
    let toggled: string | null = null;
    renderHeatmap(container, doc, 'color', {
      onToggleGroup: (_view, _axis, key) => {
        toggled = key.id;
      },
    });
    const label = container.querySelector<HTMLElement>('.group-key')!;
    expect(label.textContent).toContain('region=west*');
    label.querySelector<HTMLButtonElement>('.group-toggle')!.click();
    expect(toggled).toBe('region=west');
  });

  it('outlines and selection marks target exact cells and clear cleanly', () => {
    renderHeatmap(container, G0_MATRIX, 'color');
    outlineCells(container, [['A', 'F'], ['B', 'G']]);
    expect(container.querySelectorAll('.cell.outlined')).toHaveLength(2);
    outlineCells(container, [['C', 'G']]);
    const outlined = container.querySelectorAll<HTMLElement>('.cell.outlined');
    expect(outlined).toHaveLength(1);
    expect(outlined[0].dataset.r).toBe('C');
    markSelected(container, [['B', 'F']]);
    expect(container.querySelectorAll('.cell.selected')).toHaveLength(1);
  });

  it('hover and click handlers receive cell coordinates', () => {
    const events: string[] = [];
    renderHeatmap(container, G0_MATRIX, 'color', {
      onCellEnter: (view, r, c) => events.push(`enter ${view} ${r},${c}`),
      onCellClick: (view, r, c) => events.push(`click ${view} ${r},${c}`),
    });
    const cell = container.querySelector<HTMLElement>('.cell[data-r="B"][data-c="F"]')!;
    cell.dispatchEvent(new MouseEvent('mouseover', { bubbles: true }));
    cell.click();
    expect(events).toEqual(['enter matrix B,F', 'click matrix B,F']);
  });
});
