// Path list: selected paths grouped into motifs, each motif expandable to
// the individual paths with their edge attribute details.

import { Motif } from './api.js';

export function renderPathList(container: HTMLElement, motifs: Motif[]): void {
  container.textContent = '';
  const list = document.createElement('ul');
  list.className = 'path-list';
  for (const motif of motifs) {
    const item = document.createElement('li');
    item.className = 'motif';
    const header = document.createElement('div');
    header.className = 'motif-header';
    header.textContent = `${motif.key.join(' → ')} (${motif.count})`;
    const detail = document.createElement('ul');
    detail.className = 'motif-paths';
    detail.hidden = true;
    for (const path of motif.paths) {
      const pathItem = document.createElement('li');
      pathItem.className = 'motif-path';
      pathItem.textContent = path.nodes.join(' → ');
      const edges = document.createElement('ul');
      edges.className = 'edge-details';
      for (const edge of path.edges) {
        const li = document.createElement('li');
        const attrs = Object.entries(edge.attrs)
          .map(([k, v]) => `${k}=${String(v)}`)
          .join(', ');
        li.textContent = `${edge.id}: ${edge.source} → ${edge.target}${attrs ? ` [${attrs}]` : ''}`;
        edges.appendChild(li);
      }
      pathItem.appendChild(edges);
      detail.appendChild(pathItem);
    }
    header.addEventListener('click', () => {
      detail.hidden = !detail.hidden;
    });
    item.append(header, detail);
    list.appendChild(item);
  }
  container.appendChild(list);
}
