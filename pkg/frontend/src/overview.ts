/** Minimap overview: one row of small rectangles per version, reference on
 * top. Cell fills encode the active metric; clicking a cell navigates the
 * detail view. All numbers and colors are read from the document. */

import { cellFill, techniqueStack, TECHNIQUE_COLORS } from './colors';
import type { ComparisonDocument, Metric, ViewState } from './types';
import { METRIC_LABELS, rowOrder, TECHNIQUE_ORDER } from './types';

export interface OverviewHandlers {
  onColumnClick: (column: number) => void;
}

function cellElement(
  doc: ComparisonDocument,
  version: number,
  column: number,
  metric: Metric,
  state: ViewState,
  handlers: OverviewHandlers,
): HTMLElement {
  const cell = doc.cells[version][column];
  const el = document.createElement('div');
  el.className = 'ov-cell';
  el.dataset.col = String(column);
  el.dataset.status = cell.status;
  if (column === state.scrollColumn) el.classList.add('selected');

  if (cell.bar === null) el.classList.add('gap');
  const hatched =
    metric === 'Differences' &&
    (cell.status === 'MissingInVersion' || cell.status === 'ExtraInVersion');
  if (hatched) {
    el.classList.add('hatched');
  } else if (cell.bar !== null) {
    const fill = cellFill(doc, cell, metric);
    if (fill !== null) {
      el.style.background = fill;
    } else {
      // technique stack: vertical sub-rectangles, enumeration order
      el.classList.add('stack');
      const segments = techniqueStack(cell);
      const total = segments.reduce((acc, [, weight]) => acc + weight, 0);
      if (total === 0) {
        el.style.background = '#FFFFFF';
      }
      for (const [color, weight] of segments) {
        const seg = document.createElement('div');
        seg.className = 'ov-seg';
        seg.style.background = color;
        seg.style.flexGrow = String(weight);
        el.appendChild(seg);
      }
    }
  }
  el.title = `column ${column + 1}`;
  el.addEventListener('click', () => handlers.onColumnClick(column));
  return el;
}

function legendElement(): HTMLElement {
  const legend = document.createElement('div');
  legend.className = 'legend';
  for (const technique of TECHNIQUE_ORDER) {
    const item = document.createElement('span');
    item.className = 'legend-item';
    const swatch = document.createElement('span');
    swatch.className = 'legend-swatch';
    swatch.style.background = TECHNIQUE_COLORS[technique];
    item.append(swatch, document.createTextNode(technique));
    legend.appendChild(item);
  }
  return legend;
}

export function renderOverview(
  doc: ComparisonDocument,
  state: ViewState,
  handlers: OverviewHandlers,
): HTMLElement {
  const root = document.createElement('section');
  root.className = 'overview';

  const heading = document.createElement('h2');
  heading.textContent = `Overview: ${METRIC_LABELS[state.activeMetric]}`;
  root.appendChild(heading);

  for (const version of rowOrder(doc)) {
    const row = document.createElement('div');
    row.className = 'ov-row';
    row.dataset.version = String(version);

    const label = document.createElement('span');
    label.className = 'ov-label';
    label.textContent =
      version === doc.referenceIndex
        ? `${doc.versions[version].name} (reference)`
        : doc.versions[version].name;
    row.appendChild(label);

    const strip = document.createElement('div');
    strip.className = 'ov-strip';
    for (let column = 0; column < doc.columns.length; column++) {
      strip.appendChild(cellElement(doc, version, column, state.activeMetric, state, handlers));
    }
    row.appendChild(strip);
    root.appendChild(row);
  }

  if (state.activeMetric === 'Techniques') {
    root.appendChild(legendElement());
  }
  return root;
}
