/** Detail view: every version as one horizontal strip of simplified tab bars,
 * stacked vertically inside a single scroll container so all rows always show
 * the same column range. Fret digits sit on their string lines, positioned
 * proportionally to onset; technique glyphs sit above; the bar background is
 * tinted with the active metric color. */

import { cellFill, DIFF_BLUE, techniqueStack } from './colors';
import type { BarJson, CellJson, ComparisonDocument, EditJson, ViewState } from './types';
import { rational, rowOrder, TECHNIQUE_GLYPHS } from './types';

export const BAR_WIDTH = 140;
export const BAR_GAP = 4;
const PAD = 10;
const TOP = 22;
const STRING_SPACING = 12;
const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

function barHeight(numStrings: number): number {
  return TOP + (numStrings - 1) * STRING_SPACING + 14;
}

/** (onset, string) pairs whose digits get the difference outline. */
function editedPositions(cell: CellJson): Set<string> {
  const positions = new Set<string>();
  for (const edit of cell.edits) {
    if (edit.string >= 1 && (edit.kind === 'Modified' || edit.kind === 'Added')) {
      positions.add(`${rational(edit.onset)}:${edit.string}`);
    }
  }
  return positions;
}

function detailTint(doc: ComparisonDocument, cell: CellJson, state: ViewState): string | null {
  if (cell.bar === null) return null;
  const fill = cellFill(doc, cell, state.activeMetric);
  if (fill !== null) return fill;
  // techniques metric: tint with the most frequent technique's color
  const segments = techniqueStack(cell);
  if (segments.length === 0) return '#FFFFFF';
  segments.sort((a, b) => b[1] - a[1]);
  return segments[0][0];
}

function renderBar(
  doc: ComparisonDocument,
  version: number,
  column: number,
  state: ViewState,
): SVGSVGElement {
  const numStrings = doc.versions[version].tuning.length;
  const height = barHeight(numStrings);
  const cell = doc.cells[version][column];
  const svg = svgElement('svg', {
    width: String(BAR_WIDTH),
    height: String(height),
    viewBox: `0 0 ${BAR_WIDTH} ${height}`,
  });
  svg.classList.add('detail-bar');
  svg.dataset.col = String(column);
  svg.dataset.status = cell.status;
  if (column === state.scrollColumn) svg.classList.add('highlighted');

  if (cell.bar === null) {
    svg.classList.add('gap');
    svg.appendChild(
      svgElement('rect', {
        x: '1',
        y: String(TOP - 6),
        width: String(BAR_WIDTH - 2),
        height: String((numStrings - 1) * STRING_SPACING + 12),
        fill: 'none',
        stroke: '#9CA3AF',
        'stroke-dasharray': '5 4',
        class: 'gap-outline',
      }),
    );
    return svg;
  }

  const tint = detailTint(doc, cell, state);
  if (tint) {
    svg.appendChild(
      svgElement('rect', {
        x: '0',
        y: '0',
        width: String(BAR_WIDTH),
        height: String(height),
        fill: tint,
        'fill-opacity': '0.25',
        class: 'bar-tint',
      }),
    );
  }

  for (let s = 0; s < numStrings; s++) {
    const y = TOP + s * STRING_SPACING;
    svg.appendChild(
      svgElement('line', {
        x1: '0',
        y1: String(y),
        x2: String(BAR_WIDTH),
        y2: String(y),
        class: 'string-line',
      }),
    );
  }
  svg.appendChild(
    svgElement('line', {
      x1: String(BAR_WIDTH - 1),
      y1: String(TOP),
      x2: String(BAR_WIDTH - 1),
      y2: String(TOP + (numStrings - 1) * STRING_SPACING),
      class: 'bar-line',
    }),
  );

  const bar: BarJson = doc.versions[version].bars[cell.bar];
  const capacity = rational(bar.timeSignature);
  const edited = editedPositions(cell);
  let onset = 0;
  for (const beat of bar.beats) {
    const x = PAD + (onset / capacity) * (BAR_WIDTH - 2 * PAD);
    const glyphs = beat.notes.length
      ? [...new Set(beat.notes.flatMap((n) => n.techniques))].map((t) => TECHNIQUE_GLYPHS[t])
      : [];
    if (glyphs.length) {
      const label = svgElement('text', {
        x: String(x),
        y: '12',
        class: 'technique-glyphs',
        'text-anchor': 'middle',
      });
      label.textContent = glyphs.join(' ');
      svg.appendChild(label);
    }
    for (const note of beat.notes) {
      const y = TOP + (note.string - 1) * STRING_SPACING;
      const isEdited = edited.has(`${onset}:${note.string}`);
      if (isEdited) {
        svg.appendChild(
          svgElement('rect', {
            x: String(x - 8),
            y: String(y - 8),
            width: '16',
            height: '14',
            fill: 'none',
            stroke: DIFF_BLUE,
            'stroke-width': '1.5',
            rx: '3',
            class: 'edited-outline',
          }),
        );
      }
      const digit = svgElement('text', {
        x: String(x),
        y: String(y + 4),
        'text-anchor': 'middle',
        class: 'fret-digit',
      });
      if (note.tied) digit.classList.add('tied');
      if (isEdited) digit.classList.add('edited');
      digit.textContent = String(note.fret);
      svg.appendChild(digit);
    }
    onset += rational(beat.duration);
  }
  return svg;
}

export function renderDetail(doc: ComparisonDocument, state: ViewState): HTMLElement {
  const root = document.createElement('section');
  root.className = 'detail';

  const scroll = document.createElement('div');
  scroll.className = 'detail-scroll';
  for (const version of rowOrder(doc)) {
    const row = document.createElement('div');
    row.className = 'detail-row';
    row.dataset.version = String(version);

    const label = document.createElement('div');
    label.className = 'detail-label';
    label.textContent =
      version === doc.referenceIndex
        ? `${doc.versions[version].name} (reference)`
        : doc.versions[version].name;
    row.appendChild(label);

    const bars = document.createElement('div');
    bars.className = 'detail-bars';
    for (let column = 0; column < doc.columns.length; column++) {
      bars.appendChild(renderBar(doc, version, column, state));
    }
    row.appendChild(bars);
    scroll.appendChild(row);
  }
  root.appendChild(scroll);
  return root;
}

/** Scroll the shared container so the given column is visible. */
export function scrollToColumn(container: HTMLElement, column: number): void {
  const scroll = container.querySelector<HTMLElement>('.detail-scroll');
  if (!scroll) return;
  const target = Math.max(0, column * (BAR_WIDTH + BAR_GAP) - BAR_WIDTH);
  scroll.scrollLeft = target;
}
