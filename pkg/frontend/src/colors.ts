/** Fill colors for the metric views. Similarity colors come precomputed from
 * the document; everything here only maps already-computed numbers to CSS. */

import type { CellJson, ComparisonDocument, Metric, Technique } from './types';
import { TECHNIQUE_ORDER } from './types';

/** Fixed, distinguishable color per technique, in enumeration order. */
export const TECHNIQUE_COLORS: Record<Technique, string> = {
  Bend: '#E6194B',
  PalmMute: '#3C89D0',
  NaturalHarmonic: '#3CB44B',
  HammerOn: '#FFB119',
  PullOff: '#911EB4',
  Slide: '#46F0F0',
  Vibrato: '#F58231',
  LetRing: '#808000',
  Staccato: '#F032E6',
  Tap: '#9A6324',
  DeadNote: '#6B7280',
};

export const DIFF_BLUE = '#2563EB';
export const NEUTRAL = '#E5E7EB';
export const RAMP_LOW = '#EFF6FF';
export const RAMP_HIGH = '#1E3A8A';

function channel(hex: string, i: number): number {
  return parseInt(hex.slice(1 + 2 * i, 3 + 2 * i), 16);
}

/** Linear interpolation between two hex colors, t clamped to [0, 1]. */
export function lerpHex(low: string, high: string, t: number): string {
  const w = Math.min(Math.max(t, 0), 1);
  const bytes = [0, 1, 2].map((i) => {
    const a = channel(low, i);
    const b = channel(high, i);
    return Math.round(a + (b - a) * w);
  });
  return '#' + bytes.map((b) => b.toString(16).padStart(2, '0').toUpperCase()).join('');
}

/** Sequential ramp for density and span values, normalized by the document maxima. */
export function ramp(value: number, max: number): string {
  return lerpHex(RAMP_LOW, RAMP_HIGH, max > 0 ? value / max : 0);
}

/**
 * Scalar fill for a cell under the active metric, or null when the cell needs
 * non-scalar rendering (technique stacks) or is a gap.
 */
export function cellFill(doc: ComparisonDocument, cell: CellJson, metric: Metric): string | null {
  if (cell.bar === null) return null;
  switch (metric) {
    case 'Density':
      return ramp(cell.metrics!.density, doc.normalization.densityMax);
    case 'FretSpanFrets': {
      const span = cell.metrics!.fretSpanFrets;
      return span === null ? ramp(0, 1) : ramp(span, doc.normalization.fretSpanFretsMax);
    }
    case 'FretSpanMm': {
      const span = cell.metrics!.fretSpanMm;
      return span === null ? ramp(0, 1) : ramp(span, doc.normalization.fretSpanMmMax);
    }
    case 'Similarity':
      return cell.color;
    case 'Differences':
      return cell.status === 'Changed' ? DIFF_BLUE : NEUTRAL;
    case 'Techniques':
      return null; // stacked rectangles, not a single fill
  }
}

/** Technique stack segments for a cell: [color, weight] in enumeration order. */
export function techniqueStack(cell: CellJson): [string, number][] {
  if (!cell.metrics) return [];
  const segments: [string, number][] = [];
  for (const technique of TECHNIQUE_ORDER) {
    const count = cell.metrics.techniques[technique];
    if (count) segments.push([TECHNIQUE_COLORS[technique], count]);
  }
  return segments;
}
