/** Types mirroring the comparison-document JSON schema (schemaVersion "1"). */

export type Technique =
  | 'Bend'
  | 'PalmMute'
  | 'NaturalHarmonic'
  | 'HammerOn'
  | 'PullOff'
  | 'Slide'
  | 'Vibrato'
  | 'LetRing'
  | 'Staccato'
  | 'Tap'
  | 'DeadNote';

export const TECHNIQUE_ORDER: Technique[] = [
  'Bend',
  'PalmMute',
  'NaturalHarmonic',
  'HammerOn',
  'PullOff',
  'Slide',
  'Vibrato',
  'LetRing',
  'Staccato',
  'Tap',
  'DeadNote',
];

/** Short glyphs drawn above notes in the detail view. */
export const TECHNIQUE_GLYPHS: Record<Technique, string> = {
  Bend: 'b',
  PalmMute: 'pm',
  NaturalHarmonic: 'nh',
  HammerOn: 'h',
  PullOff: 'p',
  Slide: 'sl',
  Vibrato: 'v',
  LetRing: 'lr',
  Staccato: 'st',
  Tap: 'tp',
  DeadNote: 'x',
};

export type ColumnStatus = 'Same' | 'Changed' | 'MissingInVersion' | 'ExtraInVersion';
export type EditKind = 'Added' | 'Removed' | 'Modified';

export interface NoteJson {
  string: number;
  fret: number;
  tied: boolean;
  techniques: Technique[];
}

export interface BeatJson {
  duration: string; // rational "n/d" of a whole note
  notes: NoteJson[];
}

export interface BarJson {
  timeSignature: string; // "n/d"
  beats: BeatJson[];
}

export interface VersionJson {
  name: string;
  trackName: string;
  trackIndex: number;
  tuning: number[];
  barCount: number;
  bars: BarJson[];
}

export interface MetricsJson {
  density: number;
  fretSpanFrets: number | null;
  fretSpanMm: number | null;
  techniques: Partial<Record<Technique, number>>;
}

export interface EditStateJson {
  fret?: number;
  tied?: boolean;
  techniques?: Technique[];
  duration?: string;
}

export interface EditJson {
  kind: EditKind;
  onset: string;
  string: number; // 0 marks a beat-level edit
  before: EditStateJson | null;
  after: EditStateJson | null;
}

export interface CellJson {
  bar: number | null;
  status: ColumnStatus;
  metrics: MetricsJson | null;
  coordinate: number | null;
  color: string | null;
  edits: EditJson[];
}

export interface ComparisonDocument {
  schemaVersion: '1';
  options: {
    gapCost: number;
    wChroma: number;
    wOnset: number;
    scaleLengthMm: number;
    reference: number | null;
    colormap: { t: number; rgb: string }[];
  };
  versions: VersionJson[];
  referenceIndex: number;
  columns: (number | null)[][]; // [column][version]
  cells: CellJson[][]; // [version][column]
  normalization: {
    densityMax: number;
    fretSpanFretsMax: number;
    fretSpanMmMax: number;
  };
}

export type Metric =
  | 'Density'
  | 'FretSpanFrets'
  | 'FretSpanMm'
  | 'Techniques'
  | 'Similarity'
  | 'Differences';

export const METRICS: Metric[] = [
  'Density',
  'FretSpanFrets',
  'FretSpanMm',
  'Techniques',
  'Similarity',
  'Differences',
];

export const METRIC_LABELS: Record<Metric, string> = {
  Density: 'Note density',
  FretSpanFrets: 'Fret span (frets)',
  FretSpanMm: 'Fret span (mm)',
  Techniques: 'Techniques',
  Similarity: 'Similarity',
  Differences: 'Differences',
};

export interface ViewState {
  activeMetric: Metric;
  scrollColumn: number;
  selectedComparisonId: string | null;
}

/** Parse a rational "n/d" into a number. */
export function rational(text: string): number {
  const [num, den] = text.split('/');
  return Number(num) / Number(den);
}

/** Version row order for both views: reference on top, the rest in order. */
export function rowOrder(doc: ComparisonDocument): number[] {
  const order = [doc.referenceIndex];
  for (let v = 0; v < doc.versions.length; v++) {
    if (v !== doc.referenceIndex) order.push(v);
  }
  return order;
}
