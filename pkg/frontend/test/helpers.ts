import { readFileSync } from 'node:fs';
import { resolve } from 'node:path';

import type { ComparisonDocument } from '../src/types';

// vitest runs with frontend/ as the working directory
const GOLDEN_PATH = resolve(process.cwd(), '../tests/fixtures/golden_comparison.json');

/** Fresh copy of the checked-in three-version golden document. */
export function loadGolden(): ComparisonDocument {
  return JSON.parse(readFileSync(GOLDEN_PATH, 'utf-8')) as ComparisonDocument;
}
