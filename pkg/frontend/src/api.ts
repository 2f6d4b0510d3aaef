/** Thin wrappers over the comparison service API. */

import type { ComparisonDocument } from './types';

export interface TrackInfo {
  index: number;
  name: string;
  strings: number;
  bars: number;
}

export interface UploadResult {
  id: string;
  tracks: TrackInfo[];
}

export interface ComparisonRequestVersion {
  scoreId: string;
  track: number;
  name?: string;
}

export interface ComparisonRequest {
  versions: ComparisonRequestVersion[];
  gapCost?: number;
  wChroma?: number;
  wOnset?: number;
  scaleLengthMm?: number;
  reference?: number | null;
}

export interface ComparisonSummary {
  id: string;
  createdAt: string;
  versionNames: string[];
}

async function fail(response: Response): Promise<never> {
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body.error === 'string') message = body.error;
  } catch {
    // keep the status line
  }
  throw new Error(message);
}

export async function uploadScore(file: File): Promise<UploadResult> {
  const response = await fetch('/api/scores', {
    method: 'POST',
    body: await file.text(),
    headers: { 'X-Filename': file.name, 'Content-Type': 'text/plain; charset=utf-8' },
  });
  if (!response.ok) return fail(response);
  return response.json();
}

export async function createComparison(request: ComparisonRequest): Promise<string> {
  const response = await fetch('/api/comparisons', {
    method: 'POST',
    body: JSON.stringify(request),
    headers: { 'Content-Type': 'application/json' },
  });
  if (!response.ok) return fail(response);
  return (await response.json()).id;
}

export async function getComparison(id: string): Promise<ComparisonDocument> {
  const response = await fetch(`/api/comparisons/${encodeURIComponent(id)}`);
  if (!response.ok) return fail(response);
  return response.json();
}

export async function listComparisons(): Promise<ComparisonSummary[]> {
  const response = await fetch('/api/comparisons');
  if (!response.ok) return fail(response);
  return response.json();
}
