/** Tiny observable store for the view state. */

import type { Metric, ViewState } from './types';

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(initial?: Partial<ViewState>) {
    this.state = {
      activeMetric: 'Similarity',
      scrollColumn: 0,
      selectedComparisonId: null,
      ...initial,
    };
  }

  get(): ViewState {
    return this.state;
  }

  setMetric(metric: Metric): void {
    this.update({ activeMetric: metric });
  }

  setScrollColumn(column: number): void {
    this.update({ scrollColumn: column });
  }

  update(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
