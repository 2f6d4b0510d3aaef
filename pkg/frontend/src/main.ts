/** App shell: hash routing between the setup flow and the comparison view. */

import './style.css';
import { getComparison } from './api';
import { renderDetail, scrollToColumn } from './detail';
import { renderOverview } from './overview';
import { renderSetup } from './setup';
import { Store } from './state';
import type { ComparisonDocument, Metric } from './types';
import { METRIC_LABELS, METRICS } from './types';

export function renderComparisonView(doc: ComparisonDocument, store: Store): HTMLElement {
  const root = document.createElement('div');
  root.className = 'comparison';

  const toolbar = document.createElement('nav');
  toolbar.className = 'toolbar';
  const back = document.createElement('a');
  back.href = '#/setup';
  back.textContent = 'new comparison';
  back.className = 'back-link';
  toolbar.appendChild(back);
  for (const metric of METRICS) {
    const button = document.createElement('button');
    button.type = 'button';
    button.className = 'metric-button';
    button.dataset.metric = metric;
    button.textContent = METRIC_LABELS[metric];
    button.addEventListener('click', () => store.setMetric(metric));
    toolbar.appendChild(button);
  }
  root.appendChild(toolbar);

  const views = document.createElement('div');
  views.className = 'views';
  root.appendChild(views);

  const rerender = () => {
    const state = store.get();
    for (const button of toolbar.querySelectorAll<HTMLButtonElement>('.metric-button')) {
      button.classList.toggle('active', button.dataset.metric === state.activeMetric);
    }
    views.replaceChildren(
      renderOverview(doc, state, {
        onColumnClick: (column) => store.setScrollColumn(column),
      }),
      renderDetail(doc, state),
    );
    scrollToColumn(views, state.scrollColumn);
  };

  store.subscribe(rerender);
  rerender();
  return root;
}

async function route(app: HTMLElement): Promise<void> {
  const hash = window.location.hash;
  const match = /^#\/c\/([0-9a-f]+)$/.exec(hash);
  if (!match) {
    app.replaceChildren(
      renderSetup((id) => {
        window.location.hash = `#/c/${id}`;
      }),
    );
    return;
  }
  try {
    const doc = await getComparison(match[1]);
    const store = new Store({ selectedComparisonId: match[1] });
    app.replaceChildren(renderComparisonView(doc, store));
  } catch (err) {
    const panel = document.createElement('div');
    panel.className = 'error-panel';
    panel.textContent = `Could not load comparison: ${(err as Error).message}`;
    const back = document.createElement('a');
    back.href = '#/setup';
    back.textContent = 'back to setup';
    panel.append(document.createElement('br'), back);
    app.replaceChildren(panel);
  }
}

export function start(): void {
  const app = document.getElementById('app');
  if (!app) throw new Error('missing #app element');
  window.addEventListener('hashchange', () => void route(app));
  void route(app);
}

if (!import.meta.env?.TEST) {
  start();
}
