// Label-distribution bar chart, rendered as plain DOM so counts and colors
// are directly assertable. The chart displays exactly what the response
// carried: one bar per label, zero-count labels shown at height zero.

import { Verdict, VERACITY_LABELS } from './schema.js';

// static palette so labels keep their color across sessions
export const LABEL_COLORS: Record<string, string> = {
  True: '#2e7d32',
  False: '#c62828',
  Unverifiable: '#f9a825',
};

const BAR_MAX_PX = 96;

export function renderDistribution(verdict: Verdict): HTMLElement {
  const wrap = document.createElement('div');
  wrap.className = 'distribution';

  const counts = VERACITY_LABELS.map((label) => verdict.distribution[label] ?? 0);
  const total = counts.reduce((a, b) => a + b, 0);
  const peak = Math.max(...counts, 1);

  for (const label of VERACITY_LABELS) {
    const count = verdict.distribution[label] ?? 0;
    const item = document.createElement('div');
    item.className = 'distribution-item';

    const bar = document.createElement('div');
    bar.className = 'bar';
    bar.dataset['label'] = label;
    bar.dataset['count'] = String(count);
    bar.style.height = `${Math.round((count / peak) * BAR_MAX_PX)}px`;
    bar.style.backgroundColor = LABEL_COLORS[label] ?? '#9e9e9e';
    bar.setAttribute('role', 'img');
    bar.setAttribute('aria-label', `${label}: ${count}`);

    const caption = document.createElement('span');
    caption.className = 'bar-caption';
    caption.textContent = `${label} (${count})`;

    item.append(bar, caption);
    wrap.append(item);
  }

  if (total === 0) {
    const notice = document.createElement('p');
    notice.className = 'distribution-empty';
    notice.textContent = 'No relevant fact-checks, so there are no ratings to chart.';
    wrap.append(notice);
  }
  return wrap;
}
