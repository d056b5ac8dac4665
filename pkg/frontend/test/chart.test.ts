import { describe, expect, it } from 'vitest';

import { LABEL_COLORS, renderDistribution } from '../src/chart.js';
import { Verdict } from '../src/schema.js';

function verdict(distribution: Record<string, number>): Verdict {
  return { label: 'False', explanation: '', distribution, parse_warning: false };
}

describe('renderDistribution', () => {
  it('renders one bar per label with the response counts', () => {
    const chart = renderDistribution(verdict({ False: 3, True: 1, Unverifiable: 0 }));
    const bars = [...chart.querySelectorAll<HTMLElement>('.bar')];
    expect(bars).toHaveLength(3);
    const byLabel = Object.fromEntries(bars.map((b) => [b.dataset['label'], b.dataset['count']]));
    expect(byLabel).toEqual({ True: '1', False: '3', Unverifiable: '0' });
  });

  it('shows zero-count labels at height zero instead of hiding them', () => {
    const chart = renderDistribution(verdict({ False: 3, True: 1, Unverifiable: 0 }));
    const zero = chart.querySelector<HTMLElement>('.bar[data-label="Unverifiable"]');
    expect(zero).not.toBeNull();
    expect(zero!.style.height).toBe('0px');
    const tallest = chart.querySelector<HTMLElement>('.bar[data-label="False"]');
    expect(parseInt(tallest!.style.height, 10)).toBeGreaterThan(0);
  });

  it('scales bar heights relative to the peak count', () => {
    const chart = renderDistribution(verdict({ False: 4, True: 2, Unverifiable: 0 }));
    const heights = Object.fromEntries(
      [...chart.querySelectorAll<HTMLElement>('.bar')].map((b) => [
        b.dataset['label'],
        parseInt(b.style.height, 10),
      ]),
    );
    expect(heights['False']).toBe(96);
    expect(heights['True']).toBe(48);
  });

  it('renders an all-zero chart with a notice for an empty relevant set', () => {
    const chart = renderDistribution(verdict({}));
    const bars = [...chart.querySelectorAll<HTMLElement>('.bar')];
    expect(bars).toHaveLength(3);
    expect(bars.every((b) => b.dataset['count'] === '0')).toBe(true);
    expect(chart.querySelector('.distribution-empty')).not.toBeNull();
  });

  it('uses the static palette for every render', () => {
    const first = renderDistribution(verdict({ False: 1 }));
    const second = renderDistribution(verdict({ False: 5, True: 2 }));
    for (const chart of [first, second]) {
      for (const bar of chart.querySelectorAll<HTMLElement>('.bar')) {
        const label = bar.dataset['label']!;
        expect(bar.style.backgroundColor).not.toBe('');
        expect(LABEL_COLORS[label]).toBeDefined();
      }
    }
  });
});
