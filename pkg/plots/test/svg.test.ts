import { describe, expect, it } from 'vitest';

import type { FigureData } from '../src/figure.js';
import { linearTicks, renderSvg } from '../src/svg.js';

function figure(overrides: Partial<FigureData> = {}): FigureData {
  return {
    series: [
      {
        label: 'T=0.05',
        points: [
          { x: -1, y: 0 },
          { x: 0, y: 0.3 },
          { x: 1, y: 0.1 },
        ],
      },
      {
        label: 'T=0.1',
        points: [
          { x: -1, y: 0.05 },
          { x: 0, y: 0.2 },
          { x: 1, y: 0.02 },
        ],
      },
    ],
    xLabel: 'cut parameter J',
    yLabel: 'log-negativity',
    title: 'log-negativity (K = -1)',
    logX: false,
    ...overrides,
  };
}

describe('linearTicks', () => {
  it('uses 1-2-5 steps', () => {
    expect(linearTicks(0, 1)).toEqual([0, 0.2, 0.4, 0.6, 0.8, 1]);
    expect(linearTicks(-1, 1)).toEqual([-1, -0.5, 0, 0.5, 1]);
  });

  it('handles degenerate spans', () => {
    expect(linearTicks(0.3, 0.3)).toEqual([0.3]);
  });

  it('covers the full range', () => {
    const ticks = linearTicks(0.013, 8.4);
    expect(Math.min(...ticks)).toBeGreaterThanOrEqual(0.013);
    expect(Math.max(...ticks)).toBeLessThanOrEqual(8.4);
    expect(ticks.length).toBeGreaterThanOrEqual(3);
  });
});

describe('renderSvg', () => {
  it('draws one polyline per series plus labels', () => {
    const svg = renderSvg(figure());
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain('cut parameter J');
    expect(svg).toContain('log-negativity');
    expect(svg).toContain('T=0.05');
    expect(svg.startsWith('<svg xmlns')).toBe(true);
    expect(svg.trimEnd().endsWith('</svg>')).toBe(true);
  });

  it('is byte-deterministic', () => {
    expect(renderSvg(figure())).toBe(renderSvg(figure()));
  });

  it('escapes markup in labels', () => {
    const svg = renderSvg(
      figure({ title: 'a < b & c' }),
    );
    expect(svg).toContain('a &lt; b &amp; c');
    expect(svg).not.toContain('a < b & c');
  });

  it('renders log-scale temperature axes with decade ticks', () => {
    const svg = renderSvg(
      figure({
        logX: true,
        xLabel: 'temperature',
        series: [
          {
            label: 'J=-0.4, I=-0.4',
            points: [
              { x: 0.001, y: 0.0 },
              { x: 0.01, y: 0.05 },
              { x: 0.1, y: 0.13 },
              { x: 1, y: 0.01 },
            ],
          },
        ],
      }),
    );
    expect(svg).toContain('temperature (log scale)');
    // decade labels stay decimal down to 0.001 so one axis never mixes formats
    expect(svg).toContain('>0.001<');
    expect(svg).toContain('>1<');
  });

  it('rejects empty figures', () => {
    expect(() => renderSvg(figure({ series: [] }))).toThrow(/no data/);
  });
});
