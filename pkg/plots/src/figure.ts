/**
 * Turns typed sweep rows into plottable series for the three figure
 * kinds:
 *
 *   cut_multi_T        x = cut parameter (j_spin), one series per
 *                      temperature (and per chain length when several)
 *   single_point_vs_T  x = temperature, the sweep must cover exactly
 *                      one (J, I) grid point
 *   multi_point_vs_T   x = temperature, one series per (J, I) point
 */

import type { SweepRow } from './csv.js';

export type FigureKind = 'cut_multi_T' | 'single_point_vs_T' | 'multi_point_vs_T';

export const FIGURE_KINDS: FigureKind[] = [
  'cut_multi_T',
  'single_point_vs_T',
  'multi_point_vs_T',
];

export interface Series {
  label: string;
  points: Array<{ x: number; y: number }>;
}

export interface FigureData {
  series: Series[];
  xLabel: string;
  yLabel: string;
  title: string;
  logX: boolean;
}

function formatNumber(value: number): string {
  // shortest form, stable across runs
  return String(value);
}

function sortedUnique<T>(values: T[]): T[] {
  return [...new Set(values)].sort((a, b) => (a < b ? -1 : a > b ? 1 : 0));
}

function byX(a: { x: number }, b: { x: number }): number {
  return a.x - b.x;
}

/** log-T axis when the scan spans decades; linear otherwise */
function wantsLogAxis(temperatures: number[]): boolean {
  const min = Math.min(...temperatures);
  const max = Math.max(...temperatures);
  return min > 0 && max / min > 50;
}

export function buildFigure(rows: SweepRow[], kind: FigureKind): FigureData {
  if (rows.length === 0) {
    throw new Error('no data: every row was empty or error-marked');
  }
  const kValues = sortedUnique(rows.map((r) => r.kCoupling));
  const title = `log-negativity (K = ${kValues.map(formatNumber).join(', ')})`;

  if (kind === 'cut_multi_T') {
    const sizes = sortedUnique(rows.map((r) => r.nSites));
    const temperatures = sortedUnique(rows.map((r) => r.temperature));
    const series: Series[] = [];
    for (const n of sizes) {
      for (const t of temperatures) {
        const points = rows
          .filter((r) => r.nSites === n && r.temperature === t)
          .map((r) => ({ x: r.jSpin, y: r.logNegativity }))
          .sort(byX);
        if (points.length === 0) continue;
        const label =
          sizes.length > 1 ? `N=${n}, T=${formatNumber(t)}` : `T=${formatNumber(t)}`;
        series.push({ label, points });
      }
    }
    return { series, xLabel: 'cut parameter J', yLabel: 'log-negativity', title, logX: false };
  }

  const points = sortedUnique(rows.map((r) => `${r.jSpin}|${r.iPseudo}`));
  if (kind === 'single_point_vs_T' && points.length !== 1) {
    throw new Error(
      `single_point_vs_T expects one (J, I) grid point, found ${points.length}`,
    );
  }

  const sizes = sortedUnique(rows.map((r) => r.nSites));
  const series: Series[] = [];
  for (const key of points) {
    const [j, i] = key.split('|').map(Number);
    for (const n of sizes) {
      const pts = rows
        .filter((r) => r.jSpin === j && r.iPseudo === i && r.nSites === n)
        .map((r) => ({ x: r.temperature, y: r.logNegativity }))
        .sort(byX);
      if (pts.length === 0) continue;
      const pieces = [`J=${formatNumber(j)}`, `I=${formatNumber(i)}`];
      if (sizes.length > 1) pieces.push(`N=${n}`);
      series.push({ label: pieces.join(', '), points: pts });
    }
  }
  return {
    series,
    xLabel: 'temperature',
    yLabel: 'log-negativity',
    title,
    logX: wantsLogAxis(rows.map((r) => r.temperature)),
  };
}
