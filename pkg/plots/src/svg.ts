/**
 * Deterministic SVG line charts with no drawing dependencies.
 *
 * Output is a plain string: same FigureData in, same bytes out.  All
 * coordinates are rounded to two decimals so float noise can never
 * leak into the markup.
 */

import type { FigureData, Series } from './figure.js';

const WIDTH = 720;
const HEIGHT = 450;
const MARGIN = { top: 40, right: 20, bottom: 48, left: 64 };
const LEGEND_LINE = 16;

const PALETTE = [
  '#1f77b4', '#d62728', '#2ca02c', '#9467bd',
  '#ff7f0e', '#8c564b', '#e377c2', '#17becf',
];

function round2(value: number): string {
  return (Math.round(value * 100) / 100).toFixed(2);
}

function escapeText(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

/** 1-2-5 tick steps covering [lo, hi] with ~n intervals */
export function linearTicks(lo: number, hi: number, n = 6): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const raw = span / n;
  const power = Math.floor(Math.log10(raw));
  const base = Math.pow(10, power);
  let step = base;
  for (const factor of [1, 2, 5, 10]) {
    if (base * factor >= raw) {
      step = base * factor;
      break;
    }
  }
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    // snap away float drift like 0.30000000000000004
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let p = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, p) <= hi * (1 + 1e-9); p++) {
    const v = Math.pow(10, p);
    if (v >= lo * (1 - 1e-9)) ticks.push(Number(v.toPrecision(12)));
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

function formatTick(value: number): string {
  if (value !== 0 && (Math.abs(value) < 1e-3 || Math.abs(value) >= 1e4)) {
    return value.toExponential(0).replace('+', '');
  }
  return String(value);
}

export function renderSvg(figure: FigureData): string {
  if (figure.series.length === 0 || figure.series.every((s) => s.points.length === 0)) {
    throw new Error('no data: nothing to draw');
  }
  const xs = figure.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = figure.series.flatMap((s) => s.points.map((p) => p.y));
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(0, ...ys);
  let yHi = Math.max(...ys);
  if (xLo === xHi) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  if (yLo === yHi) {
    yHi = yLo + 1;
  }
  yHi += (yHi - yLo) * 0.05; // headroom above the top point

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xPos = figure.logX
    ? (x: number) =>
        MARGIN.left + ((Math.log10(x) - Math.log10(xLo)) / (Math.log10(xHi) - Math.log10(xLo))) * plotW
    : (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const yPos = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="14">` +
      `${escapeText(figure.title)}</text>`,
  );

  const xTicks = figure.logX ? decadeTicks(xLo, xHi) : linearTicks(xLo, xHi);
  const yTicks = linearTicks(yLo, yHi);
  for (const tick of xTicks) {
    const px = round2(xPos(tick));
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${MARGIN.top + plotH}" ` +
        `stroke="#ddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px}" y="${MARGIN.top + plotH + 18}" text-anchor="middle">` +
        `${formatTick(tick)}</text>`,
    );
  }
  for (const tick of yTicks) {
    const py = round2(yPos(tick));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + plotW}" y2="${py}" ` +
        `stroke="#ddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${py}" text-anchor="end" dominant-baseline="middle">` +
        `${formatTick(tick)}</text>`,
    );
  }

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333" stroke-width="1"/>`,
  );

  figure.series.forEach((series: Series, index: number) => {
    const color = PALETTE[index % PALETTE.length];
    const coords = series.points
      .map((p) => `${round2(xPos(p.x))},${round2(yPos(p.y))}`)
      .join(' ');
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="1.5" ` +
        `class="series"/>`,
    );
    for (const p of series.points) {
      parts.push(
        `<circle cx="${round2(xPos(p.x))}" cy="${round2(yPos(p.y))}" r="2.5" ` +
          `fill="${color}"/>`,
      );
    }
  });

  // legend, top-left inside the frame
  figure.series.forEach((series: Series, index: number) => {
    const color = PALETTE[index % PALETTE.length];
    const ly = MARGIN.top + 14 + index * LEGEND_LINE;
    const lx = MARGIN.left + 10;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 18}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="2"/>`,
    );
    parts.push(`<text x="${lx + 24}" y="${ly}">${escapeText(series.label)}</text>`);
  });

  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 10}" text-anchor="middle">` +
      `${escapeText(figure.xLabel)}${figure.logX ? ' (log scale)' : ''}</text>`,
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${escapeText(figure.yLabel)}</text>`,
  );
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
