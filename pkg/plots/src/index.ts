export { parseSweepCsv, REQUIRED_COLUMNS } from './csv.js';
export type { SweepRow } from './csv.js';
export { buildFigure, FIGURE_KINDS } from './figure.js';
export type { FigureData, FigureKind, Series } from './figure.js';
export { renderSvg, linearTicks } from './svg.js';
export { render, runCli } from './cli.js';
