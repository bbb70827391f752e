/**
 * Reader for the sweep CSV contract of the kkchain CLI.
 *
 * The column set is fixed by the producer; this module validates the
 * header, types the rows, and drops rows whose status is not "ok" so
 * partial sweeps plot cleanly.
 */

export interface SweepRow {
  nSites: number;
  jSpin: number;
  iPseudo: number;
  kCoupling: number;
  temperature: number;
  logNegativity: number;
  status: string;
}

export const REQUIRED_COLUMNS = [
  'n_sites',
  'j_spin',
  'i_pseudo',
  'k_coupling',
  'temperature',
  'log_negativity',
  'status',
] as const;

/** Minimal CSV line splitter; the producer never quotes or embeds commas. */
function splitLine(line: string): string[] {
  return line.split(',');
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split('\n').filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error('no data: input CSV is empty');
  }
  const header = splitLine(lines[0]);
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new Error(`missing column '${column}' in CSV header`);
    }
  }

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = splitLine(lines[i]);
    if (cells.length !== header.length) {
      throw new Error(`row ${i + 1}: expected ${header.length} cells, got ${cells.length}`);
    }
    const cell = (name: string) => cells[index.get(name)!];
    const status = cell('status');
    if (status !== 'ok') continue; // error-marked rows carry no numbers
    const row: SweepRow = {
      nSites: Number(cell('n_sites')),
      jSpin: Number(cell('j_spin')),
      iPseudo: Number(cell('i_pseudo')),
      kCoupling: Number(cell('k_coupling')),
      temperature: Number(cell('temperature')),
      logNegativity: Number(cell('log_negativity')),
      status,
    };
    for (const [key, value] of Object.entries(row)) {
      if (key !== 'status' && !Number.isFinite(value)) {
        throw new Error(`row ${i + 1}: field ${key} is not a finite number`);
      }
    }
    rows.push(row);
  }
  return rows;
}
