/**
 * Readers for the starcast CSV schemas. Strict by design: headers must match
 * exactly (unknown columns are rejected), parameter blocks must be constant
 * within a file, and survival/diff files must cover a complete step x dim
 * grid. All failures throw SchemaError naming the offending file.
 */
import { readFileSync } from "node:fs";
import Papa from "papaparse";

export const SURVIVAL_HEADER = [
  "mode", "source_policy", "peer_rule", "m", "k", "alpha", "p1", "p2",
  "q", "trials", "seed", "step", "dim", "fraction", "stderr",
] as const;

export const QUORUM_HEADER = [
  "mode", "source_policy", "peer_rule", "m", "k", "alpha", "p1", "p2",
  "phi", "reached", "steps", "seconds",
] as const;

export const DIFF_HEADER = ["m", "k", "alpha", "p1", "p2", "step", "dim", "delta"] as const;

export class SchemaError extends Error {
  constructor(public readonly file: string, detail: string) {
    super(`${file}: ${detail}`);
    this.name = "SchemaError";
  }
}

/** The five model parameters, kept as raw CSV strings for exact matching. */
export interface ParamBlock {
  m: string;
  k: string;
  alpha: string;
  p1: string;
  p2: string;
}

export function sameBlock(a: ParamBlock, b: ParamBlock): boolean {
  return a.m === b.m && a.k === b.k && a.alpha === b.alpha && a.p1 === b.p1 && a.p2 === b.p2;
}

export function blockLabel(block: ParamBlock): string {
  return `m=${block.m} k=${block.k} alpha=${block.alpha} p1=${block.p1} p2=${block.p2}`;
}

/** A parsed survival (or diff) surface: values[dim][step]. */
export interface SurfaceTable {
  file: string;
  mode: string; // empty for diff files
  params: ParamBlock;
  steps: number; // max step (inclusive upper bound of the grid)
  dims: number; // max dim
  values: number[][];
}

export interface QuorumRow {
  mode: string;
  sourcePolicy: string;
  peerRule: string;
  params: ParamBlock;
  phi: number;
  reached: boolean;
  steps: number | null;
  seconds: number | null;
}

export interface QuorumTable {
  file: string;
  rows: QuorumRow[];
}

function parseRows(file: string, expected: readonly string[]): string[][] {
  let text: string;
  try {
    text = readFileSync(file, "utf8");
  } catch (err) {
    throw new SchemaError(file, `cannot read file (${(err as NodeJS.ErrnoException).code})`);
  }
  const parsed = Papa.parse<string[]>(text, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(file, `CSV parse error: ${parsed.errors[0]!.message}`);
  }
  const rows = parsed.data;
  const header = rows[0];
  if (header === undefined || header.join(",") !== expected.join(",")) {
    throw new SchemaError(file, `header does not match the ${expected.length}-column schema`);
  }
  for (const [index, row] of rows.entries()) {
    if (row.length !== expected.length) {
      throw new SchemaError(file, `row ${index + 1} has ${row.length} fields, expected ${expected.length}`);
    }
  }
  if (rows.length < 2) {
    throw new SchemaError(file, "no data rows");
  }
  return rows.slice(1);
}

function toInt(file: string, field: string, raw: string): number {
  if (!/^-?\d+$/.test(raw)) {
    throw new SchemaError(file, `${field} value "${raw}" is not an integer`);
  }
  return parseInt(raw, 10);
}

function toNumber(file: string, field: string, raw: string): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new SchemaError(file, `${field} value "${raw}" is not a finite number`);
  }
  return value;
}

function buildSurface(
  file: string,
  mode: string,
  params: ParamBlock,
  cells: Map<string, number>,
  maxStep: number,
  maxDim: number,
): number[][] {
  const values: number[][] = [];
  for (let dim = 0; dim <= maxDim; dim++) {
    const row: number[] = [];
    for (let step = 0; step <= maxStep; step++) {
      const cell = cells.get(`${step},${dim}`);
      if (cell === undefined) {
        throw new SchemaError(file, `incomplete grid: missing (step=${step}, dim=${dim})`);
      }
      row.push(cell);
    }
    values.push(row);
  }
  return values;
}

export function readSurvival(file: string): SurfaceTable {
  const rows = parseRows(file, SURVIVAL_HEADER);
  let mode: string | null = null;
  let params: ParamBlock | null = null;
  const cells = new Map<string, number>();
  let maxStep = 0;
  let maxDim = 0;
  for (const row of rows) {
    const block: ParamBlock = { m: row[3]!, k: row[4]!, alpha: row[5]!, p1: row[6]!, p2: row[7]! };
    if (params === null) {
      params = block;
      mode = row[0]!;
    } else if (!sameBlock(params, block)) {
      throw new SchemaError(file, "mixes parameter blocks");
    } else if (row[0] !== mode) {
      throw new SchemaError(file, "mixes modes");
    }
    const step = toInt(file, "step", row[11]!);
    const dim = toInt(file, "dim", row[12]!);
    const fraction = toNumber(file, "fraction", row[13]!);
    if (fraction < 0 || fraction > 1) {
      throw new SchemaError(file, `fraction ${fraction} outside [0, 1]`);
    }
    if (cells.has(`${step},${dim}`)) {
      throw new SchemaError(file, `duplicate cell (step=${step}, dim=${dim})`);
    }
    cells.set(`${step},${dim}`, fraction);
    maxStep = Math.max(maxStep, step);
    maxDim = Math.max(maxDim, dim);
  }
  const values = buildSurface(file, mode!, params!, cells, maxStep, maxDim);
  return { file, mode: mode!, params: params!, steps: maxStep, dims: maxDim, values };
}

export function readDiff(file: string): SurfaceTable {
  const rows = parseRows(file, DIFF_HEADER);
  let params: ParamBlock | null = null;
  const cells = new Map<string, number>();
  let maxStep = 0;
  let maxDim = 0;
  for (const row of rows) {
    const block: ParamBlock = { m: row[0]!, k: row[1]!, alpha: row[2]!, p1: row[3]!, p2: row[4]! };
    if (params === null) {
      params = block;
    } else if (!sameBlock(params, block)) {
      throw new SchemaError(file, "mixes parameter blocks");
    }
    const step = toInt(file, "step", row[5]!);
    const dim = toInt(file, "dim", row[6]!);
    const delta = toNumber(file, "delta", row[7]!);
    if (delta < -1 || delta > 1) {
      throw new SchemaError(file, `delta ${delta} outside [-1, 1]`);
    }
    if (cells.has(`${step},${dim}`)) {
      throw new SchemaError(file, `duplicate cell (step=${step}, dim=${dim})`);
    }
    cells.set(`${step},${dim}`, delta);
    maxStep = Math.max(maxStep, step);
    maxDim = Math.max(maxDim, dim);
  }
  const values = buildSurface(file, "", params!, cells, maxStep, maxDim);
  return { file, mode: "", params: params!, steps: maxStep, dims: maxDim, values };
}

export function readQuorum(file: string): QuorumTable {
  const rows = parseRows(file, QUORUM_HEADER);
  const out: QuorumRow[] = [];
  for (const row of rows) {
    const reachedRaw = row[9]!;
    if (reachedRaw !== "true" && reachedRaw !== "false") {
      throw new SchemaError(file, `reached value "${reachedRaw}" is not true/false`);
    }
    const reached = reachedRaw === "true";
    if (reached === (row[10] === "")) {
      throw new SchemaError(file, "steps must be present exactly when reached is true");
    }
    out.push({
      mode: row[0]!,
      sourcePolicy: row[1]!,
      peerRule: row[2]!,
      params: { m: row[3]!, k: row[4]!, alpha: row[5]!, p1: row[6]!, p2: row[7]! },
      phi: toNumber(file, "phi", row[8]!),
      reached,
      steps: reached ? toInt(file, "steps", row[10]!) : null,
      seconds: reached ? toNumber(file, "seconds", row[11]!) : null,
    });
  }
  return { file, rows: out };
}
